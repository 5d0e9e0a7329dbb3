import pytest

from confalg.errors import ConfalgError, DimensionError, MissingOperationError, PreconditionError, VariableError
from confalg.exactpoly import Poly, Var
from confalg.findim import (
    BiKind,
    CoKind,
    FinStructure,
    StructureKind,
    associated_pgd_of_pre_pgd,
    check_derivation,
    check_fin_bialgebra,
    check_fin_coalgebra,
    check_fin_structure,
    claim_semidirect_pgd_bialgebra,
    display_fin,
    fin_coboundary_coproducts,
    perturb,
    star_closure,
    table,
    transpose_coalgebra,
    zinbiel_derivation_to_pre_pgd,
)
from confalg.tensor import Tensor

alpha = Poly.var(Var.param("alpha"))

def test_zinbiel_with_derivation(zinbiel: FinStructure):
    assert check_fin_structure(StructureKind.ZINBIEL, zinbiel).passed
    assert check_derivation(zinbiel, "succ").passed
    assert zinbiel.op("succ")[(0, 1, 2)] == 2 * zinbiel.op("succ")[(1, 0, 2)]

def test_commutative_table_is_not_zinbiel(zinbiel: FinStructure):
    """
    With `e1≻e2 = e2≻e1 = e3`, `e1≻(e1≻e1) = e3` but `(e1≻e1 + e1≻e1)≻e1 = 2e3`,
    though `D(e2) = 2e2 + 2αe3` is still a derivation of it
    """
    succ = table({(0, 0, 1): 1, (0, 1, 2): 1, (1, 0, 2): 1})
    D = perturb(zinbiel.linmap("D"), (1, 2), -alpha)
    symmetric = FinStructure(dim=3, ops={"succ": succ}, linmaps={"D": D}, params=zinbiel.params)
    report = check_fin_structure(StructureKind.ZINBIEL, symmetric)
    witness = report.first_witness()
    assert witness is not None
    assert witness.identity == "zinbiel"
    assert witness.indices == (1, 1, 1)
    assert check_derivation(symmetric, "succ").passed
    with pytest.raises(PreconditionError):
        zinbiel_derivation_to_pre_pgd(symmetric)

def test_broken_derivation_is_reported(zinbiel: FinStructure):
    D = perturb(zinbiel.linmap("D"), (2, 2), 1)
    report = check_derivation(zinbiel, "succ", D)
    assert not report.passed
    assert report.failed_identities() == ["derivation"]

def test_pre_pgd_constants(zinbiel: FinStructure):
    """
    `e1◁e1 = e2 + αe3`, `e1▷e1 = e2 + 2αe3`, `e1▷e2 = 4e3`
    """
    pre = zinbiel_derivation_to_pre_pgd(zinbiel)
    lhd, rhd = pre.op("lhd"), pre.op("rhd")
    assert lhd[(0, 0, 1)] == rhd[(0, 0, 1)] == 1
    assert lhd[(0, 0, 2)] == alpha
    assert rhd[(0, 0, 2)] == 2 * alpha
    assert lhd[(0, 1, 2)] == lhd[(1, 0, 2)] == 2
    assert rhd[(0, 1, 2)] == 4
    assert rhd[(1, 0, 2)] == 1
    assert check_fin_structure(StructureKind.PRE_PGD, pre).passed
    assert check_fin_structure(StructureKind.PRE_DIFF_NP, pre).passed

def test_associated_pgd(zinbiel: FinStructure):
    pgd = associated_pgd_of_pre_pgd(zinbiel_derivation_to_pre_pgd(zinbiel))
    assert pgd.op("dot")[(0, 0, 1)] == 2
    assert pgd.op("dot")[(0, 1, 2)] == 3
    assert pgd.op("circ")[(0, 0, 2)] == 3 * alpha
    assert pgd.op("circ")[(0, 1, 2)] == 6
    report = check_fin_structure(StructureKind.PGD, pgd)
    assert report.passed
    assert [c.name for c in report.children] == ["gd", "poisson", "diff-np"]

def test_perturbation_flips_only_the_checks_that_read_it(zinbiel: FinStructure):
    pgd = associated_pgd_of_pre_pgd(zinbiel_derivation_to_pre_pgd(zinbiel))
    broken = pgd.with_ops(dot=perturb(pgd.op("dot"), (0, 1, 2), 1))
    assert "commutativity" in check_fin_structure(StructureKind.POISSON, broken).failed_identities()
    assert check_fin_structure(StructureKind.GD, broken).passed
    assert not check_fin_structure(StructureKind.PGD, broken).passed

def test_missing_diamond_is_noted(zinbiel: FinStructure):
    pre = zinbiel_derivation_to_pre_pgd(zinbiel)
    without = FinStructure(dim=3, ops={k: v for k, v in pre.ops.items() if k != "diamond"}, params=pre.params)
    report = check_fin_structure(StructureKind.PRE_PGD, without)
    assert report.passed
    assert "diamond: defaulted to 0" in report.notes

def test_missing_operation():
    A = FinStructure(dim=2, ops={"dot": Tensor.zero(3)})
    with pytest.raises(MissingOperationError):
        check_fin_structure(StructureKind.LIE, A)

def test_precondition_names_stage():
    not_zinbiel = FinStructure(dim=1, ops={"succ": table({(0, 0, 0): 1})}, linmaps={"D": Tensor.zero(2)})
    with pytest.raises(PreconditionError) as info:
        zinbiel_derivation_to_pre_pgd(not_zinbiel)
    assert info.value.stage == "zinbiel-derivation"
    assert info.value.report is not None and not info.value.report.passed

@pytest.mark.parametrize("ops,error", [
    ({"dot": table({(0, 0, 3): 1})}, DimensionError),
    ({"dot": table({(0, 0, 0): Poly.var(Var("l"))})}, VariableError),
    ({"cross": Tensor.zero(3)}, ConfalgError),
])
def test_invalid_structures(ops, error):
    with pytest.raises(error):
        FinStructure(dim=2, ops=ops)

def test_star_closure():
    A = FinStructure(dim=2, ops={"circ": table({(0, 1, 1): 1})})
    star = star_closure(A).op("star")
    assert star == table({(0, 1, 1): 1, (1, 0, 1): 1})
    assert A.op("star") == star

def test_one_dimensional_kinds():
    """
    `e∘e = e` is commutative and associative, hence Novikov, but `e≻e = e` is not Zinbiel
    """
    e = table({(0, 0, 0): 1})
    A = FinStructure(dim=1, ops={"circ": e, "dot": e, "succ": e})
    assert check_fin_structure(StructureKind.NOVIKOV, A).passed
    assert check_fin_structure(StructureKind.COMM_ASSOC, A).passed
    # e∘(e·e) = (e∘e)·e + e·(e∘e) fails
    assert check_fin_structure(StructureKind.DIFF_NP, A).failed_identities() == ["NP2"]
    assert check_fin_structure(StructureKind.ZINBIEL, A).failed_identities() == ["zinbiel"]

def test_transpose_duality(polyx_window: FinStructure):
    assert check_fin_coalgebra(CoKind.COCOMM_COASSOC, polyx_window).passed
    dual = transpose_coalgebra(polyx_window, {"Delta2": "dot"})
    assert dual.names[0] == "x0*"
    assert check_fin_structure(StructureKind.COMM_ASSOC, dual).passed

def test_transpose_duality_failure():
    # Δ(e1) = e1⊗e2 is not cocommutative, and e1*·e2* = e1* is not commutative
    A = FinStructure(dim=2, coops={"Delta2": table({(0, 0, 1): 1})})
    assert not check_fin_coalgebra(CoKind.COCOMM_COASSOC, A).passed
    assert not check_fin_structure(StructureKind.COMM_ASSOC, transpose_coalgebra(A)).passed

def test_polyx_is_diff_np_bialgebra(polyx_window: FinStructure):
    assert check_fin_structure(StructureKind.DIFF_NP, polyx_window, 3).passed
    assert check_fin_coalgebra(CoKind.DIFF_NP_CO, polyx_window, 3).passed
    report = check_fin_bialgebra(BiKind.DIFF_NP_BI, polyx_window, 3)
    assert report.passed
    assert report.child("DNPB3").diagnostic

def test_claim_construction(zinbiel: FinStructure):
    double, r = claim_semidirect_pgd_bialgebra(zinbiel_derivation_to_pre_pgd(zinbiel))
    assert double.dim == 6
    assert double.names[3:] == ("e1*", "e2*", "e3*")
    assert r[(0, 3)] == 1 and r[(3, 0)] == -1
    assert set(double.coops) == {"Delta1", "Delta2", "delta0"}

def test_display(zinbiel: FinStructure):
    shown = display_fin(zinbiel_derivation_to_pre_pgd(zinbiel))
    assert shown["e1◁e1"] == "e2 + alpha*e3"
    assert shown["D(e1)"] == "e1 + alpha*e2"

def test_fin_coboundary_coproducts(zinbiel: FinStructure):
    double, r = claim_semidirect_pgd_bialgebra(zinbiel_derivation_to_pre_pgd(zinbiel))
    coops = fin_coboundary_coproducts(double, r)
    assert all(coops[name] == double.coop(name) for name in ("Delta1", "Delta2", "delta0"))
    assert all(t.is_zero for t in fin_coboundary_coproducts(double, Tensor.zero(2)).values())
