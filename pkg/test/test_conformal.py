import pytest
from hypothesis import given, strategies as st

from confalg.bridges import FinalExample
from confalg.conformal import (
    ConfAlgebra,
    ConfBiKind,
    ConfBilinearForm,
    ConfCoKind,
    ConfRepKind,
    ConfStructureKind,
    adjoint,
    bialgebra_double,
    check_conf_bialgebra,
    check_conf_coalgebra,
    check_conf_representation,
    check_conf_structure,
    check_manin_triple,
    display_products,
    dual_conf_algebra,
    dual_conf_coalgebra,
    dual_representation,
    lambda_product,
    left_regular,
    standard_form,
    tau,
)
from confalg.builtins import virasoro_type
from confalg.errors import ConfalgError, DimensionError, MissingOperationError, VariableError
from confalg.exactpoly import D1, D2, LAMBDA, MU, PARTIAL, Poly, Var
from confalg.tensor import Tensor

d, l, m = (Poly.var(v) for v in (PARTIAL, LAMBDA, MU))
alpha = Poly.var(Var.param("alpha"))

def test_virasoro(virasoro: ConfAlgebra):
    assert check_conf_structure(ConfStructureKind.LIE, virasoro).passed

def test_wrong_weight_is_not_lie():
    """
    `[b λ b] = (∂ + 3λ)b` is not skew: `-[b_{-λ-∂} b] = (2∂ + 3λ)b`
    """
    report = check_conf_structure(ConfStructureKind.LIE, virasoro_type(3))
    assert "skew-symmetry" in report.failed_identities()
    witness = report.first_witness()
    assert witness is not None and witness.indices == (1, 1)

def test_zero_structure_passes_everything(zero_conf: ConfAlgebra):
    assert check_conf_structure(ConfStructureKind.POISSON, zero_conf).passed
    assert check_conf_coalgebra(ConfCoKind.POISSON_CO, zero_conf).passed
    report = check_conf_bialgebra(ConfBiKind.POISSON_BI, zero_conf)
    assert report.passed
    assert [c.name for c in report.children] == ["asi-conformal-bi", "lie-conformal-bi", "poisson-co-conformal"]

def test_final_example_products(final_example: FinalExample):
    P = final_example.poisson
    assert lambda_product(P, "bracket", Tensor.basis(0), Tensor.basis(1)) == Tensor({(2,): 3 * d + 9 * l})
    assert P.op("bracket")[(0, 0, 1)] == 2 * d + 4 * l
    assert P.op("bracket")[(0, 0, 2)] == alpha * (3 * d + 6 * l)
    assert P.op("bracket")[(1, 0, 2)] == 6 * d + 9 * l
    assert P.op("mul")[(0, 0, 1)] == 2
    assert P.op("mul")[(0, 1, 2)] == P.op("mul")[(1, 0, 2)] == 3
    assert display_products(P, ["mul"])["e1_l e1"] == "2*e2"
    assert check_conf_structure(ConfStructureKind.POISSON, P).passed

def test_pre_poisson_products(final_example: FinalExample):
    circ = final_example.pre_poisson.op("circ")
    assert circ[(0, 0, 1)] == d + 2 * l
    assert circ[(0, 0, 2)] == alpha * (d + 3 * l)
    assert circ[(0, 1, 2)] == 2 * d + 6 * l
    assert circ[(1, 0, 2)] == 2 * d + 3 * l

def test_sesquilinearity(final_example: FinalExample):
    P = final_example.poisson
    a, b = Tensor.basis(0), Tensor.basis(1)
    ab = lambda_product(P, "bracket", a, b)
    assert lambda_product(P, "bracket", d * a, b) == -l * ab
    assert lambda_product(P, "bracket", a, d * b) == (l + d) * ab
    # evaluating at a shifted argument
    assert lambda_product(P, "bracket", a, b, m) == ab.substitute(LAMBDA, m)

slot_polys = st.sampled_from([Poly.constant(1), Poly.var(D1), Poly.var(D2), Poly.var(D1) * Poly.var(D2) - 2])
order_two = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), slot_polys, max_size=5).map(
    lambda data: Tensor(data, 2))

@given(order_two)
def test_tau_is_an_involution(t: Tensor):
    assert tau(tau(t)) == t

def test_tau_moves_derivations_with_factors():
    assert tau(Tensor({(0, 1): Poly.var(D1)})) == Tensor({(1, 0): Poly.var(D2)})

def test_duals_invert_each_other(final_example: FinalExample):
    P = final_example.poisson
    co = dual_conf_coalgebra(P)
    assert co.names == ("e1*", "e2*", "e3*")
    assert set(co.coops) == {"Delta", "delta"}
    assert check_conf_coalgebra(ConfCoKind.COCOMM_COASSOC, co).passed
    assert check_conf_coalgebra(ConfCoKind.LIE_CO, co).passed
    back = dual_conf_algebra(co)
    assert back.ops == P.ops
    assert back.names == P.names

def test_dual_needs_products(virasoro: ConfAlgebra):
    with pytest.raises(MissingOperationError):
        dual_conf_algebra(virasoro)

def test_representations(final_example: FinalExample):
    P = final_example.poisson
    assert check_conf_representation(P, adjoint(P)).passed
    assert check_conf_representation(P, left_regular(final_example.pre_poisson)).passed

def test_dual_of_left_regular(final_example: FinalExample):
    """
    The coadjoint-type action that the semidirect product is built from
    """
    rep = dual_representation(final_example.poisson, left_regular(final_example.pre_poisson))
    assert rep.names == ("e1*", "e2*", "e3*")
    bracket = rep.action("bracket")
    assert bracket[(0, 1, 0)] == d - l
    assert bracket[(0, 2, 0)] == alpha * (d - 2 * l)
    assert bracket[(0, 2, 1)] == 2 * d - 4 * l
    assert bracket[(1, 2, 0)] == 2 * d - l
    mul = rep.action("mul")
    assert mul[(0, 1, 0)] == mul[(1, 2, 0)] == 1
    assert mul[(0, 2, 1)] == 2

def test_semidirect_product_constants(final_example: FinalExample):
    """
    `[e1 λ e2*] = (∂-λ)e1*`, `[e1 λ e3*] = (∂-2λ)(αe1* + 2e2*)`, `[e2 λ e3*] = (2∂-λ)e1*`
    and the mixed commutative products
    """
    D = final_example.double
    bracket, mul = D.op("bracket"), D.op("mul")
    assert D.names == ("e1", "e2", "e3", "e1*", "e2*", "e3*")
    assert bracket[(0, 4, 3)] == d - l
    assert bracket[(0, 5, 3)] == alpha * (d - 2 * l)
    assert bracket[(0, 5, 4)] == 2 * d - 4 * l
    assert bracket[(1, 5, 3)] == 2 * d - l
    assert bracket[(4, 0, 3)] == -(2 * d + l)
    for key in ((0, 4, 3), (4, 0, 3), (1, 5, 3), (5, 1, 3)):
        assert mul[key] == 1
    assert mul[(0, 5, 4)] == mul[(5, 0, 4)] == 2
    assert not any(i >= 3 and j >= 3 for i, j, _ in bracket)

def small_bialgebra() -> ConfAlgebra:
    zero = Tensor.zero(3)
    return ConfAlgebra(rank=1, ops={"mul": Tensor({(0, 0, 0): 1}), "bracket": zero},
                       coops={"Delta": zero, "delta": zero})

def test_bialgebra_double_is_a_manin_triple():
    double, r = bialgebra_double(small_bialgebra())
    assert double.rank == 2
    assert double.names == ("e1", "e1*")
    assert r == Tensor({(0, 1): 1})
    report = check_manin_triple(double, ([0], [1]), standard_form(1))
    assert report.passed
    assert [c.name for c in report.children] == ["subalgebras", "form", "invariance", "isotropy"]

def test_manin_triple_failures():
    double, _ = bialgebra_double(small_bialgebra())
    not_isotropic = ConfBilinearForm(2, Tensor({(0, 0): 1, (0, 1): 1, (1, 0): 1}))
    assert "isotropy" in check_manin_triple(double, ([0], [1]), not_isotropic).failed_identities()
    degenerate = ConfBilinearForm(2, Tensor({(0, 1): 1}))
    failed = check_manin_triple(double, ([0], [1]), degenerate).failed_identities()
    assert "nondegeneracy" in failed and "symmetry" in failed
    with pytest.raises(DimensionError):
        check_manin_triple(double, ([0], [0]), standard_form(1))

@pytest.mark.parametrize("kwargs,error", [
    (dict(rank=0), DimensionError),
    (dict(rank=1, names=("a", "b")), DimensionError),
    (dict(rank=1, ops={"bracket": Tensor({(0, 0, 0): m})}), VariableError),
    (dict(rank=1, ops={"bracket": Tensor({(0, 0, 1): 1})}), DimensionError),
    (dict(rank=1, coops={"Delta": Tensor({(0, 0, 0): l})}), VariableError),
    (dict(rank=1, ops={"cross": Tensor.zero(3)}), ConfalgError),
])
def test_invalid_algebras(kwargs, error):
    with pytest.raises(error):
        ConfAlgebra(**kwargs)

def test_missing_operations(virasoro: ConfAlgebra):
    with pytest.raises(MissingOperationError):
        check_conf_structure(ConfStructureKind.POISSON, virasoro)
    with pytest.raises(MissingOperationError):
        check_conf_representation(virasoro, adjoint(virasoro), ConfRepKind.ASSOC)
