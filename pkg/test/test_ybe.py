from typing import List

import pytest
from hypothesis import given, settings, strategies as st

from confalg.bridges import FinalExample
from confalg.conformal import (
    ConfAlgebra,
    ConfBiKind,
    ConfModuleHom,
    ConfRep,
    ConfStructureKind,
    bialgebra_double,
    check_conf_bialgebra,
    check_conf_structure,
    check_manin_triple,
    left_regular,
    standard_form,
)
from confalg.errors import MissingOperationError, PreconditionError
from confalg.exactpoly import D1, D2, Poly, Var, divisible_by_slot_sum
from confalg.tensor import Tensor
from confalg.ybe import (
    associated_poisson_conformal,
    bullet_square,
    canonical_pcybe_solution,
    check_coboundary_conditions,
    check_o_operator,
    check_pcybe,
    check_r_matrix_o_operator,
    coboundary_coproducts,
    double_bracket,
    is_skew,
    pre_poisson_from_o_operator,
    r_to_conformal_map,
)

d1, d2 = Poly.var(D1), Poly.var(D2)
alpha = Poly.var(Var.param("alpha"))

def rank_one_commutative() -> ConfAlgebra:
    return ConfAlgebra(rank=1, ops={"mul": Tensor({(0, 0, 0): 1}), "bracket": Tensor.zero(3)})

def test_canonical_solution(final_example: FinalExample):
    r = final_example.r
    assert is_skew(r)
    assert r[(0, 3)] == 1 and r[(3, 0)] == -1
    report = check_pcybe(final_example.double, r)
    assert report.passed
    assert report.notes == []
    assert [c.name for c in report.children] == ["pcybe-bracket", "pcybe-mul"]

def test_solutions_scale(final_example: FinalExample):
    assert check_pcybe(final_example.double, 3 * final_example.r).passed
    assert check_pcybe(final_example.double, Tensor.zero(2)).passed

def test_failing_solution_has_a_witness():
    """
    On `e·e = e`, `r = e⊗e` gives `r•r = e⊗e⊗e`, which is not a multiple of `∂1 + ∂2 + ∂3`
    """
    report = check_pcybe(rank_one_commutative(), Tensor({(0, 0): 1}))
    assert report.failed_identities() == ["bullet-square"]
    assert report.notes == ["r is not skew-symmetric"]
    witness = report.first_witness()
    assert witness is not None
    assert witness.indices == (1, 1, 1)
    assert witness.residual == {"e1⊗e1⊗e1": "1"}

def test_coboundary_coproducts(final_example: FinalExample):
    """
    `Δ(e2*) = -2e1*⊗e1*`, `Δ(e3*) = -3(e1*⊗e2* + e2*⊗e1*)`, `Δ(e1) = -e1*⊗e2 - e2⊗e1* - e2*⊗e3 - e3⊗e2*`,
    `Δ(e2) = -2(e1*⊗e3 + e3⊗e1*)`, `δ(e2*) = -2(∂e1*⊗e1* - e1*⊗∂e1*)` and `δ(e3) = δ(e1*) = Δ(e3) = 0`
    """
    delta, Delta = coboundary_coproducts(final_example.double, final_example.r)
    assert Delta[(4, 3, 3)] == -2
    for pair in ((3, 1), (1, 3), (4, 2), (2, 4)):
        assert Delta[(0, *pair)] == -1
    assert Delta[(1, 3, 2)] == -2 and Delta[(1, 2, 3)] == -2
    assert Delta[(5, 3, 4)] == -3 and Delta[(5, 4, 3)] == -3
    assert delta[(4, 3, 3)] == 2 * d2 - 2 * d1
    assert delta[(5, 3, 3)] == -3 * alpha * (d1 - d2)
    assert delta[(5, 3, 4)] == 3 * d2 - 6 * d1
    assert delta[(5, 4, 3)] == 6 * d2 - 3 * d1
    for empty in (2, 3):
        assert not any(k == empty for k, _, _ in delta)
        assert not any(k == empty for k, _, _ in Delta)
    assert final_example.double.coop("Delta") == Delta

def test_coboundary_conditions(final_example: FinalExample):
    report = check_coboundary_conditions(final_example.double, final_example.r)
    assert report.passed
    names = [c.name for c in report.children]
    assert names == [f"condition-{c}" for c in "abcde"] + ["coboundary-poisson-coalgebra"]
    cross = report.child("coboundary-poisson-coalgebra")
    assert cross.diagnostic and cross.passed
    assert check_conf_bialgebra(ConfBiKind.POISSON_BI, final_example.double).passed

def test_non_skew_r_fails_condition_a(final_example: FinalExample):
    r = Tensor({(0, 3): 1})
    report = check_coboundary_conditions(final_example.double, r)
    assert "condition-a" in report.failed_identities()

def test_o_operator_criterion_agrees(final_example: FinalExample):
    report = check_r_matrix_o_operator(final_example.double, final_example.r)
    assert report.passed
    assert report.notes == []
    assert report.child("pcybe").passed and report.child("o-operator").passed

def test_r_to_conformal_map(final_example: FinalExample):
    T = r_to_conformal_map(final_example.double, final_example.r)
    assert T.matrix == final_example.r
    assert r_to_conformal_map(final_example.double, Tensor.zero(2)).matrix.is_zero

def test_identity_is_an_o_operator(final_example: FinalExample):
    """
    For a pre-Poisson conformal algebra the identity is an O-operator of its Poisson conformal algebra for `(L_∘, L_≻)`,
    and it gives the pre-Poisson structure back
    """
    pre = final_example.pre_poisson
    rep = left_regular(pre)
    identity = ConfModuleHom.identity(3)
    assert check_o_operator(final_example.poisson, rep, identity).passed
    assert check_o_operator(final_example.poisson, rep, ConfModuleHom(3, 3)).passed
    back = pre_poisson_from_o_operator(final_example.poisson, rep, identity)
    assert back.ops == pre.ops
    assert check_conf_structure(ConfStructureKind.PRE_POISSON, back).passed

def test_scaled_action_is_not_an_o_operator(final_example: FinalExample):
    pre = final_example.pre_poisson
    doubled = ConfRep(acting_rank=3, rank=3, actions={"bracket": pre.op("circ"), "mul": 2 * pre.op("succ")})
    report = check_o_operator(final_example.poisson, doubled, ConfModuleHom.identity(3), check=False)
    assert report.failed_identities() == ["o-operator-mul"]
    with pytest.raises(PreconditionError):
        pre_poisson_from_o_operator(final_example.poisson, doubled, ConfModuleHom.identity(3))

def test_associated_poisson_requires_pre_poisson(final_example: FinalExample):
    broken = final_example.pre_poisson.with_ops(succ=Tensor({(0, 0, 0): 1}))
    with pytest.raises(PreconditionError) as info:
        associated_poisson_conformal(broken)
    assert info.value.stage == "associated-poisson"
    with pytest.raises(PreconditionError):
        canonical_pcybe_solution(broken)

def test_pcybe_needs_both_products(virasoro: ConfAlgebra):
    with pytest.raises(MissingOperationError):
        check_pcybe(virasoro, Tensor({(0, 0): d1 - d2}))

def test_double_of_the_coboundary_bialgebra(final_example: FinalExample):
    """
    The double of the rank-6 coboundary bialgebra carries the canonical `r = Σ e_i⊗e_i*`
    """
    double, r = bialgebra_double(final_example.double)
    assert double.rank == 12
    assert check_pcybe(double, r).passed
    assert check_manin_triple(double, (range(6), range(6, 12)), standard_form(6)).passed

@settings(max_examples=12, deadline=None)
@given(pair=st.lists(st.integers(0, 5), min_size=2, max_size=2, unique=True), c=st.sampled_from([1, -2]))
def test_o_operator_agrees_under_perturbation(final_example: FinalExample, pair: List[int], c: int):
    """
    A skew r solves the Yang-Baxter type equation exactly when it gives an O-operator
    """
    i, j = pair
    r = final_example.r + Tensor({(i, j): c, (j, i): -c})
    assert is_skew(r)
    report = check_r_matrix_o_operator(final_example.double, r)
    assert report.notes == []
    assert report.child("pcybe").passed == report.child("o-operator").passed

def test_both_halves_vanish_modulo_the_slot_sum(final_example: FinalExample):
    D, r = final_example.double, final_example.r
    for half in (double_bracket(D, r), bullet_square(D, r)):
        assert all(divisible_by_slot_sum(c) for _, c in half.items())
    assert double_bracket(D, Tensor.zero(2)).is_zero
    assert bullet_square(D, Tensor.zero(2)).is_zero

def test_bullet_square_of_a_non_solution():
    square = bullet_square(rank_one_commutative(), Tensor({(0, 0): 1}))
    assert not divisible_by_slot_sum(square[(0, 0, 0)])
