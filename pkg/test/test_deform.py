from pathlib import Path
from typing import Tuple

import pytest
from hypothesis import given, settings, strategies as st

from confalg.conformal import ConfAlgebra, coproduct, tau, vec
from confalg.deform import (
    TruncatedCoDeformation,
    TruncatedDeformation,
    check_truncated_asi,
    check_truncated_codeformation,
    check_truncated_deformation,
    limit_bracket,
    limit_cobracket,
    semiclassical_limit,
)
from confalg.errors import DimensionError, PreconditionError
from confalg.exactpoly import D1, D2, LAMBDA, PARTIAL, Poly
from confalg.spec_file import parse_spec
from confalg.tensor import Tensor

d, l = Poly.var(PARTIAL), Poly.var(LAMBDA)

def zero_base(rank: int) -> ConfAlgebra:
    return ConfAlgebra(rank=rank, ops={"mul": Tensor.zero(3)}, coops={"Delta": Tensor.zero(3)})

@pytest.fixture
def current(specs: Path) -> Tuple[TruncatedDeformation, TruncatedCoDeformation]:
    return parse_spec(specs / "current_deformation.json").require_deform()

def test_current_deformation_is_consistent(current):
    D, C = current
    assert D.order == 3
    assert check_truncated_deformation(D).passed
    assert check_truncated_codeformation(C).passed
    assert check_truncated_asi(D, C).passed

def test_current_limit(current):
    """
    The limit bracket of the current algebra: `[e1 λ e2] = e2`, `[e2 λ e1] = -e2`, `[e1 λ e1] = 0`
    """
    limit, report = semiclassical_limit(*current)
    assert report.passed
    bracket = limit.op("bracket")
    assert bracket[(0, 1, 1)] == 1
    assert bracket[(1, 0, 1)] == -1
    assert bracket[(0, 0, 0)] == 0
    assert limit.coop("delta").is_zero
    assert [c.name for c in report.children] == ["poisson-conformal", "poisson-conformal-bi"]

def test_incompatible_correction():
    """
    Over `e1·e1 = 2e2`, `e1·e2 = 2e3`, the correction `{e1 λ e1}_1 = e1` breaks associativity at `h^1`
    """
    base = ConfAlgebra(
        rank=3,
        ops={"mul": Tensor({(0, 0, 1): 2, (0, 1, 2): 2, (1, 0, 2): 2})},
        coops={"Delta": Tensor.zero(3)},
    )
    D = TruncatedDeformation(base, 3, (Tensor({(0, 0, 0): 1}),))
    report = check_truncated_deformation(D)
    assert not report.passed
    assert "associativity-h0" not in report.failed_identities()
    witness = report.first_witness()
    assert witness is not None
    assert witness.identity == "associativity-h1"
    assert witness.indices == (1, 1, 2)
    with pytest.raises(PreconditionError) as info:
        semiclassical_limit(D, TruncatedCoDeformation(base))
    assert info.value.stage == "semiclassical-limit"

def test_limit_needs_order_three(current):
    D, C = current
    with pytest.raises(PreconditionError):
        semiclassical_limit(TruncatedDeformation(D.base, 2, D.corrections[:1]), C)

def test_virasoro_limit():
    """
    `{a λ a}_1 = (∂ + 2λ)a` has the Virasoro-type bracket `(2∂ + 4λ)a` as its limit
    """
    D = TruncatedDeformation(zero_base(1), 3, (Tensor({(0, 0, 0): d + 2 * l}),))
    assert limit_bracket(D) == Tensor({(0, 0, 0): 2 * d + 4 * l})
    # the first-order term alone is not associative, so h^2 fails without a second correction
    assert check_truncated_deformation(D).failed_identities() == ["associativity-h2"]
    limit, report = semiclassical_limit(D, TruncatedCoDeformation(zero_base(1)), check=False)
    assert report.passed
    assert limit.op("bracket") == limit_bracket(D)

def test_limit_cobracket():
    d1, d2 = Poly.var(D1), Poly.var(D2)
    C = TruncatedCoDeformation(zero_base(1), 3, (Tensor({(0, 0, 0): d1}),))
    assert limit_cobracket(C) == Tensor({(0, 0, 0): d1 - d2})

@pytest.mark.parametrize("order,corrections", [(0, ()), (2, (Tensor.zero(3), Tensor.zero(3)))])
def test_bad_truncations(order, corrections):
    with pytest.raises(DimensionError):
        TruncatedDeformation(zero_base(1), order, corrections)

def test_codeformation_breaks_coassociativity_at_first_order():
    """
    Over `Δ(e1) = e1⊗e1`, the correction `Δ_1(e1) = e2⊗e1` leaves `e1⊗e2⊗e1` in the `h^1` coassociator
    """
    base = ConfAlgebra(rank=2, ops={"mul": Tensor.zero(3)}, coops={"Delta": Tensor({(0, 0, 0): 1})})
    C = TruncatedCoDeformation(base, 3, (Tensor({(0, 1, 0): 1}),))
    report = check_truncated_codeformation(C)
    assert not report.passed
    assert report.failed_identities() == ["coassociativity-h1", "coassociativity-h2"]
    witness = report.first_witness()
    assert witness is not None
    assert witness.identity == "coassociativity-h1"
    assert witness.indices == (1,)
    with pytest.raises(PreconditionError):
        semiclassical_limit(TruncatedDeformation(base), C)

def test_asi_breaks_at_first_order():
    """
    `e·e = e` with `Δ_1(e) = e⊗e`: each side is fine alone, but `Δ_1(e·e) - e⊗(e·e) - (e·e)⊗e = -e⊗e`
    """
    base = ConfAlgebra(rank=1, ops={"mul": Tensor({(0, 0, 0): 1})}, coops={"Delta": Tensor.zero(3)})
    D = TruncatedDeformation(base)
    C = TruncatedCoDeformation(base, 3, (Tensor({(0, 0, 0): 1}),))
    assert check_truncated_deformation(D).passed
    assert check_truncated_codeformation(C).passed
    report = check_truncated_asi(D, C)
    assert not report.passed
    failed = report.failed_identities()
    assert "asi-1-h0" not in failed and "asi-2-h0" not in failed
    witness = report.first_witness()
    assert witness is not None
    assert witness.identity == "asi-1-h1"
    assert witness.indices == (1, 1)
    with pytest.raises(PreconditionError) as info:
        semiclassical_limit(D, C)
    assert info.value.stage == "semiclassical-limit"

def test_asi_needs_equal_ranks():
    with pytest.raises(DimensionError):
        check_truncated_asi(TruncatedDeformation(zero_base(1)), TruncatedCoDeformation(zero_base(2)))

bracket_polys = st.sampled_from([Poly.constant(1), d, l, d * l - 2, l * l, 3 * d + l])
slot_polys = st.sampled_from([Poly.constant(1), Poly.var(D1), Poly.var(D2), Poly.var(D1) * Poly.var(D2) + 1])
rank_two_keys = st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1))

def tables(coefficients: st.SearchStrategy) -> st.SearchStrategy:
    return st.dictionaries(rank_two_keys, coefficients, max_size=4).map(lambda data: Tensor(data, 3))

@settings(max_examples=25, deadline=None)
@given(first=tables(bracket_polys))
def test_limit_bracket_is_skew(first: Tensor):
    """
    `[a λ b] = -[b_{-λ-∂} a]` whatever the first-order correction
    """
    bracket = limit_bracket(TruncatedDeformation(zero_base(2), 3, (first,)))
    assert bracket == -(bracket.swap(0, 1).substitute(LAMBDA, -l - d))

@settings(max_examples=25, deadline=None)
@given(first=tables(slot_polys))
def test_limit_cobracket_is_skew(first: Tensor):
    """
    `δ = -τδ` whatever the first-order correction
    """
    delta = limit_cobracket(TruncatedCoDeformation(zero_base(2), 3, (first,)))
    for k in range(2):
        split = coproduct(delta, vec(k))
        assert tau(split) == -split
