"""
Conformal formal deformations truncated at a power of h, and their semi-classical limits.

A product `a ∘^h_λ b = a_λ b + Σ_i h^i {a_λ b}_i` and a coproduct `Δ_h = Δ + Σ_i h^i Δ_i` are stored as one table per
power of h. Identities are expanded in h and checked power by power below the truncation order; the witnesses of
the power `h^t` use identifiers ending in `-h{t}`.
"""
from __future__ import annotations
from dataclasses import dataclass
from functools import reduce
from typing import Callable, List, Tuple
import logging
import operator

from confalg.conformal import (
    ConfAlgebra,
    ConfBiKind,
    ConfStructureKind,
    act,
    check_conf_bialgebra,
    check_conf_structure,
    coproduct,
    product,
    right_mult,
    tau,
    validate_table,
    vec,
)
from confalg.errors import DimensionError, PreconditionError
from confalg.exactpoly import D1, D2, LAMBDA, MU, PARTIAL, Poly, slot_sum
from confalg.report import CheckReport, Identity, composite, run_identities
from confalg.tensor import Accumulator, Tensor

logger = logging.getLogger(__name__)

d = Poly.var(PARTIAL)
l = Poly.var(LAMBDA)
m = Poly.var(MU)

#: The lowest truncation order at which the semi-classical limit is determined
LIMIT_ORDER = 3

def _pad(base: Tensor, corrections: Tuple[Tensor, ...], order: int) -> List[Tensor]:
    return [base, *corrections, *[Tensor.zero(3)] * (order - 1 - len(corrections))]

@dataclass(frozen=True)
class TruncatedDeformation:
    """
    A deformation of the commutative λ-product `mul` of `base`, modulo `h^order`
    """
    base: ConfAlgebra
    order: int = LIMIT_ORDER
    corrections: Tuple[Tensor, ...] = ()
    "The products `{a_λ b}_i` for `i = 1 ... order - 1`, keyed like λ-product tables; missing ones are zero"

    def __post_init__(self):
        if self.order < 1:
            raise DimensionError(f"The truncation order must be positive, not {self.order}")
        if len(self.corrections) > self.order - 1:
            raise DimensionError(f"{len(self.corrections)} corrections given for truncation order {self.order}")
        self.base.op("mul")
        for i, table in enumerate(self.corrections, start=1):
            validate_table(f"mul_{i}", table, (self.base.rank,) * 3, (LAMBDA, PARTIAL))

    def products(self) -> List[Tensor]:
        "One table per power of h, starting with the undeformed product"
        return _pad(self.base.op("mul"), self.corrections, self.order)

@dataclass(frozen=True)
class TruncatedCoDeformation:
    """
    A deformation of the cocommutative coproduct `Delta` of `base`, modulo `h^order`
    """
    base: ConfAlgebra
    order: int = LIMIT_ORDER
    corrections: Tuple[Tensor, ...] = ()
    "The coproducts `Δ_i` for `i = 1 ... order - 1`, keyed like coproduct tables; missing ones are zero"

    def __post_init__(self):
        if self.order < 1:
            raise DimensionError(f"The truncation order must be positive, not {self.order}")
        if len(self.corrections) > self.order - 1:
            raise DimensionError(f"{len(self.corrections)} corrections given for truncation order {self.order}")
        self.base.coop("Delta")
        for i, table in enumerate(self.corrections, start=1):
            validate_table(f"Delta_{i}", table, (self.base.rank,) * 3, (D1, D2))

    def coproducts(self) -> List[Tensor]:
        return _pad(self.base.coop("Delta"), self.corrections, self.order)

def _graded(term: Callable[[int, int], Tensor]) -> Callable[[int], Tensor]:
    "The `h^t` part of a quadratic expression, given its `(i, j)` cross term"
    def at(t: int) -> Tensor:
        return reduce(operator.add, (term(i, t - i) for i in range(t + 1)))
    return at

def check_truncated_deformation(D: TruncatedDeformation) -> CheckReport:
    """
    Checks that `∘^h` is associative modulo `h^order`, one identity per power of h, and that the undeformed
    product is commutative
    """
    p = D.products()
    base = D.base

    def associator(t: int) -> Callable[[int, int, int], Tensor]:
        def residual(i: int, j: int, k: int) -> Tensor:
            a, b, c = vec(i), vec(j), vec(k)
            terms = _graded(lambda s, u: product(p[u], product(p[s], a, b), c, l + m)
                            - product(p[u], a, product(p[s], b, c, m)))
            return terms(t)
        return residual

    def commutativity(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return product(p[0], a, b) - product(p[0], b, a, -l - d)

    identities = [Identity("base-commutativity", 2, commutativity)]
    identities += [Identity(f"associativity-h{t}", 3, associator(t)) for t in range(D.order)]
    return run_identities("truncated-deformation", identities, base.indices(), base.names)

def check_truncated_codeformation(C: TruncatedCoDeformation) -> CheckReport:
    """
    Checks that `Δ_h` is coassociative modulo `h^order`, one identity per power of h, and that the undeformed
    coproduct is cocommutative
    """
    q = C.coproducts()
    base = C.base

    def coassociator(t: int) -> Callable[[int], Tensor]:
        def residual(k: int) -> Tensor:
            terms = _graded(lambda s, u: coproduct(q[u], coproduct(q[s], vec(k)), 1)
                            - coproduct(q[u], coproduct(q[s], vec(k)), 0))
            return terms(t)
        return residual

    def cocommutativity(k: int) -> Tensor:
        x = coproduct(q[0], vec(k))
        return x - tau(x)

    identities = [Identity("base-cocommutativity", 1, cocommutativity)]
    identities += [Identity(f"coassociativity-h{t}", 1, coassociator(t)) for t in range(C.order)]
    return run_identities("truncated-codeformation", identities, base.indices(), base.names)

def check_truncated_asi(D: TruncatedDeformation, C: TruncatedCoDeformation) -> CheckReport:
    """
    Checks both compatibility conditions of an ASI conformal bialgebra for `(∘^h, Δ_h)`, power by power.
    The deformed product is not commutative, so the general form of the conditions is used, with
    `R(b)_λ a = a_{-λ-∂} b`.
    """
    if D.base.rank != C.base.rank:
        raise DimensionError(f"A deformation of rank {D.base.rank} cannot pair with a codeformation of rank {C.base.rank}")
    order = min(D.order, C.order)
    p, q = D.products(), C.coproducts()
    s2 = -l - slot_sum(2)

    def asi1(t: int) -> Callable[[int, int], Tensor]:
        def residual(i: int, j: int) -> Tensor:
            a, b = vec(i), vec(j)

            def cross(s: int, u: int) -> Tensor:
                Da, Db = coproduct(q[s], a), coproduct(q[s], b)
                return (coproduct(q[s], product(p[u], a, b))
                        - act(p[u], a, Db, 1)
                        - right_mult(p[u], b, Da, 0, s2))
            return _graded(cross)(t)
        return residual

    def asi2(t: int) -> Callable[[int, int], Tensor]:
        def residual(i: int, j: int) -> Tensor:
            a, b = vec(i), vec(j)

            def cross(s: int, u: int) -> Tensor:
                Da, Db = coproduct(q[s], a), coproduct(q[s], b)
                first = act(p[u], b, Da, 0, s2) - right_mult(p[u], b, Da, 1, s2)
                second = act(p[u], a, Db, 0) - right_mult(p[u], a, Db, 1)
                return first + tau(second)
            return _graded(cross)(t)
        return residual

    identities: List[Identity] = []
    for t in range(order):
        identities += [Identity(f"asi-1-h{t}", 2, asi1(t)), Identity(f"asi-2-h{t}", 2, asi2(t))]
    return run_identities("truncated-asi", identities, D.base.indices(), D.base.names)

def limit_bracket(D: TruncatedDeformation) -> Tensor:
    """
    `[a_λ b] = {a_λ b}_1 - {b_{-λ-∂} a}_1`
    """
    first = D.products()[1] if D.order > 1 else Tensor.zero(3)
    out = Accumulator(3)
    for (i, j, k), c in first.items():
        out.add((i, j, k), c)
        out.add((j, i, k), -c.substitute(LAMBDA, -l - d))
    return out.build()

def limit_cobracket(C: TruncatedCoDeformation) -> Tensor:
    """
    `δ = Δ_1 - τΔ_1`
    """
    first = C.coproducts()[1] if C.order > 1 else Tensor.zero(3)
    swapped = {D1: Poly.var(D2), D2: Poly.var(D1)}
    out = Accumulator(3)
    for (k, i, j), c in first.items():
        out.add((k, i, j), c)
        out.add((k, j, i), -c.compose(swapped))
    return out.build()

def semiclassical_limit(D: TruncatedDeformation, C: TruncatedCoDeformation, check: bool = True) -> Tuple[ConfAlgebra, CheckReport]:
    """
    The semi-classical limit `(P, [,], ·, δ, Δ)` of a deformation of a commutative and cocommutative ASI conformal
    bialgebra, and the report of the Poisson conformal algebra and bialgebra checks on it.

    Raises:
        PreconditionError: if either truncation order is below 3, or if `check` is set and one of the truncated
            checks fails; the report names the failing power of h
    """
    order = min(D.order, C.order)
    if order < LIMIT_ORDER:
        raise PreconditionError("semiclassical-limit", message=(
            f"The limit needs the deformation modulo h^{LIMIT_ORDER} at least, but the truncation order is {order}"
        ))
    if check:
        inputs = composite("deformation", [
            check_truncated_deformation(D),
            check_truncated_codeformation(C),
            check_truncated_asi(D, C),
        ])
        if not inputs.passed:
            raise PreconditionError("semiclassical-limit", inputs)
    limit = ConfAlgebra(
        rank=D.base.rank,
        ops={"mul": D.base.op("mul"), "bracket": limit_bracket(D)},
        coops={"Delta": C.base.coop("Delta"), "delta": limit_cobracket(C)},
        names=D.base.names,
        params=tuple(sorted(set(D.base.params) | set(C.base.params))),
    )
    report = composite("semiclassical-limit", [
        check_conf_structure(ConfStructureKind.POISSON, limit),
        check_conf_bialgebra(ConfBiKind.POISSON_BI, limit),
    ])
    return limit, report
