"""
Conformal algebras that are free of finite rank over k[∂], and the identities they satisfy.

An element `Σ f_i(∂) e_i` is an order 1 [`Tensor`][confalg.tensor.Tensor] whose coefficients are polynomials in `d`.
A λ-product table is keyed `(i, j, k)` with coefficients `C(l, d)` meaning `e_i λ e_j = Σ_k C(λ, ∂) e_k`;
a coproduct table is keyed `(k, i, j)` with coefficients `Q(d1, d2)` meaning `Δ(e_k) = Σ Q(∂⊗I, I⊗∂) e_i⊗e_j`.
Elements of P⊗P and P⊗P⊗P are order 2 and 3 tensors in the slot variables `d1`, `d2`, `d3`.

Every value may also carry the free variables `l` and `m` of the identity being evaluated. The scratch
variable `n` never survives a call: products are computed in `n` and `n` is then replaced by the requested
argument, which may itself mention `d` or slot variables.
"""
from __future__ import annotations
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
import logging

from confalg.errors import ConfalgError, DimensionError, MissingOperationError, PreconditionError, VariableError
from confalg.exactpoly import D1, D2, LAMBDA, MU, NU, PARTIAL, Poly, PolyLike, Var, determinant, serialize, slot_sum
from confalg.report import CheckReport, Identity, Witness, composite, run_identities
from confalg.tensor import Accumulator, Key, Tensor, slot_var

logger = logging.getLogger(__name__)

#: λ-products a conformal structure may carry: `a λ b`, `[a λ b]`, `a ∘λ b` and `a ≻λ b`
CONF_OP_NAMES = ("mul", "bracket", "circ", "succ")
#: Coproducts a conformal structure may carry: the associative `Δ` and the Lie `δ`
CONF_COOP_NAMES = ("Delta", "delta")
#: Which coproduct each product dualizes to
DUAL_COOP: Dict[str, str] = {"mul": "Delta", "bracket": "delta"}
DUAL_OP: Dict[str, str] = {v: k for k, v in DUAL_COOP.items()}

Vector = Tensor

d = Poly.var(PARTIAL)
l = Poly.var(LAMBDA)
m = Poly.var(MU)
n = Poly.var(NU)

def _allowed(value: Poly, allowed: Sequence[Var]) -> List[str]:
    return sorted(v.name for v in value.variables() if not v.is_param and v not in allowed)

@dataclass(frozen=True)
class ConfAlgebra:
    """
    A free k[∂]-module of finite rank with λ-products and coproducts
    """
    rank: int
    ops: Mapping[str, Tensor] = field(default_factory=dict)
    "λ-product tables keyed `(i, j, k)`, polynomials in `l` and `d`"
    coops: Mapping[str, Tensor] = field(default_factory=dict)
    "Coproduct tables keyed `(k, i, j)`, polynomials in `d1` and `d2`"
    names: Tuple[str, ...] = ()
    params: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise DimensionError(f"Rank must be positive, not {self.rank}")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"e{i + 1}" for i in range(self.rank)))
        if len(self.names) != self.rank:
            raise DimensionError(f"{len(self.names)} basis names given for rank {self.rank}")
        for kind, tables, vocabulary, allowed in (
            ("λ-product", self.ops, CONF_OP_NAMES, (LAMBDA, PARTIAL)),
            ("coproduct", self.coops, CONF_COOP_NAMES, (D1, D2)),
        ):
            for name, table in tables.items():
                if name not in vocabulary:
                    raise ConfalgError(f"Unknown {kind} {name!r}; expected one of {', '.join(vocabulary)}")
                validate_table(name, table, (self.rank,) * 3, allowed)

    def has(self, name: str) -> bool:
        return name in self.ops or name in self.coops

    def op(self, name: str) -> Tensor:
        if name not in self.ops:
            raise MissingOperationError(name, "conformal algebra")
        return self.ops[name]

    def coop(self, name: str) -> Tensor:
        if name not in self.coops:
            raise MissingOperationError(name, "conformal algebra")
        return self.coops[name]

    def with_ops(self, **ops: Tensor) -> ConfAlgebra:
        return replace(self, ops={**self.ops, **ops})

    def with_coops(self, **coops: Tensor) -> ConfAlgebra:
        return replace(self, coops={**self.coops, **coops})

    def without_coops(self) -> ConfAlgebra:
        return replace(self, coops={})

    def indices(self, window: Optional[int] = None) -> List[int]:
        if window is None:
            return list(range(self.rank))
        return list(range(min(self.rank, window + 1)))

def validate_table(name: str, table: Tensor, bounds: Tuple[int, ...], allowed: Sequence[Var]) -> None:
    if table and table.order != len(bounds):
        raise DimensionError(f"{name} must have order {len(bounds)}, not {table.order}")
    for key, value in table.items():
        if any(not 0 <= i < b for i, b in zip(key, bounds)):
            raise DimensionError(f"{name} has index {tuple(i + 1 for i in key)} outside the basis")
        bad = _allowed(value, allowed)
        if bad:
            names = ", ".join(v.name for v in allowed)
            raise VariableError(f"{name}{tuple(i + 1 for i in key)} = {value} uses {', '.join(bad)}; only {names} and parameters are allowed")

@dataclass(frozen=True)
class ConfRep:
    """
    A representation of a conformal algebra of rank `acting_rank` on a free module of rank `rank`.

    Actions are keyed like λ-products, `(i, j, k)` for `φ(e_i)_λ v_j = Σ_k R(λ, ∂) v_k`. The action named
    `bracket` is the Lie part ρ and the one named `mul` the associative part l.
    """
    acting_rank: int
    rank: int
    actions: Mapping[str, Tensor] = field(default_factory=dict)
    names: Tuple[str, ...] = ()
    params: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"v{i + 1}" for i in range(self.rank)))
        if len(self.names) != self.rank:
            raise DimensionError(f"{len(self.names)} basis names given for rank {self.rank}")
        for name, table in self.actions.items():
            if name not in ("mul", "bracket"):
                raise ConfalgError(f"Unknown action {name!r}; expected mul or bracket")
            validate_table(name, table, (self.acting_rank, self.rank, self.rank), (LAMBDA, PARTIAL))

    def action(self, name: str) -> Tensor:
        if name not in self.actions:
            raise MissingOperationError(name, "representation")
        return self.actions[name]

@dataclass(frozen=True)
class ConfModuleHom:
    """
    A k[∂]-linear map `T(v_j) = Σ_k T[j][k](∂) e_k`, keyed `(j, k)`
    """
    source_rank: int
    target_rank: int
    matrix: Tensor = field(default_factory=lambda: Tensor.zero(2))

    def __post_init__(self):
        validate_table("T", self.matrix, (self.source_rank, self.target_rank), (PARTIAL,))

    def __call__(self, v: Vector) -> Vector:
        fibres = self.matrix.fibres()
        out = Accumulator(1)
        for (j,), f in v.items():
            for (k,), c in fibres.get(j, ()):
                out.add((k,), f * c)
        return out.build()

    @classmethod
    def identity(cls, rank: int) -> ConfModuleHom:
        return cls(rank, rank, Tensor({(i, i): 1 for i in range(rank)}, 2))

@dataclass(frozen=True)
class ConfBilinearForm:
    """
    A conformal bilinear form, `⟨e_i, e_j⟩_λ = B[i][j](λ)`, keyed `(i, j)`
    """
    rank: int
    matrix: Tensor = field(default_factory=lambda: Tensor.zero(2))

    def __post_init__(self):
        validate_table("B", self.matrix, (self.rank, self.rank), (LAMBDA,))

    def pair(self, x: Vector, y: Vector, at: PolyLike = LAMBDA) -> Poly:
        """
        `⟨x, y⟩_at`, using `⟨∂a, b⟩_λ = -λ⟨a, b⟩_λ` and `⟨a, ∂b⟩_λ = λ⟨a, b⟩_λ`
        """
        total = Poly.constant(0)
        shifted = {key: c.substitute(LAMBDA, n) for key, c in self.matrix.items()}
        for (i,), f in x.items():
            fi = f.substitute(PARTIAL, -n)
            for (j,), g in y.items():
                c = shifted.get((i, j))
                if c is not None:
                    total = total + fi * g.substitute(PARTIAL, n) * c
        return total.substitute(NU, at)

    def gram(self) -> List[List[Poly]]:
        return [[self.matrix.get((i, j)) for j in range(self.rank)] for i in range(self.rank)]

def standard_form(n_: int) -> ConfBilinearForm:
    """
    `⟨a + f, b + g⟩_λ = f_λ(b) + g_{-λ}(a)` on P ⊕ P*, for P of rank `n_` with the dual basis after the basis
    """
    entries: Dict[Key, PolyLike] = {}
    for i in range(n_):
        entries[(i, n_ + i)] = 1
        entries[(n_ + i, i)] = 1
    return ConfBilinearForm(2 * n_, Tensor(entries, 2))

# λ-product calculus

@lru_cache(maxsize=256)
def scratch_rows(table: Tensor, x: Var) -> Dict[Tuple[int, int], List[Tuple[int, Poly]]]:
    "Rows of a table with λ renamed to the scratch variable and ∂ renamed to `x`"
    mapping: Dict[Var, PolyLike] = {LAMBDA: n}
    if x != PARTIAL:
        mapping[PARTIAL] = Poly.var(x)
    return {ij: [(k, c.compose(mapping)) for k, c in row] for ij, row in table.rows().items()}

def product(table: Tensor, x: Vector, y: Vector, at: PolyLike = LAMBDA) -> Vector:
    """
    `x_at y` for the λ-product with the given table:
    `Σ f_i(-ν) g_j(ν + ∂) C^{ij}_k(ν, ∂) e_k`, then ν → `at`.
    """
    rows = scratch_rows(table, PARTIAL)
    out = Accumulator(1)
    for (i,), f in x.items():
        fi = f.substitute(PARTIAL, -n)
        for (j,), g in y.items():
            row = rows.get((i, j))
            if not row:
                continue
            gj = fi * g.substitute(PARTIAL, n + d)
            for k, c in row:
                out.add((k,), gj * c)
    return out.build().substitute(NU, at)

def lambda_product(A: ConfAlgebra, op: str, a: Vector, b: Vector, at: PolyLike = LAMBDA) -> Vector:
    """
    The λ-product `a_λ b` of two elements.

    Params:
        op: One of `mul`, `bracket`, `circ`, `succ`
        at: What λ is set to; a shift such as `-l - d` gives `a_{-λ-∂} b`

    Raises:
        MissingOperationError: if `A` has no such product
    """
    return product(A.op(op), a, b, at)

def act(table: Tensor, a: Vector, t: Tensor, slot: int, at: PolyLike = LAMBDA) -> Tensor:
    """
    `a_at` acting from the left on one factor of `t`, such as `(I⊗L(a)_λ)t` for `slot=1`.
    The argument may mention the slot variables of the result.
    """
    x = slot_var(t.order, slot)
    rows = scratch_rows(table, x)
    out = Accumulator(t.order)
    shift = n + Poly.var(x)
    coeffs = [(mi, f.substitute(PARTIAL, -n)) for (mi,), f in a.items()]
    for key, c in t.items():
        cj = c.substitute(x, shift)
        j = key[slot]
        for mi, f in coeffs:
            for k, s in rows.get((mi, j), ()):
                out.add(key[:slot] + (k,) + key[slot + 1:], f * cj * s)
    return out.build().substitute(NU, at)

def act_right(table: Tensor, b: Vector, t: Tensor, slot: int, at: PolyLike = LAMBDA) -> Tensor:
    """
    One factor `y` of `t` replaced by `y_at b`
    """
    x = slot_var(t.order, slot)
    rows = scratch_rows(table, x)
    out = Accumulator(t.order)
    shift = n + Poly.var(x)
    coeffs = [(j, g.substitute(PARTIAL, shift)) for (j,), g in b.items()]
    for key, c in t.items():
        ci = c.substitute(x, -n)
        i = key[slot]
        for j, g in coeffs:
            for k, s in rows.get((i, j), ()):
                out.add(key[:slot] + (k,) + key[slot + 1:], ci * g * s)
    return out.build().substitute(NU, at)

def right_mult(table: Tensor, b: Vector, t: Tensor, slot: int, at: PolyLike = LAMBDA) -> Tensor:
    """
    `R(b)_at` on one factor, where `R(b)_λ y = y_{-λ-∂} b`
    """
    return act_right(table, b, t, slot, -Poly.of(at) - Poly.var(slot_var(t.order, slot)))

@lru_cache(maxsize=256)
def _split_fibres(coop: Tensor, order: int, slot: int) -> Dict[int, List[Tuple[Key, Poly]]]:
    mapping = {D1: Poly.var(slot_var(order + 1, slot)), D2: Poly.var(slot_var(order + 1, slot + 1))}
    return {k: [(pair, c.compose(mapping)) for pair, c in fibre] for k, fibre in coop.fibres().items()}

def coproduct(coop: Tensor, t: Tensor, slot: int = 0) -> Tensor:
    """
    A coproduct applied to one factor, so `coproduct(Δ, t, 1)` is `(I⊗Δ)t`.
    It is a k[∂]-module map: ∂ on the split factor becomes the sum of ∂ on the two new factors.
    """
    k = t.order
    mapping: Dict[Var, PolyLike] = {}
    for s in range(k):
        new = Poly.var(slot_var(k + 1, s if s <= slot else s + 1))
        if s == slot:
            new = new + Poly.var(slot_var(k + 1, s + 1))
        mapping[slot_var(k, s)] = new
    fibres = _split_fibres(coop, k, slot)
    out = Accumulator(k + 1)
    for key, c in t.items():
        moved = c.compose(mapping)
        for pair, q in fibres.get(key[slot], ()):
            out.add(key[:slot] + pair + key[slot + 1:], moved * q)
    return out.build()

def tau(t: Tensor) -> Tensor:
    return t.swap(0, 1)

def vec(i: int) -> Vector:
    return Tensor.basis(i)

def _opposite(c: Poly) -> Poly:
    "`C(-λ-∂, ∂)`, the coefficient of `b_{-λ-∂} a` read off the one of `b_λ a`"
    return c.substitute(LAMBDA, -l - d)

# Structure identities, on basis triples

class _Calc:
    def __init__(self, A: ConfAlgebra):
        self.A = A

    def p(self, op: str, x: Vector, y: Vector, at: PolyLike = LAMBDA) -> Vector:
        return product(self.A.op(op), x, y, at)

    def co(self, name: str, t: Tensor, slot: int = 0) -> Tensor:
        return coproduct(self.A.coop(name), t, slot)

    def act(self, op: str, a: Vector, t: Tensor, slot: int, at: PolyLike = LAMBDA) -> Tensor:
        return act(self.A.op(op), a, t, slot, at)

    def right(self, op: str, b: Vector, t: Tensor, slot: int, at: PolyLike = LAMBDA) -> Tensor:
        return right_mult(self.A.op(op), b, t, slot, at)

    def both(self, op: str, a: Vector, t: Tensor, at: PolyLike = LAMBDA) -> Tensor:
        "`(φ(a)_at⊗I + I⊗φ(a)_at)t`"
        return self.act(op, a, t, 0, at) + self.act(op, a, t, 1, at)

def _commutative(c: _Calc, op: str) -> List[Identity]:
    def comm(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return c.p(op, a, b) - c.p(op, b, a, -l - d)

    def assoc(i: int, j: int, k: int) -> Tensor:
        a, b, x = vec(i), vec(j), vec(k)
        return c.p(op, c.p(op, a, b), x, l + m) - c.p(op, a, c.p(op, b, x, m))

    return [Identity("commutativity", 2, comm), Identity("associativity", 3, assoc)]

def _lie(c: _Calc, op: str) -> List[Identity]:
    def skew(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return c.p(op, a, b) + c.p(op, b, a, -l - d)

    def jacobi(i: int, j: int, k: int) -> Tensor:
        a, b, x = vec(i), vec(j), vec(k)
        return (c.p(op, a, c.p(op, b, x, m))
                - c.p(op, c.p(op, a, b), x, l + m)
                - c.p(op, b, c.p(op, a, x), m))

    return [Identity("skew-symmetry", 2, skew), Identity("jacobi", 3, jacobi)]

def _leibniz(c: _Calc) -> List[Identity]:
    def leibniz(i: int, j: int, k: int) -> Tensor:
        a, b, x = vec(i), vec(j), vec(k)
        return (c.p("bracket", a, c.p("mul", b, x, m))
                - c.p("mul", c.p("bracket", a, b), x, l + m)
                - c.p("mul", b, c.p("bracket", a, x), m))

    return [Identity("leibniz", 3, leibniz)]

def _left_symmetric(c: _Calc, op: str) -> List[Identity]:
    def left_symmetry(i: int, j: int, k: int) -> Tensor:
        a, b, x = vec(i), vec(j), vec(k)
        o = lambda u, v, at: c.p(op, u, v, at)
        return o(o(a, b, l), x, l + m) - o(a, o(b, x, m), l) - o(o(b, a, m), x, l + m) + o(b, o(a, x, l), m)

    return [Identity("left-symmetry", 3, left_symmetry)]

def _zinbiel(c: _Calc) -> List[Identity]:
    def zinbiel(i: int, j: int, k: int) -> Tensor:
        a, b, x = vec(i), vec(j), vec(k)
        s = lambda u, v, at: c.p("succ", u, v, at)
        return s(a, s(b, x, m), l) - s(s(a, b, l) + s(b, a, -l - d), x, l + m)

    return [Identity("zinbiel", 3, zinbiel)]

def _pre_poisson(c: _Calc) -> List[Identity]:
    o = lambda u, v, at: c.p("circ", u, v, at)
    s = lambda u, v, at: c.p("succ", u, v, at)

    def pp1(i: int, j: int, k: int) -> Tensor:
        a, b, x = vec(i), vec(j), vec(k)
        return s(o(a, b, l) - o(b, a, -l - d), x, l + m) - o(a, s(b, x, m), l) + s(b, o(a, x, l), m)

    def pp2(i: int, j: int, k: int) -> Tensor:
        a, b, x = vec(i), vec(j), vec(k)
        return o(s(a, b, l) + s(b, a, -l - d), x, l + m) - s(a, o(b, x, m), l) - s(b, o(a, x, l), m)

    return [Identity("pre-poisson-1", 3, pp1), Identity("pre-poisson-2", 3, pp2)]

class ConfStructureKind(str, Enum):
    """
    Kinds of conformal algebra
    """
    COMM_ASSOC = "comm-assoc-conformal"
    LIE = "lie-conformal"
    POISSON = "poisson-conformal"
    LEFT_SYMMETRIC = "left-symmetric-conformal"
    ZINBIEL = "zinbiel-conformal"
    PRE_POISSON = "pre-poisson-conformal"

CONF_STRUCTURE_OPS: Dict[ConfStructureKind, Tuple[str, ...]] = {
    ConfStructureKind.COMM_ASSOC: ("mul",),
    ConfStructureKind.LIE: ("bracket",),
    ConfStructureKind.POISSON: ("mul", "bracket"),
    ConfStructureKind.LEFT_SYMMETRIC: ("circ",),
    ConfStructureKind.ZINBIEL: ("succ",),
    ConfStructureKind.PRE_POISSON: ("circ", "succ"),
}

def _require(A: ConfAlgebra, names: Sequence[str]) -> None:
    for name in names:
        if not A.has(name):
            raise MissingOperationError(name, "conformal algebra")

def check_conf_structure(kind: ConfStructureKind, A: ConfAlgebra, window: Optional[int] = None) -> CheckReport:
    """
    Checks that `A` is a conformal algebra of the given kind, as polynomial identities in λ, μ and ∂ on every
    tuple of basis elements. Sesquilinearity is built into the evaluation, so basis tuples suffice.

    Params:
        window: Evaluate only on basis indices up to this one, for truncations of infinite families

    Raises:
        MissingOperationError: if a required product is absent
    """
    kind = ConfStructureKind(kind)
    _require(A, CONF_STRUCTURE_OPS[kind])
    c = _Calc(A)
    run = lambda ids: run_identities(kind.value, ids, A.indices(window), A.names)

    if kind is ConfStructureKind.COMM_ASSOC:
        return run(_commutative(c, "mul"))
    if kind is ConfStructureKind.LIE:
        return run(_lie(c, "bracket"))
    if kind is ConfStructureKind.POISSON:
        return run(_commutative(c, "mul") + _lie(c, "bracket") + _leibniz(c))
    if kind is ConfStructureKind.LEFT_SYMMETRIC:
        return run(_left_symmetric(c, "circ"))
    if kind is ConfStructureKind.ZINBIEL:
        return run(_zinbiel(c))
    return run(_left_symmetric(c, "circ") + _zinbiel(c) + _pre_poisson(c))

# Coalgebra identities, on one basis element

def _cocomm_coassoc(c: _Calc) -> List[Identity]:
    def coassoc(k: int) -> Tensor:
        x = c.co("Delta", vec(k))
        return c.co("Delta", x, 1) - c.co("Delta", x, 0)

    def cocomm(k: int) -> Tensor:
        x = c.co("Delta", vec(k))
        return x - tau(x)

    return [Identity("coassociativity", 1, coassoc), Identity("cocommutativity", 1, cocomm)]

def _lie_co(c: _Calc) -> List[Identity]:
    def coskew(k: int) -> Tensor:
        x = c.co("delta", vec(k))
        return x + tau(x)

    def cojacobi(k: int) -> Tensor:
        x = c.co("delta", vec(k))
        inner = c.co("delta", x, 1)
        return inner - tau(inner) - c.co("delta", x, 0)

    return [Identity("co-skew-symmetry", 1, coskew), Identity("co-jacobi", 1, cojacobi)]

def poisson_coalgebra_residual(A: ConfAlgebra, k: int) -> Tensor:
    """
    `(I⊗Δ)δ(e_k) - (δ⊗I)Δ(e_k) - (τ⊗I)(I⊗δ)Δ(e_k)`
    """
    c = _Calc(A)
    x, y = c.co("Delta", vec(k)), c.co("delta", vec(k))
    return c.co("Delta", y, 1) - c.co("delta", x, 0) - tau(c.co("delta", x, 1))

def _poisson_co(A: ConfAlgebra) -> List[Identity]:
    return [Identity("poisson-coalgebra", 1, lambda k: poisson_coalgebra_residual(A, k))]

class ConfCoKind(str, Enum):
    """
    Kinds of conformal coalgebra
    """
    COCOMM_COASSOC = "cocomm-coassoc-conformal"
    LIE_CO = "lie-co-conformal"
    POISSON_CO = "poisson-co-conformal"

CONF_COALGEBRA_COOPS: Dict[ConfCoKind, Tuple[str, ...]] = {
    ConfCoKind.COCOMM_COASSOC: ("Delta",),
    ConfCoKind.LIE_CO: ("delta",),
    ConfCoKind.POISSON_CO: ("Delta", "delta"),
}

def check_conf_coalgebra(kind: ConfCoKind, A: ConfAlgebra, window: Optional[int] = None) -> CheckReport:
    """
    Checks that the coproducts of `A` form a conformal coalgebra of the given kind.
    The associative coproduct is read from `Delta` and the Lie one from `delta`.
    """
    kind = ConfCoKind(kind)
    _require(A, CONF_COALGEBRA_COOPS[kind])
    c = _Calc(A)
    run = lambda ids: run_identities(kind.value, ids, A.indices(window), A.names)

    if kind is ConfCoKind.COCOMM_COASSOC:
        return run(_cocomm_coassoc(c))
    if kind is ConfCoKind.LIE_CO:
        return run(_lie_co(c))
    return run(_cocomm_coassoc(c) + _lie_co(c) + _poisson_co(A))

# Bialgebra compatibilities, on basis pairs

def _shift2() -> Poly:
    "`-λ-∂⊗2`"
    return -l - slot_sum(2)

def _asi_commutative(c: _Calc) -> List[Identity]:
    def thq1(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return (c.co("Delta", c.p("mul", a, b))
                - c.act("mul", a, c.co("Delta", b), 1)
                - c.act("mul", b, c.co("Delta", a), 0, _shift2()))

    return [Identity("thq1", 2, thq1)]

def _asi_general(c: _Calc) -> List[Identity]:
    def asi1(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return (c.co("Delta", c.p("mul", a, b))
                - c.act("mul", a, c.co("Delta", b), 1)
                - c.right("mul", b, c.co("Delta", a), 0, _shift2()))

    def asi2(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        Da, Db = c.co("Delta", a), c.co("Delta", b)
        first = c.act("mul", b, Da, 0, _shift2()) - c.right("mul", b, Da, 1, _shift2())
        second = c.act("mul", a, Db, 0) - c.right("mul", a, Db, 1)
        return first + tau(second)

    return [Identity("asi-1", 2, asi1), Identity("asi-2", 2, asi2)]

def _lie_bi(c: _Calc) -> List[Identity]:
    def liebi(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return (c.co("delta", c.p("bracket", a, b))
                - c.both("bracket", a, c.co("delta", b))
                + c.both("bracket", b, c.co("delta", a), _shift2()))

    return [Identity("lie-bialgebra", 2, liebi)]

def _poisson_bi(c: _Calc) -> List[Identity]:
    def pb1(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return (c.co("delta", c.p("mul", a, b))
                - c.act("mul", a, c.co("delta", b), 0)
                - c.act("mul", b, c.co("delta", a), 0, _shift2())
                - c.act("bracket", a, c.co("Delta", b), 1)
                - c.act("bracket", b, c.co("Delta", a), 1, _shift2()))

    def pb2(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        da = c.co("delta", a)
        return (c.co("Delta", c.p("bracket", a, b))
                - c.both("bracket", a, c.co("Delta", b))
                + c.act("mul", b, da, 1, _shift2())
                - c.act("mul", b, da, 0, _shift2()))

    return [Identity("poisson-bialgebra-1", 2, pb1), Identity("poisson-bialgebra-2", 2, pb2)]

class ConfBiKind(str, Enum):
    """
    Kinds of conformal bialgebra
    """
    ASI = "asi-conformal-bi"
    ASI_GENERAL = "asi-general-conformal-bi"
    LIE_BI = "lie-conformal-bi"
    POISSON_BI = "poisson-conformal-bi"

CONF_BIALGEBRA_NEEDS: Dict[ConfBiKind, Tuple[str, ...]] = {
    ConfBiKind.ASI: ("mul", "Delta"),
    ConfBiKind.ASI_GENERAL: ("mul", "Delta"),
    ConfBiKind.LIE_BI: ("bracket", "delta"),
    ConfBiKind.POISSON_BI: ("mul", "bracket", "Delta", "delta"),
}

def check_conf_bialgebra(kind: ConfBiKind, A: ConfAlgebra, window: Optional[int] = None) -> CheckReport:
    """
    Checks the compatibilities between the λ-products and the coproducts of `A`.

    `asi-conformal-bi` is the commutative and cocommutative case, where one condition remains;
    `asi-general-conformal-bi` checks both conditions for products that need not commute.
    The Poisson kind reports the associative and Lie bialgebras and the Poisson coalgebra as children.
    """
    kind = ConfBiKind(kind)
    _require(A, CONF_BIALGEBRA_NEEDS[kind])
    c = _Calc(A)
    run = lambda ids: run_identities(kind.value, ids, A.indices(window), A.names)

    if kind is ConfBiKind.ASI:
        return run(_asi_commutative(c))
    if kind is ConfBiKind.ASI_GENERAL:
        return run(_asi_general(c))
    if kind is ConfBiKind.LIE_BI:
        return run(_lie_bi(c))
    report = run(_poisson_bi(c))
    report.children = [
        check_conf_bialgebra(ConfBiKind.ASI, A, window),
        check_conf_bialgebra(ConfBiKind.LIE_BI, A, window),
        check_conf_coalgebra(ConfCoKind.POISSON_CO, A, window),
    ]
    return report

# Duals

def dual_names(names: Sequence[str]) -> Tuple[str, ...]:
    return tuple(f"{name}*" for name in names)

def dual_conf_coalgebra(A: ConfAlgebra) -> ConfAlgebra:
    """
    The coproducts on P* dual to the λ-products of P: `Q^{ij}_k(x, y) = C^{ij}_k(x, -x-y)`,
    with `mul` giving `Delta` and `bracket` giving `delta`. Other products are ignored.
    """
    coops: Dict[str, Tensor] = {}
    x, y = Poly.var(D1), Poly.var(D2)
    for op, coop in DUAL_COOP.items():
        if op in A.ops:
            coops[coop] = Tensor(
                {(k, i, j): c.compose({LAMBDA: x, PARTIAL: -x - y}) for (i, j, k), c in A.ops[op].items()}, 3)
    if not coops:
        raise MissingOperationError("mul, bracket", "conformal algebra")
    return ConfAlgebra(rank=A.rank, coops=coops, names=dual_names(A.names), params=A.params)

def dual_conf_algebra(A: ConfAlgebra) -> ConfAlgebra:
    """
    The λ-products on P* dual to the coproducts of P: `C^{ij}_k(λ, ∂) = Q^{ij}_k(λ, -λ-∂)`.
    Inverse to [`dual_conf_coalgebra`][confalg.conformal.dual_conf_coalgebra].
    """
    ops: Dict[str, Tensor] = {}
    for coop, op in DUAL_OP.items():
        if coop in A.coops:
            ops[op] = Tensor(
                {(i, j, k): c.compose({D1: l, D2: -l - d}) for (k, i, j), c in A.coops[coop].items()}, 3)
    if not ops:
        raise MissingOperationError("Delta, delta", "conformal algebra")
    names = tuple(name[:-1] if name.endswith("*") else f"{name}*" for name in A.names)
    return ConfAlgebra(rank=A.rank, ops=ops, names=names, params=A.params)

# Representations

def adjoint(A: ConfAlgebra) -> ConfRep:
    """
    `(P, ad, L)`: the λ-products acting on P itself
    """
    actions = {name: A.ops[name] for name in ("bracket", "mul") if name in A.ops}
    return ConfRep(acting_rank=A.rank, rank=A.rank, actions=actions, names=A.names, params=A.params)

def left_regular(A: ConfAlgebra) -> ConfRep:
    """
    `(P, L_∘, L_≻)` of a pre-Poisson conformal algebra, a representation of its associated Poisson conformal algebra
    """
    return ConfRep(acting_rank=A.rank, rank=A.rank, actions={"bracket": A.op("circ"), "mul": A.op("succ")},
                   names=A.names, params=A.params)

class ConfRepKind(str, Enum):
    LIE = "lie-rep"
    ASSOC = "assoc-rep"
    POISSON = "poisson-rep"

CONF_REP_NEEDS: Dict[ConfRepKind, Tuple[str, ...]] = {
    ConfRepKind.LIE: ("bracket",),
    ConfRepKind.ASSOC: ("mul",),
    ConfRepKind.POISSON: ("bracket", "mul"),
}

def check_conf_representation(A: ConfAlgebra, rep: ConfRep, kind: ConfRepKind = ConfRepKind.POISSON) -> CheckReport:
    """
    Checks the module identities of `rep` over `A` on every (basis, basis, module basis) triple
    """
    kind = ConfRepKind(kind)
    needs = CONF_REP_NEEDS[kind]
    _require(A, needs)
    for name in needs:
        rep.action(name)
    if rep.acting_rank != A.rank:
        raise DimensionError(f"The representation is of a rank {rep.acting_rank} algebra, not rank {A.rank}")
    c = _Calc(A)
    act_ = lambda name, a, v, at: product(rep.actions[name], a, v, at)
    spans = (tuple(range(A.rank)), tuple(range(A.rank)), tuple(range(rep.rank)))

    def assoc(i: int, j: int, k: int) -> Tensor:
        a, b, v = vec(i), vec(j), vec(k)
        return act_("mul", c.p("mul", a, b), v, l + m) - act_("mul", a, act_("mul", b, v, m), l)

    def lie(i: int, j: int, k: int) -> Tensor:
        a, b, v = vec(i), vec(j), vec(k)
        return (act_("bracket", c.p("bracket", a, b), v, l + m)
                - act_("bracket", a, act_("bracket", b, v, m), l)
                + act_("bracket", b, act_("bracket", a, v, l), m))

    def pm1(i: int, j: int, k: int) -> Tensor:
        a, b, v = vec(i), vec(j), vec(k)
        return (act_("bracket", c.p("mul", a, b, m), v, -l - d)
                - act_("mul", b, act_("bracket", a, v, -l - d), -l - m - d)
                - act_("mul", a, act_("bracket", b, v, -l - d), m))

    def pm2(i: int, j: int, k: int) -> Tensor:
        a, b, v = vec(i), vec(j), vec(k)
        return (act_("bracket", a, act_("mul", b, v, m), l)
                - act_("mul", c.p("bracket", a, b), v, l + m)
                - act_("mul", b, act_("bracket", a, v, l), m))

    identities: List[Identity] = []
    if kind in (ConfRepKind.ASSOC, ConfRepKind.POISSON):
        identities.append(Identity("assoc-module", 3, assoc, spans))
    if kind in (ConfRepKind.LIE, ConfRepKind.POISSON):
        identities.append(Identity("lie-module", 3, lie, spans))
    if kind is ConfRepKind.POISSON:
        identities += [Identity("poisson-module-1", 3, pm1, spans), Identity("poisson-module-2", 3, pm2, spans)]
    return run_identities(kind.value, identities, [], rep.names)

def _ensure(stage: str, report: CheckReport) -> None:
    if not report.passed:
        raise PreconditionError(stage, report)

def dual_representation(A: ConfAlgebra, rep: ConfRep, check: bool = True) -> ConfRep:
    """
    The representation `(V*, ρ*, -l*)` on the conformal dual of the module.

    With `ρ(e_i)_λ v_j = Σ_k R^{ij}_k(λ, ∂) v_k`, the dual action is
    `ρ*(e_i)_λ v_j* = -Σ_k R^{ik}_j(λ, -λ-∂) v_k*`; the associative part carries the opposite sign.

    Raises:
        PreconditionError: if `check` is set and `rep` fails the module identities for the actions it has
    """
    if check:
        kind = (ConfRepKind.POISSON if len(rep.actions) == 2
                else ConfRepKind.LIE if "bracket" in rep.actions else ConfRepKind.ASSOC)
        if rep.actions:
            _ensure("dual-representation", check_conf_representation(A, rep, kind))
    actions: Dict[str, Tensor] = {}
    for name, table in rep.actions.items():
        sign = -1 if name == "bracket" else 1
        actions[name] = Tensor({(i, j, k): sign * c.substitute(PARTIAL, -l - d) for (i, k, j), c in table.items()}, 3)
    return ConfRep(acting_rank=rep.acting_rank, rank=rep.rank, actions=actions,
                   names=dual_names(rep.names), params=rep.params)

def _glue(
    rank_p: int,
    rank_q: int,
    p_table: Optional[Tensor],
    q_table: Optional[Tensor],
    on_q: Optional[Tensor],
    on_p: Optional[Tensor],
    sign: int,
) -> Tensor:
    """
    The λ-product on P ⊕ Q with Q's basis after P's.

    `on_q` is P acting on Q and `on_p` is Q acting on P. Mixed products in the other order follow from
    `x_λ a = ±a_{-λ-∂} x`, with `sign` +1 for commutative products and -1 for brackets.
    """
    nq = rank_p
    out = Accumulator(3)
    if p_table is not None:
        out.add_tensor(p_table)
    if q_table is not None:
        for (i, j, k), c in q_table.items():
            out.add((nq + i, nq + j, nq + k), c)
    if on_q is not None:
        for (a, y, k), c in on_q.items():
            out.add((a, nq + y, nq + k), c)
            out.add((nq + y, a, nq + k), sign * _opposite(c))
    if on_p is not None:
        for (x, b, k), c in on_p.items():
            out.add((nq + x, b, k), c)
            out.add((b, nq + x, k), sign * _opposite(c))
    return out.build()

def semidirect_product(A: ConfAlgebra, rep: ConfRep, check: bool = True) -> ConfAlgebra:
    """
    `P ⋉ V`: P's products on P, the action between P and V, and V×V products zero

    Raises:
        PreconditionError: if `check` is set and `rep` is not a Poisson representation of `A`
    """
    if rep.acting_rank != A.rank:
        raise DimensionError(f"The representation is of a rank {rep.acting_rank} algebra, not rank {A.rank}")
    if check:
        _ensure("semidirect-product", check_conf_representation(A, rep, ConfRepKind.POISSON))
    ops: Dict[str, Tensor] = {}
    for name, sign in (("mul", 1), ("bracket", -1)):
        if name in A.ops or name in rep.actions:
            ops[name] = _glue(A.rank, rep.rank, A.ops.get(name), None, rep.actions.get(name), None, sign)
    return ConfAlgebra(rank=A.rank + rep.rank, ops=ops, names=A.names + rep.names,
                       params=tuple(sorted(set(A.params) | set(rep.params))))

def matched_pair_double(P: ConfAlgebra, Q: ConfAlgebra, rep_p: ConfRep, rep_q: ConfRep) -> Tuple[ConfAlgebra, CheckReport]:
    """
    The candidate Poisson conformal algebra on P ⊕ Q of a matched pair.

    Params:
        rep_p: P acting on Q, as `(ρ_P, l_P)`
        rep_q: Q acting on P, as `(ρ_Q, l_Q)`

    Returns:
        The double, and a report that passes iff the data is a matched pair. Its children cover the
        commutative associative part, the Lie part and the mixed Leibniz compatibilities.

    Raises:
        DimensionError: if the ranks of the algebras and representations do not fit together
    """
    if (rep_p.acting_rank, rep_p.rank) != (P.rank, Q.rank) or (rep_q.acting_rank, rep_q.rank) != (Q.rank, P.rank):
        raise DimensionError(
            f"Representations of ranks {rep_p.acting_rank}→{rep_p.rank} and {rep_q.acting_rank}→{rep_q.rank} "
            f"do not fit algebras of ranks {P.rank} and {Q.rank}"
        )
    ops: Dict[str, Tensor] = {}
    for name, sign in (("mul", 1), ("bracket", -1)):
        ops[name] = _glue(P.rank, Q.rank, P.ops.get(name), Q.ops.get(name),
                          rep_p.actions.get(name), rep_q.actions.get(name), sign)
    double = ConfAlgebra(rank=P.rank + Q.rank, ops=ops, names=P.names + Q.names,
                         params=tuple(sorted(set(P.params) | set(Q.params))))
    c = _Calc(double)
    idx = double.indices()
    report = composite("matched-pair", [
        run_identities("comm-assoc-matched-pair", _commutative(c, "mul"), idx, double.names),
        run_identities("lie-matched-pair", _lie(c, "bracket"), idx, double.names),
        run_identities("poisson-matched-pair", _leibniz(c), idx, double.names),
    ])
    return double, report

def bialgebra_double(A: ConfAlgebra, check: bool = True) -> Tuple[ConfAlgebra, Tensor]:
    """
    The Poisson conformal algebra on P ⊕ P* of a Poisson conformal bialgebra, from the matched pair
    `(P, P*, ad*, -L*, ad*, -L*)`, together with `r = Σ e_i⊗e_i*`

    Raises:
        PreconditionError: if `check` is set and `A` is not a Poisson conformal bialgebra
    """
    if check:
        _ensure("bialgebra-double", check_conf_bialgebra(ConfBiKind.POISSON_BI, A))
    P = A.without_coops()
    Q = dual_conf_algebra(A)
    Q = Q.with_ops(**{name: Q.ops.get(name, Tensor.zero(3)) for name in ("mul", "bracket")})
    rep_p = dual_representation(P, adjoint(P), check)
    rep_q = dual_representation(Q, adjoint(Q), check)
    rep_q = replace(rep_q, names=P.names)
    double, report = matched_pair_double(P, Q, rep_p, rep_q)
    if check:
        _ensure("bialgebra-double", report)
    r = Tensor({(i, A.rank + i): 1 for i in range(A.rank)}, 2)
    return double, r

# Manin triples

def check_manin_triple(D: ConfAlgebra, split: Tuple[Sequence[int], Sequence[int]], B: ConfBilinearForm) -> CheckReport:
    """
    Checks that `(D, D1, D2)` is a Manin triple of Poisson conformal algebras for the bilinear form `B`, where
    `D1` and `D2` are spanned by the two parts of `split` (0-based basis indices).

    The children report the closure of both parts under every λ-product, the symmetry and nondegeneracy of `B`,
    its invariance, and the isotropy of both parts.
    """
    first, second = tuple(split[0]), tuple(split[1])
    if sorted(first + second) != list(range(D.rank)):
        raise DimensionError(f"The split {first} | {second} does not partition a basis of rank {D.rank}")
    if B.rank != D.rank:
        raise DimensionError(f"A form of rank {B.rank} on an algebra of rank {D.rank}")
    _require(D, ("mul", "bracket"))
    part = {i: 0 for i in first}
    part.update({i: 1 for i in second})
    c = _Calc(D)
    idx = D.indices()
    ops = [name for name in ("mul", "bracket") if name in D.ops]

    def closure(op: str):
        def residual(i: int, j: int) -> Tensor:
            if part[i] != part[j]:
                return Tensor.zero(1)
            prod = c.p(op, vec(i), vec(j))
            return Tensor({key: v for key, v in prod.items() if part[key[0]] != part[i]}, 1)
        return residual

    subalgebras = run_identities("subalgebras", [Identity(f"closure-{op}", 2, closure(op)) for op in ops], idx, D.names)

    def symmetry(i: int, j: int) -> Tensor:
        return Tensor({(i, j): B.matrix.get((i, j)) - B.matrix.get((j, i)).substitute(LAMBDA, -l)}, 2)

    form = run_identities("form", [Identity("symmetry", 2, symmetry)], idx, D.names)
    det = determinant(B.gram())
    if det.is_zero:
        form.witnesses.append(Witness(identity="nondegeneracy", indices=(), residual={"det": serialize(det)}))
        form.log()

    def invariance(op: str):
        def residual(i: int, j: int, k: int) -> Tensor:
            a, b, x = vec(i), vec(j), vec(k)
            value = B.pair(c.p(op, a, b), x, m) - B.pair(a, c.p(op, b, x, m - d), l)
            return Tensor({(i, j, k): value}, 3)
        return residual

    invariant = run_identities("invariance", [Identity(f"invariance-{op}", 3, invariance(op)) for op in ops], idx, D.names)

    def isotropy(i: int, j: int) -> Tensor:
        if part[i] != part[j]:
            return Tensor.zero(2)
        return Tensor({(i, j): B.matrix.get((i, j))}, 2)

    isotropic = run_identities("isotropy", [Identity("isotropy", 2, isotropy)], idx, D.names)
    return composite("manin-triple", [subalgebras, form, invariant, isotropic])

def display_products(A: ConfAlgebra, ops: Optional[Sequence[str]] = None) -> Dict[str, str]:
    """
    Every nonzero λ-product of basis elements, in readable form, for reports
    """
    symbols = {"mul": "{a}_l {b}", "bracket": "[{a}_l {b}]", "circ": "{a} ∘_l {b}", "succ": "{a} ≻_l {b}"}
    out: Dict[str, str] = {}
    for op in ops or [name for name in CONF_OP_NAMES if name in A.ops]:
        table = A.op(op)
        for (i, j), row in table.rows().items():
            value = Tensor({(k,): c for k, c in row}, 1)
            out[symbols[op].format(a=A.names[i], b=A.names[j])] = value.format(A.names)
    return out

def display_coproducts(A: ConfAlgebra) -> Dict[str, str]:
    """
    Every nonzero coproduct of a basis element, in readable form, with `d1`, `d2` standing for ∂ on each factor
    """
    out: Dict[str, str] = {}
    for name in CONF_COOP_NAMES:
        if name not in A.coops:
            continue
        for k, fibre in A.coops[name].fibres().items():
            value = Tensor({pair: c for pair, c in fibre}, 2)
            out[f"{name}({A.names[k]})"] = value.format(A.names)
    return out
