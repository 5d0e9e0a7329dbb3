"""
Finite-dimensional algebras, coalgebras and bialgebras, with a checker for every identity they are required to satisfy.

Elements are order 1 [`Tensor`][confalg.tensor.Tensor]s over the basis, elements of A⊗A and A⊗A⊗A are order 2 and 3
tensors. Every identity is multilinear, so it is checked on basis tuples only.
"""
from __future__ import annotations
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple
import logging

from confalg.errors import ConfalgError, DimensionError, MissingOperationError, PreconditionError, VariableError
from confalg.exactpoly import Poly
from confalg.report import CheckReport, Identity, composite, run_identities
from confalg.tensor import Accumulator, Tensor

logger = logging.getLogger(__name__)

#: Binary operations a finite structure may carry: `·`, `∘`, `[,]`, `≻`, `◁`, `▷`, `◇` and `⋆`
OP_NAMES = ("dot", "circ", "bracket", "succ", "lhd", "rhd", "diamond", "star")
#: Coproducts a finite structure may carry
COOP_NAMES = ("Delta1", "Delta2", "delta0")

Vector = Tensor
LinearMap = Callable[[int], Vector]

@dataclass(frozen=True)
class FinStructure:
    """
    A finite-dimensional vector space with named operations, coproducts and linear maps
    """
    dim: int
    ops: Mapping[str, Tensor] = field(default_factory=dict)
    "Product tables keyed `(i, j, k)`: `e_i * e_j = Σ_k c e_k`"
    coops: Mapping[str, Tensor] = field(default_factory=dict)
    "Coproduct tables keyed `(k, i, j)`: `Δ(e_k) = Σ c e_i⊗e_j`"
    linmaps: Mapping[str, Tensor] = field(default_factory=dict)
    "Linear maps keyed `(i, j)`: `L(e_i) = Σ_j c e_j`"
    names: Tuple[str, ...] = ()
    "Basis labels, `e1 ... en` unless given"
    params: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError(f"Dimension must be positive, not {self.dim}")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"e{i + 1}" for i in range(self.dim)))
        if len(self.names) != self.dim:
            raise DimensionError(f"{len(self.names)} basis names given for dimension {self.dim}")
        for kind, tables, vocabulary, order in (
            ("operation", self.ops, OP_NAMES, 3),
            ("coproduct", self.coops, COOP_NAMES, 3),
            ("linear map", self.linmaps, None, 2),
        ):
            for name, table in tables.items():
                if vocabulary is not None and name not in vocabulary:
                    raise ConfalgError(f"Unknown {kind} {name!r}; expected one of {', '.join(vocabulary)}")
                self._validate(name, table, order)

    def _validate(self, name: str, table: Tensor, order: int) -> None:
        if table and table.order != order:
            raise DimensionError(f"{name} must have order {order}, not {table.order}")
        for key, value in table.items():
            if any(not 0 <= i < self.dim for i in key):
                raise DimensionError(f"{name} has index {tuple(i + 1 for i in key)} outside dimension {self.dim}")
            bad = [v.name for v in value.variables() if not v.is_param]
            if bad:
                raise VariableError(f"{name}{tuple(i + 1 for i in key)} = {value} uses {', '.join(sorted(bad))}, but finite structures only allow parameters")

    def has(self, name: str) -> bool:
        return name in self.ops or name in self.coops or name in self.linmaps

    def op(self, name: str) -> Tensor:
        if name == "star" and "star" not in self.ops:
            circ = self.op("circ")
            return circ + circ.permute([1, 0, 2])
        if name not in self.ops:
            raise MissingOperationError(name)
        return self.ops[name]

    def coop(self, name: str) -> Tensor:
        if name not in self.coops:
            raise MissingOperationError(name)
        return self.coops[name]

    def linmap(self, name: str) -> Tensor:
        if name not in self.linmaps:
            raise MissingOperationError(name)
        return self.linmaps[name]

    def with_ops(self, **ops: Tensor) -> FinStructure:
        return replace(self, ops={**self.ops, **ops})

    def with_coops(self, **coops: Tensor) -> FinStructure:
        return replace(self, coops={**self.coops, **coops})

    def with_linmaps(self, **linmaps: Tensor) -> FinStructure:
        return replace(self, linmaps={**self.linmaps, **linmaps})

    def indices(self, window: Optional[int] = None) -> List[int]:
        """
        The basis indices identities are evaluated on; `window` keeps indices up to and including it
        """
        if window is None:
            return list(range(self.dim))
        return list(range(min(self.dim, window + 1)))

def table(entries: Mapping[Tuple[int, ...], object], order: int = 3) -> Tensor:
    """
    Builds a structure table from 0-based keys and coefficients (ints, fractions or polys)
    """
    return Tensor({k: Poly.of(v) for k, v in entries.items()}, order) # type: ignore

def transpose(t: Tensor) -> Tensor:
    """
    The opposite product `a *' b = b * a`
    """
    return t.permute([1, 0, 2])

def vec(i: int) -> Vector:
    return Tensor.basis(i)

def bilinear(t: Tensor, x: Vector, y: Vector) -> Vector:
    """
    `x * y` for the product with table `t`
    """
    rows = t.rows()
    out = Accumulator(1)
    for (i,), a in x.items():
        for (j,), b in y.items():
            for k, c in rows.get((i, j), ()):
                out.add((k,), a * b * c)
    return out.build()

def on_slot(t: Tensor, slot: int, f: LinearMap) -> Tensor:
    """
    Applies the linear map `f`, given on basis vectors, to one tensor factor
    """
    out = Accumulator(t.order)
    for key, c in t.items():
        for (j,), v in f(key[slot]).items():
            out.add(key[:slot] + (j,) + key[slot + 1:], c * v)
    return out.build()

def co_on_slot(t: Tensor, slot: int, coop: Tensor) -> Tensor:
    """
    Applies a coproduct to one tensor factor, so `co_on_slot(t, 1, Δ)` is `(I⊗Δ)t`
    """
    fibres = coop.fibres()
    out = Accumulator(t.order + 1)
    for key, c in t.items():
        for pair, v in fibres.get(key[slot], ()):
            out.add(key[:slot] + pair + key[slot + 1:], c * v)
    return out.build()

def tau(t: Tensor) -> Tensor:
    """
    τ on the first two factors
    """
    return t.swap(0, 1)

class _Ops:
    """
    Left and right multiplication operators of one structure
    """
    def __init__(self, A: FinStructure):
        self.A = A
        self._tables: Dict[str, Tensor] = {}

    def table(self, op: str) -> Tensor:
        if op not in self._tables:
            self._tables[op] = self.A.op(op)
        return self._tables[op]

    def m(self, op: str, x: Vector, y: Vector) -> Vector:
        return bilinear(self.table(op), x, y)

    def L(self, op: str, a: Vector) -> LinearMap:
        table = self.table(op)
        return lambda k: bilinear(table, a, vec(k))

    def R(self, op: str, b: Vector) -> LinearMap:
        table = self.table(op)
        return lambda k: bilinear(table, vec(k), b)

    def co(self, coop: str, x: Vector) -> Tensor:
        return co_on_slot(x, 0, self.A.coop(coop))

    def co1(self, coop: str, t: Tensor) -> Tensor:
        "`(Δ⊗I)t`"
        return co_on_slot(t, 0, self.A.coop(coop))

    def co2(self, coop: str, t: Tensor) -> Tensor:
        "`(I⊗Δ)t`"
        return co_on_slot(t, 1, self.A.coop(coop))

class StructureKind(str, Enum):
    """
    Kinds of finite-dimensional algebra
    """
    COMM_ASSOC = "comm-assoc"
    LIE = "lie"
    LEFT_SYMMETRIC = "left-symmetric"
    NOVIKOV = "novikov"
    ZINBIEL = "zinbiel"
    GD = "gd"
    POISSON = "poisson"
    DIFF_NP = "diff-np"
    PGD = "pgd"
    PRE_NOVIKOV = "pre-novikov"
    PRE_GD = "pre-gd"
    PRE_POISSON = "pre-poisson"
    PRE_DIFF_NP = "pre-diff-np"
    PRE_PGD = "pre-pgd"

class CoKind(str, Enum):
    """
    Kinds of finite-dimensional coalgebra
    """
    NOVIKOV_CO = "novikov-co"
    COCOMM_COASSOC = "cocomm-coassoc"
    LIE_CO = "lie-co"
    GD_CO = "gd-co"
    POISSON_CO = "poisson-co"
    DIFF_NP_CO = "diff-np-co"
    PGD_CO = "pgd-co"

class BiKind(str, Enum):
    """
    Kinds of finite-dimensional bialgebra. These check the compatibility conditions only;
    the algebra and coalgebra underneath are checked with their own kinds.
    """
    NOVIKOV_BI = "novikov-bi"
    ASI_BI = "asi-bi"
    LIE_BI = "lie-bi"
    GD_BI = "gd-bi"
    POISSON_BI = "poisson-bi"
    DIFF_NP_BI = "diff-np-bi"
    PGD_BI = "pgd-bi"

def _require(A: FinStructure, *names: str) -> None:
    for name in names:
        if name == "star":
            name = "circ"
        if not A.has(name):
            raise MissingOperationError(name)

# Algebra identities. Each helper returns the residual `lhs - rhs` at basis indices.

def _comm_assoc(o: _Ops, op: str) -> List[Identity]:
    def comm(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return o.m(op, a, b) - o.m(op, b, a)

    def assoc(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return o.m(op, o.m(op, a, b), c) - o.m(op, a, o.m(op, b, c))

    return [Identity("commutativity", 2, comm), Identity("associativity", 3, assoc)]

def _lie(o: _Ops, op: str) -> List[Identity]:
    def skew(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return o.m(op, a, b) + o.m(op, b, a)

    def jacobi(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return o.m(op, a, o.m(op, b, c)) - o.m(op, o.m(op, a, b), c) - o.m(op, b, o.m(op, a, c))

    return [Identity("skew-symmetry", 2, skew), Identity("jacobi", 3, jacobi)]

def _left_symmetric(o: _Ops, op: str) -> List[Identity]:
    def left_symmetry(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        m = lambda x, y: o.m(op, x, y)
        return m(m(a, b), c) - m(a, m(b, c)) - m(m(b, a), c) + m(b, m(a, c))

    return [Identity("left-symmetry", 3, left_symmetry)]

def _novikov(o: _Ops, op: str) -> List[Identity]:
    def right_commutativity(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return o.m(op, o.m(op, a, b), c) - o.m(op, o.m(op, a, c), b)

    return _left_symmetric(o, op) + [Identity("right-commutativity", 3, right_commutativity)]

def _zinbiel(o: _Ops) -> List[Identity]:
    def zinbiel(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        s = lambda x, y: o.m("succ", x, y)
        return s(a, s(b, c)) - s(s(b, a) + s(a, b), c)

    return [Identity("zinbiel", 3, zinbiel)]

def _gd_compat(o: _Ops) -> List[Identity]:
    def gd(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        m = lambda x, y: o.m("circ", x, y)
        br = lambda x, y: o.m("bracket", x, y)
        return br(m(a, b), c) - br(m(a, c), b) + m(br(a, b), c) - m(br(a, c), b) - m(a, br(b, c))

    return [Identity("GD", 3, gd)]

def _poisson_compat(o: _Ops) -> List[Identity]:
    def leibniz(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        m = lambda x, y: o.m("dot", x, y)
        br = lambda x, y: o.m("bracket", x, y)
        return br(a, m(b, c)) - m(br(a, b), c) - m(b, br(a, c))

    return [Identity("leibniz", 3, leibniz)]

def _diff_np_compat(o: _Ops) -> List[Identity]:
    m = lambda x, y: o.m("circ", x, y)
    d = lambda x, y: o.m("dot", x, y)

    def np1(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return m(d(a, b), c) - d(a, m(b, c))

    def np2(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return m(a, d(b, c)) - d(m(a, b), c) - d(b, m(a, c))

    return [Identity("NP1", 3, np1), Identity("NP2", 3, np2)]

def _pre_novikov(o: _Ops) -> List[Identity]:
    lhd = lambda x, y: o.m("lhd", x, y)
    rhd = lambda x, y: o.m("rhd", x, y)

    def nd1(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return rhd(a, rhd(b, c)) - rhd(rhd(a, b) + lhd(a, b), c) - rhd(b, rhd(a, c)) + rhd(rhd(b, a) + lhd(b, a), c)

    def nd2(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return rhd(a, lhd(b, c)) - lhd(rhd(a, b), c) - lhd(b, lhd(a, c) + rhd(a, c)) + lhd(lhd(b, a), c)

    def nd3(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return rhd(lhd(a, b) + rhd(a, b), c) - lhd(rhd(a, c), b)

    def nd4(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return lhd(lhd(a, b), c) - lhd(lhd(a, c), b)

    return [Identity("ND1", 3, nd1), Identity("ND2", 3, nd2), Identity("ND3", 3, nd3), Identity("ND4", 3, nd4)]

def _pre_gd_compat(o: _Ops) -> List[Identity]:
    lhd = lambda x, y: o.m("lhd", x, y)
    rhd = lambda x, y: o.m("rhd", x, y)
    dia = lambda x, y: o.m("diamond", x, y)

    def pgd1(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return lhd(c, dia(a, b) - dia(b, a)) - dia(a, lhd(c, b)) - lhd(dia(b, c), a) + dia(b, lhd(c, a)) + lhd(dia(a, c), b)

    def pgd2(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return rhd(dia(a, b) - dia(b, a), c) + dia(lhd(a, b) + rhd(a, b), c) - rhd(a, dia(b, c)) + dia(b, rhd(a, c)) - lhd(dia(a, c), b)

    return [Identity("preGD1", 3, pgd1), Identity("preGD2", 3, pgd2)]

def _pre_poisson_compat(o: _Ops) -> List[Identity]:
    dia = lambda x, y: o.m("diamond", x, y)
    suc = lambda x, y: o.m("succ", x, y)

    def pp1(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return suc(dia(a, b) - dia(b, a), c) - dia(a, suc(b, c)) + suc(b, dia(a, c))

    def pp2(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return dia(suc(a, b) + suc(b, a), c) - suc(a, dia(b, c)) - suc(b, dia(a, c))

    return [Identity("PP1", 3, pp1), Identity("PP2", 3, pp2)]

def _pre_diff_np_compat(o: _Ops) -> List[Identity]:
    lhd = lambda x, y: o.m("lhd", x, y)
    rhd = lambda x, y: o.m("rhd", x, y)
    suc = lambda x, y: o.m("succ", x, y)

    def p1a(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return rhd(suc(a, b) + suc(b, a), c) - suc(a, rhd(b, c))

    def p1b(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return lhd(suc(a, c), b) - suc(a, lhd(c, b))

    def p1c(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return suc(a, lhd(c, b)) - suc(lhd(a, b) + rhd(a, b), c)

    def p2(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return rhd(a, suc(b, c)) - suc(lhd(a, b) + rhd(a, b), c) - suc(b, rhd(a, c))

    def p3(i: int, j: int, k: int) -> Tensor:
        a, b, c = vec(i), vec(j), vec(k)
        return lhd(c, suc(a, b) + suc(b, a)) - suc(b, lhd(c, a)) - suc(a, lhd(c, b))

    return [
        Identity("PDNP1a", 3, p1a), Identity("PDNP1b", 3, p1b), Identity("PDNP1c", 3, p1c),
        Identity("PDNP2", 3, p2), Identity("PDNP3", 3, p3),
    ]

#: Operations each kind reads
STRUCTURE_OPS: Dict[StructureKind, Tuple[str, ...]] = {
    StructureKind.COMM_ASSOC: ("dot",),
    StructureKind.LIE: ("bracket",),
    StructureKind.LEFT_SYMMETRIC: ("circ",),
    StructureKind.NOVIKOV: ("circ",),
    StructureKind.ZINBIEL: ("succ",),
    StructureKind.GD: ("circ", "bracket"),
    StructureKind.POISSON: ("dot", "bracket"),
    StructureKind.DIFF_NP: ("circ", "dot"),
    StructureKind.PGD: ("circ", "dot", "bracket"),
    StructureKind.PRE_NOVIKOV: ("lhd", "rhd"),
    StructureKind.PRE_GD: ("lhd", "rhd", "diamond"),
    StructureKind.PRE_POISSON: ("diamond", "succ"),
    StructureKind.PRE_DIFF_NP: ("lhd", "rhd", "succ"),
    StructureKind.PRE_PGD: ("lhd", "rhd", "succ", "diamond"),
}

def _default_diamond(A: FinStructure, kind: StructureKind) -> Tuple[FinStructure, List[str]]:
    if "diamond" in STRUCTURE_OPS[kind] and "diamond" not in A.ops:
        return A.with_ops(diamond=Tensor.zero(3)), ["diamond: defaulted to 0"]
    return A, []

def check_fin_structure(kind: StructureKind, A: FinStructure, window: Optional[int] = None) -> CheckReport:
    """
    Checks that `A` is an algebra of the given kind.

    Params:
        kind: The kind of algebra
        A: The structure; it must carry every operation the kind reads, except `diamond`, which defaults to zero
        window: Evaluate only on basis indices up to this one, for truncations of infinite families

    Raises:
        MissingOperationError: if a required operation is absent
    """
    kind = StructureKind(kind)
    A, notes = _default_diamond(A, kind)
    _require(A, *STRUCTURE_OPS[kind])
    o = _Ops(A)
    idx = A.indices(window)
    run = lambda name, ids: run_identities(name, ids, idx, A.names, notes)

    if kind is StructureKind.COMM_ASSOC:
        return run(kind.value, _comm_assoc(o, "dot"))
    if kind is StructureKind.LIE:
        return run(kind.value, _lie(o, "bracket"))
    if kind is StructureKind.LEFT_SYMMETRIC:
        return run(kind.value, _left_symmetric(o, "circ"))
    if kind is StructureKind.NOVIKOV:
        return run(kind.value, _novikov(o, "circ"))
    if kind is StructureKind.ZINBIEL:
        return run(kind.value, _zinbiel(o))
    if kind is StructureKind.GD:
        return run(kind.value, _novikov(o, "circ") + _lie(o, "bracket") + _gd_compat(o))
    if kind is StructureKind.POISSON:
        return run(kind.value, _comm_assoc(o, "dot") + _lie(o, "bracket") + _poisson_compat(o))
    if kind is StructureKind.DIFF_NP:
        return run(kind.value, _novikov(o, "circ") + _comm_assoc(o, "dot") + _diff_np_compat(o))
    if kind is StructureKind.PGD:
        return composite(kind.value, [
            check_fin_structure(StructureKind.GD, A, window),
            check_fin_structure(StructureKind.POISSON, A, window),
            check_fin_structure(StructureKind.DIFF_NP, A, window),
        ])
    if kind is StructureKind.PRE_NOVIKOV:
        return run(kind.value, _pre_novikov(o))
    if kind is StructureKind.PRE_GD:
        return run(kind.value, _pre_novikov(o) + _left_symmetric(o, "diamond") + _pre_gd_compat(o))
    if kind is StructureKind.PRE_POISSON:
        return run(kind.value, _left_symmetric(o, "diamond") + _zinbiel(o) + _pre_poisson_compat(o))
    if kind is StructureKind.PRE_DIFF_NP:
        return run(kind.value, _pre_novikov(o) + _zinbiel(o) + _pre_diff_np_compat(o))
    return composite(kind.value, [
        check_fin_structure(StructureKind.PRE_DIFF_NP, A, window),
        check_fin_structure(StructureKind.PRE_GD, A, window),
        check_fin_structure(StructureKind.PRE_POISSON, A, window),
    ], notes)

# Coalgebra identities, on one basis vector

def _novikov_co(o: _Ops, D: str) -> List[Identity]:
    def lc3(k: int) -> Tensor:
        x = o.co(D, vec(k))
        return o.co2(D, x) - tau(o.co2(D, x)) - o.co1(D, x) + tau(o.co1(D, x))

    def lc4(k: int) -> Tensor:
        x = o.co(D, vec(k))
        return tau(o.co2(D, tau(x))) - o.co1(D, x)

    return [Identity("Lc3", 1, lc3), Identity("Lc4", 1, lc4)]

def _cocomm_coassoc(o: _Ops, D: str) -> List[Identity]:
    def coassoc(k: int) -> Tensor:
        x = o.co(D, vec(k))
        return o.co1(D, x) - o.co2(D, x)

    def cocomm(k: int) -> Tensor:
        x = o.co(D, vec(k))
        return x - tau(x)

    return [Identity("coassociativity", 1, coassoc), Identity("cocommutativity", 1, cocomm)]

def _lie_co(o: _Ops, d: str) -> List[Identity]:
    def coskew(k: int) -> Tensor:
        x = o.co(d, vec(k))
        return x + tau(x)

    def cojacobi(k: int) -> Tensor:
        x = o.co(d, vec(k))
        return o.co2(d, x) - tau(o.co2(d, x)) - o.co1(d, x)

    return [Identity("co-skew-symmetry", 1, coskew), Identity("co-jacobi", 1, cojacobi)]

def _gd_co_compat(o: _Ops, D: str, d: str) -> List[Identity]:
    def lc2(k: int) -> Tensor:
        x, y = o.co(D, vec(k)), o.co(d, vec(k))
        return o.co2(d, x) - tau(o.co2(D, y)) + tau(o.co2(d, tau(x))) - o.co1(D, y) - o.co1(d, x)

    return [Identity("Lc2", 1, lc2)]

def _poisson_co_compat(o: _Ops, D: str, d: str) -> List[Identity]:
    def pc(k: int) -> Tensor:
        x, y = o.co(D, vec(k)), o.co(d, vec(k))
        return o.co2(D, y) - o.co1(d, x) - tau(o.co2(d, x))

    return [Identity("Pc", 1, pc)]

def _diff_np_co_compat(o: _Ops, D1: str, D2: str) -> List[Identity]:
    def dnpc1(k: int) -> Tensor:
        x, y = o.co(D1, vec(k)), o.co(D2, vec(k))
        return o.co2(D2, x) - o.co1(D1, y) - tau(o.co2(D1, y))

    def dnpc2(k: int) -> Tensor:
        x, y = o.co(D1, vec(k)), o.co(D2, vec(k))
        return o.co2(D2, tau(x)) - tau(o.co1(D1, y))

    return [Identity("DNPC1", 1, dnpc1), Identity("DNPC2", 1, dnpc2)]

COALGEBRA_COOPS: Dict[CoKind, Tuple[str, ...]] = {
    CoKind.NOVIKOV_CO: ("Delta1",),
    CoKind.COCOMM_COASSOC: ("Delta2",),
    CoKind.LIE_CO: ("delta0",),
    CoKind.GD_CO: ("Delta1", "delta0"),
    CoKind.POISSON_CO: ("Delta2", "delta0"),
    CoKind.DIFF_NP_CO: ("Delta1", "Delta2"),
    CoKind.PGD_CO: ("Delta1", "Delta2", "delta0"),
}

def check_fin_coalgebra(kind: CoKind, A: FinStructure, window: Optional[int] = None) -> CheckReport:
    """
    Checks that the coproducts of `A` form a coalgebra of the given kind.
    A Novikov coproduct is read from `Delta1`, a cocommutative coassociative one from `Delta2` and a Lie one from `delta0`.
    """
    kind = CoKind(kind)
    _require(A, *COALGEBRA_COOPS[kind])
    o = _Ops(A)
    idx = A.indices(window)
    run = lambda ids: run_identities(kind.value, ids, idx, A.names)

    if kind is CoKind.NOVIKOV_CO:
        return run(_novikov_co(o, "Delta1"))
    if kind is CoKind.COCOMM_COASSOC:
        return run(_cocomm_coassoc(o, "Delta2"))
    if kind is CoKind.LIE_CO:
        return run(_lie_co(o, "delta0"))
    if kind is CoKind.GD_CO:
        return run(_novikov_co(o, "Delta1") + _lie_co(o, "delta0") + _gd_co_compat(o, "Delta1", "delta0"))
    if kind is CoKind.POISSON_CO:
        return run(_cocomm_coassoc(o, "Delta2") + _lie_co(o, "delta0") + _poisson_co_compat(o, "Delta2", "delta0"))
    if kind is CoKind.DIFF_NP_CO:
        return run(_novikov_co(o, "Delta1") + _cocomm_coassoc(o, "Delta2") + _diff_np_co_compat(o, "Delta1", "Delta2"))
    return composite(kind.value, [
        check_fin_coalgebra(CoKind.GD_CO, A, window),
        check_fin_coalgebra(CoKind.POISSON_CO, A, window),
        check_fin_coalgebra(CoKind.DIFF_NP_CO, A, window),
    ])

# Bialgebra compatibilities, on basis pairs

def _novikov_bi(o: _Ops) -> List[Identity]:
    def sym(t: Tensor) -> Tensor:
        return t + tau(t)

    def lb5(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return (o.co("Delta1", o.m("circ", a, b))
                - on_slot(o.co("Delta1", a), 0, o.R("circ", b))
                - on_slot(sym(o.co("Delta1", b)), 1, o.L("star", a)))

    def lb6(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        side = lambda x, y: on_slot(o.co("Delta1", y), 0, o.L("star", x)) - on_slot(tau(o.co("Delta1", y)), 1, o.L("star", x))
        return side(a, b) - side(b, a)

    def lb7(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        side = lambda x, y: on_slot(sym(o.co("Delta1", y)), 1, o.R("circ", x)) - on_slot(sym(o.co("Delta1", y)), 0, o.R("circ", x))
        return side(a, b) - side(b, a)

    return [Identity("Lb5", 2, lb5), Identity("Lb6", 2, lb6), Identity("Lb7", 2, lb7)]

def _asi_bi(o: _Ops) -> List[Identity]:
    def asi1(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return (o.co("Delta2", o.m("dot", a, b))
                - on_slot(o.co("Delta2", b), 1, o.L("dot", a))
                - on_slot(o.co("Delta2", a), 0, o.L("dot", b)))

    return [Identity("ASI1", 2, asi1)]

def _ad_both(o: _Ops, a: Vector, t: Tensor) -> Tensor:
    "`(ad(a)⊗I + I⊗ad(a))t`"
    ad = o.L("bracket", a)
    return on_slot(t, 0, ad) + on_slot(t, 1, ad)

def _lie_bi(o: _Ops) -> List[Identity]:
    def liebi(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return (o.co("delta0", o.m("bracket", a, b))
                - _ad_both(o, a, o.co("delta0", b))
                + _ad_both(o, b, o.co("delta0", a)))

    return [Identity("lie-bialgebra", 2, liebi)]

def _gd_bi_compat(o: _Ops) -> List[Identity]:
    def lb4(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        da, db = o.co("delta0", a), o.co("delta0", b)
        Da, Db = o.co("Delta1", a), o.co("Delta1", b)
        return (o.co("delta0", o.m("circ", b, a)) + o.co("Delta1", o.m("bracket", a, b))
                - on_slot(db, 0, o.R("circ", a))
                - on_slot(da, 0, o.L("circ", b))
                - on_slot(da, 1, o.L("star", b))
                - _ad_both(o, a, Db)
                + on_slot(Da + tau(Da), 1, o.L("bracket", b)))

    return [Identity("Lb4", 2, lb4)]

def _poisson_bi_compat(o: _Ops) -> List[Identity]:
    def pb1(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return (o.co("delta0", o.m("dot", a, b))
                - on_slot(o.co("delta0", b), 0, o.L("dot", a))
                - on_slot(o.co("delta0", a), 0, o.L("dot", b))
                - on_slot(o.co("Delta2", b), 1, o.L("bracket", a))
                - on_slot(o.co("Delta2", a), 1, o.L("bracket", b)))

    def pb2(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        da = o.co("delta0", a)
        return (o.co("Delta2", o.m("bracket", a, b))
                - _ad_both(o, a, o.co("Delta2", b))
                + on_slot(da, 1, o.L("dot", b))
                - on_slot(da, 0, o.L("dot", b)))

    return [Identity("PB1", 2, pb1), Identity("PB2", 2, pb2)]

def _diff_np_bi_compat(o: _Ops) -> List[Identity]:
    def dnpb1(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return (o.co("Delta1", o.m("dot", a, b))
                - on_slot(o.co("Delta1", b), 0, o.L("dot", a))
                + on_slot(o.co("Delta2", a), 1, o.L("star", b)))

    def dnpb2(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        Db = o.co("Delta1", b)
        return (o.co("Delta2", o.m("circ", a, b))
                - on_slot(o.co("Delta2", a), 0, o.R("circ", b))
                + on_slot(Db + tau(Db), 1, o.L("dot", a)))

    def dnpb4(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return (on_slot(o.co("Delta2", b), 0, o.L("circ", a))
                + on_slot(o.co("Delta2", a), 1, o.L("circ", b))
                + on_slot(o.co("Delta1", a), 1, o.L("dot", b))
                + on_slot(tau(o.co("Delta1", b)), 0, o.L("dot", a)))

    return [Identity("DNPB1", 2, dnpb1), Identity("DNPB2", 2, dnpb2), Identity("DNPB4", 2, dnpb4)]

def _dnpb3(o: _Ops) -> List[Identity]:
    def dnpb3(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        side = lambda x, y: on_slot(o.co("Delta1", y), 0, o.L("dot", x)) + on_slot(o.co("Delta2", y), 1, o.L("star", x))
        return side(a, b) - side(b, a)

    return [Identity("DNPB3", 2, dnpb3)]

BIALGEBRA_NEEDS: Dict[BiKind, Tuple[str, ...]] = {
    BiKind.NOVIKOV_BI: ("circ", "Delta1"),
    BiKind.ASI_BI: ("dot", "Delta2"),
    BiKind.LIE_BI: ("bracket", "delta0"),
    BiKind.GD_BI: ("circ", "bracket", "Delta1", "delta0"),
    BiKind.POISSON_BI: ("dot", "bracket", "Delta2", "delta0"),
    BiKind.DIFF_NP_BI: ("circ", "dot", "Delta1", "Delta2"),
    BiKind.PGD_BI: ("circ", "dot", "bracket", "Delta1", "Delta2", "delta0"),
}

def check_fin_bialgebra(kind: BiKind, A: FinStructure, window: Optional[int] = None) -> CheckReport:
    """
    Checks the compatibility conditions between the products and coproducts of `A`.

    Composite kinds report their component bialgebras as children; the differential Novikov-Poisson
    kind also carries the derived condition DNPB3 as a diagnostic child.
    """
    kind = BiKind(kind)
    _require(A, *BIALGEBRA_NEEDS[kind])
    o = _Ops(A)
    idx = A.indices(window)
    run = lambda name, ids: run_identities(name, ids, idx, A.names)

    if kind is BiKind.NOVIKOV_BI:
        return run(kind.value, _novikov_bi(o))
    if kind is BiKind.ASI_BI:
        return run(kind.value, _asi_bi(o))
    if kind is BiKind.LIE_BI:
        return run(kind.value, _lie_bi(o))
    if kind is BiKind.GD_BI:
        report = run(kind.value, _gd_bi_compat(o))
        report.children = [check_fin_bialgebra(BiKind.NOVIKOV_BI, A, window), check_fin_bialgebra(BiKind.LIE_BI, A, window)]
        return report
    if kind is BiKind.POISSON_BI:
        report = run(kind.value, _poisson_bi_compat(o))
        report.children = [check_fin_bialgebra(BiKind.ASI_BI, A, window), check_fin_bialgebra(BiKind.LIE_BI, A, window)]
        return report
    if kind is BiKind.DIFF_NP_BI:
        report = run(kind.value, _diff_np_bi_compat(o))
        derived = run("DNPB3", _dnpb3(o))
        derived.diagnostic = True
        report.children = [
            check_fin_bialgebra(BiKind.NOVIKOV_BI, A, window),
            check_fin_bialgebra(BiKind.ASI_BI, A, window),
            derived,
        ]
        return report
    return composite(kind.value, [
        check_fin_bialgebra(BiKind.GD_BI, A, window),
        check_fin_bialgebra(BiKind.POISSON_BI, A, window),
        check_fin_bialgebra(BiKind.DIFF_NP_BI, A, window),
    ])

def apply_linmap(D: Tensor, x: Vector) -> Vector:
    out = Accumulator(1)
    fibres = D.fibres()
    for (i,), a in x.items():
        for (j,), c in fibres.get(i, ()):
            out.add((j,), a * c)
    return out.build()

def check_derivation(A: FinStructure, opname: str, D: Optional[Tensor] = None, window: Optional[int] = None) -> CheckReport:
    """
    Checks the Leibniz rule `D(a*b) = D(a)*b + a*D(b)` for the operation `opname`.

    Params:
        D: The map, keyed `(i, j)` for `D(e_i) = Σ c e_j`; defaults to the linear map named `D` on `A`
    """
    if D is None:
        D = A.linmap("D")
    o = _Ops(A)
    A.op(opname)
    Dv = lambda x: apply_linmap(D, x) # type: ignore

    def leibniz(i: int, j: int) -> Tensor:
        a, b = vec(i), vec(j)
        return Dv(o.m(opname, a, b)) - o.m(opname, Dv(a), b) - o.m(opname, a, Dv(b))

    return run_identities(f"derivation of {opname}", [Identity("derivation", 2, leibniz)], A.indices(window), A.names)

# Constructions

def star_closure(A: FinStructure) -> FinStructure:
    """
    Adds `a ⋆ b = a∘b + b∘a`
    """
    circ = A.op("circ")
    return A.with_ops(star=circ + transpose(circ))

def _ensure(stage: str, report: CheckReport) -> None:
    if not report.passed:
        raise PreconditionError(stage, report)

def associated_pgd_of_pre_pgd(A: FinStructure, check: bool = True) -> FinStructure:
    """
    The PGD-algebra of a pre-PGD-algebra: `∘ = ◁ + ▷`, `· = ≻ + ≻ᵀ` and `[,] = ◇ - ◇ᵀ`.
    An absent `◇` counts as zero.

    Raises:
        PreconditionError: if `check` is set and `A` is not a pre-PGD-algebra
    """
    A, _ = _default_diamond(A, StructureKind.PRE_PGD)
    if check:
        _ensure("associated-pgd", check_fin_structure(StructureKind.PRE_PGD, A))
    lhd, rhd, succ, diamond = (A.op(n) for n in ("lhd", "rhd", "succ", "diamond"))
    return FinStructure(
        dim=A.dim,
        ops={"circ": lhd + rhd, "dot": succ + transpose(succ), "bracket": diamond - transpose(diamond)},
        names=A.names,
        params=A.params,
    )

def zinbiel_derivation_to_pre_pgd(A: FinStructure, D: Optional[Tensor] = None, check: bool = True) -> FinStructure:
    """
    The pre-PGD-algebra of a Zinbiel algebra with a derivation: `a◁b = D(b)≻a`, `a▷b = a≻D(b)`, `◇ = 0`
    """
    if D is None:
        D = A.linmap("D")
    if check:
        _ensure("zinbiel-derivation", composite("zinbiel with derivation", [
            check_fin_structure(StructureKind.ZINBIEL, A),
            check_derivation(A, "succ", D),
        ]))
    succ = A.op("succ")
    lhd = Accumulator(3)
    rhd = Accumulator(3)
    for i in range(A.dim):
        for j in range(A.dim):
            Dj = apply_linmap(D, vec(j))
            for (k,), c in bilinear(succ, Dj, vec(i)).items():
                lhd.add((i, j, k), c)
            for (k,), c in bilinear(succ, vec(i), Dj).items():
                rhd.add((i, j, k), c)
    return FinStructure(
        dim=A.dim,
        ops={"lhd": lhd.build(), "rhd": rhd.build(), "succ": succ, "diamond": Tensor.zero(3)},
        linmaps={"D": D},
        names=A.names,
        params=A.params,
    )

def dual_action(action: Tensor, dim: int, scale: int = 1) -> Tensor:
    """
    The dual `φ*` of a representation, defined by `⟨φ*(a)f, u⟩ = -⟨f, φ(a)u⟩`.

    Params:
        action: keyed `(a, k, j)` for `φ(e_a)v_k = Σ_j c v_j`
        scale: multiplies the result, for the negated duals that appear in semidirect products

    Returns:
        keyed `(a, j, k)` for `φ*(e_a)v_j* = Σ_k c v_k*`
    """
    out = Accumulator(3)
    for (a, k, j), c in action.items():
        out.add((a, j, k), -scale * c)
    return out.build()

def right_action(t: Tensor) -> Tensor:
    """
    Right multiplication as an action: `R(e_a)e_k = e_k * e_a`
    """
    return t.permute([1, 0, 2])

def dual_names(names: Sequence[str]) -> Tuple[str, ...]:
    return tuple(names) + tuple(f"{n}*" for n in names)

def fin_coboundary_coproducts(A: FinStructure, r: Tensor) -> Dict[str, Tensor]:
    """
    The coproducts induced by `r ∈ A⊗A` on a PGD-algebra:
    `Δ₁(a) = -(L_∘(a)⊗I + I⊗L_⋆(a))r`, `Δ₂(a) = (I⊗L_·(a) - L_·(a)⊗I)r` and `δ(a) = (ad(a)⊗I + I⊗ad(a))r`
    """
    o = _Ops(A)
    Delta1, Delta2, delta0 = Accumulator(3), Accumulator(3), Accumulator(3)
    for k in range(A.dim):
        a = vec(k)
        values = {
            "Delta1": -(on_slot(r, 0, o.L("circ", a)) + on_slot(r, 1, o.L("star", a))),
            "Delta2": on_slot(r, 1, o.L("dot", a)) - on_slot(r, 0, o.L("dot", a)),
            "delta0": _ad_both(o, a, r),
        }
        for acc, name in ((Delta1, "Delta1"), (Delta2, "Delta2"), (delta0, "delta0")):
            for (i, j), c in values[name].items():
                acc.add((k, i, j), c)
    return {"Delta1": Delta1.build(), "Delta2": Delta2.build(), "delta0": delta0.build()}

def canonical_skew_r(n: int) -> Tensor:
    """
    `Σ_i (e_i⊗e_i* - e_i*⊗e_i)` on a space with basis `e_1 ... e_n, e_1* ... e_n*`
    """
    out = Accumulator(2)
    for i in range(n):
        out.add((i, n + i), 1)
        out.add((n + i, i), -1)
    return out.build()

def claim_semidirect_pgd_bialgebra(A: FinStructure, check: bool = True) -> Tuple[FinStructure, Tensor]:
    """
    The PGD-bialgebra candidate on `A ⊕ A*` built from a pre-PGD-algebra.

    The products are the semidirect ones of the associated PGD-algebra with the dual representation
    `l = L_▷* + R_◁*`, `r = -R_◁*` for `∘`, `-L_≻*` for `·` and `L_◇*` for `[,]`; the coproducts are
    [`fin_coboundary_coproducts`][confalg.findim.fin_coboundary_coproducts] of the canonical skew `r`.
    Whether the result is a PGD-bialgebra is left to [`check_fin_bialgebra`][confalg.findim.check_fin_bialgebra].

    Returns:
        The structure of dimension `2n`, and `r`
    """
    A, _ = _default_diamond(A, StructureKind.PRE_PGD)
    base = associated_pgd_of_pre_pgd(A, check)
    n = A.dim
    lhd, rhd, succ, diamond = (A.op(name) for name in ("lhd", "rhd", "succ", "diamond"))

    l_circ = dual_action(rhd, n) + dual_action(right_action(lhd), n)
    r_circ = dual_action(right_action(lhd), n, scale=-1)
    sigma = dual_action(succ, n, scale=-1)
    rho = dual_action(diamond, n)

    def semidirect(product: Tensor, left: Tensor, right: Tensor) -> Tensor:
        out = Accumulator(3)
        out.add_tensor(product)
        for (a, j, k), c in left.items():
            out.add((a, n + j, n + k), c)
        for (b, j, k), c in right.items():
            out.add((n + j, b, n + k), c)
        return out.build()

    ops = {
        "circ": semidirect(base.op("circ"), l_circ, r_circ),
        "dot": semidirect(base.op("dot"), sigma, sigma),
        "bracket": semidirect(base.op("bracket"), rho, -rho),
    }
    double = FinStructure(dim=2 * n, ops=ops, names=dual_names(A.names), params=A.params)
    r = canonical_skew_r(n)
    return double.with_coops(**fin_coboundary_coproducts(double, r)), r

#: Which product each coproduct becomes on the dual space
TRANSPOSE_NAMES: Dict[str, str] = {"Delta1": "circ", "Delta2": "dot", "delta0": "bracket"}

def transpose_coalgebra(A: FinStructure, names: Optional[Mapping[str, str]] = None) -> FinStructure:
    """
    The algebra on `A*` dual to the coproducts of `A`: `⟨Δ*(f⊗g), a⟩ = ⟨f⊗g, Δ(a)⟩`, so that
    `e_i* * e_j* = Σ_k Δ_k^{ij} e_k*`.

    Params:
        names: coproduct name to the product name it becomes, by default
            `Delta1 → circ`, `Delta2 → dot` and `delta0 → bracket`
    """
    mapping = dict(TRANSPOSE_NAMES if names is None else names)
    ops: Dict[str, Tensor] = {}
    for coop, op in mapping.items():
        if coop in A.coops:
            ops[op] = A.coops[coop].permute([1, 2, 0])
    if not ops:
        raise MissingOperationError(", ".join(mapping), "structure's coproducts")
    return FinStructure(dim=A.dim, ops=ops, names=tuple(f"{n}*" for n in A.names), params=A.params)

def perturb(t: Tensor, key: Tuple[int, ...], delta: object) -> Tensor:
    """
    Adds `delta` to one coefficient of a table
    """
    return t + Tensor({key: Poly.of(delta)}, t.order) # type: ignore

#: How each operation is written in displays
SYMBOLS: Dict[str, str] = {
    "dot": "{a}·{b}", "circ": "{a}∘{b}", "bracket": "[{a}, {b}]", "succ": "{a}≻{b}",
    "lhd": "{a}◁{b}", "rhd": "{a}▷{b}", "diamond": "{a}◇{b}", "star": "{a}⋆{b}",
}

def display_fin(A: FinStructure) -> Dict[str, str]:
    """
    Every nonzero product and coproduct of basis elements, and every linear map, in readable form
    """
    out: Dict[str, str] = {}
    for op in (name for name in OP_NAMES if name in A.ops):
        for (i, j), row in A.ops[op].rows().items():
            out[SYMBOLS[op].format(a=A.names[i], b=A.names[j])] = Tensor({(k,): c for k, c in row}, 1).format(A.names)
    for coop in (name for name in COOP_NAMES if name in A.coops):
        for k, fibre in A.coops[coop].fibres().items():
            out[f"{coop}({A.names[k]})"] = Tensor({pair: c for pair, c in fibre}, 2).format(A.names)
    for name, D in sorted(A.linmaps.items()):
        for i, fibre in D.fibres().items():
            out[f"{name}({A.names[i]})"] = Tensor({key: c for key, c in fibre}, 1).format(A.names)
    return out
