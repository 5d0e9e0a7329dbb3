"""
Exact sparse multivariate polynomials over the rationals.

Every identity confalg checks is an identity between polynomials in a fixed
variable universe: `d` (the derivation), `l`, `m`, `n` (the formal variables
of λ-products), `d1`, `d2`, `d3` (the derivation acting on one tensor slot)
and any number of declared free parameters such as `alpha` or `q`.
Arithmetic is delegated to sympy's sparse `PolyRing` over `QQ` with graded
lexicographic order, so coefficients are exact and printing is canonical.
"""
from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple, Union
import re

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from confalg.errors import PolyParseError, VariableError

#: Names of the fixed variables, in canonical order. Parameters sort after these.
BASE_NAMES: Tuple[str, ...] = ("d", "l", "m", "n", "d1", "d2", "d3")
IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

@dataclass(frozen=True, order=True)
class Var:
    """
    A polynomial variable, identified by its printed name
    """
    name: str

    @classmethod
    def param(cls, name: str) -> Var:
        """
        Declares a free parameter. Parameters commute with everything and may not reuse a reserved name.
        """
        if not IDENTIFIER.match(name):
            raise VariableError(f"{name!r} is not a valid parameter name")
        if name in BASE_NAMES:
            raise VariableError(f"{name!r} is reserved and cannot be used as a parameter name")
        return cls(name)

    @property
    def is_param(self) -> bool:
        return self.name not in BASE_NAMES

    def __str__(self) -> str:
        return self.name

#: ∂
PARTIAL = Var("d")
#: λ
LAMBDA = Var("l")
#: μ
MU = Var("m")
#: ν, used internally as the scratch variable of λ-products
NU = Var("n")
#: ∂ acting on tensor slot 1, 2, 3
D1 = Var("d1")
D2 = Var("d2")
D3 = Var("d3")
SLOTS: Tuple[Var, Var, Var] = (D1, D2, D3)

@lru_cache(maxsize=None)
def _ring(params: Tuple[str, ...]) -> PolyRing:
    return PolyRing(BASE_NAMES + params, QQ, grlex)

def _params_of(ring: PolyRing) -> Tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols[len(BASE_NAMES):])

def _to_qq(value: Union[int, Fraction]) -> object:
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ(value)

def _to_fraction(coeff: object) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator)) # type: ignore

def _minimal(elem: PolyElement) -> PolyElement:
    """
    Moves a polynomial into the smallest ring holding it, so that equal polynomials share a ring
    """
    ring: PolyRing = elem.ring
    nbase = len(BASE_NAMES)
    if ring.ngens == nbase:
        return elem
    used = [False] * (ring.ngens - nbase)
    for monom in elem.itermonoms():
        for i, e in enumerate(monom[nbase:]):
            if e:
                used[i] = True
    if all(used):
        return elem
    params = _params_of(ring)
    kept = tuple(p for p, u in zip(params, used) if u)
    return elem.set_ring(_ring(kept))

PolyLike = Union["Poly", int, Fraction, Var]

class Poly:
    """
    An immutable polynomial with rational coefficients.

    Supports `+`, `-`, `*`, integer powers and structural equality with other polys and with plain numbers.
    """
    __slots__ = ("_elem",)

    _elem: PolyElement

    def __init__(self, elem: PolyElement):
        object.__setattr__(self, "_elem", _minimal(elem))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, value: Union[int, Fraction]) -> Poly:
        ring = _ring(())
        return cls(ring.ground_new(_to_qq(value)))

    @classmethod
    def var(cls, v: Var) -> Poly:
        if v.is_param:
            Var.param(v.name)
            ring = _ring((v.name,))
            return cls(ring.gens[len(BASE_NAMES)])
        ring = _ring(())
        return cls(ring.gens[BASE_NAMES.index(v.name)])

    @classmethod
    def of(cls, value: PolyLike) -> Poly:
        """
        Coerces a number, a variable or a poly to a poly
        """
        if isinstance(value, Poly):
            return value
        if isinstance(value, Var):
            return cls.var(value)
        return cls.constant(value)

    @property
    def params(self) -> Tuple[str, ...]:
        return _params_of(self._elem.ring)

    def _pair(self, other: PolyLike) -> Tuple[PolyElement, PolyElement]:
        o = Poly.of(other)._elem
        e = self._elem
        if e.ring == o.ring:
            return e, o
        ring = _ring(tuple(sorted(set(self.params) | set(_params_of(o.ring)))))
        return e.set_ring(ring), o.set_ring(ring)

    def __add__(self, other: PolyLike) -> Poly:
        a, b = self._pair(other)
        return Poly(a + b)

    __radd__ = __add__

    def __sub__(self, other: PolyLike) -> Poly:
        a, b = self._pair(other)
        return Poly(a - b)

    def __rsub__(self, other: PolyLike) -> Poly:
        a, b = self._pair(other)
        return Poly(b - a)

    def __mul__(self, other: PolyLike) -> Poly:
        a, b = self._pair(other)
        return Poly(a * b)

    __rmul__ = __mul__

    def __neg__(self) -> Poly:
        return Poly(-self._elem)

    def __pos__(self) -> Poly:
        return self

    def __pow__(self, exponent: int) -> Poly:
        if exponent < 0:
            raise ValueError("Negative powers are not polynomials")
        return Poly(self._elem ** exponent)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (Poly, int, Fraction, Var)):
            return NotImplemented
        a, b = self._pair(other)
        return a == b

    def __hash__(self) -> int:
        return hash(self._elem)

    def __bool__(self) -> bool:
        return bool(self._elem)

    @property
    def is_zero(self) -> bool:
        return not self._elem

    def variables(self) -> FrozenSet[Var]:
        """
        The variables that occur with a nonzero exponent
        """
        names = [str(s) for s in self._elem.ring.symbols]
        found = set()
        for monom in self._elem.itermonoms():
            for name, e in zip(names, monom):
                if e:
                    found.add(Var(name))
        return frozenset(found)

    def degree(self, v: Var) -> int:
        """
        Degree in one variable; the zero polynomial has degree -1
        """
        if self.is_zero:
            return -1
        names = [str(s) for s in self._elem.ring.symbols]
        if v.name not in names:
            return 0
        i = names.index(v.name)
        return max(m[i] for m in self._elem.itermonoms())

    def is_constant(self) -> bool:
        return not self.variables()

    def constant_value(self) -> Fraction:
        """
        Returns the value of a constant polynomial.

        Raises:
            VariableError: if the polynomial is not constant
        """
        if not self.is_constant():
            raise VariableError(f"{self} is not a constant")
        if not self._elem:
            return Fraction(0)
        return _to_fraction(self._elem[self._elem.ring.zero_monom])

    def terms(self) -> List[Tuple[Dict[str, int], Fraction]]:
        """
        The terms in canonical order, as (exponents by variable name, coefficient) pairs
        """
        names = [str(s) for s in self._elem.ring.symbols]
        out: List[Tuple[Dict[str, int], Fraction]] = []
        for monom, coeff in self._elem.terms():
            out.append(({n: e for n, e in zip(names, monom) if e}, _to_fraction(coeff)))
        return out

    def compose(self, mapping: Mapping[Var, PolyLike]) -> Poly:
        """
        Simultaneously replaces each variable in `mapping` by its image, then expands.

        Params:
            mapping: variable to replacement. Replacements may mention the variables being replaced.
        """
        if not mapping:
            return self
        images = {v: Poly.of(r) for v, r in mapping.items()}
        names = set(self.params)
        for img in images.values():
            names.update(img.params)
        ring = _ring(tuple(sorted(names)))
        symbols = [str(s) for s in ring.symbols]
        elem = self._elem.set_ring(ring)
        pairs: List[Tuple[PolyElement, PolyElement]] = []
        for v, img in images.items():
            if v.name not in symbols:
                continue
            pairs.append((ring.gens[symbols.index(v.name)], img._elem.set_ring(ring)))
        if not pairs:
            return self
        return Poly(elem.compose(pairs))

    def substitute(self, v: Var, replacement: PolyLike) -> Poly:
        return self.compose({v: replacement})

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"Poly({serialize(self)!r})"

ZERO = Poly.constant(0)
ONE = Poly.constant(1)

def slot_sum(k: int) -> Poly:
    """
    ∂ acting on a k-fold tensor: `d1 + ... + dk`
    """
    return sum((Poly.var(s) for s in SLOTS[:k]), ZERO)

def substitute(p: Poly, v: Var, replacement: PolyLike) -> Poly:
    """
    Replaces every occurrence of `v` in `p` by `replacement`, fully expanded
    """
    return p.substitute(v, replacement)

def divisible_by_slot_sum(p: Poly) -> bool:
    """
    Decides whether `p` lies in the ideal generated by `d1 + d2 + d3`.

    A polynomial is divisible by a linear form exactly when it vanishes on the hyperplane where the form vanishes,
    so this substitutes `d3 = -d1 - d2` and tests for zero.

    Raises:
        VariableError: if `p` mentions `d`, `l`, `m` or `n`, which means it was not reduced to slot variables
    """
    bad = sorted(v.name for v in p.variables() if not v.is_param and v not in SLOTS)
    if bad:
        raise VariableError(f"Expected a polynomial in d1, d2, d3 and parameters, but {p} uses {', '.join(bad)}")
    return p.substitute(D3, -Poly.var(D1) - Poly.var(D2)).is_zero

def poly_equal(p: PolyLike, q: PolyLike) -> bool:
    return (Poly.of(p) - Poly.of(q)).is_zero

def determinant(rows: Sequence[Sequence[PolyLike]]) -> Poly:
    """
    Exact determinant of a square matrix of polynomials, by fraction-free elimination over the polynomial ring
    """
    n = len(rows)
    if n == 0:
        return ONE
    if any(len(row) != n for row in rows):
        raise ValueError("Determinant of a non-square matrix")
    entries = [[Poly.of(x) for x in row] for row in rows]
    params = sorted({p for row in entries for x in row for p in x.params})
    ring = _ring(tuple(params))
    matrix = DomainMatrix([[x._elem.set_ring(ring) for x in row] for row in entries], (n, n), ring.to_domain())
    return Poly(matrix.det())

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"

def serialize(p: Poly) -> str:
    """
    Canonical text form: terms in graded lexicographic order, `*` between factors, `^` for powers.
    [`parse_poly`][confalg.exactpoly.parse_poly] reads it back exactly.
    """
    terms = p.terms()
    if not terms:
        return "0"
    order = {name: i for i, name in enumerate(BASE_NAMES)}
    parts: List[str] = []
    for n, (exps, coeff) in enumerate(terms):
        factors = [
            name if e == 1 else f"{name}^{e}"
            for name, e in sorted(exps.items(), key=lambda item: (order.get(item[0], len(order)), item[0]))
        ]
        magnitude = abs(coeff)
        if not factors:
            body = _format_coeff(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(magnitude) + "*" + "*".join(factors)
        if n == 0:
            parts.append(("-" if coeff < 0 else "") + body)
        else:
            parts.append((" - " if coeff < 0 else " + ") + body)
    return "".join(parts)

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")

class _Parser:
    """
    Recursive descent over the grammar

        expr  := term (("+" | "-") term)*
        term  := unary ("*" unary)*
        unary := ("-" | "+") unary | power
        power := atom ("^" INT)?
        atom  := INT ("/" INT)? | NAME | "(" expr ")"
    """
    def __init__(self, text: str, params: Iterable[str]):
        self.text = text
        self.allowed = set(BASE_NAMES) | set(params)
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if match is None:
                start = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise PolyParseError(f"Unexpected character {text[start]!r}", text, start)
            kind = match.lastgroup or ""
            value = match.group(kind)
            self.tokens.append((kind, value, match.start(kind)))
            pos = match.end()
        self.index = 0

    def peek(self) -> Tuple[str, str, int]:
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return ("end", "", len(self.text))

    def take(self) -> Tuple[str, str, int]:
        token = self.peek()
        self.index += 1
        return token

    def fail(self, message: str, position: int) -> PolyParseError:
        return PolyParseError(message, self.text, position)

    def parse(self) -> Poly:
        if not self.tokens:
            raise self.fail("Empty polynomial", 0)
        result = self.expr()
        kind, value, position = self.peek()
        if kind != "end":
            raise self.fail(f"Unexpected {value!r}", position)
        return result

    def expr(self) -> Poly:
        result = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, _ = self.take()
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Poly:
        result = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            result = result * self.unary()
        return result

    def unary(self) -> Poly:
        kind, value, _ = self.peek()
        if kind == "op" and value in ("-", "+"):
            self.take()
            inner = self.unary()
            return -inner if value == "-" else inner
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, value, position = self.take()
            if kind != "num":
                raise self.fail("Expected an integer exponent", position)
            return base ** int(value)
        return base

    def atom(self) -> Poly:
        kind, value, position = self.take()
        if kind == "num":
            if self.peek()[:2] == ("op", "/"):
                self.take()
                dkind, dvalue, dposition = self.take()
                if dkind != "num":
                    raise self.fail("Expected an integer denominator", dposition)
                if int(dvalue) == 0:
                    raise self.fail("Zero denominator", dposition)
                return Poly.constant(Fraction(int(value), int(dvalue)))
            return Poly.constant(int(value))
        if kind == "name":
            if value not in self.allowed:
                raise self.fail(f"Unknown variable {value!r} (declare it as a parameter)", position)
            return Poly.var(Var(value))
        if (kind, value) == ("op", "("):
            inner = self.expr()
            ckind, cvalue, cposition = self.take()
            if (ckind, cvalue) != ("op", ")"):
                raise self.fail("Expected ')'", cposition)
            return inner
        if kind == "end":
            raise self.fail("Unexpected end of input", position)
        raise self.fail(f"Unexpected {value!r}", position)

def parse_poly(text: str, params: Iterable[str] = ()) -> Poly:
    """
    Parses the text grammar used in spec files.

    Params:
        text: e.g. `"2*d*l + l^2 - 3/2"`
        params: names of the free parameters the text may use

    Raises:
        PolyParseError: with the offset of the offending token
    """
    for name in params:
        Var.param(name)
    return _Parser(text, params).parse()
