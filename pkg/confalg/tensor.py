"""
Sparse tensors with polynomial coefficients.

A `Tensor` of order k maps k-tuples of 0-based basis indices to polynomials.
Order 1 tensors are vectors, order 2 and 3 tensors are elements of A⊗A and
A⊗A⊗A. Structure constants are stored the same way: a product table is an
order 3 tensor keyed `(i, j, k)` meaning `e_i * e_j = Σ_k c e_k`, and a
coproduct table is keyed `(k, i, j)` meaning `Δ(e_k) = Σ c e_i⊗e_j`.
"""
from __future__ import annotations
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

from confalg.exactpoly import D1, D2, D3, PARTIAL, Poly, PolyLike, Var, ZERO, serialize

Key = Tuple[int, ...]
Scalar = Union[Poly, int]

def slot_var(order: int, slot: int) -> Var:
    """
    The variable that ∂ acting on `slot` is written in, for a tensor of the given order.
    Vectors use `d`, tensors of order 2 and 3 use `d1`, `d2`, `d3`.
    """
    if order == 1:
        return PARTIAL
    return (D1, D2, D3)[slot]

class Tensor:
    """
    An immutable sparse tensor. Zero coefficients are never stored.
    """
    __slots__ = ("_data", "_order", "_rows", "_fibres", "_hash")

    _data: Dict[Key, Poly]
    _order: int
    _rows: Optional[Dict[Tuple[int, int], List[Tuple[int, Poly]]]]
    _fibres: Optional[Dict[int, List[Tuple[Key, Poly]]]]
    _hash: Optional[int]

    def __init__(self, data: Optional[Mapping[Key, PolyLike]] = None, order: Optional[int] = None):
        data = data or {}
        cleaned: Dict[Key, Poly] = {}
        for key, value in data.items():
            p = Poly.of(value)
            if not p.is_zero:
                cleaned[tuple(key)] = p
        if order is None:
            order = len(next(iter(data))) if data else 1
        for key in cleaned:
            if len(key) != order:
                raise ValueError(f"Key {key} does not have order {order}")
        object.__setattr__(self, "_data", cleaned)
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_rows", None)
        object.__setattr__(self, "_fibres", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Tensor is immutable")

    @classmethod
    def zero(cls, order: int) -> Tensor:
        return cls({}, order)

    @classmethod
    def basis(cls, *index: int) -> Tensor:
        """
        The pure tensor `e_i ⊗ e_j ⊗ ...` with coefficient 1
        """
        return cls({tuple(index): 1})

    @property
    def order(self) -> int:
        return self._order

    def items(self) -> Iterable[Tuple[Key, Poly]]:
        return self._data.items()

    def keys(self) -> Iterable[Key]:
        return self._data.keys()

    def get(self, key: Key) -> Poly:
        return self._data.get(tuple(key), ZERO)

    def __getitem__(self, key: Key) -> Poly:
        return self.get(key)

    def __iter__(self) -> Iterator[Key]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    @property
    def is_zero(self) -> bool:
        return not self._data

    def __bool__(self) -> bool:
        return bool(self._data)

    def rows(self) -> Dict[Tuple[int, int], List[Tuple[int, Poly]]]:
        """
        Groups an order 3 table by its first two indices, e.g. `(i, j) -> [(k, c)]` for a product table
        """
        if self._rows is None:
            rows: Dict[Tuple[int, int], List[Tuple[int, Poly]]] = {}
            for (i, j, k), c in sorted(self._data.items()):
                rows.setdefault((i, j), []).append((k, c))
            object.__setattr__(self, "_rows", rows)
        return self._rows # type: ignore

    def fibres(self) -> Dict[int, List[Tuple[Key, Poly]]]:
        """
        Groups a table by its first index, e.g. `k -> [((i, j), c)]` for a coproduct table
        """
        if self._fibres is None:
            fibres: Dict[int, List[Tuple[Key, Poly]]] = {}
            for key, c in sorted(self._data.items()):
                fibres.setdefault(key[0], []).append((key[1:], c))
            object.__setattr__(self, "_fibres", fibres)
        return self._fibres # type: ignore

    def _check(self, other: Tensor) -> None:
        if other.order != self.order and other and self:
            raise ValueError(f"Cannot combine tensors of order {self.order} and {other.order}")

    def __add__(self, other: Tensor) -> Tensor:
        self._check(other)
        out = Accumulator(max(self.order, other.order) if (self and other) else (self.order if self else other.order))
        out.add_tensor(self)
        out.add_tensor(other)
        return out.build()

    def __sub__(self, other: Tensor) -> Tensor:
        return self + (-other)

    def __neg__(self) -> Tensor:
        return Tensor({k: -v for k, v in self._data.items()}, self.order)

    def __rmul__(self, scalar: PolyLike) -> Tensor:
        s = Poly.of(scalar)
        return Tensor({k: s * v for k, v in self._data.items()}, self.order)

    __mul__ = __rmul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self._data == other._data and (self.order == other.order or not self._data)

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self._order, frozenset(self._data.items()))))
        return self._hash # type: ignore

    def map_coefficients(self, f: Callable[[Poly], Poly]) -> Tensor:
        return Tensor({k: f(v) for k, v in self._data.items()}, self.order)

    def compose(self, mapping: Mapping[Var, PolyLike]) -> Tensor:
        """
        Substitutes variables in every coefficient at once
        """
        if not mapping:
            return self
        return self.map_coefficients(lambda p: p.compose(mapping))

    def substitute(self, v: Var, replacement: PolyLike) -> Tensor:
        return self.compose({v: replacement})

    def permute(self, perm: Sequence[int]) -> Tensor:
        """
        Moves the factor in slot `perm[s]` to slot `s`, renaming slot variables to follow their factors
        """
        n = self.order
        if n == 1:
            return self
        mapping = {slot_var(n, perm[s]): Poly.var(slot_var(n, s)) for s in range(n)}
        out: Dict[Key, Poly] = {}
        for key, value in self._data.items():
            out[tuple(key[perm[s]] for s in range(n))] = value.compose(mapping)
        return Tensor(out, n)

    def swap(self, a: int = 0, b: int = 1) -> Tensor:
        """
        τ acting on slots `a` and `b`: swaps the factors and the variables ∂ acts on them with
        """
        perm = list(range(self.order))
        perm[a], perm[b] = perm[b], perm[a]
        return self.permute(perm)

    def tensor(self, other: Tensor) -> Tensor:
        """
        `self ⊗ other`, for tensors whose coefficients are in their own slot variables
        """
        n, m = self.order, other.order
        left_map = {slot_var(n, s): Poly.var(slot_var(n + m, s)) for s in range(n)}
        right_map = {slot_var(m, s): Poly.var(slot_var(n + m, n + s)) for s in range(m)}
        out = Accumulator(n + m)
        for k1, v1 in self._data.items():
            a = v1.compose(left_map)
            for k2, v2 in other._data.items():
                out.add(k1 + k2, a * v2.compose(right_map))
        return out.build()

    def variables(self) -> FrozenSet[Var]:
        found: Set[Var] = set()
        for v in self._data.values():
            found |= v.variables()
        return frozenset(found)

    def labelled(self, names: Sequence[str]) -> Dict[str, str]:
        """
        Readable form: basis tensor label to canonical polynomial string, in key order
        """
        return {
            "⊗".join(names[i] for i in key): serialize(value)
            for key, value in sorted(self._data.items())
        }

    def format(self, names: Sequence[str]) -> str:
        """
        One-line form such as `(2*d + 6*l)*e3 - e1⊗e2`, for displays
        """
        if not self._data:
            return "0"
        parts: List[str] = []
        for key, value in sorted(self._data.items()):
            label = "⊗".join(names[i] for i in key)
            text = serialize(value)
            if text == "1":
                term = label
            elif text == "-1":
                term = f"-{label}"
            elif len(value.terms()) == 1:
                term = f"{text}*{label}"
            else:
                term = f"({text})*{label}"
            if parts and term.startswith("-"):
                parts.append(f" - {term[1:]}")
            elif parts:
                parts.append(f" + {term}")
            else:
                parts.append(term)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Tensor({ {k: str(v) for k, v in sorted(self._data.items())} }, order={self.order})"

class Accumulator:
    """
    Mutable builder for a tensor; sums coefficients per key
    """
    def __init__(self, order: int):
        self.order = order
        self.data: Dict[Key, Poly] = {}

    def add(self, key: Key, value: PolyLike) -> None:
        p = Poly.of(value)
        if p.is_zero:
            return
        current = self.data.get(key)
        self.data[key] = p if current is None else current + p

    def add_tensor(self, t: Tensor, scalar: Optional[PolyLike] = None) -> None:
        s = None if scalar is None else Poly.of(scalar)
        for key, value in t.items():
            self.add(key, value if s is None else s * value)

    def build(self) -> Tensor:
        return Tensor(self.data, self.order)

def total(terms: Iterable[Tensor], order: int) -> Tensor:
    """
    Sum of tensors of one order
    """
    out = Accumulator(order)
    for t in terms:
        out.add_tensor(t)
    return out.build()
