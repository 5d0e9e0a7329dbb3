"""
Built-in structures: the rank-3 Zinbiel algebra with a derivation that the final example grows from,
the polynomial algebra family, and small conformal algebras for experiments
"""
from __future__ import annotations
from fractions import Fraction
from typing import Union

from confalg.conformal import ConfAlgebra
from confalg.errors import ConfalgError
from confalg.exactpoly import D1, D2, LAMBDA, PARTIAL, Poly, PolyLike, Var
from confalg.findim import FinStructure
from confalg.tensor import Accumulator, Tensor

Parameter = Union[PolyLike, str]

def parameter(value: Parameter, name: str) -> Poly:
    """
    Reads a parameter given as a number, a rational such as `"1/2"`, or `"sym"` for a free symbol named `name`
    """
    if isinstance(value, str):
        if value == "sym":
            return Poly.var(Var.param(name))
        try:
            return Poly.constant(Fraction(value))
        except (ValueError, ZeroDivisionError):
            raise ConfalgError(f"{name} must be a rational number or 'sym', not {value!r}")
    return Poly.of(value)

def final_example_zinbiel(alpha: Parameter = "sym") -> FinStructure:
    """
    The Zinbiel algebra `e1≻e1 = e2`, `e1≻e2 = 2e3`, `e2≻e1 = e3` with the derivation
    `D(e1) = e1 + αe2`, `D(e2) = 2e2 + 3αe3`, `D(e3) = 3e3`.

    The identity at `(e1, e1, e1)` forces `e1≻e2 = 2(e2≻e1)`, and the Leibniz rule on `e1≻e1` then fixes the
    `e3` coefficient of `D(e2)`.
    """
    a = parameter(alpha, "alpha")
    succ = Tensor({(0, 0, 1): 1, (0, 1, 2): 2, (1, 0, 2): 1}, 3)
    D = Tensor({(0, 0): 1, (0, 1): a, (1, 1): 2, (1, 2): 3 * a, (2, 2): 3}, 2)
    return FinStructure(dim=3, ops={"succ": succ}, linmaps={"D": D}, params=a.params)

def polyx_dim(degree: int) -> int:
    """
    Number of monomials kept for a window of the given degree: `x^0 ... x^{3·degree}`
    """
    if degree < 1:
        raise ConfalgError(f"The degree window must be positive, not {degree}")
    return 3 * degree + 1

def polyx(q: Parameter = 0, degree: int = 8) -> FinStructure:
    """
    The polynomial algebra k[x] truncated to monomials of degree at most `3·degree`, with
    `x^m · x^n = x^{m+n}`, `x^m ∘ x^n = (1-q)n x^{m+n-1}`,
    `Δ₂(x^n) = Σ_{i=0}^{n-1} x^{n-1-i}⊗x^i` and `Δ₁(x^n) = (q-1) Σ_{i=1}^{n-1} i x^{n-1-i}⊗x^{i-1}`.
    The bracket and `δ₀` are zero.

    Identities on monomials of degree up to `degree` only reach degrees up to `3·degree`, so checks on this
    structure must use `window=degree`.
    """
    qq = parameter(q, "q")
    dim = polyx_dim(degree)
    dot, circ = Accumulator(3), Accumulator(3)
    for m in range(dim):
        for n in range(dim):
            if m + n < dim:
                dot.add((m, n, m + n), 1)
            if n > 0 and m + n - 1 < dim:
                circ.add((m, n, m + n - 1), (1 - qq) * n)
    Delta1, Delta2 = Accumulator(3), Accumulator(3)
    for n in range(1, dim):
        for i in range(n):
            Delta2.add((n, n - 1 - i, i), 1)
        for i in range(1, n):
            Delta1.add((n, n - 1 - i, i - 1), (qq - 1) * i)
    return FinStructure(
        dim=dim,
        ops={"dot": dot.build(), "circ": circ.build(), "bracket": Tensor.zero(3)},
        coops={"Delta1": Delta1.build(), "Delta2": Delta2.build(), "delta0": Tensor.zero(3)},
        names=tuple(f"x{i}" for i in range(dim)),
        params=qq.params,
    )

def polyx_displayed(degree: int = 8) -> ConfAlgebra:
    """
    The Poisson conformal bialgebra on k[∂]⊗k[x] as it is usually displayed:
    `[x^m λ x^n] = (m∂ + (m+n)λ)x^{m+n-1}`, `x^m λ x^n = x^{m+n}`,
    `δ(x^n) = -Σ_{i=1}^{n-1} i(∂x^{n-1-i}⊗x^{i-1} - x^{i-1}⊗∂x^{n-1-i})` and `Δ = Δ₂`.
    It agrees with the construction from [`polyx`][confalg.builtins.polyx] at `q = 0` only.
    """
    dim = polyx_dim(degree)
    d, l = Poly.var(PARTIAL), Poly.var(LAMBDA)
    d1, d2 = Poly.var(D1), Poly.var(D2)
    mul, bracket = Accumulator(3), Accumulator(3)
    for m in range(dim):
        for n in range(dim):
            if m + n < dim:
                mul.add((m, n, m + n), 1)
            if m + n - 1 in range(dim):
                bracket.add((m, n, m + n - 1), m * d + (m + n) * l)
    delta, Delta = Accumulator(3), Accumulator(3)
    for n in range(1, dim):
        for i in range(n):
            Delta.add((n, n - 1 - i, i), 1)
        for i in range(1, n):
            delta.add((n, n - 1 - i, i - 1), -i * d1)
            delta.add((n, i - 1, n - 1 - i), i * d2)
    return ConfAlgebra(
        rank=dim,
        ops={"mul": mul.build(), "bracket": bracket.build()},
        coops={"delta": delta.build(), "Delta": Delta.build()},
        names=tuple(f"x{i}" for i in range(dim)),
    )

def virasoro_type(weight: PolyLike = 2) -> ConfAlgebra:
    """
    The rank-1 conformal algebra `[b λ b] = (∂ + weight·λ)b`. It is a Lie conformal algebra only for `weight = 2`,
    the Virasoro conformal algebra without centre.
    """
    d, l = Poly.var(PARTIAL), Poly.var(LAMBDA)
    return ConfAlgebra(rank=1, ops={"bracket": Tensor({(0, 0, 0): d + Poly.of(weight) * l}, 3)}, names=("b",))
