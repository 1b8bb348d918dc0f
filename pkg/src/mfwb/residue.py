"""Generalized fractions and exact Grothendieck residues.

The residue of ``[g / t_1, ..., t_n]`` is evaluated by finding ``N`` and a
matrix ``C`` with ``x_i^N = sum_j C_ij t_j``, moving to the fraction
``[det(C) g / x_1^N, ..., x_n^N]`` and reading off the coefficient of
``(x_1 ... x_n)^(N-1)``.

Variable order fixes the orientation: swapping two ring variables flips the
sign of every residue.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .errors import ComputationError, ContextError
from .milnor import LocalQuotient, MilnorContext
from .polyring import Polynomial, monomials_up_to

DEFAULT_SLACK = 4


@dataclass(frozen=True)
class GeneralizedFraction:
    numerator: Polynomial
    denominators: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "denominators", tuple(self.denominators))
        n = self.numerator.nvars
        if len(self.denominators) != n:
            raise ContextError(f"a generalized fraction over {n} variables needs {n} denominators")
        for t in self.denominators:
            if t.variables != self.numerator.variables:
                raise ContextError("denominator lives over a different set of variables")


@dataclass(frozen=True)
class PowerWitness:
    """``x_i^N = sum_j C_ij t_j``, exactly or modulo ``m^modulus``.

    A truncated witness (``modulus`` set) is used when no polynomial ``C``
    exists, which happens when the denominators have common zeros away from
    the origin.  With ``modulus >= N + n(N-1) + 1`` the error term only
    changes ``det(C)`` above the degree that residue extraction reads.
    """

    N: int
    C: tuple[tuple[Polynomial, ...], ...]
    modulus: int | None = None

    @property
    def exact(self) -> bool:
        return self.modulus is None

    def det(self) -> Polynomial:
        return determinant(self.C)


def determinant(M: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Cofactor expansion; fine for the small sizes used here."""
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    acc = Polynomial.zero(M[0][0].variables)
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [tuple(r)[:j] + tuple(r)[j + 1:] for r in M[1:]]
        term = M[0][j] * determinant(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _solve_witness(variables, gens, N: int, bound: int, modulus: int | None):
    """Try to find ``C``; ``bound`` caps the degree of its entries."""
    n = len(variables)
    unknowns = [(j, e) for j in range(n) for e in monomials_up_to(n, bound)]
    eq_index: dict[tuple, int] = {}
    columns: list[dict[int, Fraction]] = []
    for j, e in unknowns:
        col = {}
        for te, c in gens[j].terms.items():
            m = tuple(a + b for a, b in zip(e, te))
            if modulus is not None and sum(m) >= modulus:
                continue
            r = eq_index.setdefault(m, len(eq_index))
            col[r] = c
        columns.append(col)
    targets = [tuple(N if k == i else 0 for k in range(n)) for i in range(n)]
    for m in targets:
        eq_index.setdefault(m, len(eq_index))
    rows: list[dict[int, Fraction]] = [{} for _ in range(len(eq_index))]
    for k, col in enumerate(columns):
        for r, c in col.items():
            rows[r][k] = c
    C = []
    for m in targets:
        rhs = [Fraction(0)] * len(eq_index)
        rhs[eq_index[m]] = Fraction(1)
        sol = linalg.solve(rows, rhs, len(unknowns))
        if sol is None:
            return None
        row = [dict() for _ in range(n)]
        for k, c in sol.items():
            j, e = unknowns[k]
            row[j][e] = c
        C.append(tuple(Polynomial(variables, r) for r in row))
    return tuple(C)


def power_witness(
    lq: LocalQuotient,
    N: int | None = None,
    slack: int = DEFAULT_SLACK,
    denominators: Sequence[Polynomial] | None = None,
) -> PowerWitness:
    """Least-``N`` witness for the ideal of ``lq`` (or explicit ``denominators``).

    Polynomial solutions are tried first with entries of degree
    ``<= N*n + slack``; otherwise a truncated witness is returned.
    """
    gens = tuple(denominators) if denominators is not None else lq.generators
    variables = lq.variables
    n = len(variables)
    if len(gens) != n:
        raise ContextError(f"need exactly {n} denominators for a power witness, got {len(gens)}")
    if N is None:
        N = lq.power_exponent()
    C = _solve_witness(variables, gens, N, N * n + slack, None)
    modulus = None
    if C is None:
        modulus = N + n * (N - 1) + 1
        C = _solve_witness(variables, gens, N, modulus - 1, modulus)
        if C is None:
            raise ComputationError(f"no power witness found for N = {N}")
    wit = PowerWitness(N, C, modulus)
    verify_witness(wit, gens)
    return wit


def verify_witness(wit: PowerWitness, gens: Sequence[Polynomial]) -> None:
    variables = gens[0].variables
    n = len(variables)
    for i in range(n):
        lhs = Polynomial.monomial(variables, tuple(wit.N if k == i else 0 for k in range(n)))
        rhs = Polynomial.zero(variables)
        for j in range(n):
            rhs = rhs + wit.C[i][j] * gens[j]
        diff = rhs - lhs
        if wit.modulus is not None:
            diff = diff.truncate(wit.modulus)
        if diff:
            raise ComputationError(f"power witness fails on row {i}: residual {diff}")


def transform_fraction(f: GeneralizedFraction, C: Sequence[Sequence[Polynomial]]) -> GeneralizedFraction:
    """``[m / t] = [det(C) m / C t]``."""
    n = len(f.denominators)
    C = [[_as_poly(c, f.numerator.variables) for c in row] for row in C]
    if len(C) != n or any(len(r) != n for r in C):
        raise ContextError(f"transformation matrix must be {n}x{n}")
    zero = Polynomial.zero(f.numerator.variables)
    new = tuple(sum((C[i][j] * f.denominators[j] for j in range(n)), zero) for i in range(n))
    return GeneralizedFraction(determinant(C) * f.numerator, new)


def _as_poly(c, variables) -> Polynomial:
    return c if isinstance(c, Polynomial) else Polynomial.constant(variables, Fraction(c))


def _extract(g: Polynomial, wit: PowerWitness) -> Fraction:
    n = g.nvars
    h = wit.det() * g
    return h.coefficient((wit.N - 1,) * n)


def residue(g: Polynomial, mc: LocalQuotient, witness: PowerWitness | None = None) -> Fraction:
    """``Res[g / t_1, ..., t_n]`` for the generators of ``mc`` (the Jacobian for a MilnorContext)."""
    if g.variables != mc.variables:
        raise ContextError("numerator lives over a different set of variables")
    if witness is None:
        witness = cached_witness(mc)
    return _extract(g, witness)


def cached_witness(mc: LocalQuotient) -> PowerWitness:
    wit = getattr(mc, "_witness", None)
    if wit is None:
        wit = power_witness(mc)
        mc._witness = wit
    return wit


@lru_cache(maxsize=64)
def _quotient_for(denominators: tuple[Polynomial, ...]) -> LocalQuotient:
    return LocalQuotient(denominators[0].variables, denominators)


def fraction_residue(f: GeneralizedFraction) -> Fraction:
    """Residue of a fraction with arbitrary denominators forming a system of parameters."""
    lq = _quotient_for(f.denominators)
    return _extract(f.numerator, cached_witness(lq))


def jacobian_fraction(g: Polynomial, mc: MilnorContext) -> GeneralizedFraction:
    return GeneralizedFraction(g, mc.jacobian)


def hessian(mc: MilnorContext) -> Polynomial:
    """Determinant of the Hessian of ``w``; its residue equals ``mu``."""
    t = mc.jacobian
    n = len(t)
    return determinant([[t[i].derivative(j) for j in range(n)] for i in range(n)])
