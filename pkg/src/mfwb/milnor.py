"""Jacobian ideal, Milnor algebra and normal forms.

Everything is local at the origin: the quotient ``R/(t_1, ..., t_m)`` of the
power-series ring is computed as ``R/(I + m^D)`` for growing ``D`` by plain
linear algebra on monomials of degree ``< D``.  Once the quotient dimension
stops growing, ``m^D`` lies in ``I`` (Nakayama), so truncating at ``D`` and
row-reducing gives exact normal forms.
"""
from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import ComputationError, ContextError
from .polyring import (
    Exponent,
    Polynomial,
    RingContext,
    format_monomial,
    grlex_key,
    monomials_up_to,
)

DEFAULT_CAP = 50


class LocalQuotient:
    """Finite-dimensional local quotient ``k[[x]]/(generators)``.

    Raises :class:`ComputationError` if the quotient dimension has not
    stabilized by degree ``cap``.
    """

    def __init__(self, variables: Sequence[str], generators: Sequence[Polynomial], cap: int = DEFAULT_CAP):
        self.variables = tuple(variables)
        self.generators = tuple(generators)
        for g in self.generators:
            if g.variables != self.variables:
                raise ContextError("generator lives over a different set of variables")
        self.cap = cap
        self.trajectory: list[int] = []
        D = 1
        while True:
            if D > cap:
                raise ComputationError(
                    f"Milnor number did not stabilize up to degree cap {cap} "
                    f"(dimensions so far: {self.trajectory})"
                )
            self._build(D)
            self.trajectory.append(self._dim)
            t = self.trajectory
            if len(t) >= 3 and t[-1] == t[-2] == t[-3]:
                break
            D += 1
        self.degree = D

    def _build(self, D: int) -> None:
        n = len(self.variables)
        monos = sorted(monomials_up_to(n, D - 1), key=grlex_key, reverse=True)
        index = {e: k for k, e in enumerate(monos)}
        rows = []
        for t in self.generators:
            if not t:
                continue
            lo = t.min_degree()
            if lo >= D:
                continue
            for e in monomials_up_to(n, D - 1 - lo):
                row = {}
                for te, c in t.terms.items():
                    m = tuple(a + b for a, b in zip(e, te))
                    k = index.get(m)
                    if k is not None:
                        row[k] = row.get(k, 0) + c
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
        if rows:
            rref_rows, pivots = linalg.rref(linalg.matrix(rows, len(monos)))
        else:
            rref_rows, pivots = [], ()
        pivset = set(pivots)
        self._monos = monos
        self._index = index
        self._rref = rref_rows
        self._pivots = pivots
        free = [k for k in range(len(monos)) if k not in pivset]
        # by degree, then x before y within a degree: 1, x, y, x*y, ...
        free.sort(key=lambda k: (sum(monos[k]), tuple(-a for a in monos[k])))
        self.basis: tuple[Exponent, ...] = tuple(monos[k] for k in free)
        self._coord = {monos[k]: i for i, k in enumerate(free)}
        self._dim = len(free)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def normal_form(self, p: Polynomial) -> list[Fraction]:
        """Coordinates of ``p`` over :attr:`basis`."""
        if p.variables != self.variables:
            raise ContextError("polynomial lives over a different set of variables")
        D = self.degree
        v = {}
        for e, c in p.terms.items():
            if sum(e) < D:
                v[self._index[e]] = c
        v = linalg.reduce_vector(v, self._rref, self._pivots)
        out = [Fraction(0)] * len(self.basis)
        for k, c in v.items():
            out[self._coord[self._monos[k]]] = c
        return out

    def lift(self, coords: Sequence[Fraction]) -> Polynomial:
        return Polynomial(self.variables, {e: Fraction(c) for e, c in zip(self.basis, coords) if c})

    def reduce(self, p: Polynomial) -> Polynomial:
        return self.lift(self.normal_form(p))

    def contains(self, p: Polynomial) -> bool:
        return not any(self.normal_form(p))

    def power_exponent(self) -> int:
        """Least ``N`` with every ``x_i^N`` in the ideal."""
        n = len(self.variables)
        N = 1
        while True:
            if all(self.contains(Polynomial.monomial(self.variables, tuple(N if j == i else 0 for j in range(n))))
                   for i in range(n)):
                return N
            N += 1
            if N > self.degree:
                raise ComputationError("no power of the maximal ideal lies in the ideal")


class MilnorContext(LocalQuotient):
    """The Milnor algebra ``R/(d_1 w, ..., d_n w)`` with its monomial basis."""

    def __init__(self, ctx: RingContext, cap: int = DEFAULT_CAP):
        self.ctx = ctx
        self.jacobian = tuple(jacobian(ctx))
        super().__init__(ctx.variables, self.jacobian, cap)
        if self.mu == 0:
            warnings.warn(
                f"potential {ctx.w} has a nonzero linear part: the origin is a smooth point and mu = 0",
                stacklevel=2,
            )

    @property
    def mu(self) -> int:
        return len(self.basis)

    def basis_strings(self) -> list[str]:
        return [format_monomial(e, self.variables) for e in self.basis]


def jacobian(ctx: RingContext) -> list[Polynomial]:
    return [ctx.w.derivative(i) for i in range(ctx.n)]


def milnor_context(ctx: RingContext, cap: int = DEFAULT_CAP) -> MilnorContext:
    return MilnorContext(ctx, cap)


def normal_form(p: Polynomial, mc: LocalQuotient) -> list[Fraction]:
    return mc.normal_form(p)


def milnor_number_oracle(ctx: RingContext, degree: int) -> int:
    """Dimension of ``R/(J + m^degree)`` by a fresh row reduction (test oracle)."""
    n = ctx.n
    monos = monomials_up_to(n, degree - 1)
    index = {e: k for k, e in enumerate(monos)}
    rows = []
    for t in jacobian(ctx):
        for e in monos:
            q = (Polynomial.monomial(ctx.variables, e) * t).truncate(degree)
            if q:
                rows.append({index[m]: c for m, c in q.terms.items()})
    if not rows:
        return len(monos)
    return len(monos) - linalg.rank(linalg.matrix(rows, len(monos)))
