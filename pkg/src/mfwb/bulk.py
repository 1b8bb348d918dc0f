"""Boundary-bulk map, Chern characters and the Hirzebruch-Riemann-Roch check."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cohomology import CohomologyReport, hom_cohomology
from .errors import ContextError
from .klpair import cached_wedge, kl_sign
from .mfcore import MatrixFactorization, Morphism, hom_differential
from .milnor import MilnorContext
from .polyring import Polynomial, format_monomial
from .residue import residue
from .superlin import supertrace


@dataclass(frozen=True)
class MilnorElement:
    """An element of the Milnor algebra in coordinates over ``mc.basis``."""

    mc: MilnorContext
    coords: tuple[Fraction, ...]

    @classmethod
    def from_polynomial(cls, p: Polynomial, mc: MilnorContext) -> "MilnorElement":
        return cls(mc, tuple(mc.normal_form(p)))

    def lift(self) -> Polynomial:
        return self.mc.lift(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "MilnorElement"):
        if other.mc is not self.mc:
            raise ContextError("Milnor elements from different contexts")

    def __add__(self, other: "MilnorElement") -> "MilnorElement":
        self._check(other)
        return MilnorElement(self.mc, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "MilnorElement") -> "MilnorElement":
        self._check(other)
        return MilnorElement(self.mc, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "MilnorElement":
        return MilnorElement(self.mc, tuple(-a for a in self.coords))

    def scale(self, c) -> "MilnorElement":
        c = Fraction(c)
        return MilnorElement(self.mc, tuple(c * a for a in self.coords))

    def __mul__(self, other: "MilnorElement") -> "MilnorElement":
        self._check(other)
        return MilnorElement.from_polynomial(self.lift() * other.lift(), self.mc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MilnorElement):
            return NotImplemented
        return self.mc is other.mc and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def as_dict(self) -> dict[str, Fraction]:
        v = self.mc.variables
        return {format_monomial(e, v): c for e, c in zip(self.mc.basis, self.coords)}

    def __str__(self) -> str:
        return str(self.lift())


@dataclass(frozen=True)
class BulkValue:
    element: MilnorElement
    closed: bool  # False: F is not a cycle, the value is not a class invariant


def boundary_bulk(F: Morphism, mc: MilnorContext, *, naive: bool = False) -> BulkValue:
    """``(-1)^{binom(n+1,2)}/n! * str(F (dQ)^n)`` reduced into the Milnor algebra."""
    if F.source != F.target:
        raise ContextError("boundary-bulk map needs an endomorphism")
    if F.ctx != mc.ctx:
        raise ContextError("morphism and Milnor context live over different rings")
    s = supertrace(F.matrix @ cached_wedge(F.source, naive)).scale(kl_sign(mc.ctx.n))
    return BulkValue(MilnorElement.from_polynomial(s, mc), hom_differential(F).is_zero())


def chern(E: MatrixFactorization, mc: MilnorContext, *, naive: bool = False) -> MilnorElement:
    return boundary_bulk(E.identity(), mc, naive=naive).element


def hrr_sign(n: int) -> int:
    """``(-1)^{n(n-1)/2}``."""
    return -1 if (n * (n - 1) // 2) % 2 else 1


def residue_pairing(a: MilnorElement, b: MilnorElement) -> Fraction:
    """``<a, b> = (-1)^{n(n-1)/2} Res[a b / d_1 w, ..., d_n w]``."""
    a._check(b)
    mc = a.mc
    return hrr_sign(mc.ctx.n) * residue(a.lift() * b.lift(), mc)


@dataclass
class HRRReport:
    chi: int
    pairing: Fraction
    cohomology: CohomologyReport
    chern_source: MilnorElement
    chern_target: MilnorElement

    @property
    def match(self) -> bool:
        return self.pairing == self.chi


def hrr_check(
    X: MatrixFactorization,
    Y: MatrixFactorization,
    mc: MilnorContext,
    *,
    trunc: int | None = None,
    cohomology: CohomologyReport | None = None,
) -> HRRReport:
    """Compare ``chi Hom(X, Y)`` with ``<ch X, ch Y>``."""
    rep = cohomology or hom_cohomology(X, Y, mc, trunc)
    cx, cy = chern(X, mc), chern(Y, mc)
    return HRRReport(rep.euler, residue_pairing(cx, cy), rep, cx, cy)


def chern_of_sum(parts: Sequence[MatrixFactorization], mc: MilnorContext) -> MilnorElement:
    acc = None
    for E in parts:
        c = chern(E, mc)
        acc = c if acc is None else acc + c
    return acc
