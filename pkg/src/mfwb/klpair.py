"""The Kapustin-Li pairing and its Gram matrices on cohomology.

For ``F: X -> Y`` and ``G: Y -> X`` the pairing is

    (-1)^{n(n+1)/2} / n! * Res[ str(F G (dQ_Y)^n) / d_1 w, ..., d_n w ],

with the wedge taken over ``Q_Y`` because ``F∘G`` is an endomorphism of ``Y``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .cohomology import CohomologyReport, hom_cohomology
from .errors import ContextError
from .mfcore import MatrixFactorization, Morphism, dq_wedge
from .milnor import MilnorContext
from .residue import residue
from .superlin import supertrace


def kl_sign(n: int) -> Fraction:
    """``(-1)^{binom(n+1, 2)} / n!``."""
    s = -1 if (n * (n + 1) // 2) % 2 else 1
    return Fraction(s, math.factorial(n))


@lru_cache(maxsize=256)
def cached_wedge(X: MatrixFactorization, naive: bool = False):
    return dq_wedge(X, naive=naive)


def kl_pairing(F: Morphism, G: Morphism, mc: MilnorContext, *, naive: bool = False) -> Fraction:
    if F.source != G.target or F.target != G.source:
        raise ContextError("kl_pairing needs F: X -> Y and G: Y -> X")
    if F.ctx != mc.ctx:
        raise ContextError("morphisms and Milnor context live over different rings")
    n = mc.ctx.n
    if (F.parity + G.parity - n) % 2:
        return Fraction(0)
    Y = F.target
    s = supertrace(F.matrix @ G.matrix @ cached_wedge(Y, naive))
    return kl_sign(n) * residue(s, mc)


def kl_pairing_reversed(F: Morphism, G: Morphism, mc: MilnorContext) -> Fraction:
    """Alternative convention: the composite ``G∘F`` of ``X`` with ``(dQ_X)^n``."""
    n = mc.ctx.n
    if (F.parity + G.parity - n) % 2:
        return Fraction(0)
    X = F.source
    s = supertrace(G.matrix @ F.matrix @ cached_wedge(X))
    return kl_sign(n) * residue(s, mc)


@dataclass
class GramBlock:
    parity: int  # parity of the H(X, Y) side
    matrix: list[list[Fraction]]
    determinant: Fraction | None  # None for non-square blocks

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), (len(self.matrix[0]) if self.matrix else 0)


@dataclass
class GramReport:
    blocks: list[GramBlock]
    forward: CohomologyReport
    backward: CohomologyReport
    elapsed: float = 0.0
    determinant: Fraction = field(init=False)
    nondegenerate: bool = field(init=False)

    def __post_init__(self):
        det = Fraction(1)
        ok = True
        for b in self.blocks:
            if b.determinant is None:
                ok = False
                det = Fraction(0)
            else:
                det *= b.determinant
        self.determinant = det
        self.nondegenerate = ok and det != 0


def _det(M: list[list[Fraction]]) -> Fraction:
    if not M:
        return Fraction(1)
    rows = [{j: v for j, v in enumerate(r) if v} for r in M]
    return linalg.from_qq(linalg.matrix(rows, len(M)).to_dense().det())


def gram_matrix(
    X: MatrixFactorization,
    Y: MatrixFactorization,
    mc: MilnorContext,
    *,
    forward: CohomologyReport | None = None,
    backward: CohomologyReport | None = None,
    trunc: int | None = None,
) -> GramReport:
    """Pair ``H^p(Hom(X, Y))`` against ``H^{n-p}(Hom(Y, X))`` for both ``p``."""
    t0 = time.perf_counter()
    forward = forward or hom_cohomology(X, Y, mc, trunc)
    backward = backward or hom_cohomology(Y, X, mc, trunc)
    n = mc.ctx.n
    blocks = []
    for p in (0, 1):
        q = (n - p) % 2
        left = forward.representatives[p]
        right = backward.representatives[q]
        M = [[kl_pairing(F, G, mc) for G in right] for F in left]
        det = _det(M) if len(left) == len(right) else None
        blocks.append(GramBlock(p, M, det))
    return GramReport(blocks, forward, backward, time.perf_counter() - t0)
