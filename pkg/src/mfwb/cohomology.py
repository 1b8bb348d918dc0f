"""Cohomology of the Z/2-graded Hom complex between two factorizations.

Morphism spaces are truncated at total degree ``< D``.  For each parity ``p``

* ``Z_D`` is the exact kernel of ``d`` on morphisms with entries of degree
  ``< D`` (no truncation of the output, so every cycle is closed on the nose);
* ``B_D`` is the set of boundaries ``d(G)`` that land in degree ``< D`` with
  ``G`` of degree ``< D + s``, where ``s`` is the largest degree of an entry
  of ``Q``.

``h^p = dim Z_D - dim B_D`` is accepted once three consecutive ``D`` agree.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import ComputationError, ContextError
from .mfcore import MatrixFactorization, Morphism, hom_differential
from .milnor import MilnorContext
from .polyring import Polynomial, monomials_up_to
from .superlin import SuperMatrix

MAX_EXTRA_DEGREES = 24


@dataclass
class CohomologyReport:
    source: MatrixFactorization
    target: MatrixFactorization
    dims: tuple[int, int]
    representatives: tuple[tuple[Morphism, ...], tuple[Morphism, ...]]
    truncation: int
    trajectory: list[tuple[int, int, int]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def h0(self) -> int:
        return self.dims[0]

    @property
    def h1(self) -> int:
        return self.dims[1]

    @property
    def euler(self) -> int:
        return self.dims[0] - self.dims[1]


class _HomSpace:
    """Coordinates ``(i, j, e)`` on parity-``p`` morphisms ``X -> Y``."""

    def __init__(self, X: MatrixFactorization, Y: MatrixFactorization):
        self.X, self.Y = X, Y
        self.n = X.ctx.n
        self.rows = 2 * Y.rank
        self.cols = 2 * X.rank
        self.QX = X.Q.rows
        self.QY = Y.Q.rows
        self.slack = max(
            [p.degree() for r in self.QX + self.QY for p in r if p] or [0]
        )
        self._d_cache: dict[tuple[int, int], tuple[list, list]] = {}

    def positions(self, parity: int) -> list[tuple[int, int]]:
        rX, rY = self.X.rank, self.Y.rank
        return [
            (i, j) for i in range(self.rows) for j in range(self.cols)
            if (int(i >= rY) + int(j >= rX)) % 2 == parity
        ]

    def basis(self, parity: int, D: int) -> list[tuple[int, int, tuple]]:
        monos = monomials_up_to(self.n, D - 1)
        return [(i, j, e) for (i, j) in self.positions(parity) for e in monos]

    def d_columns(self, parity: int, D: int):
        """Images ``d(E_ij x^e)`` as sparse dicts keyed by ``(k, l, monomial)``."""
        key = (parity, D)
        if key in self._d_cache:
            return self._d_cache[key]
        sign = -1 if parity == 0 else 1
        basis = self.basis(parity, D)
        cols = []
        for i, j, e in basis:
            out: dict[tuple, Fraction] = {}
            for k in range(self.rows):
                q = self.QY[k][i]
                for qe, c in q.terms.items():
                    m = (k, j, tuple(a + b for a, b in zip(qe, e)))
                    out[m] = out.get(m, 0) + c
            for l in range(self.cols):
                q = self.QX[j][l]
                for qe, c in q.terms.items():
                    m = (i, l, tuple(a + b for a, b in zip(qe, e)))
                    out[m] = out.get(m, 0) + sign * c
            cols.append({m: v for m, v in out.items() if v})
        self._d_cache[key] = (basis, cols)
        return basis, cols

    def to_morphism(self, parity: int, basis, vec: dict[int, Fraction]) -> Morphism:
        variables = self.X.variables
        grid: list[list[dict]] = [[{} for _ in range(self.cols)] for _ in range(self.rows)]
        for k, c in vec.items():
            i, j, e = basis[k]
            grid[i][j][e] = c
        rows = [[Polynomial(variables, t) for t in r] for r in grid]
        M = SuperMatrix(variables, self.Y.ranks, self.X.ranks, rows, parity, check=False)
        return Morphism(self.X, self.Y, M, parity)


def _index_columns(cols, keyfilter=None):
    """Re-key sparse column dicts by consecutive integers."""
    index: dict = {}
    out = []
    for col in cols:
        c = {}
        for m, v in col.items():
            if keyfilter is not None and not keyfilter(m):
                continue
            c[index.setdefault(m, len(index))] = v
        out.append(c)
    return out, len(index)


def _kernel(cols, keyfilter=None) -> list[dict[int, Fraction]]:
    icols, nrows = _index_columns(cols, keyfilter)
    if nrows == 0:
        return [{k: Fraction(1)} for k in range(len(cols))]
    return linalg.nullspace(linalg.from_columns(icols, nrows))


def _apply(cols, vec: dict[int, Fraction]) -> dict:
    out: dict = {}
    for k, a in vec.items():
        for m, v in cols[k].items():
            s = out.get(m, 0) + a * v
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _level(space: _HomSpace, parity: int, D: int, want_reps: bool):
    """Dimension of ``Z_D/B_D`` in the given parity and optionally representatives."""
    basis, cols = space.d_columns(parity, D)
    Z = _kernel(cols)
    Dg = D + space.slack
    gbasis, gcols = space.d_columns(1 - parity, Dg)
    K = _kernel(gcols, keyfilter=lambda m: sum(m[2]) >= D)
    Zg = _kernel(gcols)
    dimB = len(K) - len(Zg)
    h = len(Z) - dimB
    if not want_reps:
        return h, None
    coord = {b: k for k, b in enumerate(basis)}
    bvecs = []
    for kv in K:
        img = _apply(gcols, kv)
        if img:
            bvecs.append({coord[m]: v for m, v in img.items()})
    allvecs = bvecs + Z
    chosen = linalg.independent_columns(allvecs, len(basis))
    nb = linalg.rank(linalg.from_columns(bvecs, len(basis))) if bvecs else 0
    if nb != dimB:
        raise ComputationError(f"boundary rank mismatch at D = {D}: {nb} vs {dimB}")
    reps = [space.to_morphism(parity, basis, allvecs[k]) for k in chosen if k >= len(bvecs)]
    if len(reps) != h:
        raise ComputationError(f"representative count {len(reps)} differs from dimension {h} at D = {D}")
    return h, reps


def hom_cohomology(
    X: MatrixFactorization,
    Y: MatrixFactorization,
    mc: MilnorContext | None = None,
    trunc: int | None = None,
    window: int = 3,
) -> CohomologyReport:
    """Dimensions and closed representatives of ``H^0`` and ``H^1`` of ``Hom(X, Y)``."""
    if X.ctx != Y.ctx:
        raise ContextError("factorizations live over different rings")
    t0 = time.perf_counter()
    if trunc is None:
        if mc is None:
            mc = MilnorContext(X.ctx)
        trunc = 2 * mc.mu + 2
    space = _HomSpace(X, Y)
    trajectory: list[tuple[int, int, int]] = []
    D = trunc
    while True:
        h0, _ = _level(space, 0, D, False)
        h1, _ = _level(space, 1, D, False)
        trajectory.append((D, h0, h1))
        if len(trajectory) >= window and len({t[1:] for t in trajectory[-window:]}) == 1:
            break
        D += 1
        if D > trunc + MAX_EXTRA_DEGREES:
            raise ComputationError(f"cohomology did not stabilize; trajectory {trajectory}")
    Dstar = trajectory[-window][0]
    _, reps0 = _level(space, 0, Dstar, True)
    _, reps1 = _level(space, 1, Dstar, True)
    for F in reps0 + reps1:
        if not hom_differential(F).is_zero():
            raise ComputationError("internal error: representative is not closed")
    return CohomologyReport(
        X, Y, (len(reps0), len(reps1)), (tuple(reps0), tuple(reps1)), Dstar, trajectory,
        time.perf_counter() - t0,
    )


def euler_characteristic(X: MatrixFactorization, Y: MatrixFactorization, mc: MilnorContext | None = None, **kw) -> int:
    return hom_cohomology(X, Y, mc, **kw).euler


def null_homotopy(F: Morphism, i: int) -> Morphism:
    """``d_i Q_target ∘ F``; for closed ``F`` its differential is ``(d_i w) F``."""
    G = F.target.dQ[i] @ F.matrix
    return Morphism(F.source, F.target, G, 1 - F.parity)
