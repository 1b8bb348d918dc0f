"""Matrix factorizations, Hom-complex differentials and the product (dQ)^n.

A factorization of ``w`` is a pair of square matrices with
``phi*psi = psi*phi = w*I``.  It is stored together with the odd supermatrix
``Q = [[0, phi], [psi, 0]]`` so that ``Q @ Q == w * I``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import ContextError, ValidationError
from .polyring import Polynomial, RingContext
from .superlin import SuperMatrix


def _as_grid(rows, ctx: RingContext, what: str) -> list[list[Polynomial]]:
    grid = []
    for r in rows:
        out = []
        for p in r:
            if isinstance(p, str):
                p = ctx.parse(p)
            elif isinstance(p, (int,)) or not isinstance(p, Polynomial):
                p = ctx.const(p)
            if p.variables != ctx.variables:
                raise ContextError(f"{what}: entry lives over {p.variables}, expected {ctx.variables}")
            out.append(p)
        grid.append(out)
    return grid


def _matmul(A, B, zero: Polynomial):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), zero) for j in range(len(B[0]))] for i in range(len(A))]


@dataclass(frozen=True, eq=False)
class MatrixFactorization:
    """A validated pair ``(phi, psi)``; construct through :func:`validate_mf`."""

    ctx: RingContext
    phi: tuple[tuple[Polynomial, ...], ...]
    psi: tuple[tuple[Polynomial, ...], ...]
    name: str = field(default="", compare=False)

    @property
    def rank(self) -> int:
        return len(self.phi)

    @property
    def ranks(self) -> tuple[int, int]:
        return (self.rank, self.rank)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ctx.variables

    @cached_property
    def Q(self) -> SuperMatrix:
        r = self.rank
        z = self.ctx.zero()
        rows = [[z] * r + list(self.phi[i]) for i in range(r)]
        rows += [list(self.psi[i]) + [z] * r for i in range(r)]
        return SuperMatrix(self.variables, (r, r), (r, r), rows, 1, check=False)

    @cached_property
    def dQ(self) -> tuple[SuperMatrix, ...]:
        """Partial derivatives of ``Q`` in variable order."""
        return tuple(self.Q.derivative(i) for i in range(self.ctx.n))

    def identity(self) -> "Morphism":
        return Morphism(self, self, SuperMatrix.identity(self.variables, self.ranks), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixFactorization):
            return NotImplemented
        return self.ctx == other.ctx and self.phi == other.phi and self.psi == other.psi

    def __hash__(self) -> int:
        return hash((self.ctx.variables, self.phi, self.psi))

    def __repr__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        phi = [[str(p) for p in r] for r in self.phi]
        psi = [[str(p) for p in r] for r in self.psi]
        return f"MatrixFactorization({label}phi={phi}, psi={psi})"


def validate_mf(phi, psi, ctx: RingContext, name: str = "") -> MatrixFactorization:
    """Check ``phi*psi = psi*phi = w*I`` exactly and build the factorization.

    Entries may be polynomials, integers or expression strings.  On failure the
    :class:`ValidationError` names the product and the first offending entry.
    """
    label = name or "factorization"
    phi = _as_grid(phi, ctx, label)
    psi = _as_grid(psi, ctx, label)
    r = len(phi)
    if r == 0:
        raise ValidationError(f"{label}: empty matrices", where=name or None)
    for M, nm in ((phi, "phi"), (psi, "psi")):
        if len(M) != r or any(len(row) != r for row in M):
            raise ValidationError(f"{label}: {nm} is not a square {r}x{r} matrix", where=name or None)
    z = ctx.zero()
    w = ctx.w
    for A, B, nm in ((phi, psi, "phi*psi"), (psi, phi, "psi*phi")):
        P = _matmul(A, B, z)
        for i in range(r):
            for j in range(r):
                expect = w if i == j else z
                if P[i][j] != expect:
                    raise ValidationError(
                        f"{label}: {nm}[{i}][{j}] = {P[i][j]} but expected {expect}",
                        where=name or None,
                        entry=(nm, i, j),
                    )
    return MatrixFactorization(ctx, tuple(map(tuple, phi)), tuple(map(tuple, psi)), name)


@dataclass(frozen=True, eq=False)
class Morphism:
    """A homogeneous element of ``Hom(source, target)``.

    ``matrix`` has row ranks of the target and column ranks of the source.
    """

    source: MatrixFactorization
    target: MatrixFactorization
    matrix: SuperMatrix
    parity: int

    def __post_init__(self):
        if self.source.ctx != self.target.ctx:
            raise ContextError("source and target live over different rings")
        M = self.matrix
        if M.row_ranks != self.target.ranks or M.col_ranks != self.source.ranks:
            raise ContextError(
                f"morphism matrix is {M.row_ranks}x{M.col_ranks}, "
                f"expected {self.target.ranks}x{self.source.ranks}"
            )
        if self.parity not in (0, 1):
            raise ValidationError(f"morphism parity must be 0 or 1, got {self.parity!r}")
        if M.parity is None or (M.parity != self.parity and not M.is_zero()):
            raise ValidationError(f"matrix entries do not have declared parity {self.parity}")
        if M.parity != self.parity:
            object.__setattr__(self, "matrix", SuperMatrix(
                M.variables, M.row_ranks, M.col_ranks, M.rows, self.parity, check=False))

    @classmethod
    def from_rows(cls, source, target, rows, parity: int) -> "Morphism":
        grid = _as_grid(rows, source.ctx, "morphism")
        M = SuperMatrix(source.variables, target.ranks, source.ranks, grid)
        return cls(source, target, M, parity)

    @property
    def ctx(self) -> RingContext:
        return self.source.ctx

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_closed(self) -> bool:
        return hom_differential(self).is_zero()

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check(other)
        return Morphism(self.source, self.target, self.matrix + other.matrix, self.parity)

    def __sub__(self, other: "Morphism") -> "Morphism":
        self._check(other)
        return Morphism(self.source, self.target, self.matrix - other.matrix, self.parity)

    def __neg__(self) -> "Morphism":
        return Morphism(self.source, self.target, -self.matrix, self.parity)

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, self.matrix.scale(c), self.parity)

    def compose(self, other: "Morphism") -> "Morphism":
        """``self ∘ other``: apply ``other`` first."""
        if other.target != self.source:
            raise ContextError("morphisms are not composable")
        return Morphism(other.source, self.target, self.matrix @ other.matrix, (self.parity + other.parity) % 2)

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return self.compose(other)

    def _check(self, other: "Morphism"):
        if other.source != self.source or other.target != self.target or other.parity != self.parity:
            raise ContextError("morphisms differ in source, target or parity")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.parity == other.parity and self.matrix == other.matrix)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.parity, self.matrix))

    def __repr__(self) -> str:
        return f"Morphism(parity={self.parity}, {self.matrix.to_strings()})"


def hom_differential(F: Morphism) -> Morphism:
    """``d(F) = Q_target F - (-1)^|F| F Q_source``; flips parity."""
    QF = F.target.Q @ F.matrix
    FQ = F.matrix @ F.source.Q
    M = QF - FQ if F.parity == 0 else QF + FQ
    return Morphism(F.source, F.target, M, 1 - F.parity)


def dq_wedge_naive(X: MatrixFactorization) -> SuperMatrix:
    """Literal sum over all ``n!`` orderings of the partial derivatives of ``Q``."""
    n = X.ctx.n
    dQ = X.dQ
    acc = SuperMatrix.zero(X.variables, X.ranks, X.ranks, n % 2)
    for perm in itertools.permutations(range(n)):
        term = dQ[perm[0]]
        for k in perm[1:]:
            term = term @ dQ[k]
        acc = acc + term if _perm_sign(perm) > 0 else acc - term
    return SuperMatrix(acc.variables, acc.row_ranks, acc.col_ranks, acc.rows, n % 2, check=False)


def _perm_sign(perm: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def dq_wedge(X: MatrixFactorization, *, naive: bool = False) -> SuperMatrix:
    """Antisymmetrized product ``sum_sigma sign(sigma) d_{sigma 1}Q ... d_{sigma n}Q``.

    The default path expands along the first factor: the antisymmetrized
    product over an index set S is ``sum_i (-1)^{pos_S(i)} d_iQ * W(S - i)``,
    with ``W`` memoized over subsets (2^n products instead of n!).
    """
    if naive:
        return dq_wedge_naive(X)
    return _dq_wedge_subsets(X.dQ, X.variables, X.ranks)


def _dq_wedge_subsets(dQ, variables, ranks) -> SuperMatrix:
    n = len(dQ)
    memo: dict[int, SuperMatrix] = {0: SuperMatrix.identity(variables, ranks)}
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            mask = sum(1 << i for i in S)
            acc = None
            for pos, i in enumerate(S):
                term = dQ[i] @ memo[mask & ~(1 << i)]
                if acc is None:
                    acc = term if pos % 2 == 0 else -term
                else:
                    acc = acc + term if pos % 2 == 0 else acc - term
            memo[mask] = SuperMatrix(
                variables, ranks, ranks, acc.rows, size % 2, check=False
            )
    return memo[(1 << n) - 1]


def direct_sum(X: MatrixFactorization, Y: MatrixFactorization) -> MatrixFactorization:
    if X.ctx != Y.ctx:
        raise ContextError("direct sum of factorizations over different rings")
    z = X.ctx.zero()
    r, s = X.rank, Y.rank

    def block(A, B):
        rows = [list(A[i]) + [z] * s for i in range(r)]
        rows += [[z] * r + list(B[i]) for i in range(s)]
        return tuple(map(tuple, rows))

    name = f"{X.name}+{Y.name}" if X.name and Y.name else ""
    return MatrixFactorization(X.ctx, block(X.phi, Y.phi), block(X.psi, Y.psi), name)


def shift(X: MatrixFactorization) -> MatrixFactorization:
    """``X[1]``: summands swapped and ``Q`` negated, i.e. ``(phi, psi) -> (-psi, -phi)``."""
    neg = lambda M: tuple(tuple(-p for p in row) for row in M)
    return MatrixFactorization(X.ctx, neg(X.psi), neg(X.phi), f"{X.name}[1]" if X.name else "")


def leibniz_defect(X: MatrixFactorization, i: int) -> SuperMatrix:
    """``d_iQ Q + Q d_iQ - d_i w * I``; zero for every valid factorization."""
    Q, dQ = X.Q, X.dQ[i]
    I = SuperMatrix.identity(X.variables, X.ranks)
    return dQ @ Q + Q @ dQ - I.scale(X.ctx.w.derivative(i))


def square_defect(X: MatrixFactorization) -> SuperMatrix:
    I = SuperMatrix.identity(X.variables, X.ranks)
    return X.Q @ X.Q - I.scale(X.ctx.w)
