"""Z/2-graded matrices with polynomial entries.

A :class:`SuperMatrix` maps a graded free module with ranks ``col_ranks =
(c0, c1)`` to one with ranks ``row_ranks = (r0, r1)``.  Rows and columns are
ordered even-first, so the even part occupies the diagonal blocks and the odd
part the anti-diagonal blocks::

        [ A  B ]     A: r0 x c0   B: r0 x c1
        [ C  D ]     C: r1 x c0   D: r1 x c1

Square matrices (``row_ranks == col_ranks``) carry a supertrace.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .errors import ContextError, ValidationError
from .polyring import Polynomial, Scalar


def _entry_parity(i: int, j: int, row_ranks, col_ranks) -> int:
    return (int(i >= row_ranks[0]) + int(j >= col_ranks[0])) % 2


class SuperMatrix:
    """Immutable graded matrix; ``parity`` is 0, 1 or None (mixed)."""

    __slots__ = ("variables", "row_ranks", "col_ranks", "rows", "parity")

    def __init__(
        self,
        variables: Sequence[str],
        row_ranks: tuple[int, int],
        col_ranks: tuple[int, int],
        rows: Sequence[Sequence[Polynomial]],
        parity: int | None = None,
        *,
        check: bool = True,
    ):
        self.variables = tuple(variables)
        self.row_ranks = tuple(row_ranks)
        self.col_ranks = tuple(col_ranks)
        self.rows = tuple(tuple(r) for r in rows)
        nr, nc = sum(self.row_ranks), sum(self.col_ranks)
        if check:
            if len(self.rows) != nr or any(len(r) != nc for r in self.rows):
                raise ContextError(f"entries do not form a {nr}x{nc} grid")
            for r in self.rows:
                for p in r:
                    if not isinstance(p, Polynomial) or p.variables != self.variables:
                        raise ContextError("supermatrix entry outside the matrix context")
        inferred = self._infer_parity()
        if parity is None:
            parity = inferred
        elif check and inferred is not None and inferred != parity and not self.is_zero():
            raise ValidationError(f"declared parity {parity} but entries have parity {inferred}")
        elif check and inferred is None:
            raise ValidationError(f"declared parity {parity} but entries are of mixed parity")
        self.parity = parity

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, variables, row_ranks, col_ranks, parity: int | None = 0) -> "SuperMatrix":
        variables = tuple(variables)
        z = Polynomial.zero(variables)
        nr, nc = sum(row_ranks), sum(col_ranks)
        return cls(variables, row_ranks, col_ranks, [[z] * nc for _ in range(nr)], parity, check=False)

    @classmethod
    def identity(cls, variables, ranks: tuple[int, int]) -> "SuperMatrix":
        variables = tuple(variables)
        n = sum(ranks)
        z = Polynomial.zero(variables)
        one = Polynomial.constant(variables, 1)
        rows = [[one if i == j else z for j in range(n)] for i in range(n)]
        return cls(variables, ranks, ranks, rows, 0, check=False)

    @classmethod
    def from_blocks(cls, variables, A, B, C, D, parity: int | None = None) -> "SuperMatrix":
        """Assemble from the four blocks (lists of rows); any block may be empty."""
        r0, r1 = len(A) if A else len(B), len(C) if C else len(D)
        c0 = len(A[0]) if A and A[0] else (len(C[0]) if C and C[0] else 0)
        c1 = len(B[0]) if B and B[0] else (len(D[0]) if D and D[0] else 0)
        z = Polynomial.zero(tuple(variables))
        rows = []
        for i in range(r0):
            rows.append([A[i][j] if A else z for j in range(c0)] + [B[i][j] if B else z for j in range(c1)])
        for i in range(r1):
            rows.append([C[i][j] if C else z for j in range(c0)] + [D[i][j] if D else z for j in range(c1)])
        return cls(variables, (r0, r1), (c0, c1), rows, parity)

    # -- structure --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return sum(self.row_ranks), sum(self.col_ranks)

    @property
    def is_square(self) -> bool:
        return self.row_ranks == self.col_ranks

    def entry_parity(self, i: int, j: int) -> int:
        return _entry_parity(i, j, self.row_ranks, self.col_ranks)

    def _infer_parity(self) -> int | None:
        has = [False, False]
        for i, r in enumerate(self.rows):
            for j, p in enumerate(r):
                if p:
                    has[self.entry_parity(i, j)] = True
        if has[0] and has[1]:
            return None
        return 1 if has[1] else 0

    def is_zero(self) -> bool:
        return not any(p for r in self.rows for p in r)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def blocks(self):
        """Return the blocks ``(A, B, C, D)`` as tuples of rows."""
        r0, c0 = self.row_ranks[0], self.col_ranks[0]
        A = tuple(r[:c0] for r in self.rows[:r0])
        B = tuple(r[c0:] for r in self.rows[:r0])
        C = tuple(r[:c0] for r in self.rows[r0:])
        D = tuple(r[c0:] for r in self.rows[r0:])
        return A, B, C, D

    def homogeneous_part(self, parity: int) -> "SuperMatrix":
        z = Polynomial.zero(self.variables)
        rows = [
            [p if self.entry_parity(i, j) == parity else z for j, p in enumerate(r)]
            for i, r in enumerate(self.rows)
        ]
        return SuperMatrix(self.variables, self.row_ranks, self.col_ranks, rows, parity, check=False)

    def require_homogeneous(self, what: str = "operation") -> int:
        if self.parity is None:
            raise ValidationError(f"{what} needs a homogeneous supermatrix, got mixed parity")
        return self.parity

    # -- arithmetic -------------------------------------------------------

    def _check_same(self, other: "SuperMatrix"):
        if not isinstance(other, SuperMatrix):
            raise TypeError(f"expected SuperMatrix, got {type(other).__name__}")
        if other.variables != self.variables:
            raise ContextError("supermatrices live in different contexts")
        if other.row_ranks != self.row_ranks or other.col_ranks != self.col_ranks:
            raise ContextError(
                f"shape mismatch: {self.row_ranks}x{self.col_ranks} vs {other.row_ranks}x{other.col_ranks}"
            )

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._check_same(other)
        rows = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        par = self.parity if self.parity == other.parity else None
        if par is None:
            return SuperMatrix(self.variables, self.row_ranks, self.col_ranks, rows, check=False)
        return SuperMatrix(self.variables, self.row_ranks, self.col_ranks, rows, par, check=False)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self + (-other)

    def __neg__(self) -> "SuperMatrix":
        return SuperMatrix(
            self.variables, self.row_ranks, self.col_ranks,
            [[-p for p in r] for r in self.rows], self.parity, check=False,
        )

    def scale(self, c: "Scalar | Polynomial") -> "SuperMatrix":
        """Multiply every entry by a scalar or an (even) polynomial."""
        if isinstance(c, Polynomial) and c.variables != self.variables:
            raise ContextError("scaling polynomial lives in a different context")
        rows = [[p * c for p in r] for r in self.rows]
        return SuperMatrix(self.variables, self.row_ranks, self.col_ranks, rows, self.parity, check=False)

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        if other.variables != self.variables:
            raise ContextError("supermatrices live in different contexts")
        if self.col_ranks != other.row_ranks:
            raise ContextError(
                f"cannot compose {self.row_ranks}x{self.col_ranks} with {other.row_ranks}x{other.col_ranks}"
            )
        z = Polynomial.zero(self.variables)
        ncols = sum(other.col_ranks)
        cols = list(zip(*other.rows)) if other.rows else [() for _ in range(ncols)]
        rows = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out_row = []
            for col in cols:
                acc = z
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                out_row.append(acc)
            rows.append(out_row)
        if self.parity is not None and other.parity is not None:
            par = (self.parity + other.parity) % 2
            return SuperMatrix(self.variables, self.row_ranks, other.col_ranks, rows, par, check=False)
        return SuperMatrix(self.variables, self.row_ranks, other.col_ranks, rows, check=False)

    def __mul__(self, other):
        if isinstance(other, SuperMatrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.row_ranks == other.row_ranks
            and self.col_ranks == other.col_ranks
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.row_ranks, self.col_ranks, self.rows))

    def map_entries(self, fn: Callable[[Polynomial], Polynomial], variables=None) -> "SuperMatrix":
        variables = self.variables if variables is None else tuple(variables)
        rows = [[fn(p) for p in r] for r in self.rows]
        return SuperMatrix(variables, self.row_ranks, self.col_ranks, rows, self.parity, check=False)

    def derivative(self, i: int) -> "SuperMatrix":
        return self.map_entries(lambda p: p.derivative(i))

    def substitute(self, assignment, target=None) -> "SuperMatrix":
        target = self.variables if target is None else tuple(target)
        return self.map_entries(lambda p: p.substitute(assignment, target), target)

    def direct_sum(self, other: "SuperMatrix") -> "SuperMatrix":
        """Block-diagonal sum, keeping even summands before odd ones."""
        if other.variables != self.variables:
            raise ContextError("supermatrices live in different contexts")
        z = Polynomial.zero(self.variables)
        (a0, a1), (b0, b1) = self.row_ranks, self.col_ranks
        (c0, c1), (d0, d1) = other.row_ranks, other.col_ranks

        def place(M: "SuperMatrix", row_off, col_off, nrows, ncols, r_split, c_split):
            grid = [[z] * ncols for _ in range(nrows)]
            for i, r in enumerate(M.rows):
                ri = row_off[0] + i if i < r_split else row_off[1] + (i - r_split)
                for j, p in enumerate(r):
                    cj = col_off[0] + j if j < c_split else col_off[1] + (j - c_split)
                    grid[ri][cj] = p
            return grid

        nrows, ncols = a0 + c0 + a1 + c1, b0 + d0 + b1 + d1
        g1 = place(self, (0, a0 + c0), (0, b0 + d0), nrows, ncols, a0, b0)
        g2 = place(other, (a0, a0 + c0 + a1), (b0, b0 + d0 + b1), nrows, ncols, c0, d0)
        rows = [[p if p else q for p, q in zip(r1, r2)] for r1, r2 in zip(g1, g2)]
        par = self.parity if self.parity == other.parity else None
        return SuperMatrix(self.variables, (a0 + c0, a1 + c1), (b0 + d0, b1 + d1), rows, par, check=False)

    def swap_grading(self) -> "SuperMatrix":
        """Conjugate by the parity swap: odd summands become even and vice versa."""
        (r0, r1), (c0, c1) = self.row_ranks, self.col_ranks
        row_perm = list(range(r0, r0 + r1)) + list(range(r0))
        col_perm = list(range(c0, c0 + c1)) + list(range(c0))
        rows = [[self.rows[i][j] for j in col_perm] for i in row_perm]
        return SuperMatrix(self.variables, (r1, r0), (c1, c0), rows, self.parity, check=False)

    def to_strings(self) -> list[list[str]]:
        return [[str(p) for p in r] for r in self.rows]

    def __repr__(self) -> str:
        return f"SuperMatrix({self.row_ranks}x{self.col_ranks}, parity={self.parity}, {self.to_strings()})"


def supertrace(M: SuperMatrix) -> Polynomial:
    """``trace(A) - trace(D)`` for a square supermatrix."""
    if not M.is_square:
        raise ContextError(f"supertrace of non-square supermatrix {M.row_ranks}x{M.col_ranks}")
    r0 = M.row_ranks[0]
    acc = Polynomial.zero(M.variables)
    for i, r in enumerate(M.rows):
        acc = acc + r[i] if i < r0 else acc - r[i]
    return acc


def supercommutator(M: SuperMatrix, N: SuperMatrix) -> SuperMatrix:
    """``MN - (-1)^{|M||N|} NM`` for homogeneous M, N."""
    pm = M.require_homogeneous("supercommutator")
    pn = N.require_homogeneous("supercommutator")
    MN, NM = M @ N, N @ M
    return MN - NM if (pm * pn) % 2 == 0 else MN + NM


def matmul(M: SuperMatrix, N: SuperMatrix) -> SuperMatrix:
    return M @ N


def add(M: SuperMatrix, N: SuperMatrix) -> SuperMatrix:
    return M + N


def scale(M: SuperMatrix, c) -> SuperMatrix:
    return M.scale(c)


def as_fraction(c) -> Fraction:
    return Fraction(c)
