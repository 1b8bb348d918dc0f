"""Exact sparse linear algebra over QQ.

Thin helpers over sympy's sparse ``DomainMatrix`` (gmpy2-backed rationals).
Vectors travel as ``dict[int, Fraction]``; only nonzero entries are stored.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

SparseVec = dict[int, Fraction]


def to_qq(c) -> object:
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def from_qq(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def matrix(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> DomainMatrix:
    """Sparse ``len(rows) x ncols`` matrix from row dictionaries."""
    data = {}
    for i, row in enumerate(rows):
        r = {j: to_qq(v) for j, v in row.items() if v}
        if r:
            data[i] = r
    return DomainMatrix(data, (len(rows), ncols), QQ)


def from_columns(cols: Sequence[Mapping[int, Fraction]], nrows: int) -> DomainMatrix:
    data: dict[int, dict[int, object]] = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            if v:
                data.setdefault(i, {})[j] = to_qq(v)
    return DomainMatrix(data, (nrows, len(cols)), QQ)


def rows_of(M: DomainMatrix) -> list[SparseVec]:
    nrows = M.shape[0]
    rep = M.to_sparse().rep
    return [{j: from_qq(v) for j, v in rep.get(i, {}).items()} for i in range(nrows)]


def columns_of(M: DomainMatrix) -> list[SparseVec]:
    return rows_of(M.transpose())


def rref(M: DomainMatrix) -> tuple[list[SparseVec], tuple[int, ...]]:
    """Reduced row echelon form: nonzero rows and pivot columns."""
    R, pivots = M.to_sparse().rref()
    rows = rows_of(R)[: len(pivots)]
    return rows, tuple(pivots)


def rank(M: DomainMatrix) -> int:
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    return M.to_sparse().rank()


def nullspace(M: DomainMatrix) -> list[SparseVec]:
    """Basis of ``{v : M v = 0}`` as sparse vectors of length ``M.shape[1]``."""
    nrows, ncols = M.shape
    if ncols == 0:
        return []
    if nrows == 0:
        return [{j: Fraction(1)} for j in range(ncols)]
    rows, pivots = rref(M)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v: SparseVec = {free: Fraction(1)}
        for row, pc in zip(rows, pivots):
            c = row.get(free)
            if c:
                v[pc] = -c
        basis.append(v)
    return basis


def independent_columns(cols: Sequence[Mapping[int, Fraction]], nrows: int) -> tuple[int, ...]:
    """Indices of the greedy (left-to-right) maximal independent subset of ``cols``."""
    if not cols:
        return ()
    _, pivots = rref(from_columns(cols, nrows))
    return pivots


def solve(rows: Sequence[Mapping[int, Fraction]], rhs: Sequence[Fraction], ncols: int) -> SparseVec | None:
    """One solution of ``A x = b`` (free variables zero), or None if inconsistent."""
    aug = [dict(r) for r in rows]
    for i, b in enumerate(rhs):
        if b:
            aug[i][ncols] = Fraction(b)
    R, pivots = rref(matrix(aug, ncols + 1))
    if ncols in pivots:
        return None
    x: SparseVec = {}
    for row, pc in zip(R, pivots):
        b = row.get(ncols)
        if b:
            x[pc] = b
    return x


def reduce_vector(v: Mapping[int, Fraction], rref_rows: Sequence[SparseVec], pivots: Sequence[int]) -> SparseVec:
    """Eliminate pivot coordinates of ``v`` against a reduced row echelon basis."""
    out = dict(v)
    for row, pc in zip(rref_rows, pivots):
        c = out.get(pc)
        if c:
            for j, a in row.items():
                nv = out.get(j, 0) - c * a
                if nv:
                    out[j] = nv
                else:
                    out.pop(j, None)
    return out


def dense_identity(n: int) -> DomainMatrix:
    return DomainMatrix({i: {i: QQ(1)} for i in range(n)}, (n, n), QQ)


def zero(nrows: int, ncols: int) -> DomainMatrix:
    return DomainMatrix({}, (nrows, ncols), QQ)


def is_zero(M: DomainMatrix) -> bool:
    return not any(M.to_sparse().rep.values())


def entries(M: DomainMatrix) -> Iterable[tuple[int, int, Fraction]]:
    for i, row in M.to_sparse().rep.items():
        for j, v in row.items():
            yield i, j, from_qq(v)
