"""Deformation retracts of finite-dimensional complexes and the basic perturbation lemma.

A :class:`RetractDatum` consists of complexes ``(A, d_A)`` and ``(B, d_B)``
with maps ``iota: A -> B``, ``p: B -> A`` and ``h: B -> B`` satisfying
``p iota = id`` and ``iota p = id + d_B h + h d_B``.  All maps are exact
sparse matrices acting on column vectors.

:func:`stab_retract` builds the Koszul retract of ``Hom(E_y, E_x) (x) R~<theta>``
onto ``Hom(E, E)``, truncated at weight ``D`` (polynomial degree plus number of
thetas).  Every operator involved is non-decreasing in weight, so the
truncation is a quotient complex and the lemma applies verbatim.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy.polys.matrices import DomainMatrix

from . import linalg
from .errors import ComputationError, ValidationError
from .koszulhtpy import (
    EtaMachine,
    FormMatrix,
    ThetaForm,
    augmentation,
)
from .mfcore import MatrixFactorization
from .polyring import Polynomial, monomials_up_to

DEFAULT_CAP = 64


def _eq(M: DomainMatrix, N: DomainMatrix) -> bool:
    return linalg.is_zero(M - N)


def _parity_ok(M: DomainMatrix, row_par: Sequence[int], col_par: Sequence[int], degree: int) -> bool:
    for i, j, _ in linalg.entries(M):
        if (row_par[i] - col_par[j] - degree) % 2:
            return False
    return True


@dataclass
class RetractDatum:
    dA: DomainMatrix
    dB: DomainMatrix
    iota: DomainMatrix
    p: DomainMatrix
    h: DomainMatrix
    parA: tuple[int, ...]
    parB: tuple[int, ...]

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.parA), len(self.parB)

    def identities(self) -> dict[str, bool]:
        a, b = self.dims
        IA, IB = linalg.dense_identity(a), linalg.dense_identity(b)
        dA, dB, i, p, h = self.dA, self.dB, self.iota, self.p, self.h
        return {
            "p iota = id": _eq(p * i, IA),
            "iota p = id + dh + hd": _eq(i * p, IB + dB * h + h * dB),
            "d_B iota = iota d_A": _eq(dB * i, i * dA),
            "d_A p = p d_B": _eq(dA * p, p * dB),
            "d_A^2 = 0": linalg.is_zero(dA * dA),
            "d_B^2 = 0": linalg.is_zero(dB * dB),
        }

    def degrees_ok(self) -> bool:
        A, B = self.parA, self.parB
        return (
            _parity_ok(self.dA, A, A, 1)
            and _parity_ok(self.dB, B, B, 1)
            and _parity_ok(self.iota, B, A, 0)
            and _parity_ok(self.p, A, B, 0)
            and _parity_ok(self.h, B, B, 1)
        )

    def verify(self) -> "RetractDatum":
        bad = [k for k, ok in self.identities().items() if not ok]
        if not self.degrees_ok():
            bad.append("degrees")
        if bad:
            raise ValidationError("retract datum fails: " + ", ".join(bad))
        return self


def bpl_perturb(r: RetractDatum, delta: DomainMatrix, cap: int = DEFAULT_CAP) -> RetractDatum:
    """Transfer the perturbation ``delta`` of ``d_B`` along the retract.

    ``psi = sum_j (delta h)^j delta``; the series must terminate within ``cap``
    terms.  The result is verified before it is returned.
    """
    d = r.dB + delta
    if not linalg.is_zero(d * d):
        raise ValidationError("perturbed differential does not square to zero")
    if not _parity_ok(delta, r.parB, r.parB, 1):
        raise ValidationError("perturbation is not odd")
    psi = delta
    term = delta
    for _ in range(cap):
        term = delta * (r.h * term)
        if linalg.is_zero(term):
            break
        psi = psi + term
    else:
        raise ComputationError(f"perturbation series did not terminate within {cap} terms")
    out = RetractDatum(
        dA=r.dA + r.p * psi * r.iota,
        dB=d,
        iota=r.iota + r.h * psi * r.iota,
        p=r.p + r.p * psi * r.h,
        h=r.h + r.h * psi * r.h,
        parA=r.parA,
        parB=r.parB,
    )
    return out.verify()


# -- the stabilized-diagonal retract ----------------------------------------


@dataclass
class StabRetract:
    datum: RetractDatum
    delta: DomainMatrix
    d_Q: DomainMatrix  # d_Q on Hom(E, E), truncated at the same degree
    basis_A: list
    basis_B: list
    degree: int


def stab_retract(E: MatrixFactorization, degree: int = 4) -> StabRetract:
    mach = EtaMachine(E)
    dc = mach.dc
    n = dc.n
    N = sum(E.ranks)
    D = degree
    entries = [(a, b) for a in range(N) for b in range(N)]

    basis_A = [(a, b, e) for (a, b) in entries for e in monomials_up_to(n, D)]
    idx_A = {k: i for i, k in enumerate(basis_A)}
    par_A = tuple(mach.parity(a, b) for a, b, _ in basis_A)

    subsets = [S for k in range(n + 1) for S in _combos(n, k)]
    basis_B = [
        (a, b, S, e)
        for (a, b) in entries
        for S in subsets
        for e in monomials_up_to(2 * n, D - len(S))
    ]
    idx_B = {k: i for i, k in enumerate(basis_B)}
    par_B = tuple((mach.parity(a, b) + len(S)) % 2 for a, b, S, _ in basis_B)

    def single(a, b, S, e) -> FormMatrix:
        Om = FormMatrix.zero(dc, E.ranks)
        Om.grid[a][b] = ThetaForm(dc, {S: Polynomial.monomial(dc.variables, e)})
        return Om

    def read_B(Om: FormMatrix) -> dict[int, Fraction]:
        col = {}
        for a, row in enumerate(Om.grid):
            for b, f in enumerate(row):
                for S, p in f.terms.items():
                    for e, c in p.terms.items():
                        if sum(e) + len(S) > D:
                            continue
                        col[idx_B[(a, b, S, e)]] = c
        return col

    def op_matrix(op) -> DomainMatrix:
        cols = [read_B(op(single(*k))) for k in basis_B]
        return linalg.from_columns(cols, len(basis_B))

    dB = op_matrix(mach.iota)
    h = op_matrix(lambda Om: -mach.H(Om))
    delta = op_matrix(mach.delta)

    iota_cols = []
    for a, b, e in basis_A:
        iota_cols.append({idx_B[(a, b, (), e + (0,) * n)]: Fraction(1)})
    iota = linalg.from_columns(iota_cols, len(basis_B))

    p_cols = []
    for a, b, S, e in basis_B:
        if S:
            p_cols.append({})
            continue
        f = ThetaForm(dc, {(): Polynomial.monomial(dc.variables, e)})
        g = dc.to_base(augmentation(f).terms.get((), dc.zero()))
        p_cols.append({idx_A[(a, b, m)]: c for m, c in g.terms.items()})
    p = linalg.from_columns(p_cols, len(basis_A))

    dQ_cols = []
    for a, b, e in basis_A:
        Om = single(a, b, (), e + (0,) * n)
        res = mach.d_Q(Om)
        col = {}
        for x, row in enumerate(res.grid):
            for y, f in enumerate(row):
                q = f.terms.get(())
                if q is None:
                    continue
                for m, c in dc.to_base(q).terms.items():
                    if sum(m) <= D:
                        col[idx_A[(x, y, m)]] = c
        dQ_cols.append(col)
    dQ = linalg.from_columns(dQ_cols, len(basis_A))

    dA = linalg.zero(len(basis_A), len(basis_A))
    datum = RetractDatum(dA, dB, iota, p, h, par_A, par_B).verify()
    return StabRetract(datum, delta, dQ, basis_A, basis_B, D)


def _combos(n: int, k: int):
    return list(itertools.combinations(range(n), k))


@dataclass
class BPLReport:
    identities: dict[str, bool]
    perturbed_dA_is_dQ: bool
    dims: tuple[int, int]

    @property
    def passed(self) -> bool:
        return all(self.identities.values()) and self.perturbed_dA_is_dQ


def bpl_check(E: MatrixFactorization, degree: int = 4, cap: int = DEFAULT_CAP) -> BPLReport:
    """Perturb the Koszul retract by ``delta = d_Q + eps_lambda`` and check every identity."""
    sr = stab_retract(E, degree)
    try:
        out = bpl_perturb(sr.datum, sr.delta, cap)
    except ValidationError as exc:
        return BPLReport({str(exc): False}, False, sr.datum.dims)
    return BPLReport(out.identities() | {"degrees": out.degrees_ok()}, _eq(out.dA, sr.d_Q), out.dims)
