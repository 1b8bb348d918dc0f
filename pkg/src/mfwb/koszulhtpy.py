"""Canonical contracting homotopy of the Koszul complex on ``Delta_i = y_i - x_i``.

Forms live in ``R~<theta_1, ..., theta_n>`` with ``R~ = k[x, y]``.  A
:class:`ThetaForm` maps sorted index tuples ``S`` to polynomial coefficients
of ``theta_S``; theta variables are kept in increasing order and
``theta_i^2 = 0`` holds by construction.

Sign conventions (pinned by the property tests):

* ``h_i(f theta_S) = (-1)^{#{j in S, j < i}} f_1 theta_{S+i}``, i.e. ``theta_i``
  is multiplied in from the left;
* ``iota_Delta(f theta_S) = sum_{i in S} (-1)^{pos_S(i)} Delta_i f theta_{S-i}``.

Matrix-valued forms (:class:`FormMatrix`) are elements ``sum E_ab (x) eta_ab`` of
``Hom(E_y, E_x) (x) R~<theta>``.  Odd form operators pick up the sign of the
matrix entry they pass, and ``d_Q(A (x) eta) = (Q_x A - (-1)^|A| A Q_y) (x) eta``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ContextError
from .mfcore import MatrixFactorization, dq_wedge
from .polyring import Polynomial, RingContext
from .superlin import SuperMatrix

Subset = tuple[int, ...]


class DoubledContext:
    """Variables ``x_1..x_n, y_1..y_n``; the y-copy of ``v`` is named ``v'``."""

    def __init__(self, base: RingContext):
        self.base = base
        self.n = base.n
        self.x_names = base.variables
        self.y_names = tuple(v + "'" for v in base.variables)
        clash = set(self.y_names) & set(self.x_names)
        if clash:
            raise ContextError(f"doubled variable names clash with base variables: {sorted(clash)}")
        self.variables = self.x_names + self.y_names

    def __eq__(self, other) -> bool:
        return isinstance(other, DoubledContext) and other.variables == self.variables

    def __hash__(self) -> int:
        return hash(self.variables)

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.variables)

    def x(self, i: int) -> Polynomial:
        return Polynomial.variable(self.variables, i)

    def y(self, i: int) -> Polynomial:
        return Polynomial.variable(self.variables, self.n + i)

    def delta(self, i: int) -> Polynomial:
        return self.y(i) - self.x(i)

    def in_x(self, p: Polynomial) -> Polynomial:
        """Embed a base polynomial using the x-copies."""
        return Polynomial._raw(self.variables, {e + (0,) * self.n: c for e, c in p.terms.items()})

    def in_y(self, p: Polynomial) -> Polynomial:
        return Polynomial._raw(self.variables, {(0,) * self.n + e: c for e, c in p.terms.items()})

    def to_base(self, p: Polynomial) -> Polynomial:
        """Set every ``y_i = x_i`` and return a base polynomial (reduction mod all Delta_i)."""
        n = self.n
        out: dict = {}
        for e, c in p.terms.items():
            m = tuple(e[i] + e[n + i] for i in range(n))
            out[m] = out.get(m, 0) + c
        return Polynomial(self.base.variables, out)

    @cached_property
    def w_tilde(self) -> Polynomial:
        return self.in_y(self.base.w) - self.in_x(self.base.w)


# -- scalar operations on doubled polynomials ------------------------------


def substitute_y_by_x(p: Polynomial, i: int, n: int) -> Polynomial:
    out: dict = {}
    for e, c in p.terms.items():
        if e[n + i]:
            m = list(e)
            m[i] += m[n + i]
            m[n + i] = 0
            m = tuple(m)
        else:
            m = e
        out[m] = out.get(m, 0) + c
    return Polynomial(p.variables, out)


def substitute_x_by_y(p: Polynomial, i: int, n: int) -> Polynomial:
    out: dict = {}
    for e, c in p.terms.items():
        if e[i]:
            m = list(e)
            m[n + i] += m[i]
            m[i] = 0
            m = tuple(m)
        else:
            m = e
        out[m] = out.get(m, 0) + c
    return Polynomial(p.variables, out)


def divide_without_remainder(f: Polynomial, i: int, n: int | None = None) -> tuple[Polynomial, Polynomial]:
    """``f = f0 + Delta_i f1`` with ``f0`` free of ``y_i`` (``i`` is 0-based).

    Uses ``(y^k - x^k)/(y - x) = sum_{a+b=k-1} y^a x^b`` term by term.
    """
    if n is None:
        n = f.nvars // 2
    yi = n + i
    f0: dict = {}
    f1: dict = {}
    for e, c in f.terms.items():
        k = e[yi]
        if k == 0:
            f0[e] = f0.get(e, 0) + c
            continue
        m = list(e)
        m[i] += k
        m[yi] = 0
        m = tuple(m)
        f0[m] = f0.get(m, 0) + c
        for a in range(k):
            q = list(e)
            q[yi] = a
            q[i] = e[i] + (k - 1 - a)
            q = tuple(q)
            f1[q] = f1.get(q, 0) + c
    return Polynomial(f.variables, f0), Polynomial(f.variables, f1)


# -- theta forms ----------------------------------------------------------


def _merge_sign(S: Subset, T: Subset) -> int:
    """Sign of ``theta_S theta_T = sign * theta_{S u T}`` (S, T disjoint)."""
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


class ThetaForm:
    """Element of ``R~<theta_1..theta_n>``: a map ``S -> coefficient``."""

    __slots__ = ("dc", "terms")

    def __init__(self, dc: DoubledContext, terms: Mapping[Subset, Polynomial] | None = None):
        self.dc = dc
        self.terms = {tuple(S): p for S, p in (terms or {}).items() if p}

    @classmethod
    def scalar(cls, dc: DoubledContext, p: Polynomial, S: Iterable[int] = ()) -> "ThetaForm":
        return cls(dc, {tuple(sorted(S)): p})

    @classmethod
    def zero(cls, dc: DoubledContext) -> "ThetaForm":
        return cls(dc, {})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {len(S) for S in self.terms}

    def component(self, k: int) -> "ThetaForm":
        return ThetaForm(self.dc, {S: p for S, p in self.terms.items() if len(S) == k})

    def coefficient(self, S: Iterable[int]) -> Polynomial:
        return self.terms.get(tuple(sorted(S)), self.dc.zero())

    def __add__(self, other: "ThetaForm") -> "ThetaForm":
        out = dict(self.terms)
        for S, p in other.terms.items():
            q = out.get(S)
            out[S] = p if q is None else q + p
        return ThetaForm(self.dc, out)

    def __sub__(self, other: "ThetaForm") -> "ThetaForm":
        return self + (-other)

    def __neg__(self) -> "ThetaForm":
        return ThetaForm(self.dc, {S: -p for S, p in self.terms.items()})

    def scale(self, c) -> "ThetaForm":
        """Multiply by a rational or an (even) doubled polynomial."""
        return ThetaForm(self.dc, {S: p * c for S, p in self.terms.items()})

    def wedge(self, other: "ThetaForm") -> "ThetaForm":
        out: dict[Subset, Polynomial] = {}
        for S, p in self.terms.items():
            for T, q in other.terms.items():
                if set(S) & set(T):
                    continue
                U = tuple(sorted(S + T))
                term = p * q
                if _merge_sign(S, T) < 0:
                    term = -term
                out[U] = out[U] + term if U in out else term
        return ThetaForm(self.dc, out)

    def map_coefficients(self, fn: Callable[[Polynomial], Polynomial]) -> "ThetaForm":
        return ThetaForm(self.dc, {S: fn(p) for S, p in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThetaForm):
            return NotImplemented
        return self.dc == other.dc and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for S in sorted(self.terms, key=lambda s: (len(s), s)):
            th = "*".join(f"θ{i + 1}" for i in S)
            parts.append(f"({self.terms[S]})" + (f"*{th}" if th else ""))
        return " + ".join(parts)


def koszul_h(omega: ThetaForm, i: int) -> ThetaForm:
    """Division by ``Delta_i`` without remainder, with ``theta_i`` multiplied in from the left."""
    n = omega.dc.n
    out: dict[Subset, Polynomial] = {}
    for S, p in omega.terms.items():
        if i in S:
            continue
        _, f1 = divide_without_remainder(p, i, n)
        if not f1:
            continue
        sign = sum(1 for j in S if j < i) % 2
        out[tuple(sorted(S + (i,)))] = -f1 if sign else f1
    return ThetaForm(omega.dc, out)


def koszul_pr(omega: ThetaForm, i: int) -> ThetaForm:
    """Set ``y_i = x_i`` and drop every term containing ``theta_i``."""
    n = omega.dc.n
    return ThetaForm(
        omega.dc, {S: substitute_y_by_x(p, i, n) for S, p in omega.terms.items() if i not in S}
    )


def iota_delta(omega: ThetaForm) -> ThetaForm:
    """Koszul differential: contraction with ``sum Delta_i theta_i^vee``."""
    dc = omega.dc
    out: dict[Subset, Polynomial] = {}
    for S, p in omega.terms.items():
        for pos, i in enumerate(S):
            T = S[:pos] + S[pos + 1:]
            term = dc.delta(i) * p
            if pos % 2:
                term = -term
            out[T] = out[T] + term if T in out else term
    return ThetaForm(dc, out)


def augmentation(omega: ThetaForm) -> ThetaForm:
    """``p``: keep the 0-form part and set every ``y_i = x_i``."""
    dc = omega.dc
    f = omega.terms.get(())
    if f is None:
        return ThetaForm.zero(dc)
    return ThetaForm(dc, {(): dc.in_x(dc.to_base(f))})


def _pr_chain(omega: ThetaForm, idx: Iterable[int]) -> ThetaForm:
    for j in idx:
        omega = koszul_pr(omega, j)
    return omega


def p_coefficient(n: int, l: int) -> Fraction:
    """``a(l) = 1/((n - l) binom(n, l))``."""
    return Fraction(1, (n - l) * math.comb(n, l))


def big_P(omega: ThetaForm) -> ThetaForm:
    """``P = sum_{l<n} a(l) sum_{j_1<...<j_l} pr_{j_1} ... pr_{j_l}``."""
    n = omega.dc.n
    acc = ThetaForm.zero(omega.dc)
    for l in range(n):
        part = ThetaForm.zero(omega.dc)
        for J in itertools.combinations(range(n), l):
            part = part + _pr_chain(omega, J)
        acc = acc + part.scale(p_coefficient(n, l))
    return acc


def big_H(omega: ThetaForm) -> ThetaForm:
    """Explicit form ``H = (h_1 + ... + h_n) o P``."""
    Pw = big_P(omega)
    acc = ThetaForm.zero(omega.dc)
    for i in range(omega.dc.n):
        acc = acc + koszul_h(Pw, i)
    return acc


def big_H_recursive(omega: ThetaForm, indices: Sequence[int] | None = None) -> ThetaForm:
    """``H_I = (1/|I|) sum_i h_i + (1/|I|) sum_i H_{I - i} o pr_i`` with ``H_{} = 0``."""
    if indices is None:
        indices = tuple(range(omega.dc.n))
    indices = tuple(indices)
    m = len(indices)
    if m == 0 or omega.is_zero():
        return ThetaForm.zero(omega.dc)
    acc = ThetaForm.zero(omega.dc)
    for i in indices:
        acc = acc + koszul_h(omega, i)
        rest = tuple(j for j in indices if j != i)
        acc = acc + big_H_recursive(koszul_pr(omega, i), rest)
    return acc.scale(Fraction(1, m))


# -- the stabilized diagonal -------------------------------------------------


@dataclass
class DeltaStab:
    dc: DoubledContext
    lam: ThetaForm

    @property
    def coefficients(self) -> list[Polynomial]:
        """``w_i`` with ``lambda = sum w_i theta_i``."""
        return [self.lam.coefficient((i,)) for i in range(self.dc.n)]

    def twisted(self, omega: ThetaForm) -> ThetaForm:
        """``(iota_Delta + eps_lambda)(omega)``."""
        return iota_delta(omega) + self.lam.wedge(omega)

    def check(self) -> bool:
        dc = self.dc
        s = dc.zero()
        for i, wi in enumerate(self.coefficients):
            s = s + wi * dc.delta(i)
        return s == dc.w_tilde and self.lam.degrees() <= {1}


def delta_stab(ctx: RingContext | DoubledContext) -> DeltaStab:
    dc = ctx if isinstance(ctx, DoubledContext) else DoubledContext(ctx)
    lam = big_H(ThetaForm.scalar(dc, dc.w_tilde))
    return DeltaStab(dc, lam)


# -- matrix-valued forms -----------------------------------------------------


class FormMatrix:
    """Grid of theta forms indexed like a supermatrix of ranks ``(r0, r1)`` both ways."""

    __slots__ = ("dc", "ranks", "grid")

    def __init__(self, dc: DoubledContext, ranks: tuple[int, int], grid):
        self.dc = dc
        self.ranks = tuple(ranks)
        self.grid = [list(r) for r in grid]

    @property
    def size(self) -> int:
        return sum(self.ranks)

    def parity(self, a: int, b: int) -> int:
        r0 = self.ranks[0]
        return (int(a >= r0) + int(b >= r0)) % 2

    @classmethod
    def zero(cls, dc: DoubledContext, ranks) -> "FormMatrix":
        N = sum(ranks)
        return cls(dc, ranks, [[ThetaForm.zero(dc) for _ in range(N)] for _ in range(N)])

    @classmethod
    def from_supermatrix(cls, dc: DoubledContext, M: SuperMatrix, embed: str = "x") -> "FormMatrix":
        emb = dc.in_x if embed == "x" else dc.in_y
        return cls(dc, M.row_ranks, [[ThetaForm.scalar(dc, emb(p)) for p in r] for r in M.rows])

    def __add__(self, other: "FormMatrix") -> "FormMatrix":
        return FormMatrix(self.dc, self.ranks, [[a + b for a, b in zip(r, s)] for r, s in zip(self.grid, other.grid)])

    def __sub__(self, other: "FormMatrix") -> "FormMatrix":
        return FormMatrix(self.dc, self.ranks, [[a - b for a, b in zip(r, s)] for r, s in zip(self.grid, other.grid)])

    def __neg__(self) -> "FormMatrix":
        return FormMatrix(self.dc, self.ranks, [[-a for a in r] for r in self.grid])

    def scale(self, c) -> "FormMatrix":
        return FormMatrix(self.dc, self.ranks, [[a.scale(c) for a in r] for r in self.grid])

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.grid for a in r)

    def apply_odd(self, op: Callable[[ThetaForm], ThetaForm]) -> "FormMatrix":
        """Apply an odd form operator entrywise, with the sign of each matrix entry."""
        grid = []
        for a, r in enumerate(self.grid):
            row = []
            for b, f in enumerate(r):
                g = op(f)
                row.append(-g if self.parity(a, b) else g)
            grid.append(row)
        return FormMatrix(self.dc, self.ranks, grid)

    def apply_even(self, op: Callable[[ThetaForm], ThetaForm]) -> "FormMatrix":
        return FormMatrix(self.dc, self.ranks, [[op(f) for f in r] for r in self.grid])

    def component(self, k: int) -> "FormMatrix":
        return self.apply_even(lambda f: f.component(k))

    def coefficient_matrix(self, S: Iterable[int]) -> list[list[Polynomial]]:
        S = tuple(sorted(S))
        return [[f.coefficient(S) for f in r] for r in self.grid]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormMatrix):
            return NotImplemented
        return self.ranks == other.ranks and all(
            a == b for r, s in zip(self.grid, other.grid) for a, b in zip(r, s)
        )

    def __repr__(self) -> str:
        return f"FormMatrix({self.grid})"


def _poly_rows(dc: DoubledContext, M: SuperMatrix, embed: str) -> list[list[Polynomial]]:
    emb = dc.in_x if embed == "x" else dc.in_y
    return [[emb(p) for p in r] for r in M.rows]


class EtaMachine:
    """Operators ``d_Q``, ``iota_Delta``, ``eps_lambda``, ``H`` on ``Hom(E_y, E_x) (x) R~<theta>``."""

    def __init__(self, E: MatrixFactorization, stab: DeltaStab | None = None):
        self.E = E
        self.stab = stab or delta_stab(E.ctx)
        self.dc = self.stab.dc
        self.ranks = E.ranks
        self.Qx = _poly_rows(self.dc, E.Q, "x")
        self.Qy = _poly_rows(self.dc, E.Q, "y")

    def parity(self, a: int, b: int) -> int:
        r0 = self.ranks[0]
        return (int(a >= r0) + int(b >= r0)) % 2

    def d_Q(self, Om: FormMatrix) -> FormMatrix:
        N = Om.size
        dc = self.dc
        grid = [[ThetaForm.zero(dc) for _ in range(N)] for _ in range(N)]
        for a in range(N):
            for k in range(N):
                q = self.Qx[a][k]
                if not q:
                    continue
                for b in range(N):
                    f = Om.grid[k][b]
                    if f:
                        grid[a][b] = grid[a][b] + f.scale(q)
        for a in range(N):
            for k in range(N):
                f = Om.grid[a][k]
                if not f:
                    continue
                sign = -1 if self.parity(a, k) == 0 else 1
                for b in range(N):
                    q = self.Qy[k][b]
                    if q:
                        grid[a][b] = grid[a][b] + f.scale(q * sign)
        return FormMatrix(dc, self.ranks, grid)

    def iota(self, Om: FormMatrix) -> FormMatrix:
        return Om.apply_odd(iota_delta)

    def eps(self, Om: FormMatrix) -> FormMatrix:
        lam = self.stab.lam
        return Om.apply_odd(lambda f: lam.wedge(f))

    def H(self, Om: FormMatrix) -> FormMatrix:
        return Om.apply_odd(big_H)

    def delta(self, Om: FormMatrix) -> FormMatrix:
        return self.d_Q(Om) + self.eps(Om)

    def total(self, Om: FormMatrix) -> FormMatrix:
        return self.d_Q(Om) + self.iota(Om) + self.eps(Om)

    def identity(self) -> FormMatrix:
        return FormMatrix.from_supermatrix(self.dc, SuperMatrix.identity(self.E.variables, self.ranks))

    def eta(self) -> list[FormMatrix]:
        """Terms ``(-H delta)^k id`` for ``k = 0..n``; their sum is ``iota_inf(id)``."""
        terms = [self.identity()]
        for _ in range(self.dc.n):
            terms.append(-self.H(self.delta(terms[-1])))
        return terms


@dataclass
class EtaReport:
    eta: FormMatrix
    top: list[list[Polynomial]]  # B with eta_n = B theta_1...theta_n, over R~
    reduced: list[list[Polynomial]]  # B mod (Delta_1..Delta_n), over R
    expected: SuperMatrix
    residual: list[list[Polynomial]]
    higher_terms_vanish: bool  # whether terms k < n contribute nothing to the n-form mod Delta

    @property
    def passed(self) -> bool:
        return all(not p for r in self.residual for p in r)


def reduce_mod_deltas(p: Polynomial, dc: DoubledContext) -> Polynomial:
    """Remainder modulo ``(Delta_1, ..., Delta_n)`` by iterated division; returned over ``R``."""
    for i in range(dc.n):
        p, _ = divide_without_remainder(p, i, dc.n)
    return dc.to_base(p)


def eta_check(E: MatrixFactorization, stab: DeltaStab | None = None) -> EtaReport:
    """Compare the top component of ``iota_inf(id)`` with ``(-1)^{binom(n+1,2)}/n! (dQ)^n``."""
    mach = EtaMachine(E, stab)
    dc = mach.dc
    n = dc.n
    terms = mach.eta()
    eta = terms[0]
    for t in terms[1:]:
        eta = eta + t
    top_S = tuple(range(n))
    top = eta.coefficient_matrix(top_S)
    reduced = [[reduce_mod_deltas(p, dc) for p in r] for r in top]
    s = -1 if (n * (n + 1) // 2) % 2 else 1
    expected = dq_wedge(E).scale(Fraction(s, math.factorial(n)))
    residual = [[a - b for a, b in zip(r, e)] for r, e in zip(reduced, expected.rows)]
    lower = FormMatrix.zero(dc, E.ranks)
    for t in terms[:-1]:
        lower = lower + t
    lower_top = lower.coefficient_matrix(top_S)
    vanish = all(not reduce_mod_deltas(p, dc) for r in lower_top for p in r)
    return EtaReport(eta, top, reduced, expected, residual, vanish)
