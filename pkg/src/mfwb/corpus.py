"""The reference corpus, random generators and the acceptance checks.

Each ``check_*`` function runs one exit criterion end to end and returns a
:class:`CriterionResult`; a criterion passes only if every identity holds
exactly and the run finishes inside its time bound.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .bpl import bpl_check
from .bulk import boundary_bulk, chern, hrr_check
from .cohomology import hom_cohomology
from .klpair import gram_matrix, kl_pairing
from .koszulhtpy import (
    DoubledContext,
    ThetaForm,
    augmentation,
    big_H,
    big_H_recursive,
    big_P,
    eta_check,
    iota_delta,
    koszul_h,
    koszul_pr,
    substitute_x_by_y,
    substitute_y_by_x,
)
from .mfcore import (
    MatrixFactorization,
    Morphism,
    direct_sum,
    dq_wedge,
    hom_differential,
    leibniz_defect,
    shift,
    square_defect,
    validate_mf,
)
from .milnor import MilnorContext, milnor_number_oracle
from .polyring import Polynomial, RingContext, monomials_up_to
from .residue import hessian, power_witness, residue
from .superlin import SuperMatrix

SEED = 20240531


# -- corpus -------------------------------------------------------------------


def a_k_context(k: int) -> RingContext:
    return RingContext.from_strings(["x"], f"x^{k + 1}")


def a_k_factorization(k: int, a: int, ctx: RingContext | None = None) -> MatrixFactorization:
    ctx = ctx or a_k_context(k)
    return validate_mf([[f"x^{a}"]], [[f"x^{k + 1 - a}"]], ctx, f"E{a}")


def a_k_family(k: int) -> list[MatrixFactorization]:
    ctx = a_k_context(k)
    return [a_k_factorization(k, a, ctx) for a in range(1, k + 1)]


def xy_context() -> RingContext:
    return RingContext.from_strings(["x", "y"], "x*y")


def xy_factorization() -> MatrixFactorization:
    return validate_mf([["x"]], [["y"]], xy_context(), "E")


def cubic_context() -> RingContext:
    return RingContext.from_strings(["x", "y"], "x^3 + y^3")


def cubic_koszul(ctx: RingContext | None = None) -> MatrixFactorization:
    ctx = ctx or cubic_context()
    return validate_mf([["x", "y"], ["-y^2", "x^2"]], [["x^2", "-y"], ["y^2", "x"]], ctx, "K")


def cubic_line(ctx: RingContext | None = None) -> MatrixFactorization:
    ctx = ctx or cubic_context()
    return validate_mf([["x + y"]], [["x^2 - x*y + y^2"]], ctx, "L")


@dataclass
class Family:
    """Factorizations over one potential, plus the pairs used by pairing checks."""

    label: str
    ctx: RingContext
    members: list[MatrixFactorization]

    def pairs(self) -> list[tuple[MatrixFactorization, MatrixFactorization]]:
        return [(X, Y) for X in self.members for Y in self.members]


def corpus_families(kmax: int = 5) -> list[Family]:
    fams = []
    for k in range(1, kmax + 1):
        members = a_k_family(k)
        fams.append(Family(f"A{k}", members[0].ctx, members))
    E = xy_factorization()
    fams.append(Family("xy", E.ctx, [E]))
    ctx = cubic_context()
    fams.append(Family("x3+y3", ctx, [cubic_koszul(ctx), cubic_line(ctx)]))
    return fams


def corpus_factorizations(kmax: int = 5) -> list[tuple[str, MatrixFactorization]]:
    return [(f"{f.label}:{X.name}", X) for f in corpus_families(kmax) for X in f.members]


def corpus_potentials() -> list[RingContext]:
    out = [a_k_context(k) for k in range(1, 7)]
    out.append(xy_context())
    out.append(cubic_context())
    out.append(RingContext.from_strings(["x", "y"], "x^2 + y^3"))
    out.append(RingContext.from_strings(["x", "y"], "x^2 + y^2"))
    return out


# -- random generators -------------------------------------------------------


def random_polynomial(
    rng: random.Random,
    variables,
    max_degree: int = 3,
    terms: int = 3,
    min_degree: int = 0,
    coeffs: Iterable[int] = (-3, -2, -1, 1, 2, 3),
    min_terms: int = 0,
) -> Polynomial:
    coeffs = list(coeffs)
    monos = [e for e in monomials_up_to(len(variables), max_degree) if sum(e) >= min_degree]
    out = {}
    for _ in range(rng.randint(min_terms, terms)):
        e = rng.choice(monos)
        c = Fraction(rng.choice(coeffs), rng.choice((1, 1, 1, 2, 3)))
        out[e] = out.get(e, 0) + c
    return Polynomial(tuple(variables), out)


def random_morphism(
    rng: random.Random, X: MatrixFactorization, Y: MatrixFactorization, parity: int, max_degree: int = 3
) -> Morphism:
    z = X.ctx.zero()
    N, M = 2 * Y.rank, 2 * X.rank
    rows = []
    for i in range(N):
        row = []
        for j in range(M):
            ep = (int(i >= Y.rank) + int(j >= X.rank)) % 2
            row.append(random_polynomial(rng, X.variables, max_degree) if ep == parity else z)
        rows.append(row)
    M_ = SuperMatrix(X.variables, Y.ranks, X.ranks, rows, parity, check=False)
    return Morphism(X, Y, M_, parity)


def random_koszul_factorization(rng: random.Random, n: int) -> MatrixFactorization:
    """``phi = [[f1, f2], [-g2, g1]]``, ``psi = [[g1, -f2], [g2, f1]]`` with random entries in m."""
    variables = [f"x{i + 1}" for i in range(n)] if n > 1 else ["x"]
    while True:
        f1, f2, g1, g2 = (random_polynomial(rng, variables, 3, 3, min_degree=1) for _ in range(4))
        w = f1 * g1 + f2 * g2
        if w:
            break
    ctx = RingContext(tuple(variables), w)
    return validate_mf([[f1, f2], [-g2, g1]], [[g1, -f2], [g2, f1]], ctx, "R")


def random_theta_form(rng: random.Random, dc: DoubledContext, terms: int = 3, max_degree: int = 3) -> ThetaForm:
    n = dc.n
    subsets = [S for k in range(n + 1) for S in itertools.combinations(range(n), k)]
    out: dict = {}
    for _ in range(rng.randint(1, terms)):
        S = rng.choice(subsets)
        p = random_polynomial(rng, dc.variables, max_degree, 3, min_terms=1)
        out[S] = out[S] + p if S in out else p
    return ThetaForm(dc, out)


# -- acceptance checks -----------------------------------------------------


@dataclass
class CriterionResult:
    number: int
    title: str
    bound: float
    elapsed: float = 0.0
    details: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.elapsed < self.bound

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def expect(self, cond: bool, msg: str) -> None:
        if not cond:
            self.failures.append(msg)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = ""
        if self.failures:
            extra = f" -- {len(self.failures)} failure(s): {self.failures[0]}"
        elif self.elapsed >= self.bound:
            extra = " -- exceeded time bound"
        return f"[{status}] criterion {self.number:2d}: {self.title} ({self.elapsed:.2f}s / {self.bound:.0f}s){extra}"

    def as_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "elapsed": round(self.elapsed, 3),
            "bound": self.bound,
            "details": self.details,
            "failures": self.failures,
        }


def _timed(number: int, title: str, bound: float):
    def deco(fn: Callable[[CriterionResult], None]):
        def run() -> CriterionResult:
            res = CriterionResult(number, title, bound)
            t0 = time.perf_counter()
            try:
                fn(res)
            except Exception as exc:  # a crash is a failure of the criterion, reported as such
                res.fail(f"{type(exc).__name__}: {exc}")
            res.elapsed = time.perf_counter() - t0
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return deco


@_timed(1, "MF validation and Leibniz identity", 1.0)
def check_mf_validation(res: CriterionResult) -> None:
    count = 0
    for label, X in corpus_factorizations():
        res.expect(square_defect(X).is_zero(), f"{label}: Q^2 != wI")
        for i in range(X.ctx.n):
            res.expect(leibniz_defect(X, i).is_zero(), f"{label}: Leibniz fails for variable {i}")
        count += 1
    res.details.append(f"{count} factorizations checked")


@_timed(2, "Milnor numbers at two truncation caps", 5.0)
def check_milnor_numbers(res: CriterionResult) -> None:
    expected = {f"x^{k + 1}": k for k in range(1, 7)}
    expected.update({"x*y": 1, "x^3 + y^3": 4, "x^2 + y^3": 2})
    for w, mu in expected.items():
        variables = ["x"] if "y" not in w else ["x", "y"]
        ctx = RingContext.from_strings(variables, w)
        mc = MilnorContext(ctx)
        res.expect(mc.mu == mu, f"mu({w}) = {mc.mu}, expected {mu}")
        tight = MilnorContext(ctx, cap=mc.degree)
        res.expect(tight.mu == mu, f"mu({w}) at cap {mc.degree} = {tight.mu}")
        for D in (mc.degree, mc.degree + 3):
            o = milnor_number_oracle(ctx, D)
            res.expect(o == mu, f"oracle mu({w}) at degree {D} = {o}")
        res.details.append(f"mu({w}) = {mc.mu}")


@_timed(3, "Residue suite", 10.0)
def check_residues(res: CriterionResult) -> None:
    rng = random.Random(SEED + 3)
    for ctx in corpus_potentials():
        mc = MilnorContext(ctx)
        w1 = power_witness(mc)
        w2 = power_witness(mc, N=w1.N + 1)
        numerators = [mc.lift([1 if j == i else 0 for j in range(mc.mu)]) for i in range(mc.mu)]
        numerators.append(hessian(mc))
        numerators += [random_polynomial(rng, ctx.variables, 4, 4) for _ in range(5)]
        for g in numerators:
            a, b = residue(g, mc, w1), residue(g, mc, w2)
            res.expect(a == b, f"{ctx.w}: witness N={w1.N} gives {a}, N={w2.N} gives {b} for g={g}")
        res.expect(residue(hessian(mc), mc) == mc.mu, f"{ctx.w}: Res[hess] != mu")
        for _ in range(50):
            g = ctx.zero()
            for t in mc.jacobian:
                g = g + random_polynomial(rng, ctx.variables, 3, 3) * t
            r = residue(g, mc)
            res.expect(r == 0, f"{ctx.w}: residue {r} on an ideal element")
    c3 = a_k_context(2)
    res.expect(residue(c3.parse("3*x"), MilnorContext(c3)) == 1, "Res[3x / 3x^2] != 1")
    cxy = xy_context()
    res.expect(residue(cxy.one(), MilnorContext(cxy)) == -1, "Res[1 / (y, x)] != -1")
    res.details.append(f"{len(corpus_potentials())} potentials, 50 ideal elements each")


@_timed(4, "Cohomology matches min(a, b, k+1-a, k+1-b)", 60.0)
def check_cohomology(res: CriterionResult) -> None:
    count = 0
    for k in range(1, 5):
        fam = a_k_family(k)
        mc = MilnorContext(fam[0].ctx)
        for a, X in enumerate(fam, 1):
            for b, Y in enumerate(fam, 1):
                rep = hom_cohomology(X, Y, mc)
                m = min(a, b, k + 1 - a, k + 1 - b)
                res.expect(rep.dims == (m, m), f"k={k} a={a} b={b}: dims {rep.dims}, expected {(m, m)}")
                window = rep.trajectory[-3:]
                res.expect(
                    len(window) == 3 and len({t[1:] for t in window}) == 1,
                    f"k={k} a={a} b={b}: not stable over three truncations",
                )
                count += 1
    res.details.append(f"{count} Hom spaces checked")


def _closed_morphisms(rng, Y, X, parity, reps, count=2):
    """Closed morphisms ``Y -> X`` of the given parity: representatives and random boundaries."""
    out = list(reps)
    for _ in range(count):
        out.append(hom_differential(random_morphism(rng, Y, X, 1 - parity, 2)))
    return out


@_timed(5, "Kapustin-Li non-degeneracy and homotopy invariance", 60.0)
def check_kl_pairing(res: CriterionResult) -> None:
    rng = random.Random(SEED + 5)
    grams = 0
    pool = []
    for fam in corpus_families():
        mc = MilnorContext(fam.ctx)
        cache = {}

        def coh(A, B):
            key = (id(A), id(B))
            if key not in cache:
                cache[key] = hom_cohomology(A, B, mc)
            return cache[key]

        for X, Y in fam.pairs():
            g = gram_matrix(X, Y, mc, forward=coh(X, Y), backward=coh(Y, X))
            res.expect(g.nondegenerate, f"{fam.label}: Gram({X.name}, {Y.name}) degenerate: {[b.matrix for b in g.blocks]}")
            grams += 1
            pool.append((fam, mc, X, Y, coh(Y, X), coh(X, Y)))
    n_exact = 0
    for t in range(100):
        fam, mc, X, Y, back, fwd = pool[t % len(pool)]
        n = fam.ctx.n
        par = rng.randint(0, 1)
        F = hom_differential(random_morphism(rng, X, Y, 1 - par, 3))  # exact X -> Y of parity par
        gpar = (n - par) % 2
        for G in _closed_morphisms(rng, Y, X, gpar, back.representatives[gpar], 1):
            v = kl_pairing(F, G, mc)
            res.expect(v == 0, f"{fam.label}: <dH, G> = {v}")
        Fb = hom_differential(random_morphism(rng, Y, X, 1 - par, 3))  # exact Y -> X
        for G in _closed_morphisms(rng, X, Y, gpar, fwd.representatives[gpar], 1):
            v = kl_pairing(G, Fb, mc)
            res.expect(v == 0, f"{fam.label}: <G, dH> = {v}")
        n_exact += 2
    res.details.append(f"{grams} Gram matrices nondegenerate; {n_exact} exact morphisms paired to 0")


@_timed(6, "Boundary-bulk well-definedness, additivity and shift sign", 30.0)
def check_boundary_bulk(res: CriterionResult) -> None:
    rng = random.Random(SEED + 6)
    for fam in corpus_families():
        mc = MilnorContext(fam.ctx)
        n = fam.ctx.n
        for X in fam.members:
            for _ in range(100):
                G = random_morphism(rng, X, X, (n + 1) % 2 if rng.random() < 0.8 else n % 2, 3)
                v = boundary_bulk(hom_differential(G), mc).element
                res.expect(v.is_zero(), f"{fam.label}:{X.name}: bb(dG) = {v}")
            res.expect(chern(shift(X), mc) == -chern(X, mc), f"{fam.label}:{X.name}: ch(X[1]) != -ch(X)")
        for X, Y in fam.pairs():
            res.expect(
                chern(direct_sum(X, Y), mc) == chern(X, mc) + chern(Y, mc),
                f"{fam.label}: ch({X.name}+{Y.name}) not additive",
            )
    res.details.append("100 random G per corpus factorization")


def hrr_pairs(fam: Family) -> list[tuple[MatrixFactorization, MatrixFactorization]]:
    pairs = fam.pairs()
    M = fam.members
    pairs += [(shift(X), Y) for X in M for Y in M]
    pairs += [(X, shift(X)) for X in M]
    pairs += [(direct_sum(M[0], M[-1]), Y) for Y in M]
    pairs += [(X, direct_sum(X, X)) for X in M[:1]]
    return pairs


@_timed(7, "Hirzebruch-Riemann-Roch on the corpus", 60.0)
def check_hrr(res: CriterionResult) -> None:
    checked = 0
    nontrivial_zero = 0
    for fam in corpus_families():
        mc = MilnorContext(fam.ctx)
        for X, Y in hrr_pairs(fam):
            r = hrr_check(X, Y, mc)
            res.expect(r.match, f"{fam.label}: chi({X.name},{Y.name}) = {r.chi} but <ch, ch> = {r.pairing}")
            if fam.ctx.n == 1:
                res.expect(r.chi == 0 and r.pairing == 0, f"{fam.label}: n = 1 case not 0 = 0")
                if r.cohomology.h0 > 0:
                    nontrivial_zero += 1
            checked += 1
    res.details.append(f"{checked} pairs; {nontrivial_zero} one-variable pairs with h0 = h1 > 0")


def koszul_suite(rng: random.Random, n: int, samples: int) -> list[str]:
    """Identities of the canonical homotopy on random forms; returns failure messages."""
    variables = [f"x{i + 1}" for i in range(n)]
    base = RingContext.from_strings(variables, " + ".join(f"{v}^3" for v in variables))
    dc = DoubledContext(base)
    fails: list[str] = []

    def mod_delta(f: ThetaForm) -> ThetaForm:
        return f.map_coefficients(lambda p: dc.in_x(dc.to_base(p)))

    for s in range(samples):
        om = random_theta_form(rng, dc)
        tag = f"n={n} sample {s}"
        for i in range(n):
            for j in range(i, n):
                ac = koszul_h(koszul_h(om, j), i) + koszul_h(koszul_h(om, i), j)
                if not ac.is_zero():
                    fails.append(f"{tag}: h{i + 1}h{j + 1} + h{j + 1}h{i + 1} != 0")
        for i in range(n):
            lhs = koszul_h(om.map_coefficients(lambda p: substitute_x_by_y(p, i, n)), i)
            lhs = lhs.map_coefficients(lambda p: substitute_y_by_x(p, i, n))
            dx = om.map_coefficients(lambda p: substitute_y_by_x(p, i, n).derivative(i))
            rhs = ThetaForm.scalar(dc, dc.zero() + 1, (i,)).wedge(dx)
            if lhs != rhs:
                fails.append(f"{tag}: Taylor property fails for h{i + 1}")
            if koszul_h(big_P(om), i) != big_P(koszul_h(om, i)):
                fails.append(f"{tag}: h{i + 1} P != P h{i + 1}")
            if koszul_pr(iota_delta(om), i) != iota_delta(koszul_pr(om, i)):
                fails.append(f"{tag}: pr{i + 1} is not a chain map")
        for k in range(1, n + 1):
            ok = om.component(k)
            if mod_delta(big_P(ok)) != mod_delta(ok.scale(Fraction(1, k))):
                fails.append(f"{tag}: P(k-form) != k-form / {k} mod Delta")
        pos = ThetaForm(dc, {S: p for S, p in om.terms.items() if S})
        zero = om.component(0)
        if iota_delta(big_H(pos)) + big_H(iota_delta(pos)) != pos:
            fails.append(f"{tag}: [d_K, H] != id on positive forms")
        if iota_delta(big_H(zero)) + augmentation(zero) != zero:
            fails.append(f"{tag}: d_K H + p != id on 0-forms")
        if big_H(om) != big_H_recursive(om):
            fails.append(f"{tag}: explicit H != recursive H")
    return fails


@_timed(8, "Koszul homotopy identities on random forms", 30.0)
def check_koszul(res: CriterionResult) -> None:
    rng = random.Random(SEED + 8)
    for n in (1, 2, 3):
        for f in koszul_suite(rng, n, 200):
            res.fail(f)
        res.details.append(f"n = {n}: 200 forms")


def _small_corpus(max_vars: int = 2, max_rank: int = 2):
    for label, X in corpus_factorizations():
        if X.ctx.n <= max_vars and X.rank <= max_rank:
            yield label, X


@_timed(9, "Perturbation lemma identities on truncated diagonal retracts", 30.0)
def check_bpl(res: CriterionResult) -> None:
    count = 0
    for label, X in _small_corpus():
        rep = bpl_check(X, 4)
        for name, ok in rep.identities.items():
            res.expect(ok, f"{label}: {name} fails")
        res.expect(rep.perturbed_dA_is_dQ, f"{label}: perturbed differential on A is not d_Q")
        count += 1
    res.details.append(f"{count} retracts at truncation weight 4")


@_timed(10, "Top component of the transferred identity", 120.0)
def check_eta(res: CriterionResult) -> None:
    count = 0
    for label, X in _small_corpus():
        for Y in (X, shift(X)):
            r = eta_check(Y)
            res.expect(r.passed, f"{label}: eta_n differs from the expected top form")
            count += 1
    res.details.append(f"{count} factorizations (with shifts)")


@_timed(11, "Optimized (dQ)^n equals the n!-term sum", 30.0)
def check_dq_wedge(res: CriterionResult) -> None:
    rng = random.Random(SEED + 11)
    items = [X for _, X in corpus_factorizations()]
    for _ in range(50):
        items.append(random_koszul_factorization(rng, rng.randint(1, 3)))
    for X in items:
        res.expect(dq_wedge(X) == dq_wedge(X, naive=True), f"mismatch on {X!r}")
    res.details.append(f"{len(items)} factorizations ({len(items) - 50} corpus + 50 random)")


CHECKS = [
    check_mf_validation,
    check_milnor_numbers,
    check_residues,
    check_cohomology,
    check_kl_pairing,
    check_boundary_bulk,
    check_hrr,
    check_koszul,
    check_bpl,
    check_eta,
    check_dq_wedge,
]


def run_criterion(number: int) -> CriterionResult:
    return CHECKS[number - 1]()


def run_all() -> list[CriterionResult]:
    return [c() for c in CHECKS]
