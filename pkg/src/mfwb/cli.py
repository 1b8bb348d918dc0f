"""``mfwb`` command line: load a problem file, run one computation, print a report.

Exit codes: 0 success, 1 validation failure (including a failed check
verdict), 2 computation failure, 3 I/O, parse or usage error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .bpl import DEFAULT_CAP as BPL_CAP
from .bpl import bpl_check
from .bulk import boundary_bulk, chern, hrr_check
from .cohomology import hom_cohomology
from .corpus import SEED, CHECKS, corpus_factorizations, koszul_suite
from .errors import ComputationError, MFError
from .klpair import gram_matrix, kl_pairing
from .koszulhtpy import eta_check
from .milnor import DEFAULT_CAP as MILNOR_CAP
from .milnor import MilnorContext, milnor_number_oracle
from .polyring import Polynomial, format_rational
from .problem import Problem, load_problem
from .residue import cached_witness, power_witness, residue

SCHEMA = "mfwb/1"


class UsageError(MFError):
    kind = "usage"
    exit_code = 3


@dataclass
class Report:
    command: str
    inputs: dict[str, Any]
    results: dict[str, Any] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)
    exit_code: int = 0

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": jsonable(self.inputs),
            "results": jsonable(self.results),
            "diagnostics": jsonable(self.diagnostics),
        }

    def to_text(self) -> str:
        lines = [f"mfwb {self.command}"]
        for section in ("inputs", "results", "diagnostics"):
            body = jsonable(getattr(self, section))
            if section == "diagnostics":
                body = {k: v for k, v in body.items() if k != "elapsed"}
            if body:
                lines.append(f"{section}:")
                _text_lines(body, 1, lines)
        return "\n".join(lines)


def jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return round(obj, 4)
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Polynomial):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


def _is_flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _inline(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    return "null" if v is None else str(v)


def _text_lines(obj, depth: int, out: list[str]) -> None:
    pad = "  " * depth
    for k, v in obj.items():
        if isinstance(v, dict) and v:
            out.append(f"{pad}{k}:")
            _text_lines(v, depth + 1, out)
        elif isinstance(v, list) and v and not _is_flat(v) and not all(_is_flat(x) for x in v):
            out.append(f"{pad}{k}:")
            for x in v:
                if isinstance(x, dict):
                    out.append(f"{pad}  -")
                    _text_lines(x, depth + 2, out)
                else:
                    out.append(f"{pad}  - {_inline(x)}")
        else:
            out.append(f"{pad}{k}: {_inline(v) if not isinstance(v, dict) else '{}'}")


# -- commands -------------------------------------------------------------------


def _milnor(prob: Problem, args) -> MilnorContext:
    return MilnorContext(prob.ctx, args.cap or MILNOR_CAP)


def _grid(M) -> list[list[str]]:
    return [[str(p) for p in row] for row in M]


def _echo(prob: Problem, args) -> dict[str, Any]:
    return {"problem": args.problem, "variables": list(prob.ctx.variables), "potential": str(prob.ctx.w)}


def cmd_validate(prob: Problem, args, rep: Report) -> None:
    rep.results = {
        "valid": True,
        "factorizations": {
            k: {"rank": X.rank, "phi": _grid(X.phi), "psi": _grid(X.psi)} for k, X in prob.factorizations.items()
        },
        "morphisms": {
            k: {
                "source": F.source.name,
                "target": F.target.name,
                "parity": "odd" if F.parity else "even",
                "closed": F.is_closed(),
            }
            for k, F in prob.morphisms.items()
        },
    }


def cmd_milnor(prob: Problem, args, rep: Report) -> None:
    mc = _milnor(prob, args)
    rep.results = {"mu": mc.mu, "basis": mc.basis_strings()}
    rep.diagnostics["stabilization"] = {"degree": mc.degree, "dimensions": mc.trajectory}
    if args.oracle:
        mu = milnor_number_oracle(prob.ctx, mc.degree + 1)
        rep.diagnostics["oracle"] = {"degree": mc.degree + 1, "mu": mu}
        if mu != mc.mu:
            raise ComputationError(f"oracle Milnor number {mu} disagrees with {mc.mu}")


def cmd_residue(prob: Problem, args, rep: Report) -> None:
    g = prob.ctx.parse(args.expr)
    rep.inputs["expr"] = args.expr
    mc = _milnor(prob, args)
    wit = cached_witness(mc)
    value = residue(g, mc, wit)
    rep.results = {"N": wit.N, "residue": value}
    rep.diagnostics["witness"] = "exact" if wit.exact else f"truncated modulo m^{wit.modulus}"
    if args.oracle:
        other = residue(g, mc, power_witness(mc, wit.N + 1))
        rep.diagnostics["oracle"] = {"N": wit.N + 1, "residue": other}
        if other != value:
            raise ComputationError(f"residue depends on the witness: {value} vs {other}")


def _cohom_dict(c) -> dict[str, Any]:
    return {
        "dims": {"0": c.h0, "1": c.h1},
        "euler": c.euler,
        "representatives": {str(p): [F.matrix.to_strings() for F in c.representatives[p]] for p in (0, 1)},
    }


def cmd_cohom(prob: Problem, args, rep: Report) -> None:
    X, Y = prob.factorization(args.X), prob.factorization(args.Y)
    rep.inputs.update(source=args.X, target=args.Y)
    c = hom_cohomology(X, Y, _milnor(prob, args), args.trunc)
    rep.results = _cohom_dict(c)
    rep.diagnostics["truncation"] = c.truncation
    rep.diagnostics["trajectory"] = [list(t) for t in c.trajectory]
    rep.diagnostics["elapsed"] = c.elapsed


def cmd_pair(prob: Problem, args, rep: Report) -> None:
    F, G = prob.morphism(args.F), prob.morphism(args.G)
    rep.inputs.update(F=args.F, G=args.G)
    mc = _milnor(prob, args)
    value = kl_pairing(F, G, mc, naive=args.oracle)
    rep.results = {"value": value}
    rep.diagnostics["closed"] = {args.F: F.is_closed(), args.G: G.is_closed()}
    rep.diagnostics["wedge"] = "naive" if args.oracle else "recursive"


def cmd_gram(prob: Problem, args, rep: Report) -> None:
    X, Y = prob.factorization(args.X), prob.factorization(args.Y)
    rep.inputs.update(X=args.X, Y=args.Y)
    g = gram_matrix(X, Y, _milnor(prob, args), trunc=args.trunc)
    n = prob.ctx.n
    rep.results = {
        "blocks": [
            {
                "pairs": f"H^{b.parity}({args.X},{args.Y}) x H^{(n - b.parity) % 2}({args.Y},{args.X})",
                "shape": list(b.shape),
                "matrix": b.matrix,
                "determinant": b.determinant,
            }
            for b in g.blocks
        ],
        "determinant": g.determinant,
        "nondegenerate": g.nondegenerate,
    }
    rep.diagnostics["truncation"] = [g.forward.truncation, g.backward.truncation]
    rep.diagnostics["elapsed"] = g.elapsed


def cmd_chern(prob: Problem, args, rep: Report) -> None:
    X = prob.factorization(args.X)
    rep.inputs["X"] = args.X
    ch = chern(X, _milnor(prob, args), naive=args.oracle)
    rep.results = {"chern": ch.as_dict(), "polynomial": ch.lift()}


def cmd_bb(prob: Problem, args, rep: Report) -> None:
    F = prob.morphism(args.F)
    rep.inputs["F"] = args.F
    b = boundary_bulk(F, _milnor(prob, args), naive=args.oracle)
    rep.results = {"value": b.element.as_dict(), "polynomial": b.element.lift(), "closed": b.closed}
    if not b.closed:
        rep.diagnostics["warning"] = "morphism is not closed; the value is not a cohomology invariant"


def cmd_hrr(prob: Problem, args, rep: Report) -> None:
    X, Y = prob.factorization(args.X), prob.factorization(args.Y)
    rep.inputs.update(X=args.X, Y=args.Y)
    r = hrr_check(X, Y, _milnor(prob, args), trunc=args.trunc)
    rep.results = {
        "chi": r.chi,
        "pairing": r.pairing,
        "match": r.match,
        "chern": {"X": r.chern_source.as_dict(), "Y": r.chern_target.as_dict()},
    }
    rep.diagnostics["dims"] = {"0": r.cohomology.h0, "1": r.cohomology.h1}
    rep.diagnostics["truncation"] = r.cohomology.truncation
    if not r.match:
        rep.exit_code = 1


def cmd_koszul_check(prob, args, rep: Report) -> None:
    rep.inputs.update(n=args.n, samples=args.samples, seed=args.seed)
    fails = koszul_suite(random.Random(args.seed), args.n, args.samples)
    rep.results = {"verdict": "fail" if fails else "pass", "failures": fails}
    if fails:
        rep.exit_code = 1


def cmd_eta_check(prob: Problem, args, rep: Report) -> None:
    X = prob.factorization(args.X)
    rep.inputs["X"] = args.X
    r = eta_check(X)
    rep.results = {
        "verdict": "pass" if r.passed else "fail",
        "top_mod_delta": _grid(r.reduced),
        "expected": r.expected.to_strings(),
        "lower_terms_vanish": r.higher_terms_vanish,
    }
    if not r.passed:
        rep.exit_code = 1


def cmd_bpl_check(prob: Problem | None, args, rep: Report) -> None:
    if prob is None:
        items = [(k, X) for k, X in corpus_factorizations() if X.ctx.n <= 2 and X.rank <= 2]
    elif args.X:
        items = [(args.X, prob.factorization(args.X))]
    else:
        items = list(prob.factorizations.items())
    rep.inputs.update(degree=args.degree, factorizations=[k for k, _ in items])
    out = []
    ok = True
    for k, X in items:
        r = bpl_check(X, args.degree, args.cap or BPL_CAP)
        ok &= r.passed
        out.append({
            "name": k,
            "dims": list(r.dims),
            "identities": r.identities,
            "perturbed_dA_is_dQ": r.perturbed_dA_is_dQ,
        })
    rep.results = {"verdict": "pass" if ok else "fail", "retracts": out}
    if not ok:
        rep.exit_code = 1


def cmd_corpus(prob, args, rep: Report) -> None:
    numbers = args.criteria or list(range(1, len(CHECKS) + 1))
    bad = [k for k in numbers if not 1 <= k <= len(CHECKS)]
    if bad:
        raise UsageError(f"unknown criteria {bad}; valid range is 1..{len(CHECKS)}")
    rep.inputs["criteria"] = numbers
    results = [CHECKS[k - 1]() for k in numbers]
    rows = []
    for r in results:
        d = r.as_dict()
        d.pop("elapsed")
        rows.append(d)
    rep.results = {"verdict": "pass" if all(r.passed for r in results) else "fail", "criteria": rows}
    rep.diagnostics["elapsed"] = {str(r.number): r.elapsed for r in results}
    if not all(r.passed for r in results):
        rep.exit_code = 1


# -- parser ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


COMMANDS: dict[str, tuple[Callable, bool, list[tuple[str, dict]], str]] = {
    "validate": (cmd_validate, True, [], "load and validate a problem file"),
    "milnor": (cmd_milnor, True, [], "Milnor number and monomial basis"),
    "residue": (cmd_residue, True, [("expr", {})], "residue of expr over the Jacobian ideal"),
    "cohom": (cmd_cohom, True, [("X", {}), ("Y", {})], "cohomology of Hom(X, Y)"),
    "pair": (cmd_pair, True, [("F", {}), ("G", {})], "Kapustin-Li pairing of two morphisms"),
    "gram": (cmd_gram, True, [("X", {}), ("Y", {})], "Gram matrices of the pairing on cohomology"),
    "chern": (cmd_chern, True, [("X", {})], "Chern character of a factorization"),
    "bb": (cmd_bb, True, [("F", {})], "boundary-bulk map of an endomorphism"),
    "hrr": (cmd_hrr, True, [("X", {}), ("Y", {})], "compare chi Hom(X, Y) with <ch X, ch Y>"),
    "koszul-check": (
        cmd_koszul_check,
        False,
        [
            ("--n", {"type": int, "default": 2, "choices": (1, 2, 3)}),
            ("--samples", {"type": int, "default": 50}),
            ("--seed", {"type": int, "default": SEED}),
        ],
        "Koszul homotopy identities on random forms",
    ),
    "eta-check": (cmd_eta_check, True, [("X", {})], "top component of the transferred identity"),
    "bpl-check": (
        cmd_bpl_check,
        None,
        [("X", {"nargs": "?"}), ("--degree", {"type": int, "default": 4})],
        "perturbation lemma identities on truncated diagonal retracts",
    ),
    "corpus": (
        cmd_corpus,
        False,
        [("--criteria", {"type": int, "nargs": "+"})],
        "run the acceptance suite",
    ),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--trunc", type=int, default=None, help="initial cohomology truncation degree")
    common.add_argument("--cap", type=int, default=None, help="stabilization / series cap")
    common.add_argument("--oracle", action="store_true", help="use the naive and brute-force paths")
    parser = _Parser(prog="mfwb", description="Exact computations with matrix factorizations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, needs, extra, help_) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if needs is True:
            p.add_argument("problem")
        elif needs is None:
            p.add_argument("problem", nargs="?")
        for arg, kw in extra:
            p.add_argument(arg, **kw)
    return parser


def run(argv: list[str]) -> tuple[Report | dict, int]:
    """Parse ``argv`` and execute; returns the report (or an error object) and the exit code."""
    command = argv[0] if argv else None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        fn, needs, _, _ = COMMANDS[command]
        prob = load_problem(args.problem) if getattr(args, "problem", None) else None
        rep = Report(command, _echo(prob, args) if prob else {})
        t0 = time.perf_counter()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            fn(prob, args, rep)
        if caught:
            rep.diagnostics["warnings"] = [str(w.message) for w in caught]
        rep.diagnostics.setdefault("elapsed", time.perf_counter() - t0)
        return rep, rep.exit_code
    except MFError as exc:
        return _error(command, exc.to_dict()), exc.exit_code
    except RecursionError:
        return _error(command, {"kind": "computation", "message": "expression nesting too deep"}), 2


def _error(command, err: dict) -> dict:
    return {"schema": SCHEMA, "command": command, "error": err}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if argv and argv[0] in ("-h", "--help") or not argv:
        build_parser().print_help()
        return 0 if argv else 3
    fmt = "json" if _wants_json(argv) else "text"
    out, code = run(argv)
    if isinstance(out, Report):
        print(json.dumps(out.to_json(), indent=2) if fmt == "json" else out.to_text())
    elif fmt == "json":
        print(json.dumps(out, indent=2))
    else:
        err = out["error"]
        print(f"mfwb: {err['kind']} error: {err['message']}", file=sys.stderr)
        extra = {k: v for k, v in err.items() if k not in ("kind", "message")}
        if extra:
            print("mfwb: " + json.dumps(extra), file=sys.stderr)
    return code


def _wants_json(argv: list[str]) -> bool:
    # scanned directly so that usage errors are also reported in the requested format
    if "--format=json" in argv:
        return True
    return any(a == "--format" and b == "json" for a, b in zip(argv, argv[1:]))


if __name__ == "__main__":
    sys.exit(main())
