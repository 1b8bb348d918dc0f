"""Problem files: a ring, named factorizations and named morphisms, as JSON.

::

    {
      "ring": {"variables": ["x", "y"], "potential": "x*y"},
      "factorizations": {"E": {"phi": [["x"]], "psi": [["y"]]}},
      "morphisms": {"F": {"source": "E", "target": "E", "parity": "even",
                          "matrix": [["1", "0"], ["0", "1"]]}}
    }
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import InputError, ValidationError
from .mfcore import MatrixFactorization, Morphism, validate_mf
from .polyring import Polynomial, RingContext

PARITIES = {"even": 0, "odd": 1, 0: 0, 1: 1}


@dataclass
class Problem:
    ctx: RingContext
    factorizations: dict[str, MatrixFactorization] = field(default_factory=dict)
    morphisms: dict[str, Morphism] = field(default_factory=dict)

    def factorization(self, name: str) -> MatrixFactorization:
        try:
            return self.factorizations[name]
        except KeyError:
            raise InputError(f"unknown factorization {name!r}; known: {sorted(self.factorizations)}") from None

    def morphism(self, name: str) -> Morphism:
        try:
            return self.morphisms[name]
        except KeyError:
            raise InputError(f"unknown morphism {name!r}; known: {sorted(self.morphisms)}") from None

    def to_json(self) -> dict[str, Any]:
        grid = lambda M: [[str(p) for p in r] for r in M]
        return {
            "ring": {"variables": list(self.ctx.variables), "potential": str(self.ctx.w)},
            "factorizations": {k: {"phi": grid(X.phi), "psi": grid(X.psi)} for k, X in self.factorizations.items()},
            "morphisms": {
                k: {
                    "source": F.source.name,
                    "target": F.target.name,
                    "parity": "odd" if F.parity else "even",
                    "matrix": grid(F.matrix.rows),
                }
                for k, F in self.morphisms.items()
            },
        }


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise InputError(f"{where}: field {key!r} has the wrong type")
    return val


def _grid(rows, where) -> list[list[str]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{where}: expected a list of rows")
    out = []
    for r in rows:
        row = []
        for v in r:
            if isinstance(v, bool) or not isinstance(v, (str, int)):
                raise InputError(f"{where}: entries must be expression strings or integers")
            row.append(str(v))
        out.append(row)
    return out


def problem_from_dict(data: dict[str, Any]) -> Problem:
    if not isinstance(data, dict):
        raise InputError("problem file must contain a JSON object")
    ring = _require(data, "ring", dict, "problem")
    variables = _require(ring, "variables", list, "ring")
    potential = _require(ring, "potential", str, "ring")
    ctx = RingContext.from_strings(variables, potential)
    prob = Problem(ctx)

    facts = data.get("factorizations", {})
    morphs = data.get("morphisms", {})
    if not isinstance(facts, dict) or not isinstance(morphs, dict):
        raise InputError("'factorizations' and 'morphisms' must be JSON objects")
    clash = set(facts) & set(morphs)
    if clash:
        raise ValidationError(f"names used for both a factorization and a morphism: {sorted(clash)}")

    for name, spec in facts.items():
        where = f"factorization {name!r}"
        phi = _grid(_require(spec, "phi", list, where), where)
        psi = _grid(_require(spec, "psi", list, where), where)
        prob.factorizations[name] = validate_mf(phi, psi, ctx, name)

    for name, spec in morphs.items():
        where = f"morphism {name!r}"
        src = prob.factorization(_require(spec, "source", str, where))
        tgt = prob.factorization(_require(spec, "target", str, where))
        par = spec.get("parity", "even") if isinstance(spec, dict) else None
        if par not in PARITIES:
            raise InputError(f"{where}: parity must be 'even' or 'odd'")
        rows = _grid(_require(spec, "matrix", list, where), where)
        N, M = 2 * tgt.rank, 2 * src.rank
        if len(rows) != N or any(len(r) != M for r in rows):
            raise ValidationError(f"{where}: matrix must be {N}x{M} (target x source)", where=name)
        try:
            prob.morphisms[name] = Morphism.from_rows(src, tgt, rows, PARITIES[par])
        except ValidationError as exc:
            raise ValidationError(f"{where}: {exc}", where=name) from None
    return prob


def load_problem(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return problem_from_dict(data)


def parse_in(prob: Problem, text: str) -> Polynomial:
    return prob.ctx.parse(text)
