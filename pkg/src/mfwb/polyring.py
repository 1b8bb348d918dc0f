"""Exact multivariate polynomials over the rationals.

A :class:`Polynomial` is a sparse map from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients, tagged with the ordered tuple of
variable names it lives over.  Values are immutable; every operation returns
a new polynomial.

Printing uses graded-lexicographic order (largest term first) so output is
deterministic, and :func:`parse_polynomial` reads that output back::

    >>> ctx = RingContext.from_strings(["x", "y"], "x^3 + y^3")
    >>> p = parse_polynomial("3*x^2*y - 1/2", ctx)
    >>> str(p)
    '3*x^2*y - 1/2'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import ContextError, ParseError, ValidationError

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]


def grlex_key(e: Exponent) -> tuple:
    """Sort key for graded-lex order (ascending)."""
    return (sum(e), e)


def monomials_of_degree(nvars: int, degree: int) -> list[Exponent]:
    """Exponent tuples of exactly the given total degree, lex ascending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for k in range(degree + 1):
        out.extend((k,) + rest for rest in monomials_of_degree(nvars - 1, degree - k))
    return out


def monomials_up_to(nvars: int, max_degree: int) -> list[Exponent]:
    """All exponent tuples of total degree <= max_degree, grlex ascending."""
    out: list[Exponent] = []
    for d in range(max_degree + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


class Polynomial:
    """Sparse polynomial with exact rational coefficients."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(
        self,
        variables: Sequence[str],
        terms: Mapping[Exponent, Scalar] | None = None,
    ):
        variables = tuple(variables)
        n = len(variables)
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != n:
                raise ContextError(f"exponent {e} has length {len(e)}, expected {n}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.variables = variables
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exponent, Fraction]) -> "Polynomial":
        # trusted constructor: caller guarantees normalized terms
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> "Polynomial":
        variables = tuple(variables)
        c = Fraction(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def monomial(cls, variables: Sequence[str], e: Exponent, c: Scalar = 1) -> "Polynomial":
        return cls(variables, {tuple(e): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name_or_index: str | int) -> "Polynomial":
        variables = tuple(variables)
        i = name_or_index if isinstance(name_or_index, int) else variables.index(name_or_index)
        e = [0] * len(variables)
        e[i] = 1
        return cls._raw(variables, {tuple(e): Fraction(1)})

    # -- basic queries ----------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int:
        """Lowest total degree of a term; -1 for the zero polynomial."""
        return min((sum(e) for e in self.terms), default=-1)

    def coefficient(self, e: Sequence[int]) -> Fraction:
        e = tuple(e)
        if len(e) != self.nvars:
            raise ContextError(f"exponent {e} has length {len(e)}, expected {self.nvars}")
        return self.terms.get(e, Fraction(0))

    def sorted_terms(self, descending: bool = True) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=descending)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ContextError(
                    f"context mismatch: {self.variables} vs {other.variables}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(self.variables, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return Polynomial.zero(self.variables)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial._raw(self.variables, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers need a non-negative integer exponent")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(self.variables, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution ---------------------------------------

    def derivative(self, i: int) -> "Polynomial":
        """Formal partial derivative in the variable with 0-based index ``i``."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return Polynomial._raw(self.variables, out)

    def substitute(
        self,
        assignment: Mapping[str | int, "Polynomial | Scalar"],
        target: Sequence[str] | None = None,
    ) -> "Polynomial":
        """Simultaneous substitution of variables by polynomials.

        ``target`` is the variable tuple of the result; it defaults to the
        common context of the substituted values (or our own).  Variables not
        in ``assignment`` are kept and must exist in ``target``.
        """
        amap: dict[int, Polynomial | Scalar] = {}
        for key, val in assignment.items():
            idx = key if isinstance(key, int) else self.variables.index(key)
            amap[idx] = val
        if target is None:
            ctxs = {v.variables for v in amap.values() if isinstance(v, Polynomial)}
            if len(ctxs) > 1:
                raise ContextError("substitution values live in different contexts")
            target = ctxs.pop() if ctxs else self.variables
        target = tuple(target)
        images: list[Polynomial] = []
        for i, name in enumerate(self.variables):
            if i in amap:
                v = amap[i]
                if isinstance(v, Polynomial):
                    if v.variables != target:
                        raise ContextError(
                            f"substitution value for {name} lives in {v.variables}, expected {target}"
                        )
                    images.append(v)
                else:
                    images.append(Polynomial.constant(target, v))
            else:
                if name not in target:
                    raise ContextError(f"variable {name} has no image in {target}")
                images.append(Polynomial.variable(target, name))
        # fast path: pure renaming/embedding of variables into monomials
        mono_images = []
        for img in images:
            if len(img.terms) == 1:
                (e, c), = img.terms.items()
                if c == 1:
                    mono_images.append(e)
                    continue
            mono_images = None
            break
        if mono_images is not None:
            out: dict[Exponent, Fraction] = {}
            m = len(target)
            for e, c in self.terms.items():
                te = [0] * m
                for k, img_e in zip(e, mono_images):
                    if k:
                        for j in range(m):
                            te[j] += k * img_e[j]
                te = tuple(te)
                out[te] = out.get(te, 0) + c
            return Polynomial._raw(target, {e: c for e, c in out.items() if c})
        power_cache: dict[tuple[int, int], Polynomial] = {}

        def pw(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in power_cache:
                power_cache[key] = images[i] ** k
            return power_cache[key]

        result = Polynomial.zero(target)
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            result = result + term
        return result

    def truncate(self, degree: int) -> "Polynomial":
        """Drop every term of total degree >= ``degree``."""
        return Polynomial._raw(
            self.variables, {e: c for e, c in self.terms.items() if sum(e) < degree}
        )

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial._raw(
            self.variables, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = format_monomial(e, self.variables)
            neg = c < 0
            a = -c if neg else c
            if mono == "1":
                body = _fmt_fraction(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_fraction(a)}*{mono}"
            if idx == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, vars={self.variables})"


def _fmt_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(e: Sequence[int], variables: Sequence[str]) -> str:
    parts = []
    for k, name in zip(e, variables):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts) if parts else "1"


def format_rational(c: Fraction) -> str:
    """Exact ``p/q`` text (``p`` for integers) used in reports."""
    return _fmt_fraction(Fraction(c))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True)
class RingContext:
    """Ordered variables plus the potential ``w`` (which must lie in the maximal ideal)."""

    variables: tuple[str, ...]
    potential: Polynomial

    def __post_init__(self):
        if len(self.variables) < 1:
            raise ValidationError("a ring context needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValidationError(f"duplicate variable names in {self.variables}")
        if self.potential.variables != self.variables:
            raise ContextError("potential does not live over the context variables")
        if self.potential.constant_term():
            raise ValidationError("the potential must have zero constant term")

    @classmethod
    def from_strings(cls, variables: Iterable[str], potential: str) -> "RingContext":
        variables = tuple(variables)
        for v in variables:
            if not _IDENT.fullmatch(v):
                raise ValidationError(f"invalid variable name {v!r}")
        return cls(variables, parse_polynomial(potential, variables))

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def w(self) -> Polynomial:
        return self.potential

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.variables)

    def one(self) -> Polynomial:
        return Polynomial.constant(self.variables, 1)

    def const(self, c: Scalar) -> Polynomial:
        return Polynomial.constant(self.variables, c)

    def var(self, name_or_index: str | int) -> Polynomial:
        return Polynomial.variable(self.variables, name_or_index)

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self)


# -- operations named in the module contract -----------------------------


def combine(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.variables != b.variables:
        raise ContextError(f"context mismatch: {a.variables} vs {b.variables}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    return p.derivative(i)


def substitute(p: Polynomial, assignment: Mapping, target: Sequence[str] | None = None) -> Polynomial:
    return p.substitute(assignment, target)


def monomial_coefficient(p: Polynomial, e: Sequence[int]) -> Fraction:
    return p.coefficient(e)


# -- expression parser ---------------------------------------------------
#
# expr   := ['+'|'-'] term (('+'|'-') term)*
# term   := factor ('*' factor)*
# factor := ('+'|'-') factor | base ('^' uint)?
# base   := rational | var | '(' expr ')'
# rational := uint ('/' uint)?

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "+-*^/()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            tokens.append((ch, ch, m.start(3)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, pos: int | None = None):
        raise ParseError(message, self.peek()[2] if pos is None else pos, self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "eof":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "eof":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        kind = self.peek()[0]
        if kind in ("+", "-"):
            self.take()
            inner = self.factor()
            return -inner if kind == "-" else inner
        b = self.base()
        if self.peek()[0] == "^":
            self.take()
            kind, val, pos = self.peek()
            if kind == "-":
                self.fail("negative exponent", pos)
            if kind != "int":
                self.fail("exponent must be a non-negative integer", pos)
            self.take()
            b = b ** int(val)
        return b

    def base(self) -> Polynomial:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            num = int(val)
            if self.peek()[0] == "/":
                self.take()
                kind2, val2, pos2 = self.peek()
                if kind2 != "int":
                    self.fail("expected integer denominator", pos2)
                self.take()
                if int(val2) == 0:
                    self.fail("zero denominator", pos2)
                return Polynomial.constant(self.variables, Fraction(num, int(val2)))
            return Polynomial.constant(self.variables, num)
        if kind == "ident":
            if val not in self.variables:
                self.fail(f"unknown identifier {val!r}", pos)
            self.take()
            return Polynomial.variable(self.variables, val)
        if kind == "(":
            self.take()
            p = self.expr()
            if self.peek()[0] != ")":
                self.fail("expected ')'")
            self.take()
            return p
        if kind == "eof":
            self.fail("unexpected end of expression", pos)
        self.fail(f"unexpected token {val!r}", pos)


def parse_polynomial(text: str, ctx: "RingContext | Sequence[str]") -> Polynomial:
    """Parse an expression over the variables of ``ctx``.

    Raises :class:`ParseError` (with a 0-based source position) on unknown
    identifiers, malformed syntax and negative exponents.
    """
    variables = ctx.variables if isinstance(ctx, RingContext) else tuple(ctx)
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}", 0)
    return _Parser(text, variables).parse()
