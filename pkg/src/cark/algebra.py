"""Exact Gaussian-rational scalars, sparse multivariate polynomials and 2x2 matrices.

Variables are encoded as small integers: ``0`` and ``1`` are the bare symbols
``x`` and ``y`` (targets of :meth:`MultiPoly.collapse`), and ``2i`` / ``2i+1``
are ``x_i`` / ``y_i`` for ``i >= 1``.  This gives the fixed variable order
``x < y < x1 < y1 < x2 < y2 < ...``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

Rational = Union[int, Fraction]


class MissingVariableError(KeyError):
    """Raised when an evaluation assignment does not cover a variable."""


@dataclass(frozen=True, slots=True)
class GaussRat:
    """The exact value ``re + im*i`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "GaussRat":
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        other = GaussRat.coerce(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        other = GaussRat.coerce(other)
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussRat.coerce(other) - self

    def __mul__(self, other):
        other = GaussRat.coerce(other)
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussRat.coerce(other)
        den = other.re * other.re + other.im * other.im
        if not den:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussRat(other.re / den, -other.im / den)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def is_integral(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def __str__(self):
        return _format_gauss(self)


I = GaussRat(0, 1)
ONE = GaussRat(1)
ZERO = GaussRat(0)


def _format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _format_gauss(c: GaussRat) -> str:
    if not c.im:
        return _format_fraction(c.re)
    if not c.re:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{_format_fraction(c.im)}*i"
    sign = "+" if c.im > 0 else "-"
    mag = abs(c.im)
    im = "i" if mag == 1 else f"{_format_fraction(mag)}*i"
    return f"({_format_fraction(c.re)} {sign} {im})"


# --------------------------------------------------------------------------
# variables and monomials

def var_x(i: int) -> int:
    """Variable id of ``x_i``; ``i = 0`` gives the bare ``x``."""
    return 2 * i


def var_y(i: int) -> int:
    """Variable id of ``y_i``; ``i = 0`` gives the bare ``y``."""
    return 2 * i + 1


def var_name(v: int) -> str:
    letter = "x" if v % 2 == 0 else "y"
    idx = v // 2
    return letter if idx == 0 else f"{letter}{idx}"


def var_latex(v: int) -> str:
    letter = "x" if v % 2 == 0 else "y"
    idx = v // 2
    return letter if idx == 0 else f"{letter}_{{{idx}}}"


_VAR_RE = re.compile(r"^([xy])(\d*)$")


def parse_var(name: str) -> int:
    m = _VAR_RE.match(name)
    if not m:
        raise ValueError(f"not a variable name: {name!r}")
    idx = int(m.group(2)) if m.group(2) else 0
    if m.group(2) and idx == 0:
        raise ValueError("indexed variables start at 1")
    return var_x(idx) if m.group(1) == "x" else var_y(idx)


# A monomial is a tuple of (variable, exponent) pairs sorted by variable with
# positive exponents.  The empty tuple is the constant monomial.
Monomial = Tuple[Tuple[int, int], ...]

CONST: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_order_key(m: Monomial):
    """Graded lex key: total degree first, then exponents from the largest variable down."""
    return (mono_degree(m), tuple((-v, e) for v, e in reversed(m)))


# --------------------------------------------------------------------------

class MultiPoly:
    """Immutable sparse polynomial with :class:`GaussRat` coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, GaussRat] | None = None):
        clean: Dict[Monomial, GaussRat] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = GaussRat.coerce(coeff)
                if coeff:
                    clean[tuple(sorted(mono))] = coeff
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, GaussRat]) -> "MultiPoly":
        # terms already canonical (sorted monomials, no zeros)
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "MultiPoly":
        return cls({CONST: GaussRat.coerce(c)})

    @classmethod
    def var(cls, v: int) -> "MultiPoly":
        return cls._raw({((v, 1),): ONE})

    @classmethod
    def x(cls, i: int = 0) -> "MultiPoly":
        return cls.var(var_x(i))

    @classmethod
    def y(cls, i: int = 0) -> "MultiPoly":
        return cls.var(var_y(i))

    @property
    def terms(self) -> Dict[Monomial, GaussRat]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- ring operations -------------------------------------------------
    @staticmethod
    def _lift(other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        out: Dict[Monomial, GaussRat] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw({m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "MultiPoly":
        c = GaussRat.coerce(c)
        if not c:
            return MultiPoly()
        return MultiPoly._raw({m: k * c for m, k in self._terms.items()})

    def __truediv__(self, c):
        return self.scale(ONE / GaussRat.coerce(c))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- inspection --------------------------------------------------------
    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=-1)

    def constant_term(self) -> GaussRat:
        return self._terms.get(CONST, ZERO)

    def coefficient(self, mono: Monomial) -> GaussRat:
        return self._terms.get(tuple(sorted(mono)), ZERO)

    def arity(self) -> int:
        """Largest pair index ``i`` of any ``x_i``/``y_i`` occurring."""
        return max((v // 2 for v in self.variables()), default=0)

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: mono_order_key(t[0]), reverse=True)

    # -- substitution ------------------------------------------------------
    def evaluate(self, assignment: Mapping[int, object]) -> GaussRat:
        """Exact value at ``assignment`` (variable id -> scalar)."""
        values = {}
        for v in sorted(self.variables()):
            if v not in assignment:
                raise MissingVariableError(f"assignment does not cover variable {var_name(v)}")
            values[v] = GaussRat.coerce(assignment[v])
        total = ZERO
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                val = values[v]
                for _ in range(e):
                    t = t * val
            total = total + t
        return total

    def substitute(self, mapping: Mapping[int, object]) -> "MultiPoly":
        """Replace variables by polynomials or scalars; unmapped variables stay."""
        images = {v: self._lift(p) for v, p in mapping.items()}
        out = MultiPoly()
        for m, c in self._terms.items():
            fixed = []
            term = MultiPoly.const(c)
            for v, e in m:
                if v in images:
                    term = term * images[v] ** e
                else:
                    fixed.append((v, e))
            if fixed:
                term = term * MultiPoly._raw({tuple(fixed): ONE})
            out = out + term
        return out

    def rename(self, mapping: Mapping[int, int]) -> "MultiPoly":
        """Apply a variable renaming (need not be injective)."""
        out: Dict[Monomial, GaussRat] = {}
        for m, c in self._terms.items():
            acc: Dict[int, int] = {}
            for v, e in m:
                w = mapping.get(v, v)
                acc[w] = acc.get(w, 0) + e
            mono = tuple(sorted(acc.items()))
            s = out.get(mono)
            out[mono] = c if s is None else s + c
        return MultiPoly._raw({m: c for m, c in out.items() if c})

    def collapse(self, to: str = "x") -> "MultiPoly":
        """Identify variables: ``to="x"`` sends every variable to ``x``;
        ``to="xy"`` sends each ``x_i`` to ``x`` and each ``y_i`` to ``y``."""
        if to == "x":
            mapping = {v: 0 for v in self.variables()}
        elif to == "xy":
            mapping = {v: v % 2 for v in self.variables()}
        else:
            raise ValueError(f"unknown collapse target {to!r}")
        return self.rename(mapping)

    # -- rendering ---------------------------------------------------------
    def __repr__(self):
        return f"MultiPoly({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        return render_text(self)

    def to_latex(self) -> str:
        return render_latex(self)

    def to_json(self) -> list:
        return [
            {
                "exponents": {var_name(v): e for v, e in m},
                "re": _format_fraction(c.re),
                "im": _format_fraction(c.im),
            }
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> "MultiPoly":
        terms: Dict[Monomial, GaussRat] = {}
        for entry in data:
            mono = tuple(sorted((parse_var(k), int(e)) for k, e in entry["exponents"].items()))
            coeff = GaussRat(Fraction(entry["re"]), Fraction(entry["im"]))
            terms[mono] = terms.get(mono, ZERO) + coeff
        return cls(terms)


def _mono_text(m: Monomial, namer, sep: str) -> str:
    parts = []
    for v, e in m:
        parts.append(namer(v) if e == 1 else f"{namer(v)}^{e}" if sep == "*" else f"{namer(v)}^{{{e}}}")
    return sep.join(parts)


def _real_sum(terms, namer, sep, frac) -> str:
    """Render ``sum c*m`` for rational ``c``."""
    out = []
    for m, c in terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = _mono_text(m, namer, sep)
        if not body:
            piece = frac(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{frac(mag)}{sep}{body}"
        if not out:
            out.append(piece if sign == "+" else f"-{piece}")
        else:
            out.append(f" {sign} {piece}")
    return "".join(out) if out else "0"


def render_text(p: MultiPoly) -> str:
    """Canonical text: descending graded-lex order, ``*`` products, ``i`` for sqrt(-1)."""
    terms = p.sorted_terms()
    if not terms:
        return "0"
    if all(not c.re for _, c in terms):
        inner = _real_sum([(m, c.im) for m, c in terms], var_name, "*", _format_fraction)
        return f"i*({inner})"
    if all(not c.im for _, c in terms):
        return _real_sum([(m, c.re) for m, c in terms], var_name, "*", _format_fraction)
    out = []
    for m, c in terms:
        body = _mono_text(m, var_name, "*")
        coeff = _format_gauss(c)
        if c.re and c.im:
            piece = coeff if not body else f"{coeff}*{body}"
            out.append(piece if not out else f" + {piece}")
            continue
        rendered = _real_sum([(m, c.re or c.im)], var_name, "*", _format_fraction)
        if c.im:
            rendered = f"i*({rendered})"
        if not out:
            out.append(rendered)
        elif rendered.startswith("-"):
            out.append(f" - {rendered[1:]}")
        else:
            out.append(f" + {rendered}")
    return "".join(out)


def _latex_frac(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return rf"\frac{{{q.numerator}}}{{{q.denominator}}}"


def render_latex(p: MultiPoly) -> str:
    """Math-mode LaTeX, with ``\\sqrt{-1}`` factored out of purely imaginary polynomials."""
    terms = p.sorted_terms()
    if not terms:
        return "0"
    if all(not c.re for _, c in terms):
        inner = _real_sum([(m, c.im) for m, c in terms], var_latex, " ", _latex_frac)
        return rf"\sqrt{{-1}} \left({inner}\right)"
    if all(not c.im for _, c in terms):
        return _real_sum([(m, c.re) for m, c in terms], var_latex, " ", _latex_frac)
    re_part = MultiPoly._raw({m: GaussRat(c.re) for m, c in terms if c.re})
    im_part = MultiPoly._raw({m: GaussRat(c.im) for m, c in terms if c.im})
    return rf"{render_latex(re_part)} + \sqrt{{-1}} \left({render_latex(im_part)}\right)"


# --------------------------------------------------------------------------
# parsing (inverse of render_text; also reads Table-style fixtures)

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([xy]\d*)|(i)\b|(.))")


def _tokenize(text: str):
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, var, imag, other = m.groups()
        if num is not None:
            yield ("num", int(num))
        elif var is not None:
            yield ("var", parse_var(var))
        elif imag is not None:
            yield ("i", None)
        elif other is not None and not other.isspace():
            yield ("op", other)
    yield ("end", None)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ValueError(f"expected {op!r}, got {tok}")

    def parse(self) -> MultiPoly:
        p = self.expr()
        if self.peek()[0] != "end":
            raise ValueError(f"trailing input at token {self.peek()}")
        return p

    def expr(self) -> MultiPoly:
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term().scale(sign)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> MultiPoly:
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                acc = acc * self.factor()
            elif tok == ("op", "/"):
                self.take()
                den = self.factor()
                if den.variables():
                    raise ValueError("division by a non-constant")
                acc = acc / den.constant_term()
            elif tok[0] in ("num", "var", "i") or tok == ("op", "("):
                acc = acc * self.factor()  # implicit product
            else:
                return acc

    def factor(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise ValueError("exponent must be a nonnegative integer")
            base = base ** tok[1]
        return base

    def atom(self) -> MultiPoly:
        tok = self.take()
        kind, val = tok
        if kind == "num":
            return MultiPoly.const(val)
        if kind == "var":
            return MultiPoly.var(val)
        if kind == "i":
            return MultiPoly.const(I)
        if tok == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        if tok == ("op", "-"):
            return -self.factor()
        raise ValueError(f"unexpected token {tok}")


def parse_poly(text: str) -> MultiPoly:
    """Parse text such as ``"x1*y1 + 2"`` or ``"i*(x1 - y1)"``; juxtaposition multiplies."""
    return _Parser(text).parse()


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SymMat2:
    """2x2 matrix with :class:`MultiPoly` entries."""

    m11: MultiPoly
    m12: MultiPoly
    m21: MultiPoly
    m22: MultiPoly

    @classmethod
    def of(cls, a, b, c, d) -> "SymMat2":
        lift = MultiPoly._lift
        return cls(lift(a), lift(b), lift(c), lift(d))

    @classmethod
    def identity(cls) -> "SymMat2":
        return cls.of(1, 0, 0, 1)

    def __matmul__(self, other: "SymMat2") -> "SymMat2":
        return SymMat2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def det(self) -> MultiPoly:
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> MultiPoly:
        return self.m11 + self.m22

    def entries(self):
        return (self.m11, self.m12, self.m21, self.m22)

    def evaluate(self, assignment) -> Tuple[GaussRat, GaussRat, GaussRat, GaussRat]:
        return tuple(e.evaluate(assignment) for e in self.entries())


def m_matrix(i: int) -> SymMat2:
    """``M(x_i, y_i) = [[1 + x_i y_i, x_i], [y_i, 1]]``."""
    x, y = MultiPoly.x(i), MultiPoly.y(i)
    return SymMat2.of(x * y + 1, x, y, 1)
