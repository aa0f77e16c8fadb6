"""Real quadratic fields, fractional ideals given by oriented Z-bases, and f_a."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Tuple

from .forms import BQF


class FieldError(ValueError):
    pass


class IdealError(ValueError):
    pass


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


def squarefree_part(n: int) -> int:
    """The square-free ``s`` with ``n = s * m^2``."""
    if n == 0:
        raise ValueError("zero has no square-free part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e % 2:
            out *= p
        p += 1
    return sign * out * n


def fundamental_discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


@dataclass(frozen=True)
class FieldData:
    d: int
    delta: int
    omega: str  # "sqrt(d)" or "(1+sqrt(d))/2"

    @property
    def omega_element(self) -> "QFElement":
        if self.d % 4 == 1:
            return QFElement(Fraction(1, 2), Fraction(1, 2))
        return QFElement(Fraction(0), Fraction(1))


def field_from_d(d: int) -> FieldData:
    if d <= 1:
        raise FieldError(f"d must exceed 1, got {d}")
    if not is_squarefree(d):
        raise FieldError(f"d={d} is not square-free")
    omega = "(1+sqrt(d))/2" if d % 4 == 1 else "sqrt(d)"
    return FieldData(d, fundamental_discriminant(d), omega)


@dataclass(frozen=True)
class QFElement:
    """``p + q*sqrt(d)``; ``d`` lives on the owning field."""

    p: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))

    def conjugate(self) -> "QFElement":
        return QFElement(self.p, -self.q)

    def norm(self, d: int) -> Fraction:
        return self.p * self.p - d * self.q * self.q

    def trace(self) -> Fraction:
        return 2 * self.p

    def add(self, other: "QFElement") -> "QFElement":
        return QFElement(self.p + other.p, self.q + other.q)

    def scale(self, n) -> "QFElement":
        return QFElement(self.p * n, self.q * n)

    def mul(self, other: "QFElement", d: int) -> "QFElement":
        return QFElement(self.p * other.p + d * self.q * other.q, self.p * other.q + self.q * other.p)


def omega_coords(field: FieldData, e: QFElement) -> Tuple[Fraction, Fraction]:
    """Coordinates ``(u, v)`` with ``e = u + v*omega``."""
    if field.d % 4 == 1:
        return e.p - e.q, 2 * e.q
    return e.p, e.q


def from_omega_coords(field: FieldData, u, v) -> QFElement:
    if field.d % 4 == 1:
        return QFElement(Fraction(u) + Fraction(v, 2), Fraction(v, 2))
    return QFElement(Fraction(u), Fraction(v))


@dataclass(frozen=True)
class FractionalIdeal:
    field: FieldData
    alpha: QFElement
    beta: QFElement

    def orientation(self) -> Fraction:
        """Coefficient of ``sqrt(d)`` in ``conj(alpha)*beta - alpha*conj(beta)``."""
        return 2 * (self.alpha.p * self.beta.q - self.alpha.q * self.beta.p)

    def to_json(self) -> dict:
        return {
            "d": self.field.d,
            "alpha": [str(self.alpha.p), str(self.alpha.q)],
            "beta": [str(self.beta.p), str(self.beta.q)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FractionalIdeal":
        f = field_from_d(int(data["d"]))
        a = QFElement(*(Fraction(s) for s in data["alpha"]))
        b = QFElement(*(Fraction(s) for s in data["beta"]))
        return cls(f, a, b)


def ideal(d: int, alpha: Tuple, beta: Tuple) -> FractionalIdeal:
    """Convenience constructor from ``(p, q)`` coordinate pairs."""
    return FractionalIdeal(field_from_d(d), QFElement(*alpha), QFElement(*beta))


def unit_ideal(field: FieldData) -> FractionalIdeal:
    return FractionalIdeal(field, QFElement(1, 0), field.omega_element)


def _coord_matrix(a: FractionalIdeal):
    return [omega_coords(a.field, a.alpha), omega_coords(a.field, a.beta)]


def denominator(a: FractionalIdeal) -> int:
    """Least positive integer clearing the module into ``Z_K``."""
    dens = [c.denominator for row in _coord_matrix(a) for c in row]
    return math.lcm(*dens)


def ideal_norm(a: FractionalIdeal, xi: int | None = None) -> Fraction:
    """``(1/xi^2) [Z_K : xi*a]`` computed as an index determinant."""
    xi = denominator(a) if xi is None else xi
    (u1, v1), (u2, v2) = _coord_matrix(a)
    cleared = [xi * u1, xi * v1, xi * u2, xi * v2]
    if any(c.denominator != 1 for c in cleared):
        raise IdealError(f"xi={xi} does not clear the denominators of the ideal")
    index = abs(cleared[0] * cleared[3] - cleared[1] * cleared[2])
    if index == 0:
        raise IdealError("degenerate basis: alpha and beta are dependent")
    return Fraction(index) / (xi * xi)


def orient(a: FractionalIdeal) -> FractionalIdeal:
    o = a.orientation()
    if o == 0:
        raise IdealError("degenerate basis: alpha and beta are dependent")
    if o > 0:
        return a
    return FractionalIdeal(a.field, a.beta, a.alpha)


def form_from_ideal(a: FractionalIdeal) -> BQF:
    """The norm form ``N(X*alpha + Y*beta)/N(a)`` of an oriented basis."""
    if a.orientation() <= 0:
        raise IdealError("basis is not oriented")
    d = a.field.d
    n = ideal_norm(a)
    al, be = a.alpha, a.beta
    fa = al.norm(d) / n
    fb = (al.mul(be.conjugate(), d)).trace() / n
    fc = be.norm(d) / n
    if any(c.denominator != 1 for c in (fa, fb, fc)):
        raise IdealError("basis does not span an ideal: form coefficients are not integers")
    f = BQF(int(fa), int(fb), int(fc))
    if f.disc != a.field.delta:
        raise IdealError(f"form discriminant {f.disc} differs from the field discriminant {a.field.delta}")
    return f


def act_on_basis(g, a: FractionalIdeal) -> FractionalIdeal:
    """Row-vector action ``(alpha, beta) -> (p*alpha + r*beta, q*alpha + s*beta)``.

    This is the convention under which ``form_from_ideal`` intertwines with
    :func:`cark.forms.gamma_act`.
    """
    p, q, r, s = g.p, g.q, g.r, g.s
    al, be = a.alpha, a.beta
    return FractionalIdeal(
        a.field,
        al.scale(p).add(be.scale(r)),
        al.scale(q).add(be.scale(s)),
    )


def _lattice_basis(rows: List[List[int]]) -> List[List[int]]:
    """Z-basis (echelon form) of the span of integer row vectors in Z^2."""
    rows = [list(r) for r in rows]
    while sum(1 for r in rows if r[0]) > 1:
        nz = sorted((r for r in rows if r[0]), key=lambda r: abs(r[0]))
        piv = nz[0]
        for r in nz[1:]:
            k = r[0] // piv[0]
            r[0] -= k * piv[0]
            r[1] -= k * piv[1]
    basis = [r for r in rows if r[0]][:1]
    g = 0
    for r in rows:
        if not r[0]:
            g = math.gcd(g, r[1])
    if g:
        basis.append([0, g])
    return basis


def ideal_from_generators(field: FieldData, gens: Iterable[QFElement]) -> FractionalIdeal:
    """Z_K-module generated by ``gens``, returned with an oriented Z-basis."""
    om = field.omega_element
    spans = []
    for g in gens:
        spans.append(g)
        spans.append(g.mul(om, field.d))
    coords = [omega_coords(field, e) for e in spans]
    den = math.lcm(*(c.denominator for row in coords for c in row))
    int_rows = [[int(u * den), int(v * den)] for u, v in coords]
    basis = _lattice_basis(int_rows)
    if len(basis) != 2:
        raise IdealError("generators do not span a rank-2 module")
    (u1, v1), (u2, v2) = basis
    a = from_omega_coords(field, Fraction(u1, den), Fraction(v1, den))
    b = from_omega_coords(field, Fraction(u2, den), Fraction(v2, den))
    return orient(FractionalIdeal(field, a, b))


def parse_ideal(d: int, text: str) -> FractionalIdeal:
    """Parse ``"p1,q1;p2,q2"``; a ``q`` may carry a ``√d`` / ``sqrt(d)`` suffix."""
    parts = text.split(";")
    if len(parts) != 2:
        raise IdealError(f"expected two basis elements separated by ';', got {text!r}")
    elems = []
    for part in parts:
        coords = [c.strip() for c in part.split(",")]
        if len(coords) != 2:
            raise IdealError(f"expected 'p,q' coordinates, got {part!r}")
        q = coords[1]
        for suffix in (f"√{d}", f"sqrt({d})", "√d", "sqrt(d)"):
            if q.endswith(suffix):
                q = q[: -len(suffix)].strip() or "1"
                break
        elems.append(QFElement(Fraction(coords[0]), Fraction(q)))
    return FractionalIdeal(field_from_d(d), elems[0], elems[1])
