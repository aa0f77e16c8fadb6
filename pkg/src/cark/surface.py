"""Integral points of L_2k^2 - 4 = z^2 Delta, their rotation orbits, and the class round trip."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .field import squarefree_part
from .forms import (
    BQF,
    FormClass,
    FormError,
    PellSolution,
    automorphism,
    automorphism_xz,
    canonical_cycle,
    factorize,
    form_classes,
    is_fundamental_discriminant,
    is_square,
    pell_fundamental,
    reduce,
)
from .words import CarkTuple, decompose, form_from_automorphism, least_rotation, tuple_to_matrix


class NonmaximalPointError(ValueError):
    """Point whose induced form has a discriminant other than the field's."""

    def __init__(self, point: "SurfacePoint"):
        self.point = point
        self.induced_disc = point.induced_disc
        super().__init__(
            f"point {point.tuple} induces discriminant {point.induced_disc}, not {point.delta}"
        )


def lucas_eval_int(t: CarkTuple) -> int:
    """The multivariate Lucas polynomial at ``t``, as a trace."""
    return tuple_to_matrix(t).trace


def induced_disc(t: CarkTuple) -> int:
    return form_from_automorphism(tuple_to_matrix(t)).disc


@dataclass(frozen=True)
class FieldInfo:
    delta: int
    pell: PellSolution
    classes: Tuple[FormClass, ...]
    tuples: Tuple[CarkTuple, ...]  # decomposed fundamental automorphism per class

    @property
    def h_plus(self) -> int:
        return len(self.classes)

    @property
    def k_field(self) -> int:
        return max(t.k for t in self.tuples)


def _check_fundamental(delta: int):
    if not is_fundamental_discriminant(delta):
        raise FormError(f"{delta} is not a fundamental discriminant")


@functools.lru_cache(maxsize=256)
def field_info(delta: int) -> FieldInfo:
    _check_fundamental(delta)
    pell = pell_fundamental(delta)
    classes = tuple(form_classes(delta))
    tuples = tuple(decompose(automorphism(c.representative, pell)) for c in classes)
    return FieldInfo(delta, pell, classes, tuples)


def k_field(delta: int) -> int:
    """Largest tuple length over the narrow classes."""
    return field_info(delta).k_field


@dataclass(frozen=True)
class SurfaceSpec:
    delta: int
    k_field: int
    z_mode: str = "fundamental"  # "fundamental", "fixed" or "free"
    lam: Optional[int] = None

    def __post_init__(self):
        if self.z_mode not in ("fundamental", "fixed", "free"):
            raise ValueError(f"unknown z_mode {self.z_mode!r}")
        if self.z_mode == "fixed" and (self.lam is None or self.lam < 1):
            raise ValueError("z_mode 'fixed' needs a positive lam")
        if self.k_field < 1:
            raise ValueError("k_field must be positive")

    @classmethod
    def for_field(cls, delta: int, k: int | None = None) -> "SurfaceSpec":
        return cls(delta, k_field(delta) if k is None else k)

    @property
    def z(self) -> int:
        if self.z_mode == "fundamental":
            return pell_fundamental(self.delta).z
        if self.z_mode == "fixed":
            return self.lam
        raise ValueError("z is not fixed in free mode")


@dataclass(frozen=True, order=True)
class SurfacePoint:
    tuple: CarkTuple
    z: int
    delta: int
    induced_disc: int

    def __post_init__(self):
        x = self.lucas_value
        if x * x - 4 != self.z * self.z * self.delta:
            raise ValueError(f"{self.tuple} is not on the surface for z={self.z}, delta={self.delta}")

    @property
    def lucas_value(self) -> int:
        return lucas_eval_int(self.tuple)

    @property
    def classification(self) -> str:
        return "fundamental" if self.induced_disc == self.delta else "nonmaximal"

    @property
    def orbit_rep(self) -> CarkTuple:
        return self.tuple.canonical()

    def to_json(self) -> dict:
        return {
            "tuple": self.tuple.flat(),
            "lucas_value": str(self.lucas_value),
            "classification": self.classification,
            "induced_disc": str(self.induced_disc),
            "orbit_rep": self.orbit_rep.flat(),
        }

    @classmethod
    def from_json(cls, data: dict, z: int, delta: int) -> "SurfacePoint":
        return cls(CarkTuple.from_flat(data["tuple"]), z, delta, int(data["induced_disc"]))


def classify(t: CarkTuple, z: int, delta: int) -> SurfacePoint:
    return SurfacePoint(t, z, delta, induced_disc(t))


def paddings(t: CarkTuple, k: int) -> List[CarkTuple]:
    """Every length-``k`` tuple whose nonzero pairs, read cyclically, are a rotation of ``t``."""
    base = t.stripped().pairs
    l = len(base)
    if l > k:
        return []
    rots = set(CarkTuple(r).pairs for r in (base[i:] + base[:i] for i in range(l)))
    out = set()
    for slots in itertools.combinations(range(k), l):
        for rot in rots:
            pairs = [(0, 0)] * k
            for slot, pair in zip(slots, rot):
                pairs[slot] = pair
            out.add(tuple(pairs))
    return [CarkTuple(p) for p in sorted(out)]


def _square_divisors(n: int) -> List[int]:
    """All ``u > 0`` with ``u^2 | n``."""
    opts = [[p**j for j in range(e // 2 + 1)] for p, e in factorize(n).items()]
    return sorted(math.prod(c) for c in itertools.product(*opts))


def _target_trace(z: int, delta: int) -> Optional[int]:
    n = z * z * delta + 4
    x = math.isqrt(n)
    return x if x * x == n else None


def tuples_with_trace(x: int, k: int) -> List[Tuple[CarkTuple, int]]:
    """All admissible length-``k`` tuples of trace ``x``, each with its induced discriminant.

    Hyperbolic classes of trace ``x`` are the fundamental automorphisms
    ``W_f(x, u)`` of primitive forms ``f`` of discriminant ``(x^2 - 4)/u^2``;
    decomposing one form per class and padding in every way gives every tuple.
    """
    if x <= 2:
        return []
    n = x * x - 4
    out = []
    for u in _square_divisors(n):
        disc = n // (u * u)
        if disc % 4 not in (0, 1) or is_square(disc):
            continue
        for cls in form_classes(disc):
            t = decompose(automorphism_xz(cls.representative, x, u))
            for p in paddings(t, k):
                out.append((p, disc))
    out.sort()
    return out


def tuples_with_trace_box(x: int, k: int) -> List[CarkTuple]:
    """Exhaustive search of the box ``m_i, n_i <= x``, pruned by trace monotonicity.

    Much slower than :func:`tuples_with_trace`; kept as an independent check.
    """
    out = []

    def trace_with(P, m, n):
        p, q, r, s = P
        return p * (1 + m * n) + q * n + r * m + s

    def walk(i, P, pairs):
        if i == k:
            if P[0] + P[3] == x and any(pr != (0, 0) for pr in pairs):
                out.append(CarkTuple(tuple(pairs)))
            return
        walk(i + 1, P, pairs + [(0, 0)])
        p, q, r, s = P
        m = 1
        while trace_with(P, m, 1) <= x:
            n = 1
            while trace_with(P, m, n) <= x:
                nxt = (p * (1 + m * n) + q * n, p * m + q, r * (1 + m * n) + s * n, r * m + s)
                walk(i + 1, nxt, pairs + [(m, n)])
                n += 1
            m += 1

    walk(0, (1, 0, 0, 1), [])
    return sorted(out)


def enumerate_points(spec: SurfaceSpec) -> List[SurfacePoint]:
    """Admissible integral points of the surface, classified."""
    if spec.z_mode == "free":
        raise ValueError("free z is only available through general_hypersurface with explicit lambda")
    z = spec.z
    x = _target_trace(z, spec.delta)
    if x is None:
        return []
    return [SurfacePoint(t, z, spec.delta, disc) for t, disc in tuples_with_trace(x, spec.k_field)]


@dataclass
class Orbit:
    rep: CarkTuple
    points: List[SurfacePoint]

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def classification(self) -> str:
        return self.points[0].classification


def quotient_orbits(points: List[SurfacePoint]) -> List[Orbit]:
    """Group points under cyclic rotation of pairs."""
    if len({p.tuple.k for p in points}) > 1:
        raise ValueError("points must share one tuple length")
    groups: Dict[tuple, List[SurfacePoint]] = {}
    for p in points:
        groups.setdefault(least_rotation(p.tuple.pairs), []).append(p)
    return [Orbit(CarkTuple(rep), sorted(pts)) for rep, pts in sorted(groups.items())]


def class_to_point(delta: int, cls: FormClass, k: int | None = None) -> SurfacePoint:
    info = field_info(delta)
    k = info.k_field if k is None else k
    t = decompose(automorphism(cls.representative, info.pell))
    return SurfacePoint(t.padded(k), info.pell.z, delta, delta)


def point_to_class(p: SurfacePoint) -> FormClass:
    if p.classification != "fundamental":
        raise NonmaximalPointError(p)
    f = form_from_automorphism(tuple_to_matrix(p.tuple))
    return canonical_cycle(reduce(f)[0])


@dataclass
class RoundTripReport:
    delta: int
    z: int
    k: int
    h_plus: int
    cycle_count: int
    points: List[SurfacePoint]
    orbits: List[Orbit]
    injective: bool
    distinct_classes: bool
    counts_match: bool
    findings: List[str] = field(default_factory=list)

    @property
    def bijection(self) -> bool:
        return self.injective and self.distinct_classes and self.counts_match

    @property
    def fundamental_orbits(self) -> List[Orbit]:
        return [o for o in self.orbits if o.classification == "fundamental"]

    @property
    def bijection_up_to_padding(self) -> bool:
        """Same check with orbits also identified when they differ only in where padding sits."""
        stripped = {o.rep.stripped().canonical() for o in self.fundamental_orbits}
        classes = {point_to_class(o.points[0]).representative for o in self.fundamental_orbits}
        return self.injective and len(stripped) == len(classes) == self.h_plus == self.cycle_count

    @property
    def nonmaximal_count(self) -> int:
        return sum(1 for p in self.points if p.classification != "fundamental")

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "z": str(self.z),
            "k": self.k,
            "points": [p.to_json() for p in self.points],
            "h_plus": self.h_plus,
            "bijection": self.bijection,
            "bijection_up_to_padding": self.bijection_up_to_padding,
            "nonmaximal_count": self.nonmaximal_count,
            "fundamental_orbits": len(self.fundamental_orbits),
            "findings": list(self.findings),
        }

    def summary(self) -> dict:
        out = self.to_json()
        del out["points"]
        return out


def round_trip(delta: int, k: int | None = None) -> RoundTripReport:
    info = field_info(delta)
    k = info.k_field if k is None else k
    z = info.pell.z
    points = enumerate_points(SurfaceSpec(delta, k))
    orbits = quotient_orbits(points)
    findings = []

    class_points = [class_to_point(delta, c, k) for c in info.classes]
    reps = [p.orbit_rep for p in class_points]
    injective = len(set(reps)) == len(reps)
    if not injective:
        findings.append("class_to_point sends distinct classes to one orbit")

    by_class: Dict[BQF, List[CarkTuple]] = {}
    for orb in orbits:
        if orb.classification != "fundamental":
            continue
        cls = point_to_class(orb.points[0])
        by_class.setdefault(cls.representative, []).append(orb.rep)
    distinct = all(len(v) == 1 for v in by_class.values())
    for rep, orbs in by_class.items():
        if len(orbs) > 1:
            findings.append(
                f"class of {rep} is hit by {len(orbs)} orbits: " + "; ".join(str(o) for o in orbs)
            )
    n_fund = sum(len(v) for v in by_class.values())
    cycle_count = len(form_classes(delta))
    counts = n_fund == info.h_plus == cycle_count
    if not counts:
        findings.append(f"{n_fund} fundamental orbits against h+ = {info.h_plus}")
    if set(by_class) != {c.representative for c in info.classes}:
        findings.append("some narrow class has no fundamental orbit")
        counts = False
    return RoundTripReport(
        delta, z, k, info.h_plus, cycle_count, points, orbits, injective, distinct, counts, findings
    )


def general_hypersurface(delta: int, lam: int, k: int) -> List[SurfacePoint]:
    """Points with ``z = lam`` and no discriminant filter; every induced discriminant is reported."""
    if delta < 1 or lam < 1 or k < 1:
        raise ValueError("delta, lambda and k must be positive")
    x = _target_trace(lam, delta)
    if x is None:
        return []
    out = [SurfacePoint(t, lam, delta, disc) for t, disc in tuples_with_trace(x, k)]
    kernel = squarefree_part(delta)
    for p in out:
        assert squarefree_part(p.induced_disc) == kernel
    return out
