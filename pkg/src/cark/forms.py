"""Indefinite binary quadratic forms, rho-cycles, narrow class groups and Pell solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .psl2 import IDENTITY, Psl2Mat


class FormError(ValueError):
    pass


class SquareDiscriminantError(FormError):
    pass


class DiscriminantMismatchError(FormError):
    pass


class NoIntegralZError(FormError):
    pass


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True, order=True)
class BQF:
    """``a X^2 + b XY + c Y^2``."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return math.gcd(self.a, self.b, self.c)

    def is_primitive(self) -> bool:
        return self.content == 1

    def primitive_part(self) -> "BQF":
        g = self.content
        return BQF(self.a // g, self.b // g, self.c // g)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __neg__(self) -> "BQF":
        return BQF(-self.a, -self.b, -self.c)

    def opposite(self) -> "BQF":
        return BQF(self.a, -self.b, self.c)

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def parse_form(text: str) -> BQF:
    parts = [p.strip() for p in text.replace("(", "").replace(")", "").split(",")]
    if len(parts) != 3:
        raise FormError(f"expected 'a,b,c', got {text!r}")
    return BQF(*(int(p) for p in parts))


def gamma_act(g: Psl2Mat, f: BQF) -> BQF:
    """``f(pX + qY, rX + sY)``; ``W`` stabilises ``f`` iff ``gamma_act(W, f) == f``."""
    a, b, c = f.a, f.b, f.c
    p, q, r, s = g.p, g.q, g.r, g.s
    return BQF(
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def _check_indefinite(delta: int):
    if delta <= 0:
        raise FormError(f"discriminant {delta} is not positive")
    if is_square(delta):
        raise SquareDiscriminantError(f"discriminant {delta} is a perfect square")


def is_reduced(f: BQF) -> bool:
    """``0 < b < sqrt(D)`` and ``sqrt(D) - b < 2|a| < sqrt(D) + b``."""
    D = f.disc
    b, a2 = f.b, 2 * abs(f.a)
    if b <= 0 or b * b >= D:
        return False
    if (a2 + b) ** 2 <= D:
        return False
    return a2 - b <= 0 or (a2 - b) ** 2 < D


def _normalize_b(b: int, c: int, D: int) -> int:
    """Representative of ``-b`` mod ``2|c|`` in the rho window."""
    m = 2 * abs(c)
    r = math.isqrt(D)
    if abs(c) < r + 1:  # |c| < sqrt(D)
        # window (sqrt(D) - 2|c|, sqrt(D)) contains exactly [r + 1 - m, r]
        return r - ((r + b) % m)
    B = (-b) % m
    if B > abs(c):
        B -= m
    return B


def rho(f: BQF) -> Tuple[BQF, Psl2Mat]:
    """One reduction step; returns ``(g·f, g)`` with ``g = [[0, -1], [1, t]]``."""
    a, b, c = f.a, f.b, f.c
    B = _normalize_b(b, c, f.disc)
    t = (B + b) // (2 * c)
    g = Psl2Mat(0, -1, 1, t)
    out = BQF(c, B, a - b * t + c * t * t)
    return out, g


def reduce(f: BQF, max_steps: int = 100000) -> Tuple[BQF, Psl2Mat]:
    """Return ``(h, g)`` with ``h = gamma_act(g, f)`` reduced."""
    _check_indefinite(f.disc)
    g = IDENTITY
    cur = f
    steps = 0
    while not is_reduced(cur):
        cur, step = rho(cur)
        g = g @ step
        steps += 1
        if steps > max_steps:
            raise FormError(f"reduction of {f} did not terminate in {max_steps} steps")
    return cur, g


def reduced_forms(delta: int, primitive_only: bool = True) -> List[BQF]:
    """All reduced forms of discriminant ``delta``, sorted.

    For each ``|a|`` the admissible ``b`` lie in ``(|sqrt(D) - 2|a||, sqrt(D))``;
    the congruence ``b^2 = D mod 4|a|`` is tested over that window at once.
    """
    _check_indefinite(delta)
    r = math.isqrt(delta)
    out = []
    bs = np.arange(delta % 2 or 2, r + 1, 2, dtype=np.int64)
    # exact for b <= r since D - b^2 stays below 2^63 in the range we allow
    rem = delta - bs * bs
    for a in range(1, r + 1):
        lo = abs(r - 2 * a)  # b must exceed |sqrt(D) - 2a| >= this floor bound - 1
        i0 = np.searchsorted(bs, lo - 1)
        hit = np.nonzero(rem[i0:] % (4 * a) == 0)[0]
        for b in bs[i0 + hit].tolist():
            c = (b * b - delta) // (4 * a)
            for f in (BQF(a, b, c), BQF(-a, b, -c)):
                if is_reduced(f) and (not primitive_only or f.is_primitive()):
                    out.append(f)
    return sorted(out)


def rho_cycle(f: BQF) -> List[BQF]:
    """The rho-cycle through a reduced form, starting at ``f``."""
    if not is_reduced(f):
        raise FormError(f"{f} is not reduced")
    cyc = [f]
    cur, _ = rho(f)
    while cur != f:
        cyc.append(cur)
        cur, _ = rho(cur)
    return cyc


@dataclass(frozen=True)
class FormClass:
    cycle: Tuple[BQF, ...]

    @property
    def representative(self) -> BQF:
        return min(self.cycle)

    def __contains__(self, f: BQF) -> bool:
        return f in self.cycle

    def to_json(self) -> dict:
        return {
            "representative": list(self.representative.as_tuple()),
            "cycle": [list(f.as_tuple()) for f in self.cycle],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FormClass":
        return cls(tuple(BQF(*c) for c in data["cycle"]))


def canonical_cycle(f: BQF) -> FormClass:
    cyc = rho_cycle(f)
    i = cyc.index(min(cyc))
    return FormClass(tuple(cyc[i:] + cyc[:i]))


def is_fundamental_discriminant(delta: int) -> bool:
    from .field import is_squarefree

    if delta % 4 == 1:
        return is_squarefree(delta)
    if delta % 4 == 0:
        m = delta // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


@dataclass
class NarrowClassGroup:
    delta: int
    classes: List[FormClass]
    structure: List[int]
    fundamental: bool = True
    _index: Dict[BQF, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self._index:
            self._index = {f: i for i, cls in enumerate(self.classes) for f in cls.cycle}

    @property
    def h_plus(self) -> int:
        return len(self.classes)

    def class_index(self, f: BQF) -> int:
        """Index of the class containing ``f`` (any form of this discriminant)."""
        if f.disc != self.delta:
            raise DiscriminantMismatchError(f"{f} has discriminant {f.disc}, expected {self.delta}")
        red, _ = reduce(f)
        return self._index[red]

    def class_of(self, f: BQF) -> FormClass:
        return self.classes[self.class_index(f)]

    @property
    def principal(self) -> FormClass:
        return self.class_of(principal_form(self.delta))

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "h_plus": self.h_plus,
            "structure": list(self.structure),
            "classes": [c.to_json() for c in self.classes],
        }

    @classmethod
    def from_json(cls, data: dict) -> "NarrowClassGroup":
        delta = int(data["delta"])
        return cls(
            delta=delta,
            classes=[FormClass.from_json(c) for c in data["classes"]],
            structure=[int(n) for n in data["structure"]],
            fundamental=is_fundamental_discriminant(delta),
        )


def principal_form(delta: int) -> BQF:
    """``(1, b, (b^2 - D)/4)`` with ``b = D mod 2``."""
    b = delta % 2
    return BQF(1, b, (b * b - delta) // 4)


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _coprime_representation(f: BQF, m: int) -> Tuple[BQF, Psl2Mat]:
    """An equivalent form whose leading coefficient is coprime to ``m``."""
    if math.gcd(f.a, m) == 1:
        return f, IDENTITY
    bound = 1
    while True:
        for x in range(-bound, bound + 1):
            for y in (bound, -bound) if abs(x) != bound else range(-bound, bound + 1):
                if math.gcd(x, y) != 1:
                    continue
                v = f(x, y)
                if v and math.gcd(v, m) == 1:
                    sign, u, w = _xgcd(x, y)  # u*x + w*y = sign = +-1
                    g = Psl2Mat(x, -w * sign, y, u * sign)
                    return gamma_act(g, f), g
        bound += 1
        if bound > 1000:
            raise FormError(f"no value of {f} coprime to {m} found")


def compose(f: BQF, g: BQF) -> BQF:
    """Dirichlet composition, returned reduced."""
    if f.disc != g.disc:
        raise DiscriminantMismatchError(f"discriminants {f.disc} and {g.disc} differ")
    delta = f.disc
    g2, _ = _coprime_representation(g, f.a)
    a1, b1 = f.a, f.b
    a2, b2 = g2.a, g2.b
    m = abs(a2)
    t = ((b2 - b1) // 2) * pow(a1, -1, m) % m if m > 1 else 0
    B = b1 + 2 * a1 * t
    A = a1 * a2
    C = (B * B - delta) // (4 * A)
    out = BQF(A, B, C)
    assert out.disc == delta
    return reduce(out)[0]


def factorize(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_from_orders(orders: List[int]) -> List[int]:
    """Invariant factors ``n_1 | n_2 | ...`` of a finite abelian group from its element orders."""
    h = len(orders)
    if h == 1:
        return []
    # per prime: cyclic factors of order >= p^j number log_p(#{x: x^{p^j}=1} / #{x: x^{p^{j-1}}=1})
    by_prime: Dict[int, List[int]] = {}
    for p, e in factorize(h).items():
        exps = []
        prev = 1
        j = 1
        while True:
            cnt = sum(1 for o in orders if (p ** j) % o == 0 and o > 0)
            if cnt == prev:
                break
            k = round(math.log(cnt // prev, p))
            exps.append(k)
            prev = cnt
            j += 1
        # exps[j-1] = number of cyclic p-factors of order >= p^j
        parts = []
        for j in range(len(exps)):
            nxt = exps[j + 1] if j + 1 < len(exps) else 0
            parts += [p ** (j + 1)] * (exps[j] - nxt)
        by_prime[p] = sorted(parts, reverse=True)
    width = max(len(v) for v in by_prime.values())
    factors = []
    for i in range(width):
        n = 1
        for parts in by_prime.values():
            if i < len(parts):
                n *= parts[i]
        factors.append(n)
    return sorted(factors)


def form_classes(delta: int) -> List[FormClass]:
    """Rho-cycles of primitive reduced forms, sorted by representative."""
    seen = set()
    classes = []
    for f in reduced_forms(delta):
        if f in seen:
            continue
        cls = canonical_cycle(f)
        seen.update(cls.cycle)
        classes.append(cls)
    classes.sort(key=lambda c: c.representative)
    return classes


def narrow_classes(delta: int, allow_nonfundamental: bool = False) -> NarrowClassGroup:
    _check_indefinite(delta)
    fundamental = is_fundamental_discriminant(delta)
    if not fundamental and not allow_nonfundamental:
        raise FormError(f"{delta} is not a fundamental discriminant")
    if delta % 4 not in (0, 1):
        raise FormError(f"{delta} is not a discriminant (must be 0 or 1 mod 4)")
    group = NarrowClassGroup(delta, form_classes(delta), [], fundamental)
    group.structure = invariant_factors_from_orders(class_orders(group))
    return group


def class_power(group: NarrowClassGroup, f: BQF, n: int) -> BQF:
    out = principal_form(group.delta)
    for _ in range(n):
        out = compose(out, f)
    return out


def class_orders(group: NarrowClassGroup) -> List[int]:
    e = group.class_index(principal_form(group.delta))
    orders = []
    for cls in group.classes:
        f = cls.representative
        cur, n = reduce(f)[0], 1
        while group.class_index(cur) != e:
            cur = compose(cur, f)
            n += 1
        orders.append(n)
    return orders


def generated_classes(group: NarrowClassGroup, generators: List[BQF]) -> set:
    """Class indices reachable from the principal class by composing with ``generators``."""
    start = group.class_index(principal_form(group.delta))
    reached = {start}
    frontier = [principal_form(group.delta)]
    while frontier:
        nxt = []
        for f in frontier:
            for g in generators:
                h = compose(f, g)
                i = group.class_index(h)
                if i not in reached:
                    reached.add(i)
                    nxt.append(h)
        frontier = nxt
    return reached


# --------------------------------------------------------------------------
# Pell equation X^2 - D Z^2 = 4

@dataclass(frozen=True)
class PellSolution:
    x: int
    z: int
    delta: int

    def __post_init__(self):
        if self.x * self.x - self.delta * self.z * self.z != 4:
            raise FormError(f"({self.x}, {self.z}) does not solve X^2 - {self.delta} Z^2 = 4")

    def to_json(self) -> dict:
        return {"delta": self.delta, "x": str(self.x), "z": str(self.z)}

    @classmethod
    def from_json(cls, data: dict) -> "PellSolution":
        return cls(int(data["x"]), int(data["z"]), int(data["delta"]))


def _pell_cf_discriminant(delta: int) -> Tuple[int, int]:
    # continued fraction of omega = (b0 + sqrt(D))/2, which is reduced, hence purely periodic
    r = math.isqrt(delta)
    b0 = r if (r - delta) % 2 == 0 else r - 1
    P, Q = b0, 2
    q_prev, q_cur = 1, 0  # q_{-2}, q_{-1}
    n = 0
    while True:
        a = (P + r) // Q
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        P = a * Q - P
        Q = (delta - P * P) // Q
        n += 1
        if P == b0 and Q == 2:
            break
    x = q_cur * b0 + 2 * q_prev
    z = q_cur
    if n % 2:  # norm -1 unit: square it
        x, z = (x * x + delta * z * z) // 2, x * z
    return x, z


def pell_fundamental(delta: int) -> PellSolution:
    """Solution of ``X^2 - delta Z^2 = 4`` with least ``Z > 0``, via continued fractions."""
    _check_indefinite(delta)
    if delta % 4 in (0, 1):
        x, z = _pell_cf_discriminant(delta)
    else:
        # z must be even here; solutions correspond to those for 4*delta
        x, v = _pell_cf_discriminant(4 * delta)
        x, z = x, 2 * v
    return PellSolution(x, z, delta)


def _square_residues(m: int) -> np.ndarray:
    table = np.zeros(m, dtype=bool)
    table[[(i * i) % m for i in range(m)]] = True
    return table


_SIEVES = [(m, _square_residues(m)) for m in (64, 63, 65, 11, 17, 19)]


def pell_brute(delta: int, z_max: int = 10**6, chunk: int = 1 << 16) -> Optional[PellSolution]:
    """Scan ``z = 1, 2, ...`` for ``delta z^2 + 4`` a square; ``None`` if none up to ``z_max``."""
    _check_indefinite(delta)
    head = min(z_max, 512)
    for z in range(1, head + 1):
        v = delta * z * z + 4
        x = math.isqrt(v)
        if x * x == v:
            return PellSolution(x, z, delta)
    if delta * z_max * z_max + 4 >= 2**62:
        for z in range(head + 1, z_max + 1):
            v = delta * z * z + 4
            x = math.isqrt(v)
            if x * x == v:
                return PellSolution(x, z, delta)
        return None
    for start in range(head + 1, z_max + 1, chunk):
        zs = np.arange(start, min(start + chunk, z_max + 1), dtype=np.int64)
        vals = delta * zs * zs + 4
        mask = np.ones(len(zs), dtype=bool)
        for m, table in _SIEVES:
            mask &= table[vals % m]
        for z in zs[mask].tolist():
            v = delta * z * z + 4
            x = math.isqrt(v)
            if x * x == v:
                return PellSolution(x, z, delta)
    return None


def automorphism(f: BQF, s: PellSolution) -> Psl2Mat:
    """``W(x, z) = [[(x - zb)/2, -cz], [az, (x + zb)/2]]``."""
    if f.disc != s.delta:
        raise DiscriminantMismatchError(f"form discriminant {f.disc} differs from Pell discriminant {s.delta}")
    x, z = s.x, s.z
    return Psl2Mat((x - z * f.b) // 2, -f.c * z, f.a * z, (x + z * f.b) // 2)


def automorphism_xz(f: BQF, x: int, z: int) -> Psl2Mat:
    return Psl2Mat((x - z * f.b) // 2, -f.c * z, f.a * z, (x + z * f.b) // 2)


def trace_identity_check(w: Psl2Mat, delta: int) -> int:
    """The ``z >= 0`` with ``tr(w)^2 - 4 = z^2 delta``."""
    t = w.trace
    if abs(t) <= 2:
        raise FormError(f"{w} is not hyperbolic")
    n = t * t - 4
    if n % delta:
        raise NoIntegralZError(f"tr^2 - 4 = {n} is not a multiple of {delta}")
    q = n // delta
    z = math.isqrt(q)
    if z * z != q:
        raise NoIntegralZError(f"tr^2 - 4 = {n} is not a square times {delta}")
    return z
