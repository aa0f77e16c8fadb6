"""The four Pauli-coefficient families A_k, B_k, C_k, D_k and their identities."""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List

from .algebra import I, MultiPoly, SymMat2, m_matrix, var_x, var_y

DEFAULT_K_CAP = 8

HALF = Fraction(1, 2)


class ResourceCapError(ValueError):
    """Requested family index exceeds the configured cap."""


def k_cap() -> int:
    return int(os.environ.get("CARK_K_CAP", DEFAULT_K_CAP))


def _check_cap(k: int, cap: int | None):
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    cap = k_cap() if cap is None else cap
    if k > cap:
        raise ResourceCapError(f"k={k} exceeds the resource cap {cap}")


@dataclass(frozen=True)
class PauliCoeffs:
    """Coefficients of ``I, sigma1, sigma2, sigma3`` in a 2x2 matrix."""

    a: MultiPoly
    b: MultiPoly
    c: MultiPoly
    d: MultiPoly
    k: int = 0

    def reconstruct(self) -> SymMat2:
        # a I + b s1 + c s2 + d s3 with s2 = [[0, -i], [i, 0]]
        return SymMat2(
            self.a + self.d,
            self.b - self.c * I,
            self.b + self.c * I,
            self.a - self.d,
        )

    def norm(self) -> MultiPoly:
        """``a^2 - b^2 - c^2 - d^2``, which is the determinant."""
        return self.a * self.a - self.b * self.b - self.c * self.c - self.d * self.d

    def doubled(self) -> Dict[str, MultiPoly]:
        return {"A": self.a * 2, "B": self.b * 2, "C": self.c * 2, "D": self.d * 2}


def pauli_decompose(m: SymMat2, k: int = 0) -> PauliCoeffs:
    return PauliCoeffs(
        a=(m.m11 + m.m22) * HALF,
        b=(m.m12 + m.m21) * HALF,
        c=(m.m12 - m.m21) * (I * HALF),
        d=(m.m11 - m.m22) * HALF,
        k=k,
    )


def product_matrix(k: int, start: int = 1) -> SymMat2:
    """``M(x_start, y_start) ... M(x_{start+k-1}, y_{start+k-1})``."""
    out = m_matrix(start)
    for i in range(start + 1, start + k):
        out = out @ m_matrix(i)
    return out


@functools.lru_cache(maxsize=None)
def _family_direct(k: int) -> PauliCoeffs:
    return pauli_decompose(product_matrix(k), k)


def family_direct(k: int, cap: int | None = None) -> PauliCoeffs:
    _check_cap(k, cap)
    return _family_direct(k)


def shift_pairs(p: MultiPoly, offset: int) -> MultiPoly:
    """Rename ``x_i, y_i`` to ``x_{i+offset}, y_{i+offset}``."""
    return p.rename({v: v + 2 * offset for v in p.variables() if v >= 2})


def family_recursive(k: int, cap: int | None = None) -> PauliCoeffs:
    """Build the families with the Pauli product recursion seeded by ``k = 1``."""
    _check_cap(k, cap)
    seed = _family_direct(1)
    a, b, c, d = seed.a, seed.b, seed.c, seed.d
    for n in range(1, k):
        a1, b1, c1, d1 = (shift_pairs(p, n) for p in (seed.a, seed.b, seed.c, seed.d))
        a, b, c, d = (
            a * a1 + b * b1 + c * c1 + d * d1,
            b * a1 + a * b1 + (c * d1 - d * c1) * I,
            c * a1 + a * c1 + (d * b1 - b * d1) * I,
            d * a1 + a * d1 + (b * c1 - c * b1) * I,
        )
    return PauliCoeffs(a, b, c, d, k)


def multivariate_lucas(k: int, cap: int | None = None) -> MultiPoly:
    """The 2k-th multivariate Lucas polynomial ``2 A_k``."""
    return family_direct(k, cap).a * 2


def multivariate_fibonacci(k: int, cap: int | None = None) -> MultiPoly:
    """The 2k-th multivariate Fibonacci polynomial ``B_k``."""
    return family_direct(k, cap).b


@dataclass(frozen=True)
class ClassicalPoly:
    kind: str
    n: int
    poly: MultiPoly


def classical_poly(kind: str, n: int) -> ClassicalPoly:
    """Classical Lucas/Fibonacci polynomial in the bare variable ``x``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if kind == "lucas":
        prev, cur = MultiPoly.const(2), MultiPoly.x()
    elif kind == "fibonacci":
        prev, cur = MultiPoly(), MultiPoly.const(1)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if n == 0:
        return ClassicalPoly(kind, 0, prev)
    x = MultiPoly.x()
    for _ in range(n - 1):
        prev, cur = cur, x * cur + prev
    return ClassicalPoly(kind, n, cur)


# --------------------------------------------------------------------------
# argument permutations used by the symmetry identities

def rotate_pairs(p: MultiPoly, k: int) -> MultiPoly:
    """Evaluate ``p`` at ``(x_k, y_k, x_1, y_1, ..., x_{k-1}, y_{k-1})``."""
    mapping = {}
    for i in range(1, k + 1):
        src = k if i == 1 else i - 1
        mapping[var_x(i)] = var_x(src)
        mapping[var_y(i)] = var_y(src)
    return p.rename(mapping)


def swap_pairs(p: MultiPoly, k: int) -> MultiPoly:
    """Evaluate ``p`` at ``(y_1, x_1, ..., y_k, x_k)``."""
    mapping = {}
    for i in range(1, k + 1):
        mapping[var_x(i)] = var_y(i)
        mapping[var_y(i)] = var_x(i)
    return p.rename(mapping)


def reverse_args(p: MultiPoly, k: int) -> MultiPoly:
    """Evaluate ``p`` at ``(y_k, x_k, ..., y_1, x_1)``."""
    mapping = {}
    for i in range(1, k + 1):
        mapping[var_x(i)] = var_y(k + 1 - i)
        mapping[var_y(i)] = var_x(k + 1 - i)
    return p.rename(mapping)


def zero_pair(p: MultiPoly, i: int, k: int) -> MultiPoly:
    """Set pair ``i`` to ``(0, 0)`` and re-index pairs above it down by one."""
    p = p.substitute({var_x(i): 0, var_y(i): 0})
    mapping = {}
    for j in range(i + 1, k + 1):
        mapping[var_x(j)] = var_x(j - 1)
        mapping[var_y(j)] = var_y(j - 1)
    return p.rename(mapping)


def d_swap_rotation_holds(k: int, cap: int | None = None) -> bool:
    """Check ``D_k`` against its swap-then-rotate image, as literally stated.

    Holds for ``k <= 2`` only; see :func:`d_reversal_holds` for the symmetry
    that holds for every ``k``.
    """
    d = family_direct(k, cap).d
    return rotate_pairs(swap_pairs(d, k), k) == d


def d_reversal_holds(k: int, cap: int | None = None) -> bool:
    d = family_direct(k, cap).d
    return reverse_args(d, k) == d


# --------------------------------------------------------------------------

@dataclass
class PropertyReport:
    k: int
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]


def _integral_real(p: MultiPoly) -> bool:
    return all(c.im == 0 and c.re.denominator == 1 for _, c in p.items())


def _bidegree(mono):
    dx = sum(e for v, e in mono if v % 2 == 0)
    dy = sum(e for v, e in mono if v % 2 == 1)
    return dx, dy


def property_suite(k: int, cap: int | None = None) -> PropertyReport:
    """Check the structural properties of A_k..D_k at one ``k``."""
    fam = family_direct(k, cap)
    a, b, c, d = fam.a, fam.b, fam.c, fam.d
    rep = PropertyReport(k)
    ch = rep.checks

    ch["constant_terms"] = (
        a.constant_term() == 1
        and not b.constant_term()
        and not c.constant_term()
        and not d.constant_term()
    )

    def no_pure_powers(p):
        return not any(len(m) == 1 and m[0][1] > 1 for m, _ in p.items())

    ch["no_pure_powers"] = all(no_pure_powers(p) for p in (a, b, c, d))
    ch["multilinear"] = all(e == 1 for p in (a, b, c, d) for m, _ in p.items() for _, e in m)

    def even_shape(p):
        coll = p.collapse("xy")
        return all(dx == dy for dx, dy in map(_bidegree, (m for m, _ in coll.items()))) and all(
            sum(_bidegree(m)) % 2 == 0 for m, _ in p.items()
        )

    ch["A_D_even_shape"] = even_shape(a) and even_shape(d)

    def odd_shape(p):
        counts: Dict[tuple, Fraction] = {}
        for m, coeff in p.items():
            dx, dy = _bidegree(m)
            if abs(dx - dy) != 1:
                return False
            mag = abs(coeff.re) + abs(coeff.im)
            counts[(dx, dy)] = counts.get((dx, dy), 0) + mag
        return all(counts.get((dy, dx), 0) == n for (dx, dy), n in counts.items())

    ch["B_C_odd_shape_balanced"] = odd_shape(b) and odd_shape(c)

    ch["degrees"] = (
        a.degree() == 2 * k
        and d.degree() == 2 * k
        and b.degree() == 2 * k - 1
        and c.degree() == 2 * k - 1
    )

    ch["integral_doubled"] = (
        _integral_real(a * 2)
        and _integral_real(b * 2)
        and _integral_real(c * 2 / I)
        and _integral_real(d * 2)
    )
    return rep


@dataclass
class IdentityReport:
    k: int
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def identity_suite(k: int, cap: int | None = None) -> IdentityReport:
    """Symbolic check of the collapse theorems and the Lucas symmetries at ``k``.

    The D_k swap-rotation symmetry is reported separately under
    ``d_swap_rotation`` and does not hold for ``k >= 3``.
    """
    fam = family_direct(k, cap)
    rep = IdentityReport(k)
    ch = rep.checks
    x = MultiPoly.x()
    lucas = fam.a * 2
    ch["lucas_collapse"] = lucas.collapse("x") == classical_poly("lucas", 2 * k).poly
    ch["fibonacci_collapse"] = fam.b.collapse("x") == classical_poly("fibonacci", 2 * k).poly
    ch["c_collapse_zero"] = not fam.c.collapse("x")
    ch["b_d_proposition"] = x * fam.b.collapse("x") == fam.d.collapse("x") * 2
    ch["reconstruction"] = fam.reconstruct() == product_matrix(k)
    ch["unit_norm"] = fam.norm() == 1
    ch["cyclic_invariance"] = rotate_pairs(lucas, k) == lucas
    if k >= 2:
        lower = _family_direct(k - 1)
        lower_l = lower.a * 2
        ch["trailing_zero_lucas"] = zero_pair(lucas, k, k) == lower_l
        ch["trailing_zero_fibonacci"] = zero_pair(fam.b, k, k) == lower.b
        ch["interior_zero_lucas"] = all(zero_pair(lucas, i, k) == lower_l for i in range(1, k + 1))
    ch["d_reversal"] = reverse_args(fam.d, k) == fam.d
    ch["d_swap_rotation"] = rotate_pairs(swap_pairs(fam.d, k), k) == fam.d
    return rep
