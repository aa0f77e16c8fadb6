"""Integer 2x2 matrices of determinant one, taken modulo -I."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List


@dataclass(frozen=True, order=True)
class Psl2Mat:
    """``[[p, q], [r, s]]`` with the first nonzero entry made positive."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        if self.p * self.s - self.q * self.r != 1:
            raise ValueError(f"determinant of {self.as_list()} is not 1")
        for e in (self.p, self.q, self.r, self.s):
            if e:
                if e < 0:
                    for name in "pqrs":
                        object.__setattr__(self, name, -getattr(self, name))
                break

    @classmethod
    def from_list(cls, rows) -> "Psl2Mat":
        (p, q), (r, s) = rows
        return cls(int(p), int(q), int(r), int(s))

    def as_list(self) -> List[List[int]]:
        return [[self.p, self.q], [self.r, self.s]]

    def __matmul__(self, other: "Psl2Mat") -> "Psl2Mat":
        return Psl2Mat(
            self.p * other.p + self.q * other.r,
            self.p * other.q + self.q * other.s,
            self.r * other.p + self.s * other.r,
            self.r * other.q + self.s * other.s,
        )

    def inverse(self) -> "Psl2Mat":
        return Psl2Mat(self.s, -self.q, -self.r, self.p)

    def __pow__(self, n: int) -> "Psl2Mat":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = IDENTITY
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    @property
    def trace(self) -> int:
        return self.p + self.s

    def abs_trace(self) -> int:
        return abs(self.p + self.s)

    def is_hyperbolic(self) -> bool:
        return self.abs_trace() > 2

    def positive_trace(self) -> tuple:
        """Entries of the sign representative with nonnegative trace."""
        if self.trace < 0:
            return (-self.p, -self.q, -self.r, -self.s)
        return (self.p, self.q, self.r, self.s)

    def __str__(self):
        return f"[[{self.p}, {self.q}], [{self.r}, {self.s}]]"


IDENTITY = Psl2Mat(1, 0, 0, 1)
S = Psl2Mat(0, -1, 1, 0)
L = Psl2Mat(1, -1, 1, 0)
L2 = L @ L
T = Psl2Mat(1, 1, 0, 1)  # equals L*S in PSL2(Z)
U = Psl2Mat(1, 0, 1, 1)  # equals L^2*S in PSL2(Z)

GENERATORS = {"S": S, "L": L, "L2": L2}


def word_product(letters) -> Psl2Mat:
    out = IDENTITY
    for letter in letters:
        out = out @ GENERATORS[letter]
    return out
