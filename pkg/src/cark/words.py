"""S/L words, (LS)^m (L^2 S)^n tuples, tuple extraction from hyperbolic matrices, and cark graphs."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .forms import BQF, FormError, gamma_act, reduce, rho
from .psl2 import IDENTITY, S, Psl2Mat, word_product

DEFAULT_CONJ_BOUND = 64
DEFAULT_DEPTH = 2

Pair = Tuple[int, int]


class NonHyperbolicError(ValueError):
    pass


class NormalizationError(RuntimeError):
    pass


class TupleError(ValueError):
    pass


def conj_bound() -> int:
    return int(os.environ.get("CARK_CONJ_BOUND", DEFAULT_CONJ_BOUND))


def rotations(pairs: Sequence[Pair]) -> List[Tuple[Pair, ...]]:
    pairs = tuple(pairs)
    return [pairs[i:] + pairs[:i] for i in range(len(pairs))]


def least_rotation(pairs: Sequence[Pair]) -> Tuple[Pair, ...]:
    return min(rotations(pairs)) if pairs else ()


@dataclass(frozen=True, order=True)
class CarkTuple:
    """Cyclic sequence ``((m1, n1), ..., (mk, nk))``; ``(0, 0)`` pairs are padding."""

    pairs: Tuple[Pair, ...]

    def __post_init__(self):
        pairs = tuple((int(m), int(n)) for m, n in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        for m, n in pairs:
            if (m, n) != (0, 0) and (m < 1 or n < 1):
                raise TupleError(f"pair {(m, n)} must be (0, 0) or have both entries >= 1")
        if not any(p != (0, 0) for p in pairs):
            raise TupleError("a cark tuple needs at least one non-padding pair")

    @classmethod
    def from_flat(cls, values: Sequence[int]) -> "CarkTuple":
        values = list(values)
        if len(values) % 2:
            raise TupleError("a flat tuple needs an even number of entries")
        return cls(tuple(zip(values[::2], values[1::2])))

    @classmethod
    def parse(cls, text: str) -> "CarkTuple":
        try:
            values = [int(v) for v in text.replace("(", "").replace(")", "").split(",") if v.strip()]
        except ValueError as exc:
            raise TupleError(f"cannot parse tuple {text!r}") from exc
        return cls.from_flat(values)

    @property
    def k(self) -> int:
        return len(self.pairs)

    def flat(self) -> List[int]:
        return [v for pair in self.pairs for v in pair]

    def stripped(self) -> "CarkTuple":
        return CarkTuple(tuple(p for p in self.pairs if p != (0, 0)))

    def padded(self, k: int) -> "CarkTuple":
        if k < self.k:
            raise TupleError(f"cannot pad a length-{self.k} tuple down to {k}")
        return CarkTuple(self.pairs + ((0, 0),) * (k - self.k))

    def canonical(self) -> "CarkTuple":
        return CarkTuple(least_rotation(self.pairs))

    def rotate(self, i: int = 1) -> "CarkTuple":
        """Send ``(p_1, ..., p_k)`` to ``(p_{k-i+1}, ..., p_k, p_1, ...)``."""
        i %= self.k
        return CarkTuple(self.pairs[-i:] + self.pairs[:-i]) if i else self

    def word_length(self) -> int:
        return 2 * sum(m + n for m, n in self.pairs)

    def __str__(self):
        return ",".join(str(v) for v in self.flat())


def tuple_to_matrix(t: CarkTuple) -> Psl2Mat:
    """Product of ``[[1 + m n, m], [n, 1]]`` over the pairs."""
    out = IDENTITY
    for m, n in t.pairs:
        out = out @ Psl2Mat(1 + m * n, m, n, 1)
    return out


@dataclass(frozen=True)
class GenWord:
    letters: Tuple[str, ...]

    def __post_init__(self):
        for a, b in zip(self.letters, self.letters[1:]):
            if a == b == "S" or (a != "S" and b != "S"):
                raise ValueError(f"word is not freely reduced at {a}{b}")

    def matrix(self) -> Psl2Mat:
        return word_product(self.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join("L^2" if x == "L2" else x for x in self.letters)


def word_expand(t: CarkTuple) -> GenWord:
    letters: List[str] = []
    for m, n in t.pairs:
        letters += ["L", "S"] * m
        letters += ["L2", "S"] * n
    return GenWord(tuple(letters))


def _peel(p: int, q: int, r: int, s: int) -> List[str]:
    """Factor a nonnegative determinant-one matrix into a word in T and U."""
    letters = []
    inf = float("inf")
    while (p, q, r, s) != (1, 0, 0, 1):
        if p >= r and q >= s:
            n = min(p // r if r else inf, q // s if s else inf)
            letters += ["T"] * n
            p, q = p - n * r, q - n * s
        elif r >= p and s >= q:
            n = min(r // p if p else inf, s // q if q else inf)
            letters += ["U"] * n
            r, s = r - n * p, s - n * q
        else:
            raise NormalizationError("matrix is not a positive word in T and U")
    return letters


def _runs_to_pairs(letters: List[str]) -> Tuple[Pair, ...]:
    n = len(letters)
    start = next(i for i in range(n) if letters[i] == "T" and letters[i - 1] == "U")
    word = letters[start:] + letters[:start]
    pairs = []
    i = 0
    while i < n:
        m = 0
        while i < n and word[i] == "T":
            m += 1
            i += 1
        k = 0
        while i < n and word[i] == "U":
            k += 1
            i += 1
        pairs.append((m, k))
    return tuple(pairs)


def _nonnegative(w: Psl2Mat) -> bool:
    return min(w.positive_trace()) >= 0


def normalize_conjugate(w: Psl2Mat, bound: int | None = None) -> Tuple[Psl2Mat, Psl2Mat]:
    """A conjugate ``g^-1 w g`` with nonnegative entries (positive-trace sign), and ``g``.

    The stabilised form is brought to a reduced form first; a fundamental
    automorphism of a reduced form is nonnegative after at most one
    conjugation by ``S``.  ``bound`` caps the conjugation steps after reduction.
    """
    bound = conj_bound() if bound is None else bound
    if _nonnegative(w):
        return w, IDENTITY
    f = form_from_automorphism(w)
    _, g = reduce(f)
    steps = 0
    while steps <= bound:
        cur = g.inverse() @ w @ g
        if _nonnegative(cur):
            return cur, g
        alt = S.inverse() @ cur @ S
        if _nonnegative(alt):
            return alt, g @ S
        _, step = rho(gamma_act(g, f))
        g = g @ step
        steps += 1
    raise NormalizationError(f"no nonnegative conjugate of {w} found within {bound} steps")


def decompose(w: Psl2Mat, bound: int | None = None) -> CarkTuple:
    """Cark tuple (least rotation) of a hyperbolic matrix's conjugacy class."""
    if not w.is_hyperbolic():
        raise NonHyperbolicError(f"{w} is not hyperbolic (|trace| <= 2)")
    cur, _ = normalize_conjugate(w, bound)
    letters = _peel(*cur.positive_trace())
    if "T" not in letters or "U" not in letters:
        raise NormalizationError(f"positive word of {w} uses a single letter")
    return CarkTuple(_runs_to_pairs(letters)).canonical()


def is_primitive_tuple(t: CarkTuple) -> bool:
    pairs = t.stripped().pairs
    k = len(pairs)
    for period in range(1, k):
        if k % period == 0 and pairs == pairs[:period] * (k // period):
            return False
    return True


def form_from_automorphism(w: Psl2Mat) -> BQF:
    """``(r, s - p, -q) / gcd`` for the positive-trace sign of ``w``."""
    p, q, r, s = w.positive_trace()
    if q == 0 and r == 0 and p == s:
        raise FormError("the identity stabilises every form")
    if abs(p + s) <= 2:
        raise NonHyperbolicError(f"{w} is not hyperbolic")
    g = math.gcd(r, s - p, q)
    return BQF(r // g, (s - p) // g, -q // g)


# --------------------------------------------------------------------------
# cark graphs

@dataclass
class CarkGraph:
    """Spine cycle with Farey branches truncated at ``depth``.

    Vertex ids are strings; ``kind`` maps each to ``"white"`` or ``"black"``.
    """

    tuple: CarkTuple
    depth: int
    spine: List[str] = field(default_factory=list)
    kind: Dict[str, str] = field(default_factory=dict)
    edges: List[Tuple[str, str, str]] = field(default_factory=list)  # (u, v, "spine" | "out" | "in")
    branches: List[dict] = field(default_factory=list)

    def spine_edges(self):
        return [e for e in self.edges if e[2] == "spine"]

    def degree(self) -> Dict[str, int]:
        deg = {v: 0 for v in self.kind}
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def to_json(self) -> dict:
        return {
            "tuple": self.tuple.flat(),
            "depth": self.depth,
            "spine": [{"id": v, "kind": self.kind[v]} for v in self.spine],
            "branches": self.branches,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CarkGraph":
        return cark_graph(CarkTuple.from_flat(data["tuple"]), int(data["depth"]))

    def to_dot(self) -> str:
        lines = [f'graph cark {{', '  // tuple ' + str(self.tuple), "  node [label=\"\", width=0.15, height=0.15];"]
        for v, kind in self.kind.items():
            style = "filled" if kind == "black" else "solid"
            fill = ', fillcolor="black"' if kind == "black" else ""
            lines.append(f'  "{v}" [shape=circle, style={style}{fill}];')
        lines.append("  { rank=same; " + " ".join(f'"{v}";' for v in self.spine) + " }")
        for u, v, kind in self.edges:
            if kind == "spine":
                lines.append(f'  "{u}" -- "{v}" [weight=10, penwidth=2];')
            elif kind == "out":
                lines.append(f'  "{v}" -- "{u}" [weight=1];')  # child first: ranked above
            else:
                lines.append(f'  "{u}" -- "{v}" [weight=1];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def cark_graph(t: CarkTuple, depth: int = DEFAULT_DEPTH) -> CarkGraph:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    t = t.stripped()
    g = CarkGraph(t, depth)
    directions = []
    for m, n in t.pairs:
        directions += ["out"] * m + ["in"] * n
    nb = len(directions)
    for i in range(nb):
        w, b = f"w{i}", f"b{i}"
        g.kind[w], g.kind[b] = "white", "black"
        g.spine += [w, b]
    for i in range(nb):
        g.edges.append((f"w{i}", f"b{i}", "spine"))
        g.edges.append((f"b{i}", f"w{(i + 1) % nb}", "spine"))

    counter = [0]

    def grow(parent: str, level: int, direction: str) -> dict:
        # a white vertex, then (if depth allows) a black vertex with two subtrees
        wid = f"t{counter[0]}"
        counter[0] += 1
        g.kind[wid] = "white"
        g.edges.append((parent, wid, direction))
        node = {"id": wid, "kind": "white"}
        if level < depth:
            bid = f"t{counter[0]}"
            counter[0] += 1
            g.kind[bid] = "black"
            g.edges.append((wid, bid, direction))
            node["child"] = {
                "id": bid,
                "kind": "black",
                "children": [grow(bid, level + 1, direction), grow(bid, level + 1, direction)],
            }
        return node

    for i, direction in enumerate(directions):
        g.branches.append({"at": i, "direction": direction, "tree": grow(f"b{i}", 0, direction)})
    return g
