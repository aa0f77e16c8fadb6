"""Command-line interface: ``cark <subcommand> ...``.

Exit status is 0 on success, 1 when a verification reports a finding and
2 on bad input or an exceeded resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from . import families, words
from .algebra import var_x, var_y
from .families import ResourceCapError, family_direct, identity_suite
from .field import field_from_d, form_from_ideal, ideal_norm, is_squarefree, orient, parse_ideal
from .forms import automorphism, narrow_classes, parse_form, pell_fundamental
from .psl2 import Psl2Mat
from .surface import SurfaceSpec, enumerate_points, field_info, general_hypersurface, quotient_orbits, round_trip
from .words import CarkTuple, cark_graph, decompose, form_from_automorphism, word_expand

FORMATS = ("text", "json", "latex", "dot")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    output_format: str = "text"
    k_cap: int = families.DEFAULT_K_CAP
    conj_bound: int = words.DEFAULT_CONJ_BOUND
    depth: int = words.DEFAULT_DEPTH

    @classmethod
    def resolve(cls, args: argparse.Namespace, env=None) -> "Config":
        """Flags override environment variables, which override defaults."""
        env = os.environ if env is None else env

        def pick(flag, var, default):
            if flag is not None:
                return int(flag)
            if var and env.get(var):
                return int(env[var])
            return default

        cfg = cls(
            output_format=getattr(args, "format", None) or "text",
            k_cap=pick(getattr(args, "k_cap", None), "CARK_K_CAP", families.DEFAULT_K_CAP),
            conj_bound=pick(getattr(args, "conj_bound", None), "CARK_CONJ_BOUND", words.DEFAULT_CONJ_BOUND),
            depth=pick(getattr(args, "depth", None), None, words.DEFAULT_DEPTH),
        )
        if cfg.k_cap < 1 or cfg.conj_bound < 1 or cfg.depth < 0:
            raise UsageError("k-cap and conj-bound must be positive, depth nonnegative")
        return cfg


def _emit(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _field_delta(args) -> int:
    d = getattr(args, "d", None)
    delta = getattr(args, "delta", None)
    if (d is None) == (delta is None):
        raise UsageError("give exactly one of --d and --delta")
    if d is not None:
        return field_from_d(d).delta
    return delta


def _ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


# --------------------------------------------------------------------------

def cmd_poly(args, cfg: Config) -> tuple:
    fam = args.family
    k = args.k
    if fam in ("A", "B", "C", "D"):
        coeffs = family_direct(k, cfg.k_cap)
        poly = getattr(coeffs, fam.lower())
    elif fam == "lucas":
        poly = families.multivariate_lucas(k, cfg.k_cap)
    else:
        poly = families.multivariate_fibonacci(k, cfg.k_cap)
    if args.doubled:
        poly = poly * 2
    if args.eval is not None:
        vals = [Fraction(v) for v in args.eval.split(",") if v.strip()]
        if len(vals) != 2 * k:
            raise UsageError(f"--eval needs {2 * k} values, got {len(vals)}")
        assignment = {}
        for i in range(k):
            assignment[var_x(i + 1)] = vals[2 * i]
            assignment[var_y(i + 1)] = vals[2 * i + 1]
        value = poly.evaluate(assignment)
        if cfg.output_format == "json":
            return _emit({"family": fam, "k": k, "value": str(value)}), 0
        return str(value), 0
    if cfg.output_format == "json":
        return _emit({"family": fam, "k": k, "doubled": args.doubled, "terms": poly.to_json(), "text": poly.to_text()}), 0
    if cfg.output_format == "latex":
        return poly.to_latex(), 0
    return poly.to_text(), 0


def cmd_pell(args, cfg: Config) -> tuple:
    delta = _field_delta(args)
    sol = pell_fundamental(delta)
    if cfg.output_format == "json":
        return _emit(sol.to_json()), 0
    return f"delta {delta}: (x0, z0) = ({sol.x}, {sol.z})", 0


def _check_d(d: int):
    if not is_squarefree(d) or d <= 1:
        raise UsageError(f"d={d} must be a square-free integer > 1")


def cmd_classgroup(args, cfg: Config) -> tuple:
    _check_d(args.d)
    delta = field_from_d(args.d).delta
    group = narrow_classes(delta)
    info = field_info(delta)
    if cfg.output_format == "json":
        data = group.to_json()
        data["d"] = args.d
        data["pell"] = info.pell.to_json()
        data["tuples"] = [t.flat() for t in info.tuples]
        data["tuple_lengths"] = [t.k for t in info.tuples]
        return _emit(data), 0
    structure = " x ".join(f"Z/{n}Z" for n in group.structure) or "trivial"
    lines = [f"d = {args.d}, delta = {delta}", f"h+ = {group.h_plus}, structure {structure}"]
    for cls, t in zip(group.classes, info.tuples):
        lines.append(f"  {cls.representative}  tuple ({t})  length {t.k}")
    return "\n".join(lines), 0


def cmd_tuple(args, cfg: Config) -> tuple:
    vals = _ints(args.matrix)
    if len(vals) != 4:
        raise UsageError("--matrix needs four entries p,q,r,s")
    w = Psl2Mat(*vals)
    t = decompose(w, cfg.conj_bound)
    f = form_from_automorphism(w)
    data = {
        "matrix": w.as_list(),
        "tuple": t.flat(),
        "word": str(word_expand(t)),
        "trace": str(w.abs_trace()),
        "form": list(f.as_tuple()),
        "disc": str(f.disc),
    }
    if cfg.output_format == "json":
        return _emit(data), 0
    return f"tuple ({t})\nword {data['word']}\ntrace {data['trace']}\nform {f}, disc {f.disc}", 0


def _resolve_cark_tuple(args, cfg: Config) -> CarkTuple:
    if args.tuple is not None:
        if args.form is not None:
            raise UsageError("give --tuple or --d with --form, not both")
        return CarkTuple.from_flat(_ints(args.tuple)).stripped().canonical()
    if args.form is None or args.d is None:
        raise UsageError("give --tuple, or --d together with --form")
    _check_d(args.d)
    delta = field_from_d(args.d).delta
    f = parse_form(args.form)
    if f.disc != delta:
        raise UsageError(f"form {f} has discriminant {f.disc}, expected {delta}")
    w = automorphism(f, pell_fundamental(delta))
    return decompose(w, cfg.conj_bound)


def cmd_cark(args, cfg: Config) -> tuple:
    t = _resolve_cark_tuple(args, cfg)
    g = cark_graph(t, cfg.depth)
    if cfg.output_format == "json":
        return _emit(g.to_json()), 0
    if cfg.output_format == "dot":
        return g.to_dot().rstrip("\n"), 0
    outward = sum(m for m, _ in t.pairs)
    inward = sum(n for _, n in t.pairs)
    return (
        f"cark ({t}): spine of {len(g.spine_edges())} edges, "
        f"{outward} outward and {inward} inward branches, depth {cfg.depth}"
    ), 0


def _auto_int(text: Optional[str]) -> Optional[int]:
    if text is None or text == "auto":
        return None
    try:
        v = int(text)
    except ValueError as exc:
        raise UsageError(f"expected an integer or 'auto', got {text!r}") from exc
    if v < 1:
        raise UsageError("z and k must be positive")
    return v


def cmd_surface(args, cfg: Config) -> tuple:
    delta = _field_delta(args)
    z = _auto_int(args.z)
    k = _auto_int(args.k)
    if args.unfiltered:
        info = field_info(delta)
        z = info.pell.z if z is None else z
        k = info.k_field if k is None else k
        points = general_hypersurface(delta, z, k)
        report = {
            "delta": delta,
            "z": str(z),
            "k": k,
            "points": [p.to_json() for p in points],
            "orbits": len(quotient_orbits(points)),
            "nonmaximal_count": sum(1 for p in points if p.classification != "fundamental"),
        }
        if cfg.output_format == "json":
            return _emit(report), 0
        lines = [f"delta {delta}, z {z}, k {k}: {len(points)} points, {report['nonmaximal_count']} nonmaximal"]
        lines += [f"  ({p.tuple})  disc {p.induced_disc}  {p.classification}" for p in points]
        return "\n".join(lines), 0

    info = field_info(delta)
    if z is not None and z != info.pell.z:
        points = enumerate_points(SurfaceSpec(delta, k or info.k_field, "fixed", z))
        fund = [p for p in points if p.classification == "fundamental"]
        report = {
            "delta": delta,
            "z": str(z),
            "k": k or info.k_field,
            "points": [p.to_json() for p in fund],
            "h_plus": info.h_plus,
            "bijection": None,
            "nonmaximal_count": len(points) - len(fund),
        }
        if cfg.output_format == "json":
            return _emit(report), 0
        return f"delta {delta}, z {z}: {len(fund)} fundamental points, {report['nonmaximal_count']} nonmaximal", 0

    rep = round_trip(delta, k)
    data = rep.to_json()
    data["points"] = [p.to_json() for p in rep.points if p.classification == "fundamental"]
    status = 0 if rep.bijection else 1
    if cfg.output_format == "json":
        return _emit(data), status
    lines = [
        f"delta {delta}, z {rep.z}, k {rep.k}: h+ = {rep.h_plus}, "
        f"{len(rep.fundamental_orbits)} fundamental orbits, {rep.nonmaximal_count} nonmaximal points",
        f"bijection {'holds' if rep.bijection else 'fails'}",
    ]
    lines += [f"  orbit ({o.rep})" for o in rep.fundamental_orbits]
    lines += [f"  finding: {f}" for f in rep.findings]
    return "\n".join(lines), status


def _d_range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        return range(int(lo), int(hi) + 1)
    except ValueError as exc:
        raise UsageError(f"expected a range like 2..60, got {text!r}") from exc


def cmd_verify(args, cfg: Config) -> tuple:
    fields = []
    if args.d_range:
        for d in _d_range(args.d_range):
            if d < 2 or not is_squarefree(d):
                continue
            rep = round_trip(field_from_d(d).delta)
            fields.append({"d": d, **rep.summary()})
    identities = []
    if args.identities:
        if args.k > cfg.k_cap:
            raise ResourceCapError(f"k={args.k} exceeds the resource cap {cfg.k_cap}")
        for k in range(1, args.k + 1):
            identities.append({"k": k, "checks": identity_suite(k, cfg.k_cap).checks})
    failures = [f"d={f['d']}: " + "; ".join(f["findings"]) for f in fields if not f["bijection"]]
    for row in identities:
        failures += [f"k={row['k']}: {name} fails" for name, ok in row["checks"].items() if not ok]
    checks = len(fields) + sum(len(r["checks"]) for r in identities)
    summary = {"checks": checks, "failures": len(failures), "fields": fields, "identities": identities, "findings": failures}
    status = 1 if failures else 0
    if cfg.output_format == "json":
        return _emit(summary), status
    lines = [f"{checks} checks, {len(failures)} failures"]
    for f in fields:
        lines.append(f"  d={f['d']:3d} delta={f['delta']:4d} h+={f['h_plus']} bijection={f['bijection']}")
    for r in identities:
        bad = [n for n, ok in r["checks"].items() if not ok]
        lines.append(f"  identities k={r['k']}: " + ("all pass" if not bad else "fail " + ", ".join(bad)))
    lines += [f"  finding: {f}" for f in failures]
    return "\n".join(lines), status


def cmd_ideal(args, cfg: Config) -> tuple:
    _check_d(args.d)
    a = orient(parse_ideal(args.d, args.basis))
    n = ideal_norm(a)
    f = form_from_ideal(a)
    data = {"ideal": a.to_json(), "norm": str(n), "form": list(f.as_tuple())}
    if cfg.output_format == "json":
        return _emit(data), 0
    return f"norm {n}\nform {f}", 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--k-cap", type=int, default=argparse.SUPPRESS)
    common.add_argument("--conj-bound", type=int, default=argparse.SUPPRESS)
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="cark", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", parents=[common], help="render a polynomial family member")
    p.add_argument("family", choices=["A", "B", "C", "D", "lucas", "fibonacci"])
    p.add_argument("k", type=int)
    p.add_argument("--doubled", action="store_true")
    p.add_argument("--eval", metavar="V1,V2,...")
    p.set_defaults(func=cmd_poly)

    def field_args(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--d", type=int)
        g.add_argument("--delta", type=int)

    p = sub.add_parser("pell", parents=[common], help="fundamental solution of X^2 - delta Z^2 = 4")
    field_args(p)
    p.set_defaults(func=cmd_pell)

    p = sub.add_parser("classgroup", parents=[common], help="narrow class group of Q(sqrt d)")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("tuple", parents=[common], help="cark tuple of a hyperbolic matrix")
    p.add_argument("--matrix", required=True, metavar="P,Q,R,S")
    p.set_defaults(func=cmd_tuple)

    p = sub.add_parser("cark", parents=[common], help="cark graph of a tuple or a form")
    p.add_argument("--tuple")
    p.add_argument("--d", type=int)
    p.add_argument("--form", metavar="A,B,C")
    p.set_defaults(func=cmd_cark)

    p = sub.add_parser("surface", parents=[common], help="integral points and the class round trip")
    field_args(p)
    p.add_argument("--z", default="auto")
    p.add_argument("--k", default="auto")
    p.add_argument("--unfiltered", action="store_true")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("verify", parents=[common], help="sweep round trips and identity checks")
    p.add_argument("--d-range", metavar="LO..HI")
    p.add_argument("--identities", action="store_true")
    p.add_argument("--k", type=int, default=6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ideal", parents=[common], help="norm and form of an ideal given by a Z-basis")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--basis", required=True, metavar="P1,Q1;P2,Q2")
    p.set_defaults(func=cmd_ideal)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config.resolve(args)
        out, status = args.func(args, cfg)
    except (ValueError, words.NormalizationError) as exc:
        print(f"cark {args.command}: error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
