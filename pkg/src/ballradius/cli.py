"""Command-line front end.

Exit codes: 0 success, 1 a certification check failed (the report says what was
downgraded), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import bounds, harness, pipeline
from .exactlinalg import charpoly
from .polyring import IntPoly
from .sgb import PolyMatrix, make_sgb, mult_matrix

MAX_CERTIFY_FAMILY = 12


class InputError(ValueError):
    pass


@dataclass
class InstanceFile:
    variables: Tuple[str, ...]
    names: Tuple[str, ...]
    polynomials: Tuple[IntPoly, ...]
    sign_condition: Optional[Dict[str, int]] = None

    @classmethod
    def from_json(cls, data: dict) -> "InstanceFile":
        try:
            variables = tuple(data["variables"])
            entries = data["polynomials"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"instance needs 'variables' and 'polynomials': {exc}") from None
        if len(set(variables)) != len(variables) or not all(isinstance(v, str) for v in variables):
            raise InputError("variable names must be distinct strings")
        names, polys = [], []
        for n, entry in enumerate(entries):
            name = entry.get("name", f"P{n + 1}")
            terms = {}
            for t in entry.get("terms", []):
                exps = tuple(t["exps"])
                if len(exps) != len(variables) or any(not isinstance(e, int) or e < 0 for e in exps):
                    raise InputError(f"{name}: exponent vector {list(exps)} does not match {list(variables)}")
                try:
                    c = int(str(t["coeff"]).strip())
                except ValueError:
                    raise InputError(f"{name}: coefficient {t['coeff']!r} is not an integer") from None
                terms[exps] = terms.get(exps, 0) + c
            names.append(name)
            polys.append(IntPoly(variables, terms))
        if len(set(names)) != len(names):
            raise InputError("polynomial names must be unique")
        if not polys:
            raise InputError("instance has no polynomials")
        sc = data.get("sign_condition")
        if sc is not None:
            if set(sc) != set(names) or any(v not in (-1, 0, 1) for v in sc.values()):
                raise InputError("sign_condition must map every polynomial name to -1, 0 or 1")
            sc = {n: int(sc[n]) for n in names}
        return cls(variables, tuple(names), tuple(polys), sc)

    def to_json(self) -> dict:
        out = {
            "variables": list(self.variables),
            "polynomials": [
                {"name": n, "terms": [{"coeff": str(c), "exps": list(e)} for e, c in p.sorted_terms()]}
                for n, p in zip(self.names, self.polynomials)
            ],
        }
        if self.sign_condition is not None:
            out["sign_condition"] = dict(self.sign_condition)
        return out

    def measure(self) -> Tuple[int, int, int, int]:
        return pipeline.measure(list(self.polynomials))


def load_instance(path: str) -> InstanceFile:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return InstanceFile.from_json(data)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


# --------------------------------------------------------------------------
# subcommands


def cmd_bound(args) -> int:
    if args.input:
        inst = load_instance(args.input)
        k, d, tau, s = inst.measure()
    else:
        if args.k is None or args.d is None or args.tau is None:
            raise InputError("bound needs --input or all of -k, -d, --tau")
        k, d, tau, s = args.k, args.d, args.tau, args.s
    _emit(bounds.closed_form(args.theorem, k, d, tau, s).to_json())
    return 0


def _certify(inst: InstanceFile, mode: str, max_subsets: int, closed_only: bool,
             time_budget: Optional[float], confluence_samples: int):
    polys = list(inst.polynomials)
    if any(p.is_zero() for p in polys):
        raise InputError("zero polynomial: every point is a root, no ball can be certified")
    algebraic = len(polys) == 1 and inst.sign_condition is None
    if algebraic:
        q = polys[0]
        if closed_only:
            k, d, tau, _ = pipeline.measure(polys)
            return bounds.closed_form(1 if mode == "contain" else 2, k, max(d, 1), max(tau, 1))
        if mode == "contain":
            return pipeline.bounded_ball_certificate(q, confluence_samples)
        return pipeline.meeting_ball_certificate(q, confluence_samples, time_budget=time_budget)
    cap = min(max_subsets, 2 ** MAX_CERTIFY_FAMILY - 1)
    m = "closed" if closed_only else "certificate"
    if mode == "contain":
        return pipeline.sa_contain(polys, m, cap, confluence_samples)
    return pipeline.sa_meet(polys, m, cap, confluence_samples, time_budget=time_budget)


def cmd_certify(args) -> int:
    inst = load_instance(args.input)
    try:
        res = _certify(inst, args.mode, args.max_subsets, args.closed_form_only, args.time_budget,
                       args.confluence_samples)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if isinstance(res, bounds.BoundReport):
        _emit({"mode": args.mode, "closed_form": res.to_json()})
        return 0
    _emit(res.to_json())
    return 1 if res.downgraded else 0


def _parse_fraction(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad rational {text!r}") from None
    if v < 0:
        raise InputError("radius squared must be nonnegative")
    return v


def verify_report(inst: InstanceFile, mode: str, radius_sq: Fraction, grid: int = 512,
                  box: Optional[float] = None) -> dict:
    k = len(inst.variables)
    out = {"mode": mode, "radius_sq": str(radius_sq), "k": k}
    if k == 1:
        roots = {n: [iv.to_json() for iv in harness.oracle_roots_1d(p)]
                 for n, p in zip(inst.names, inst.polynomials)}
        out["oracle"] = "exact root isolation"
        out["roots"] = roots
        out["ok"] = harness.roots_inside(inst.polynomials, radius_sq)
        return out
    if k != 2:
        raise InputError("verification supports one or two variables")
    if box is None:
        box = min(1.25 * math.sqrt(float(radius_sq)), 1e3) if radius_sq else 1.0
    sc = None
    if inst.sign_condition is not None:
        sc = harness.SignCondition({i: inst.sign_condition[n] for i, n in enumerate(inst.names)})
    rep = harness.oracle_extent_grid(inst.polynomials, sc, grid, box)
    out["oracle"] = "sign grid"
    out["grid"] = rep.to_json()
    if mode == "meet":
        out["ok"] = harness.grid_meets_all(rep, radius_sq)
    else:
        out["ok"] = harness.grid_contains_bounded(rep, radius_sq)
    return out


def cmd_verify(args) -> int:
    inst = load_instance(args.input)
    radius_sq = _parse_fraction(args.radius_sq)
    box = None if args.box.upper() == "AUTO" else float(args.box)
    rep = verify_report(inst, args.mode, radius_sq, args.grid, box)
    _emit(rep)
    return 0 if rep["ok"] else 1


# --------------------------------------------------------------------------
# golden fixtures


def _p(text: str, variables=("X1",)) -> IntPoly:
    return IntPoly.parse(text, variables)


def _fixture_closed_forms():
    return [
        ("thm1(1,2,2)", bounds.thm1_radius(1, 2, 2).radius_squared, 2 ** 148),
        ("thm1(2,2,1)", bounds.thm1_radius(2, 2, 1).radius_squared, 98 * 2 ** 432),
        ("thm2(1,1,1)", bounds.thm2_radius(1, 1, 1).radius_squared, 793 * 2 ** 11328),
        ("thm2(1,1,1) intermediates",
         {k: bounds.thm2_radius(1, 1, 1).intermediates[k] for k in ("dprime", "D", "N", "rho", "rhoprime", "tauprime")},
         {"dprime": 6, "D": 6, "N": 6, "rho": 142, "rhoprime": 16, "tauprime": 1020}),
        ("thm3(1,1,2,1)", bounds.thm3_radius(1, 1, 2, 1).radius_squared, 2 ** 244),
        ("thm4(1,1,2,1)", bounds.thm4_radius(1, 1, 2, 1).radius_squared, 793 * 2 ** 15288),
    ]


def _fixture_algorithm1():
    g = make_sgb([_p("zeta*X1^3 + 3*X1^2 - 12", ("X1", "zeta"))], ("X1",), (3,), "zeta", (), lam=0, tau_g=5)
    m = mult_matrix(g, 0)
    z = IntPoly.var("zeta", ("zeta",))
    want = PolyMatrix([[z * 0, z * 0, z * z * 12], [z * 0 + 1, z * 0, z * 0], [z * 0, z * 0 + 1, z * 0 - 3]])
    return [
        ("M'1 for zeta*X1^3 + 3*X1^2 - 12", m == want, True),
        ("charpoly", str(charpoly(m, "T")), "T^3 + 3*T^2 - 12*zeta^2"),
        ("entry estimate", g.entry_bound(), 19),
        ("entry bitsize within estimate", m.bitsize() <= 19, True),
    ]


def _fixture_x2minus4():
    c = pipeline.bounded_ball_certificate(_p("X1^2 - 4"))
    return [
        ("f+ for X1^2 - 4", c.extracted_polys["f+[X1]"], "3*T^2 - 12"),
        ("f- for X1^2 - 4", c.extracted_polys["f-[X1]"], "-3*T^2 + 12"),
        ("C1 for X1^2 - 4", c.per_coordinate_bounds, [Fraction(5)]),
        ("radius^2 for X1^2 - 4", c.radius_squared, Fraction(25)),
        ("X1^2 - 4 certificate valid", c.valid, True),
        ("25 <= thm1(1,2,3)", c.radius_squared <= bounds.thm1_radius(1, 2, 3).radius_squared, True),
    ]


def _fixture_family():
    c = pipeline.sa_contain([_p("X1 - 1"), _p("X1 + 1")])
    subset_radii = sorted(Fraction(v) for k, v in c.checks.items() if k.endswith("radius_sq"))
    return [
        ("{X1-1, X1+1} radius^2", c.radius_squared, Fraction(16)),
        ("{X1-1, X1+1} subset radii", subset_radii, [Fraction(0), Fraction(16), Fraction(16)]),
        ("{X1-1, X1+1} covers +-1", c.radius_squared >= 1, True),
    ]


def _fixture_degenerate():
    const = pipeline.bounded_ball_certificate(_p("7"))
    empty = pipeline.bounded_ball_certificate(_p("X1^2 + 1"))
    empty_meet = pipeline.meeting_ball_certificate(_p("X1^2 + 1"))
    try:
        pipeline.bounded_ball_certificate(_p("0"))
        zero = "accepted"
    except ValueError:
        zero = "rejected"
    return [
        ("constant radius^2", const.radius_squared, Fraction(0)),
        ("constant note", bool(const.degenerate_notes), True),
        ("zero polynomial", zero, "rejected"),
        ("X1^2 + 1 contain radius^2", empty.radius_squared, Fraction(0)),
        ("X1^2 + 1 contain notes", bool(empty.degenerate_notes), True),
        ("X1^2 + 1 meet completes", empty_meet.valid and bool(empty_meet.degenerate_notes), True),
    ]


FIXTURES: List[Tuple[str, Callable]] = [
    ("closed forms", _fixture_closed_forms),
    ("multiplication matrix", _fixture_algorithm1),
    ("containing ball X1^2 - 4", _fixture_x2minus4),
    ("semi-algebraic family", _fixture_family),
    ("degenerate inputs", _fixture_degenerate),
]


def run_selftest(out=None) -> int:
    out = sys.stdout if out is None else out
    failures = 0
    for group, build in FIXTURES:
        for name, got, want in build():
            ok = got == want
            failures += not ok
            print(f"{'PASS' if ok else 'FAIL'} [{group}] {name}" + ("" if ok else f": got {got!r}, want {want!r}"),
                  file=out)
    print(f"{failures} mismatches", file=out)
    return 1 if failures else 0


def cmd_selftest(args) -> int:
    return run_selftest()


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ballradius", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="closed-form radius")
    b.add_argument("--theorem", type=int, choices=(1, 2, 3, 4), required=True)
    b.add_argument("--input")
    b.add_argument("-k", type=int)
    b.add_argument("-d", type=int)
    b.add_argument("--tau", type=int)
    b.add_argument("--s", type=int, default=1)
    b.set_defaults(func=cmd_bound)

    c = sub.add_parser("certify", help="per-instance certificate")
    c.add_argument("--mode", choices=("contain", "meet"), required=True)
    c.add_argument("--input", required=True)
    c.add_argument("--closed-form-only", action="store_true")
    c.add_argument("--max-subsets", type=int, default=4096)
    c.add_argument("--time-budget", type=float, default=900.0, help="seconds for the meeting sweep")
    c.add_argument("--confluence-samples", type=int, default=200)
    c.set_defaults(func=cmd_certify)

    v = sub.add_parser("verify", help="check a radius against the brute-force oracles")
    v.add_argument("--mode", choices=("contain", "meet"), required=True)
    v.add_argument("--input", required=True)
    v.add_argument("--radius-sq", required=True)
    v.add_argument("--grid", type=int, default=512)
    v.add_argument("--box", default="AUTO")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="run the golden fixtures")
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, bounds.ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
