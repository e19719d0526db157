"""Command line: single-curve reports, sweeps, surveys and the F_2 census."""

from __future__ import annotations

import argparse
import json
import random
import sys

from .field import FieldError, parse_field
from .forms import ParseError, parse_coeffs, parse_ternary_form
from .incidence import find_split_line, find_split_tangent, pencil_report
from .lab import (ExperimentConfig, chebotarev_survey, f2_census, flex_probability_survey, theorem1_sweep,
                  theorem2_sweep)
from .quartic import (DEFAULT_BUDGET, FIXTURE_EQUATIONS, QUARANTINED, BudgetExceeded, PlaneQuartic, fixture,
                      fixture_names, read_curve_file)
from .special import (FunnyCurve, bitangency_classification, bitangents, conic_flexes_rational,
                      flexes_rational, geometric_flexes, hessian_flexes, is_galois_point)
from .tangential import census_row, xc_irreducibility_verdict

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


# -- curve sources ---------------------------------------------------------------


def load_curves(spec: str, field_text: str | None):
    """Curves named by ``expr:``, ``coeffs:``, ``@file`` or ``fixture:name``."""
    ctx = parse_field(field_text) if field_text else None
    if spec.startswith("@"):
        return read_curve_file(spec[1:])
    if spec.startswith("fixture:"):
        name, _, arg = spec[8:].partition(":")
        kw = {"family": int(arg)} if arg else {}
        if name == "char2_normal_form" or (name in FIXTURE_EQUATIONS and FIXTURE_EQUATIONS[name][0][0] is not None):
            C = fixture(name, None, **kw)
            if ctx is not None and ctx.descriptor() != C.ctx.descriptor():
                raise InputError(f"fixture {name!r} is defined over {C.ctx.descriptor()}, not {ctx.descriptor()}")
            return [C]
        if ctx is None:
            raise InputError(f"fixture {name!r} needs --field")
        return [fixture(name, ctx)]
    if ctx is None:
        raise InputError("--field is required for expr: and coeffs: curves")
    if spec.startswith("expr:"):
        return [PlaneQuartic(parse_ternary_form(spec[5:], ctx))]
    if spec.startswith("coeffs:"):
        return [PlaneQuartic(parse_coeffs(spec[7:], ctx))]
    raise InputError("curve source must start with expr:, coeffs:, @ or fixture:")


# -- single-curve report ---------------------------------------------------------


def _flex_section(C: PlaneQuartic, budget: int) -> dict:
    F = C.ctx
    out = {"section": "flexes", "methods": {}}
    brute = None
    if F.q <= min(budget, 1 << 16):
        brute = flexes_rational(C)
        out["methods"]["contact_order"] = len(brute)
        out["rational"] = [r.record() for r in brute]
    try:
        if F.p >= 5:
            out["methods"]["hessian"] = len(hessian_flexes(C)[1])
        elif F.p == 3:
            out["methods"]["conic"] = len(conic_flexes_rational(C))
    except ValueError as exc:
        out["methods"]["conic"] = str(exc)
    counts = {v for v in out["methods"].values() if isinstance(v, int)}
    out["agree"] = len(counts) <= 1
    out["rational_count"] = counts.pop() if len(counts) == 1 else None
    if F.p != 2 or F.q ** 4 <= 1 << 16:
        try:
            rep = geometric_flexes(C)
            out["geometric"] = {"method": rep.method, "count": rep.geometric_count, "weight_sum": rep.weight_sum,
                                "closed_points": [r.record() for r in rep.flexes]}
        except FunnyCurve as exc:
            out["geometric"] = {"method": "char3-conic", "count": None, "note": str(exc)}
    return out


def analyze(C: PlaneQuartic, seed: int = 0, ext: int = 1, budget: int = DEFAULT_BUDGET):
    """Yield report sections for one curve."""
    F = C.ctx
    head = {"section": "curve", "field": F.descriptor(), "expression": C.expression(),
            "coeffs": C.coeff_vector(), "name": C.name}
    verdict = C.smoothness()
    head["smooth"] = verdict.smooth
    if not verdict.smooth:
        head["singular_point"] = list(verdict.witness.encode())
        head["singular_point_field"] = verdict.witness.ctx.descriptor()
        yield head
        return
    yield head
    pts = C.rational_points(budget=budget)
    yield {"section": "points", "count": len(pts), "points": [list(P.encode()) for P in pts[:64]],
           "truncated": len(pts) > 64}
    yield _flex_section(C, budget)
    rep = bitangents(C, k_max=6, line_budget=1 << 16)
    yield {"section": "bitangents", "base_count": rep.base_count, "total": rep.total, "k_max": rep.k_max,
           "truncated": rep.truncated, "two_rank": rep.two_rank, "lines": [r.record() for r in rep.records]}
    yield {"section": "classification", **bitangency_classification(C, k_max=1 if F.q <= 64 else 0)}
    hit = find_split_line(C)
    tan = find_split_tangent(C, pts)
    yield {"section": "split", "split_line": hit[1].record() if hit else None,
           "split_tangent": tan[2].record() if tan else None,
           "split_tangent_point": list(tan[0].encode()) if tan else None}
    order = list(pts)
    random.Random(seed).shuffle(order)
    pencil = {"section": "pencil", "point": None}
    for P in order:
        g = is_galois_point(C, P)
        if g.verdict != "galois":
            pencil = {"section": "pencil", "galois": g.verdict, **pencil_report(C, P).record()}
            break
    yield pencil
    xc = {"section": "xc", "rows": [census_row(C, m, budget) for m in range(1, ext + 1)]}
    xc["verdict"] = xc_irreducibility_verdict(C, budget).record()
    yield xc


# -- output ------------------------------------------------------------------------


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _jsonl(objs) -> str:
    return "".join(json.dumps(o, sort_keys=True) + "\n" for o in objs)


# -- commands ------------------------------------------------------------------------


def _cmd_analyze(args) -> int:
    curves = load_curves(args.curve, args.field)
    objs = []
    for C in curves:
        objs.extend(analyze(C, args.seed, args.ext, args.budget))
    objs.append({"summary": {"curves": len(curves), "smooth": sum(C.is_smooth() for C in curves)}})
    _emit(_jsonl(objs), args.out)
    return EXIT_OK


def _cmd_xc(args) -> int:
    objs = []
    for C in load_curves(args.curve, args.field):
        rows = [census_row(C, m, args.budget) for m in range(1, args.ext + 1)]
        objs.extend(rows)
        objs.append({"summary": xc_irreducibility_verdict(C, args.budget).record()})
    _emit(_jsonl(objs), args.out)
    return EXIT_OK


def _survey(fn, verify: bool):
    def run(args) -> int:
        if args.field is None:
            raise InputError("--field is required")
        parse_field(args.field)
        config = ExperimentConfig(args.field, args.samples, args.seed, args.budget, args.out, args.workers)
        res = fn(config)
        _emit(res.to_csv() if args.csv else res.to_jsonl(), args.out)
        if verify and res.summary.get("violations", 0):
            return EXIT_VIOLATION
        return EXIT_OK
    return run


def _cmd_census(args) -> int:
    res = f2_census(args.budget)
    _emit(res.to_csv() if args.csv else res.to_jsonl(), args.out)
    return EXIT_OK if res.summary["matches_twists"] and not res.summary["inconclusive"] else EXIT_VIOLATION


def _cmd_fixtures(args) -> int:
    objs = []
    for name in fixture_names():
        if name == "char2_normal_form":
            objs.append({"name": name, "field": "2", "families": [1, 2, 3, 4]})
            continue
        (p, n, mod), text = FIXTURE_EQUATIONS[name]
        desc = None if p is None else f"{p}" if n == 1 else f"{p}:{n}:" + ",".join(map(str, mod))
        objs.append({"name": name, "field": desc, "expression": text, "quarantined": name in QUARANTINED})
    _emit(_jsonl(objs), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quarticlab", description="Exact experiments on plane quartics over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, curve=False, samples=False):
        p.add_argument("--field", help="p[:n[:c0,...,1]]")
        if curve:
            p.add_argument("--curve", required=True, help="expr:..., coeffs:..., @file or fixture:name")
            p.add_argument("--ext", type=int, default=1, help="largest extension degree for X_C counts")
        if samples:
            p.add_argument("--samples", type=int, default=100)
            p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--csv", action="store_true")
        p.add_argument("--out")

    p = sub.add_parser("analyze", help="full report for one curve")
    common(p, curve=True)
    p.set_defaults(run=_cmd_analyze)
    p = sub.add_parser("xc", help="X_C point counts and irreducibility verdict")
    common(p, curve=True)
    p.set_defaults(run=_cmd_xc)
    for name, fn, verify, text in [("thm1", theorem1_sweep, True, "split line sweep"),
                                   ("thm2", theorem2_sweep, True, "split tangent sweep"),
                                   ("chebotarev", chebotarev_survey, True, "pencil window survey"),
                                   ("flexprob", flex_probability_survey, False, "rational flex frequency")]:
        p = sub.add_parser(name, help=text)
        common(p, samples=True)
        p.set_defaults(run=_survey(fn, verify))
    p = sub.add_parser("census-f2", help="classify smooth pointless quartics over F_2")
    common(p)
    p.set_defaults(run=_cmd_census)
    p = sub.add_parser("fixtures", help="list named curves")
    common(p)
    p.set_defaults(run=_cmd_fixtures)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.run(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, FieldError, KeyError, BudgetExceeded, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
