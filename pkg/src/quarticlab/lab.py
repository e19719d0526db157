"""Seeded experiments: theorem sweeps, pencil survey, flex probabilities and the F_2 census."""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .field import field_create, parse_field
from .forms import serialize_coeffs
from .incidence import find_split_line, find_split_tangent, pencil_report, serre_weil_floor
from .projective import enumerate_points, mat_det
from .quartic import DEFAULT_BUDGET, PlaneQuartic, apply_pgl3, fixture, sample_smooth_quartic
from .special import is_galois_point, rational_flex_count
from .tangential import is_frobenius_nonclassical, xc_irreducibility_verdict


@dataclass(frozen=True)
class ExperimentConfig:
    field: str
    samples: int = 100
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    out: str | None = None
    workers: int = 1

    @property
    def ctx(self):
        return parse_field(self.field)


def sample_seed(master: int, index: int) -> int:
    """Per-sample seed independent of scheduling."""
    h = hashlib.sha256(f"{master}:{index}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def sample_curve(config: ExperimentConfig, index: int):
    """(curve id, curve) for the index-th sample of a config."""
    s = sample_seed(config.seed, index)
    C, _ = sample_smooth_quartic(config.ctx, s)
    return f"{config.seed}:{index}", C


@dataclass
class SurveyResult:
    experiment: str
    columns: list
    rows: list
    summary: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_cell(r.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_jsonl(self) -> str:
        lines = [json.dumps(r, sort_keys=True) for r in self.rows]
        lines.append(json.dumps({"summary": self.summary, "experiment": self.experiment}, sort_keys=True))
        return "\n".join(lines) + "\n"


def _cell(v):
    if isinstance(v, (list, dict, tuple)):
        return json.dumps(v, sort_keys=True)
    if v is None:
        return ""
    return v


def _map(fn, config: ExperimentConfig):
    """Ordered map over sample indices, optionally in worker processes."""
    jobs = [(config, i) for i in range(config.samples)]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(config.workers) as ex:
            return list(ex.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * config.workers))))
    return [fn(j) for j in jobs]


# -- derangement probabilities -------------------------------------------------


def exact_fixed_point_probability(m: int) -> Fraction:
    """1 - 1/2! + 1/3! - ... + (-1)^(m+1)/m!: a random permutation of m letters has a fixed point."""
    if m < 1:
        raise ValueError("m must be positive")
    return sum((Fraction((-1) ** (k + 1), math.factorial(k)) for k in range(1, m + 1)), Fraction(0))


def render_decimal(x: Fraction, digits: int = 20) -> str:
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = x.numerator * 10 ** digits // x.denominator
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def e_approximation(digits: int = 30) -> Fraction:
    """Rational approximation of e with error below 10^-digits."""
    total, term, k = Fraction(0), Fraction(1), 0
    while term > Fraction(1, 10 ** (digits + 2)):
        total += term
        k += 1
        term /= k
    return total


def wilson_interval(successes: int, n: int, z: float = 1.959963984540054):
    if n == 0:
        return None
    p = successes / n
    den = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return (mid - half, mid + half)


# -- theorem sweeps ------------------------------------------------------------


def _coeffs(C):
    return serialize_coeffs(C.form)


def _thm1_row(job):
    config, i = job
    cid, C = sample_curve(config, i)
    q = C.ctx.q
    n = C.point_count(budget=config.budget)
    hit = find_split_line(C)
    return {"curve_id": cid, "coeffs": _coeffs(C), "points": n, "serre_weil_floor": serre_weil_floor(q),
            "split_line": list(hit[0].encode()) if hit else None, "case": hit[1].case if hit else None,
            "violation": hit is None or n < serre_weil_floor(q)}


def theorem1_sweep(config: ExperimentConfig) -> SurveyResult:
    rows = _map(_thm1_row, config)
    cols = ["curve_id", "coeffs", "points", "serre_weil_floor", "split_line", "case", "violation"]
    return SurveyResult("thm1", cols, rows, {"field": config.field, "samples": len(rows),
                                             "violations": sum(r["violation"] for r in rows)})


def _thm2_row(job):
    config, i = job
    cid, C = sample_curve(config, i)
    pts = C.rational_points(budget=config.budget)
    hit = find_split_tangent(C, pts)
    return {"curve_id": cid, "coeffs": _coeffs(C), "points": len(pts),
            "split_tangent_point": list(hit[0].encode()) if hit else None,
            "split_tangent": list(hit[1].encode()) if hit else None,
            "case": hit[2].case if hit else None, "violation": hit is None}


def theorem2_sweep(config: ExperimentConfig) -> SurveyResult:
    rows = _map(_thm2_row, config)
    cols = ["curve_id", "coeffs", "points", "split_tangent_point", "split_tangent", "case", "violation"]
    return SurveyResult("thm2", cols, rows, {"field": config.field, "samples": len(rows),
                                             "violations": sum(r["violation"] for r in rows)})


# -- pencil survey -------------------------------------------------------------


def _cheb_row(job):
    config, i = job
    cid, C = sample_curve(config, i)
    rng = random.Random(sample_seed(config.seed, i) ^ 0x5EED)
    pts = C.rational_points(budget=config.budget)
    rng.shuffle(pts)
    excluded = 0
    for P in pts:
        if is_galois_point(C, P).verdict == "galois":
            excluded += 1
            continue
        rep = pencil_report(C, P)
        row = {"curve_id": cid, "coeffs": _coeffs(C)}
        row.update(rep.record())
        row["galois_excluded"] = excluded
        row["violation"] = not rep.within_window
        return row
    return {"curve_id": cid, "coeffs": _coeffs(C), "point": None, "galois_excluded": excluded,
            "violation": False}


def chebotarev_survey(config: ExperimentConfig) -> SurveyResult:
    rows = _map(_cheb_row, config)
    cols = ["curve_id", "coeffs", "point", "N", "D", "D_exact", "window", "within_window",
            "tangent_split", "split_tangent", "flagged", "galois_excluded", "violation"]
    return SurveyResult("chebotarev", cols, rows, {"field": config.field, "samples": len(rows),
                                                   "violations": sum(r["violation"] for r in rows)})


# -- flex probabilities ----------------------------------------------------------


def _flex_row(job):
    config, i = job
    cid, C = sample_curve(config, i)
    n = rational_flex_count(C)
    return {"curve_id": cid, "coeffs": _coeffs(C), "rational_flexes": n, "has_flex": n > 0}


def flex_probability_survey(config: ExperimentConfig) -> SurveyResult:
    rows = _map(_flex_row, config)
    cols = ["curve_id", "coeffs", "rational_flexes", "has_flex"]
    p = config.ctx.p
    m = 8 if p == 3 else 24
    target = exact_fixed_point_probability(m)
    summary = {"field": config.field, "samples": len(rows), "reference": f"p_{m}",
               "reference_value": float(target), "estimate": None, "interval": None}
    if rows:
        hits = sum(r["has_flex"] for r in rows)
        est = hits / len(rows)
        summary.update(estimate=est, hits=hits, interval=list(wilson_interval(hits, len(rows))),
                       deviation=est - float(target))
    return SurveyResult("flexprob", cols, rows, summary)


# -- the F_2 census --------------------------------------------------------------


def gl3_f2():
    """The 168 invertible 3x3 matrices over F_2 (as encodings)."""
    F = field_create(2)
    out = []
    for bits in itertools.product((0, 1), repeat=9):
        M = [list(bits[0:3]), list(bits[3:6]), list(bits[6:9])]
        if mat_det(F, M) != 0:
            out.append(M)
    return out


def _key(C):
    return tuple(C.coeff_vector())


def smooth_pointless_f2():
    """All smooth quartic forms over F_2 without rational points, in coefficient order."""
    F = field_create(2)
    pts = [P.coords for P in enumerate_points(F)]
    out = []
    for bits in itertools.product((0, 1), repeat=15):
        if not any(bits):
            continue
        C = PlaneQuartic.from_coeffs(F, bits)
        if all(C.form.evaluate(P) != F.zero for P in pts) and C.is_smooth():
            out.append(C)
    return out


def gl3_orbits(curves, group=None):
    """Partition ``curves`` into orbits of the coordinate-change action; first member is the rep."""
    group = group or gl3_f2()
    remaining = {_key(C): C for C in curves}
    orbits = []
    for C in curves:
        k = _key(C)
        if k not in remaining:
            continue
        orbit = {k}
        for M in group:
            orbit.add(_key(apply_pgl3(C, M)))
        members = [remaining.pop(o) for o in sorted(orbit) if o in remaining]
        orbits.append([C] + [D for D in members if D is not C])
    return orbits


def f2_frobenius_nonclassical():
    """Smooth quartics over F_2 satisfying x^2 F_x + y^2 F_y + z^2 F_z = 0 mod F."""
    F = field_create(2)
    out = []
    for bits in itertools.product((0, 1), repeat=15):
        if not any(bits):
            continue
        C = PlaneQuartic.from_coeffs(F, bits)
        if is_frobenius_nonclassical(C) and C.is_smooth():
            out.append(C)
    return out


def f2_census(budget: int = DEFAULT_BUDGET, degrees=None) -> SurveyResult:
    curves = smooth_pointless_f2()
    group = gl3_f2()
    orbits = gl3_orbits(curves, group)
    twists = {name: _key(fixture(name)) for name in ("klein_twist_1", "klein_twist_2")}
    nonclassical = {_key(C) for C in f2_frobenius_nonclassical()}
    rows = []
    for idx, orbit in enumerate(orbits):
        rep = orbit[0]
        keys = {_key(D) for D in orbit}
        verdict = xc_irreducibility_verdict(rep, budget, degrees)
        rows.append({"class": idx, "size": len(orbit), "representative": serialize_coeffs(rep.form),
                     "expression": rep.expression(), "verdict": verdict.verdict, "counts": verdict.rows,
                     "klein_twist": [n for n, k in sorted(twists.items()) if k in keys],
                     "frobenius_nonclassical": sum(1 for k in keys if k in nonclassical)})
    reducible = [r for r in rows if r["verdict"] == "reducible"]
    summary = {"smooth_pointless": len(curves), "classes": len(orbits),
               "reducible_classes": [r["class"] for r in reducible],
               "reducible_twists": sorted(n for r in reducible for n in r["klein_twist"]),
               "inconclusive": sum(r["verdict"] == "inconclusive" for r in rows),
               "frobenius_nonclassical": len(nonclassical),
               "nonclassical_pointless": all(k in {_key(C) for C in curves} for k in nonclassical)}
    summary["matches_twists"] = (summary["reducible_twists"] == ["klein_twist_1", "klein_twist_2"]
                                 and all(len(r["klein_twist"]) == 1 for r in reducible))
    cols = ["class", "size", "representative", "expression", "verdict", "counts", "klein_twist",
            "frobenius_nonclassical"]
    return SurveyResult("census-f2", cols, rows, summary)
