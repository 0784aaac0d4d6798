"""Command-line front end.

Every command emits a versioned JSON document (to ``--out`` or stdout) and,
with ``--out``, CSV traces next to it.  The exit status is 0 unless some
verdict is FAIL (1); bad input exits with 2.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .constants import (
    AdmissibilityError,
    AdmissibilityInput,
    CurvatureBound,
    check_admissibility,
    constants_bundle,
    diameter_constant,
    optimal_alpha,
)
from .geometry.curvature import CONVENTIONS, hm1_integral, willmore_energy
from .geometry.mesh import MeshError, MeshFormatError, write_obj, write_off
from .intrinsic.distance import DEFAULT_STEINER, extrinsic_diameter, intrinsic_diameter
from .intrinsic.profile import DEFAULT_GRID, ball_volume_profile
from .lab.dichotomy import NEITHER, admissibility_of, dichotomy_sweep, maximal_integrand
from .lab.reports import (
    FAIL,
    NOT_APPLICABLE,
    PASS,
    SCHEMA_VERSION,
    InequalityReport,
    decide,
    dumps,
    write_csv,
    write_json,
)
from .lab.verify import cover_demo, verify_all
from .surfaces import SurfaceSpecError, generate, load_mesh

MESH_SUFFIXES = (".off", ".obj")


class UsageError(ValueError):
    """Invalid command-line input (exit status 2)."""


# ---------------------------------------------------------------- parsing


def parse_alpha(text):
    """``"0.6667"`` or ``"2/3"`` -> float in (0, 1)."""
    try:
        value = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"alpha must be a decimal or p/q, got {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {text!r}")
    return value


def parse_bound(text):
    """Curvature bound ``b``: ``"1"`` (real), ``"0"`` or ``"0.5i"`` (imaginary)."""
    t = text.strip().lower()
    try:
        if t.endswith("i") or t.endswith("j"):
            beta = float(t[:-1] or "1")
            return CurvatureBound.imaginary(abs(beta))
        b = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad curvature bound {text!r}") from None
    if b == 0:
        return CurvatureBound.zero()
    if b < 0:
        raise argparse.ArgumentTypeError("use the 'i' suffix for negative curvature, e.g. 0.5i")
    return CurvatureBound.positive(b)


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("expected a positive number")
    return v


def _common(p):
    p.add_argument("--out", metavar="DIR", help="write JSON/CSV here instead of printing JSON to stdout")
    p.add_argument("--seed", type=int, default=0, help="random seed for sampled centers (default 0)")


def _surface_args(p):
    p.add_argument("--surface", required=True,
                   help="generator spec such as 'sphere(1)', 'torus(2,1)', 'geodesic-sphere(0.5)', "
                        "or an OFF/OBJ file path")
    p.add_argument("--resolution", type=int,
                   help="icosphere level (1-6) or parametric grid size (8-1024)")
    p.add_argument("--b", type=_positive_float, dest="b",
                   help="ambient round-sphere curvature parameter b (small-sphere, equator)")
    p.add_argument("--beta", type=_positive_float,
                   help="ambient hyperbolic parameter beta (geodesic-sphere)")
    p.add_argument("--convention", choices=CONVENTIONS, default="trace",
                   help="mean-curvature normalisation (default trace)")
    p.add_argument("--steiner", type=int, default=DEFAULT_STEINER,
                   help=f"Steiner points per edge for intrinsic distances (default {DEFAULT_STEINER})")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="diamcurv",
        description="Intrinsic diameter versus integrated mean curvature: constants, "
                    "discrete surfaces and inequality checks.",
        epilog="Set DIAMCURV_THREADS to run diameter sweeps on several threads.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("constants", help="table of c, delta, C and the optimal alpha")
    p.add_argument("--m", type=int, nargs="+", default=[2], help="dimensions (default 2)")
    p.add_argument("--alpha", type=parse_alpha, nargs="+", help="alpha values, decimal or p/q")
    p.add_argument("--alpha-grid", type=int, metavar="N",
                   help="use alpha = i/(N+1), i=1..N instead of --alpha")
    _common(p)

    p = sub.add_parser("admissible", help="volume / injectivity-radius verdict")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--alpha", type=parse_alpha, help="default m/(m+1)")
    p.add_argument("--b", type=parse_bound, default=CurvatureBound.zero(),
                   help="curvature bound b: real, 0, or imaginary like 0.5i (default 0)")
    p.add_argument("--vol", type=_positive_float, required=True, help="volume of the submanifold")
    p.add_argument("--inj", type=_positive_float, default=math.inf,
                   help="injectivity radius of the ambient space along M (default inf)")
    _common(p)

    p = sub.add_parser("analyze", help="diameters, curvature integrals and a ball profile")
    _surface_args(p)
    p.add_argument("--center", type=int, help="profile center vertex (default: seeded random)")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="uniform profile radii (default 256)")
    p.add_argument("--export", metavar="PATH", help="also write the mesh as OFF or OBJ")
    p.add_argument("--exhaustive", action="store_true", help="all-sources intrinsic diameter")
    _common(p)

    p = sub.add_parser("dichotomy", help="maximal-function / volume-ratio sweep")
    _surface_args(p)
    p.add_argument("--alpha", type=parse_alpha, default=2 / 3)
    p.add_argument("--n-centers", type=int, default=20)
    p.add_argument("--n-radii", type=int, default=16)
    _common(p)

    p = sub.add_parser("verify", help="all applicable inequality reports")
    _surface_args(p)
    p.add_argument("--alpha", type=parse_alpha, default=2 / 3)
    p.add_argument("--n-sobolev", type=int, default=1, help="sampled Sobolev cutoffs (default 1)")
    _common(p)

    p = sub.add_parser("sweep-alpha", help="diameter-bound ratio as a function of alpha")
    _surface_args(p)
    p.add_argument("--alpha", type=parse_alpha, nargs="+")
    p.add_argument("--alpha-grid", type=int, default=19, metavar="N",
                   help="alpha = i/(N+1), i=1..N when --alpha is absent (default 19)")
    _common(p)

    p = sub.add_parser("cover-demo", help="covering construction along the extremal geodesic")
    _surface_args(p)
    p.add_argument("--alpha", type=parse_alpha, default=2 / 3)
    p.add_argument("--max-candidates", type=int, default=64,
                   help="path nodes used as ball centers (default 64, evenly spaced)")
    _common(p)
    return parser


# ---------------------------------------------------------------- helpers


def _is_mesh_path(spec):
    return spec.lower().endswith(MESH_SUFFIXES) or os.path.isfile(spec)


def load_surface(args):
    if _is_mesh_path(args.surface):
        if args.resolution is not None or args.b is not None or args.beta is not None:
            raise UsageError("--resolution/--b/--beta do not apply to mesh files")
        return load_mesh(args.surface)
    if args.b is not None and args.beta is not None:
        raise UsageError("give at most one of --b and --beta")
    curvature = args.b if args.b is not None else args.beta
    return generate(args.surface, resolution=args.resolution, curvature=curvature)


def _alpha_list(args):
    if args.alpha:
        return list(args.alpha)
    n = args.alpha_grid
    if n is None or n < 1:
        raise UsageError("--alpha-grid must be >= 1")
    return [i / (n + 1) for i in range(1, n + 1)]


def _config(args):
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in ("out",):
            continue
        if isinstance(v, CurvatureBound):
            v = v.to_dict()
        elif isinstance(v, list):
            v = [float(x) if isinstance(x, float) else x for x in v]
        cfg[k] = v
    return cfg


def _document(args, results, verdicts):
    return {
        "schema": SCHEMA_VERSION,
        "tool": "diamcurv",
        "version": __version__,
        "command": args.command,
        "seed": args.seed,
        "config": _config(args),
        "results": results,
        "verdicts": verdicts,
        "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def _emit(args, doc, csvs=()):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        stem = args.command.replace("-", "_")
        write_json(os.path.join(args.out, f"{stem}.json"), doc)
        for name, header, rows in csvs:
            write_csv(os.path.join(args.out, name), header, rows)
        for v in doc["verdicts"]:
            print(f"{v['name']:<28} {v['verdict']}")
    else:
        sys.stdout.write(dumps(doc))


def _verdict(name, verdict, note=None):
    out = {"name": name, "verdict": verdict}
    if note:
        out["note"] = note
    return out


# ---------------------------------------------------------------- commands


def cmd_constants(args):
    alphas = _alpha_list(args) if (args.alpha or args.alpha_grid) else None
    rows, table = [], []
    optimum = {}
    for m in args.m:
        a_star, c_star = optimal_alpha(m)
        optimum[str(m)] = {"alpha_star": a_star, "C_min": c_star, "m_over_m_plus_1": m / (m + 1)}
        for a in alphas if alphas is not None else [m / (m + 1)]:
            b = constants_bundle(m, a)
            row = b.to_dict()
            row["C_over_pi"] = b.C / math.pi
            table.append(row)
            rows.append([m, a, b.c, b.delta, b.C, b.C / math.pi])
    doc = _document(args, {"table": table, "optimum": optimum}, [])
    _emit(args, doc, [("constants.csv", ["m", "alpha", "c", "delta", "C", "C_over_pi"], rows)])
    return doc


def cmd_admissible(args):
    alpha = args.alpha if args.alpha is not None else args.m / (args.m + 1)
    adm = check_admissibility(AdmissibilityInput(args.m, alpha, args.b, args.vol, args.inj))
    results = adm.to_dict()
    results["alpha"] = alpha
    verdict = PASS if adm.admissible else NOT_APPLICABLE
    doc = _document(args, results, [_verdict("admissibility", verdict, adm.reason)])
    _emit(args, doc)
    return doc


def cmd_analyze(args):
    imm = load_surface(args)
    rng = np.random.default_rng(args.seed)
    center = args.center if args.center is not None else int(rng.integers(imm.n_vertices))
    if not 0 <= center < imm.n_vertices:
        raise UsageError(f"--center must be a vertex id in [0, {imm.n_vertices})")
    d_int, pair = intrinsic_diameter(imm, args.steiner, mode="exhaustive" if args.exhaustive else "fast")
    h = imm.mean_curvature(args.convention).magnitudes
    prof = ball_volume_profile(imm, center, args.steiner, args.grid)
    conv_scale = 1.0 if args.convention == "trace" else 1.0 / imm.m
    integrand = maximal_integrand(imm.m, prof.radii, prof.volume, prof.h_integral * conv_scale)
    results = {
        "surface": imm.metadata(),
        "area": imm.total_area,
        "d_int": d_int,
        "extremal_pair": list(pair),
        "d_ext": extrinsic_diameter(imm) if imm.ambient.is_flat else None,
        "hm1_integral": hm1_integral(imm, imm.m, args.convention),
        "willmore_energy": willmore_energy(imm, args.convention),
        "mean_curvature": {"min": float(h.min()), "max": float(h.max()),
                           "mean": float(np.sum(h * imm.dual_areas) / imm.total_area)},
        "profile": {"center": center, "n_radii": len(prof.radii),
                    "saturation_radius": prof.saturation_radius,
                    "max_integrand": float(integrand.max())},
    }
    if args.export:
        writer = write_obj if args.export.lower().endswith(".obj") else write_off
        writer(args.export, imm.vertices, imm.faces)
    doc = _document(args, results, [])
    _emit(args, doc, [
        ("profile_volume.csv", ["r", "V"], zip(prof.radii, prof.volume)),
        ("profile_maximal.csv", ["r", "integrand"], zip(prof.radii, integrand)),
    ])
    return doc


def cmd_dichotomy(args):
    imm = load_surface(args)
    reps = dichotomy_sweep(imm, args.alpha, args.n_centers, args.n_radii, args.seed, args.convention, args.steiner)
    counts = {}
    for r in reps:
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    bad = [r for r in reps if r.verdict == NEITHER or r.comparison_holds is False]
    results = {
        "surface": imm.metadata(),
        "alpha": args.alpha,
        "delta": reps[0].delta if reps else None,
        "counts": dict(sorted(counts.items())),
        "reports": [r.to_dict() for r in reps],
    }
    verdicts = [_verdict("dichotomy", FAIL if bad else PASS,
                         f"{len(bad)} failing (center, R) pairs" if bad else None)]
    doc = _document(args, results, verdicts)
    rows = [[r.center, r.R, r.maximal, r.maximal_radius, r.ratio, r.ratio_radius, r.verdict,
             "" if r.comparison_holds is None else str(r.comparison_holds).lower()] for r in reps]
    _emit(args, doc, [("dichotomy.csv", ["center", "R", "M", "r_M", "kappa", "r_kappa", "verdict", "comparison"],
                       rows)])
    return doc


def _report_verdicts(reports):
    out = []
    for r in reports:
        note = None
        if r.verdict == NOT_APPLICABLE and r.admissibility:
            note = r.admissibility.get("reason")
        elif r.verdict == "WARN":
            note = "tie within tolerance"
        out.append(_verdict(r.name, r.verdict, note))
    return out


def cmd_verify(args):
    imm = load_surface(args)
    reports = verify_all(imm, args.alpha, args.convention, args.steiner, args.n_sobolev, args.seed)
    doc = _document(args, {"surface": imm.metadata(), "reports": reports}, _report_verdicts(reports))
    _emit(args, doc, [("verify.csv", InequalityReport.CSV_HEADER, [r.csv_row() for r in reports])])
    return doc


def cmd_sweep_alpha(args):
    imm = load_surface(args)
    alphas = _alpha_list(args)
    d_int, pair = intrinsic_diameter(imm, args.steiner)
    integral = hm1_integral(imm, imm.m, args.convention)
    rows, table, verdicts = [], [], []
    for a in alphas:
        C = diameter_constant(imm.m, a)
        adm = admissibility_of(imm, a)
        ratio = d_int / (C * integral) if integral > 0 else math.inf
        v = decide(d_int, C * integral) if adm.admissible else NOT_APPLICABLE
        table.append({"alpha": a, "C": C, "rhs": C * integral, "ratio": ratio, "verdict": v,
                      "admissibility": adm.to_dict()})
        rows.append([a, C, ratio])
        verdicts.append(_verdict(f"diameter_bound@{a:.6g}", v, adm.reason if not adm.admissible else None))
    results = {"surface": imm.metadata(), "d_int": d_int, "extremal_pair": list(pair),
               "hm1_integral": integral, "sweep": table}
    doc = _document(args, results, verdicts)
    _emit(args, doc, [("sweep_alpha.csv", ["alpha", "C", "ratio"], rows)])
    return doc


def cmd_cover_demo(args):
    imm = load_surface(args)
    d_int, pair = intrinsic_diameter(imm, args.steiner)
    res = cover_demo(imm, args.alpha, args.convention, args.steiner, pair, args.max_candidates)
    cover = res["cover"]
    if cover is None:
        verdict, note = FAIL, "no candidate reached the maximal-function threshold"
    else:
        ok = cover.disjoint and cover.three_r_cover
        verdict = decide(res["geodesic_length"], res["bound_from_cover"]) if ok else FAIL
        note = None if ok else "cover invariants violated"
    res["d_int"] = d_int
    res["surface"] = imm.metadata()
    res["cover"] = None if cover is None else cover.to_dict()
    doc = _document(args, res, [_verdict("cover_bound", verdict, note)])
    rows = [] if cover is None else list(zip(cover.accepted, cover.positions, cover.radii))
    _emit(args, doc, [("cover.csv", ["candidate", "arclength", "radius"], rows)])
    return doc


COMMANDS = {
    "constants": cmd_constants,
    "admissible": cmd_admissible,
    "analyze": cmd_analyze,
    "dichotomy": cmd_dichotomy,
    "verify": cmd_verify,
    "sweep-alpha": cmd_sweep_alpha,
    "cover-demo": cmd_cover_demo,
}


def run(argv=None):
    """Parse ``argv``, run the command and return ``(exit status, document)``."""
    args = build_parser().parse_args(argv)
    try:
        doc = COMMANDS[args.command](args)
    except (UsageError, SurfaceSpecError, MeshError, AdmissibilityError, MeshFormatError, OSError) as exc:
        print(f"diamcurv {args.command}: error: {exc}", file=sys.stderr)
        return 2, None
    failed = any(v["verdict"] == FAIL for v in doc["verdicts"])
    return (1 if failed else 0), doc


def main(argv=None):
    status, _ = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
