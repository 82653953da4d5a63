"""Command-line front end.

Subcommands run one pipeline on a diffeomorphism read from JSON, write its
samples as CSV (``--out``) plus a JSON summary next to it, and print the
summary.  ``verify`` runs the seeded batch.

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input, config or IO.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import errors
from .batch import RandomDiffeoConfig, run_verify_batch
from .central_curve import curve_from_diffeo, potential_from_curve
from .diffeo import DiffeoSpec, identity, sample_with_derivatives, spec_from_json
from .legendrian import (NU, flattening_determinant, flattening_points, legendrian_from_diffeo,
                         twisted_example_curve)
from .roots import count_distinct_circular
from .schwarzian import (identically_zero_tol, potential_from_schwarzian, projective_points,
                         schwarzian_angular)
from .sphere import (characteristic_projection, enclosed_area, inflection_numerator,
                     inflection_points, meridian_margin)
from .sturm import FundamentalSystem, SLProblem, comparison_zero_count

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2

# raised by bad user input rather than by a failed check
INVALID_INPUT = (errors.InputParseError, errors.ConfigInvalidError, errors.IOFailureError,
                 errors.NotADiffeoError, errors.SingularError, errors.UnderResolvedError,
                 errors.DegenerateEqualError, errors.EpsilonTooLargeError)


class CheckFailed(Exception):
    """A pipeline ran but one of its theorem checks did not hold."""

    def __init__(self, summary: dict):
        self.summary = summary
        super().__init__("check failed")


# IO -------------------------------------------------------------------------

def read_spec(path) -> DiffeoSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise errors.IOFailureError(f"cannot read {path}: {exc}") from exc
    return spec_from_json(text)


def write_csv(path, columns: dict):
    """Write equal-length columns with full precision (``.`` decimal point)."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[c], dtype=float) for c in names])
    try:
        np.savetxt(path, data, delimiter=",", header=",".join(names), comments="", fmt="%.17g")
    except OSError as exc:
        raise errors.IOFailureError(f"cannot write {path}: {exc}") from exc


def summary_path(out) -> Path:
    return Path(out).with_suffix(".json")


def _clean(obj):
    """Convert numpy scalars so the summary serialises."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# single-case pipelines ------------------------------------------------------
# each returns (summary, csv columns, passed)

def _schwarzian(spec, n, args):
    lift = sample_with_derivatives(spec, n)
    S = schwarzian_angular(lift)
    k = potential_from_schwarzian(S)
    cols = dict(alpha=lift.grid, f=lift.f, fdot=lift.fdot, S=S.values, k=k.values)
    try:
        zs = projective_points(S, identically_zero_tol(lift))
    except errors.IdenticallyZeroError:
        return {"projective": True, "sup_S": S.scale}, cols, True
    m = count_distinct_circular(zs)
    summary = {"projective_points": m, "locations": zs.merged().locations.tolist(),
               "kinds": zs.merged().kinds, "sup_S": S.scale}
    return summary, cols, m >= 4


def _curve(spec, n, args):
    lift = sample_with_derivatives(spec, n)
    k = potential_from_schwarzian(schwarzian_angular(lift))
    gamma = curve_from_diffeo(lift)
    k_curve, res = potential_from_curve(gamma)
    bridge = float(np.abs(k_curve.values - k.values).max())
    summary = {"bridge": bridge, "sl_residual": res.sl_residual,
               "wronskian_residual": res.wronskian_residual,
               "antisymmetry_residual": gamma.antisymmetry_residual(),
               "area": gamma.area(), "star_shaped": gamma.is_star_shaped()}
    cols = dict(alpha=gamma.grid, gamma_x=gamma.x, gamma_y=gamma.y, k=np.tile(k_curve.values, 2))
    return summary, cols, bridge <= 1e-6 and res.sl_residual <= 1e-5


def _potential(spec, n):
    return potential_from_schwarzian(schwarzian_angular(sample_with_derivatives(spec, n)))


def _sturm_compare(spec, n, args):
    other = read_spec(args.other) if args.other else identity()
    p1, p2 = SLProblem(_potential(spec, n)), SLProblem(_potential(other, n))
    systems = (FundamentalSystem(p1), FundamentalSystem(p2))
    bases = np.arange(args.base_points) * (np.pi / args.base_points)
    cmp_ = comparison_zero_count(p1, p2, bases, systems=systems)
    m = count_distinct_circular(cmp_.zeros)
    summary = {"zeros": m, "locations": cmp_.zeros.merged().locations.tolist(),
               "orthogonality": cmp_.relative_orthogonality,
               "monodromy_errors": [s.monodromy.distance_to(-np.eye(2)) for s in systems]}
    cols = dict(alpha=p1.k.grid, k1=p1.k.values, k2=p2.k.values, diff=(p1.k - p2.k).values,
                phi1=systems[0].solution(0.0).phi[:n], phi2=systems[1].solution(0.0).phi[:n])
    return summary, cols, m >= 4 and cmp_.relative_orthogonality <= 1e-8


def _legendrian_columns(curve, flat):
    return dict(alpha=curve.grid, c1=curve.c[0], c2=curve.c[1], c3=curve.c[2], c4=curve.c[3],
                det2=np.tile(flat.det2.values, 2), det4=np.tile(flat.det4.values, 2),
                legendrian_residual=curve.legendrian_form())


def _legendrian(spec, n, args):
    lift = sample_with_derivatives(spec, n)
    k = potential_from_schwarzian(schwarzian_angular(lift))
    curve = legendrian_from_diffeo(lift)
    flat = flattening_determinant(curve)
    summary = {"legendrian_residual": curve.legendrian_residual(), "nu": NU,
               "identity_residual": flat.relative_identity_residual}
    try:
        fp = flattening_points(flat.det2)
    except errors.IdenticallyZeroError:
        summary["projective"] = True
        return summary, _legendrian_columns(curve, flat), summary["identity_residual"] <= 1e-6
    km1 = (k - 1.0) ** 2
    mask = km1.values > 1e-6
    ratio = flat.det2.values[mask] / km1.values[mask]
    m = count_distinct_circular(fp)
    summary.update(flattenings=m, locations=fp.merged().locations.tolist(),
                   ratio_constant=float(ratio.mean()),
                   ratio_relative_std=float(ratio.std() / abs(ratio.mean())))
    ok = m >= 4 and summary["identity_residual"] <= 1e-6 and summary["ratio_relative_std"] <= 1e-6
    return summary, _legendrian_columns(curve, flat), ok


def _counterexample(spec, n, args):
    eps = args.epsilon
    curve = twisted_example_curve(eps, n)
    flat = flattening_determinant(curve)
    det2 = flat.det2
    try:
        m = count_distinct_circular(flattening_points(det2, legendrian=False))
    except errors.IdenticallyZeroError:
        m = None        # eps = 0: every point flattens
    target = 192 * eps**2
    rel = float(np.abs(det2.values - target).max() / target) if eps > 0 else 0.0
    summary = {"epsilon": eps, "det2_mean": float(det2.values.mean()), "det2_expected": target,
               "det2_relative_error": rel, "flattenings": m,
               "legendrian_residual": curve.legendrian_residual()}
    ok = eps == 0 or (rel <= 1e-8 and m == 0 and summary["legendrian_residual"] > 0)
    return summary, _legendrian_columns(curve, flat), ok


def _sphere(spec, n, args):
    lift = sample_with_derivatives(spec, n)
    r = characteristic_projection(legendrian_from_diffeo(lift))
    num = inflection_numerator(r)
    area = enclosed_area(r)
    mer = meridian_margin(r)
    summary = {"area": area, "winding": mer.winding, "meridian_margin": mer.margin,
               "closure_residual": r.closure_residual}
    try:
        infl = inflection_points(r)
        summary["inflections"] = count_distinct_circular(infl)
        summary["locations"] = infl.merged().locations.tolist()
        enough = summary["inflections"] >= 4
    except errors.IdenticallyZeroError:
        summary["great_circle"] = True
        enough = True
    cols = dict(alpha=r.grid, rx=r.r[0], ry=r.r[1], rz=r.r[2], inflect_numerator=num.values)
    ok = enough and abs(area - 2 * np.pi) <= 1e-4 and mer.winding == 1
    return summary, cols, ok


PIPELINES = {
    "schwarzian": _schwarzian,
    "curve": _curve,
    "sturm-compare": _sturm_compare,
    "legendrian": _legendrian,
    "counterexample": _counterexample,
    "sphere": _sphere,
}


def run_report(subcommand: str, input_path=None, n: int = 512, out=None, **flags) -> dict:
    """Run one pipeline, write ``out`` (CSV) and its JSON summary, return the summary.

    Raises
    ------
    CheckFailed
        Carrying the summary when the pipeline's theorem check does not hold.
    """
    args = argparse.Namespace(**{"other": None, "base_points": 8, "epsilon": 0.01, **flags})
    if subcommand == "counterexample":
        spec = None
    elif input_path is None:
        raise errors.InputParseError(f"{subcommand} needs --input")
    else:
        spec = read_spec(input_path)
    summary, cols, ok = PIPELINES[subcommand](spec, n, args)
    summary = _clean({"command": subcommand, "n": n, "passed": bool(ok), **summary})
    if out is not None:
        write_csv(out, cols)
        try:
            summary_path(out).write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
        except OSError as exc:
            raise errors.IOFailureError(f"cannot write summary: {exc}") from exc
    if not ok:
        raise CheckFailed(summary)
    return summary


# argument parsing -----------------------------------------------------------

def _add_common(p, need_input=True):
    p.add_argument("--n", type=int, default=512, help="grid size (power of two >= 64)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (CSV; summary goes to the .json sibling)")
    p.add_argument("--json", action="store_true", help="print the summary as JSON")
    if need_input:
        p.add_argument("--input", required=True, help="diffeomorphism spec (JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="projpoints",
        description="Projective points of circle diffeomorphisms and related curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="seeded batch verification of every check")
    _add_common(v, need_input=False)
    v.add_argument("--cases", type=int, default=100)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--kind", choices=("fourier", "mobius"), default="fourier")
    v.add_argument("--max-harmonic", type=int, default=4)
    v.add_argument("--amplitude", type=float, default=0.15)
    v.add_argument("--decay", type=float, default=2.0)
    v.add_argument("--no-pairs", action="store_true", help="skip the Sturm comparison")

    for name, text in (("schwarzian", "Schwarzian and its zeros"),
                       ("curve", "central curve and its potential"),
                       ("legendrian", "Legendrian lift and flattening points"),
                       ("sphere", "characteristic curve on the sphere")):
        _add_common(sub.add_parser(name, help=text))
    s = sub.add_parser("sturm-compare", help="zeros of k1 - k2 for two diffeomorphisms")
    _add_common(s)
    s.add_argument("--other", help="second spec (default: identity)")
    s.add_argument("--base-points", type=int, default=8)
    c = sub.add_parser("counterexample", help="twisted non-Legendrian curve")
    _add_common(c, need_input=False)
    c.add_argument("--epsilon", type=float, default=0.01)
    return parser


def _print_summary(summary: dict, as_json: bool, stream=None):
    stream = stream or sys.stdout
    if as_json:
        print(json.dumps(summary, sort_keys=True, indent=2), file=stream)
        return
    for key in sorted(summary):
        print(f"{key}: {summary[key]}", file=stream)


def _verify(args) -> int:
    cfg = RandomDiffeoConfig(max_harmonic=args.max_harmonic, decay=args.decay,
                             amplitude=args.amplitude, kind=args.kind)
    if args.n < 64 or args.n & (args.n - 1):
        raise errors.ConfigInvalidError("grid size must be a power of two >= 64")
    report = run_verify_batch(cfg, seeds=args.cases, n=args.n, seed=args.seed,
                              workers=args.workers, pairs=not args.no_pairs)
    text = report.to_json()
    if args.out:
        try:
            Path(args.out).write_text(text + "\n")
        except OSError as exc:
            raise errors.IOFailureError(f"cannot write {args.out}: {exc}") from exc
    if args.json:
        print(text)
    else:
        print(f"seed {report.seed}, {report.cases} cases, n = {report.n}")
        for name, t in report.checks.items():
            print(f"  {name:22s} passed {t['passed']:4d}  failed {t['failed']:4d}"
                  f"  degenerate {t['degenerate']:4d}")
        for f in report.failures[:10]:
            print(f"  FAIL case {f['case']} {f['check']}: {f['detail']}")
    return EXIT_OK if report.ok else EXIT_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        if args.n < 64 or args.n & (args.n - 1):
            raise errors.ConfigInvalidError("grid size must be a power of two >= 64")
        flags = {}
        if args.command == "sturm-compare":
            flags = dict(other=args.other, base_points=args.base_points)
        elif args.command == "counterexample":
            flags = dict(epsilon=args.epsilon)
        summary = run_report(args.command, getattr(args, "input", None), n=args.n,
                             out=args.out, **flags)
    except CheckFailed as exc:
        _print_summary(exc.summary, args.json)
        return EXIT_FAILED
    except INVALID_INPUT as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except errors.ProjPointsError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _print_summary(summary, args.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
