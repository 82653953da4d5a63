"""Seeded batch verification of the whole chain of constructions.

Every case draws a random diffeomorphism, pushes it through every module and
records a pass/fail verdict per named check together with the margins behind
it.  Case ``i`` of a run with seed ``s`` uses its own generator seeded by
``(s, i)``, so reports do not depend on the number of workers.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .central_curve import curve_from_diffeo, potential_from_curve
from .diffeo import DiffeoSpec, build_fourier_lift, build_mobius_lift, sample_with_derivatives
from .errors import ConfigInvalidError, IdenticallyZeroError, NotADiffeoError, ProjPointsError
from .legendrian import flattening_determinant, flattening_points, legendrian_from_diffeo
from .roots import circular_distance, count_distinct_circular, refine_transversal_zeros
from .schwarzian import (identically_zero_tol, potential_from_schwarzian, projective_points,
                         schwarzian_angular)
from .sphere import (characteristic_projection, enclosed_area, inflection_points,
                     meridian_margin)
from .sturm import FundamentalSystem, SLProblem, check_disconjugate, comparison_zero_count

CHECKS = (
    "schwarzian_zeros",
    "curve_potential",
    "disconjugacy",
    "sturm_comparison",
    "flattening_ratio",
    "flattening_identity",
    "characteristic_curve",
)

ORTHOGONALITY_POINTS = 8


@dataclass(frozen=True)
class RandomDiffeoConfig:
    """How random diffeomorphisms are drawn.

    Fourier lifts get ``a_k, b_k ~ amplitude * decay**-k * U(-1, 1)`` for
    ``k <= max_harmonic``, redrawn until ``f' > margin``.  The ``mobius`` kind
    draws matrix entries from ``U(-2, 2)`` with ``det >= 0.1``.
    """

    max_harmonic: int = 4
    decay: float = 2.0
    amplitude: float = 0.15
    margin: float = 1e-6
    kind: str = "fourier"

    def validate(self) -> "RandomDiffeoConfig":
        if self.kind not in ("fourier", "mobius"):
            raise ConfigInvalidError(f"unknown kind {self.kind!r}")
        if self.max_harmonic < 1:
            raise ConfigInvalidError("max_harmonic must be >= 1")
        if not self.decay > 0:
            raise ConfigInvalidError("decay must be positive")
        if not self.amplitude >= 0:
            raise ConfigInvalidError("amplitude must be nonnegative")
        if not self.margin > 0:
            raise ConfigInvalidError("margin must be positive")
        return self


def case_rng(seed: int, case: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, case, stream]))


def random_fourier_spec(rng: np.random.Generator, cfg: RandomDiffeoConfig,
                        max_tries: int = 1000) -> DiffeoSpec:
    ks = np.arange(1, cfg.max_harmonic + 1)
    size = cfg.amplitude * cfg.decay ** (-ks.astype(float))
    for _ in range(max_tries):
        a = size * rng.uniform(-1, 1, ks.size)
        b = size * rng.uniform(-1, 1, ks.size)
        try:
            return build_fourier_lift(list(zip(ks.tolist(), a.tolist(), b.tolist())))
        except NotADiffeoError:
            continue
    raise ConfigInvalidError("rejection sampling never produced a diffeomorphism")


def random_mobius_spec(rng: np.random.Generator, min_det: float = 0.1,
                       bound: float = 2.0) -> DiffeoSpec:
    while True:
        m = rng.uniform(-bound, bound, (2, 2))
        if np.linalg.det(m) >= min_det:
            return build_mobius_lift(m)


def random_spec(seed: int, case: int, cfg: RandomDiffeoConfig, stream: int = 0) -> DiffeoSpec:
    rng = case_rng(seed, case, stream)
    if cfg.kind == "mobius":
        return random_mobius_spec(rng)
    return random_fourier_spec(rng, cfg)


def match_within(a: np.ndarray, b: np.ndarray, radius: float) -> bool:
    """Equal counts and every point of ``a`` within ``radius`` of some point of ``b``."""
    if len(a) != len(b):
        return False
    if len(a) == 0:
        return True
    d = circular_distance(a[:, None], b[None, :])
    return bool(d.min(axis=1).max() <= radius and d.min(axis=0).max() <= radius)


def _verdict(ok: bool, **metrics) -> dict:
    return {"status": "pass" if ok else "fail", **metrics}


def _degenerate(**metrics) -> dict:
    return {"status": "degenerate", **metrics}


def analyze_spec(spec: DiffeoSpec, n: int = 512, partner: DiffeoSpec | None = None) -> dict:
    """Run every construction on one diffeomorphism; one entry per check."""
    lift = sample_with_derivatives(spec, n)
    S = schwarzian_angular(lift)
    k = potential_from_schwarzian(S)
    h = np.pi / n
    out = {}

    try:
        pp = projective_points(S, identically_zero_tol(lift))
        projective = False
    except IdenticallyZeroError:
        pp, projective = None, True

    if projective:
        out["schwarzian_zeros"] = _degenerate(sup_S=S.scale)
    else:
        cnt = count_distinct_circular(pp)
        out["schwarzian_zeros"] = _verdict(cnt >= 4, count=cnt)

    gamma = curve_from_diffeo(lift)
    k_curve, res = potential_from_curve(gamma)
    bridge = float(np.abs(k_curve.values - k.values).max())
    out["curve_potential"] = _verdict(bridge <= 1e-6 and res.sl_residual <= 1e-5,
                                      bridge=bridge, sl_residual=res.sl_residual)

    system = FundamentalSystem(SLProblem(k))
    disc = check_disconjugate(SLProblem(k), system=system)
    out["disconjugacy"] = _verdict(bool(disc), monodromy_error=disc.monodromy_error,
                                   single_zero=disc.single_zero)

    if partner is not None:
        lift2 = sample_with_derivatives(partner, n)
        k2 = potential_from_schwarzian(schwarzian_angular(lift2))
        p2 = SLProblem(k2)
        diff_scale = float(np.abs(k.values - k2.values).max())
        if diff_scale < 1e-10 * max(1.0, k.scale, k2.scale):
            out["sturm_comparison"] = _degenerate(sup_diff=diff_scale)
        else:
            bases = np.arange(ORTHOGONALITY_POINTS) * (np.pi / ORTHOGONALITY_POINTS)
            cmp_ = comparison_zero_count(SLProblem(k), p2, bases,
                                         systems=(system, FundamentalSystem(p2)))
            cnt = count_distinct_circular(cmp_.zeros)
            rel = cmp_.relative_orthogonality
            out["sturm_comparison"] = _verdict(cnt >= 4 and rel <= 1e-8, count=cnt,
                                               orthogonality=rel)

    curve = legendrian_from_diffeo(lift)
    flat = flattening_determinant(curve)
    if projective:
        out["flattening_ratio"] = _degenerate(sup_det2=flat.det2.scale)
        out["flattening_identity"] = _degenerate(identity_residual=flat.relative_identity_residual)
    else:
        km1 = (k - 1.0) ** 2
        mask = km1.values > 1e-6
        ratio = flat.det2.values[mask] / km1.values[mask]
        rel_std = float(ratio.std() / abs(ratio.mean()))
        out["flattening_ratio"] = _verdict(rel_std <= 1e-6, relative_std=rel_std,
                                           constant=float(ratio.mean()))
        fp = flattening_points(flat.det2)
        cnt = count_distinct_circular(fp)
        ident = flat.relative_identity_residual
        k_zeros = refine_transversal_zeros(k - 1.0)
        located = match_within(fp.merged().locations, k_zeros.locations, 2 * h)
        out["flattening_identity"] = _verdict(ident <= 1e-6 and cnt >= 4 and located,
                                              identity_residual=ident, count=cnt,
                                              located=located)

    r = characteristic_projection(curve)
    area = enclosed_area(r)
    mer = meridian_margin(r)
    metrics = dict(area_error=abs(area - 2 * np.pi), winding=mer.winding, margin=mer.margin,
                   closure=r.closure_residual)
    geometric_ok = (abs(area - 2 * np.pi) <= 1e-4 and mer.winding == 1 and mer.margin > 0
                    and r.closure_residual <= 1e-10)
    if projective:
        out["characteristic_curve"] = _verdict(geometric_ok, **metrics)
    else:
        infl = inflection_points(r)
        located = match_within(infl.merged().locations, pp.merged().locations, 2 * h)
        cnt = count_distinct_circular(infl)
        out["characteristic_curve"] = _verdict(geometric_ok and located and cnt >= 4,
                                               inflections=cnt, located=located, **metrics)
    return out


@dataclass
class VerifyReport:
    seed: int
    cases: int
    n: int
    config: dict
    checks: dict = field(default_factory=dict)
    worst: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "VerifyReport":
        return cls(**json.loads(text))


# direction in which each recorded metric gets worse
_WORST = {
    "count": min, "inflections": min, "margin": min,
    "bridge": max, "sl_residual": max, "monodromy_error": max, "orthogonality": max,
    "relative_std": max, "identity_residual": max, "area_error": max, "closure": max,
}


def _one_case(args):
    seed, case, cfg, n, pairs = args
    spec = random_spec(seed, case, cfg)
    partner = random_spec(seed, case, cfg, stream=1) if pairs else None
    try:
        result = analyze_spec(spec, n, partner)
    except ProjPointsError as exc:
        result = {"error": {"status": "fail", "detail": f"{type(exc).__name__}: {exc}"}}
    return case, spec.to_dict(), (partner.to_dict() if partner else None), result


def run_verify_batch(config: RandomDiffeoConfig | None = None, seeds: int = 100, n: int = 512,
                     seed: int = 0, workers: int = 1, pairs: bool = True) -> VerifyReport:
    """Verify ``seeds`` random cases drawn from ``config``.

    Per-case exceptions are recorded as failures, never raised.
    """
    cfg = (config or RandomDiffeoConfig()).validate()
    if seeds < 1:
        raise ConfigInvalidError("need at least one case")
    if n < 64 or n & (n - 1):
        raise ConfigInvalidError("grid size must be a power of two >= 64")
    jobs = [(seed, i, cfg, n, pairs) for i in range(seeds)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_one_case, jobs, chunksize=max(1, seeds // (4 * workers))))
    else:
        results = [_one_case(j) for j in jobs]
    results.sort(key=lambda r: r[0])

    report = VerifyReport(seed=seed, cases=seeds, n=n, config=asdict(cfg))
    names = list(CHECKS) if pairs else [c for c in CHECKS if c != "sturm_comparison"]
    tally = {c: {"passed": 0, "failed": 0, "degenerate": 0} for c in names}
    worst = {}
    for case, spec_d, partner_d, result in results:
        if "error" in result:
            for c in names:
                tally[c]["failed"] += 1
            report.failures.append({"seed": seed, "case": case, "check": "pipeline",
                                    "detail": result["error"]["detail"], "spec": spec_d,
                                    "partner": partner_d})
            continue
        for c in names:
            entry = result[c]
            status = entry["status"]
            if status == "fail":
                tally[c]["failed"] += 1
                detail = {k: v for k, v in entry.items() if k != "status"}
                report.failures.append({"seed": seed, "case": case, "check": c,
                                        "detail": json.dumps(detail, sort_keys=True),
                                        "spec": spec_d, "partner": partner_d})
            else:
                tally[c]["passed"] += 1
                if status == "degenerate":
                    tally[c]["degenerate"] += 1
            for key, val in entry.items():
                pick = _WORST.get(key)
                if pick is None:
                    continue
                slot = f"{c}.{key}"
                worst[slot] = pick(worst[slot], val) if slot in worst else val
    report.checks = tally
    report.worst = {k: (float(v) if isinstance(v, float) else v) for k, v in sorted(worst.items())}
    return report
