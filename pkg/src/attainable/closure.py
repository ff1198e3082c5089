"""Randomized forward-closure experiments on trajectory hulls.

One trial: draw a random network and a positive start, integrate to steady
state, take the hull of the (thinned) trajectory, restart from random
interior points of that hull and check whether the new trajectories stay
inside. Points that leave are re-examined before being reported as genuine
outliers, since chord/arc gaps and floating point easily produce spurious
exits near the tail.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import AttainableError
from .generate import random_linear_network, random_network
from .hull import DEFAULT_TOL, HullSample, build_hull, contains, make_chart, sample_interior
from .integrate import IntegratorConfig, Trajectory, integrate, thin_trajectory
from .network import ReactionNetwork, build_vector_field
from .polynomial import PolynomialVectorField

NEAR_DUPLICATE = "near-duplicate-of-C"
CONTAINED_AFTER_REHULL = "contained-after-rehull"
CONFIRMED_OUTLIER = "confirmed-outlier"
STATUSES = (NEAR_DUPLICATE, CONTAINED_AFTER_REHULL, CONFIRMED_OUTLIER)

CLUSTER_RADIUS = 1e-5


@dataclass(frozen=True)
class Violation:
    trial: int | None
    point: np.ndarray
    margin: float
    status: str | None = None
    time: float = 0.0

    def as_json(self) -> dict:
        return {
            "trial": self.trial,
            "point": [float(v) for v in self.point],
            "margin": float(self.margin),
            "status": self.status,
        }


@dataclass(frozen=True)
class TrialConfig:
    integrator: IntegratorConfig = IntegratorConfig()
    spacing: float = 0.0  # absolute thinning distance for C' points; 0 keeps all
    tol: float = DEFAULT_TOL


def _closure_pass(
    field: PolynomialVectorField,
    hull: HullSample,
    start: np.ndarray,
    config: TrialConfig,
    trial: int | None,
) -> tuple[list[Violation], Trajectory]:
    traj = integrate(field, start, config.integrator)
    if config.spacing > 0:
        traj = thin_trajectory(traj, config.spacing)
    out = []
    for t, p in zip(traj.times, traj.points):
        res = contains(hull, p, config.tol)
        if not res.inside:
            out.append(Violation(trial, p.copy(), res.margin, None, float(t)))
    return out, traj


def forward_closure_trial(
    field: PolynomialVectorField,
    hull: HullSample,
    seed: int,
    config: TrialConfig = TrialConfig(),
    start=None,
    trial: int | None = None,
) -> list[Violation]:
    """Restart from a random interior point (or ``start``) and list exits."""
    c = sample_interior(hull, seed) if start is None else np.asarray(start, dtype=float)
    violations, _ = _closure_pass(field, hull, c, config, trial)
    return violations


def recheck_violations(
    violations: Sequence[Violation],
    original_trajectory: Trajectory,
    hull_builder: Callable[[], HullSample | Sequence[HullSample]],
    tol: float = DEFAULT_TOL,
) -> list[Violation]:
    """Label each violation with one of :data:`STATUSES`.

    ``hull_builder`` returns one rebuilt hull or several, tried in order.
    Distances are measured in the normalized chart coordinates of the first
    rebuilt hull; "near" means within ``10 * tol`` of a raw trajectory point.
    """
    if not violations:
        return []
    rehulls = hull_builder()
    if isinstance(rehulls, HullSample):
        rehulls = [rehulls]
    first = rehulls[0]
    raw = first.normalize(first.chart.project(original_trajectory.points))
    out = []
    for v in violations:
        q = first.normalize(first.chart.project(v.point))
        dist = float(np.sqrt(np.min(np.sum((raw - q) ** 2, axis=1))))
        if dist <= 10 * tol:
            status = NEAR_DUPLICATE
        elif any(contains(h, v.point, tol).inside for h in rehulls):
            status = CONTAINED_AFTER_REHULL
        else:
            status = CONFIRMED_OUTLIER
        out.append(replace(v, status=status))
    return out


def cluster_points(points, radius: float = CLUSTER_RADIUS) -> list[np.ndarray]:
    """Single-linkage clusters; a pair links when closer than ``radius * (1 + |x|)``."""
    P = [np.asarray(p, dtype=float) for p in points]
    parent = list(range(len(P)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(P)):
        for j in range(i + 1, len(P)):
            scale = 1.0 + max(np.linalg.norm(P[i]), np.linalg.norm(P[j]))
            if np.linalg.norm(P[i] - P[j]) < radius * scale:
                parent[find(j)] = find(i)
    reps: dict[int, np.ndarray] = {}
    for i in range(len(P)):
        reps.setdefault(find(i), P[i])
    return list(reps.values())


@dataclass(frozen=True)
class ClosureParams:
    species: int = 3
    complexes: int = 3
    max_degree: int = 2
    rate_range: tuple[float, float] = (1.0, 10.0)
    linear: bool = False
    x0_range: tuple[float, float] = (0.5, 2.0)
    integrator: IntegratorConfig = IntegratorConfig(h=1e-3, max_time=60.0, max_points=60_001)
    spacing: float = 1 / 200  # thinning distance as a fraction of the trajectory's bounding-box diameter
    tol: float = DEFAULT_TOL
    inner_trials: int = 5

    def as_json(self) -> dict:
        d = asdict(self)
        d["rate_range"] = list(self.rate_range)
        d["x0_range"] = list(self.x0_range)
        return d

    @classmethod
    def from_json(cls, d: dict) -> ClosureParams:
        d = dict(d)
        d["integrator"] = IntegratorConfig(**d.get("integrator", {}))
        for key in ("rate_range", "x0_range"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)


@dataclass
class TrialRecord:
    trial: int
    seed: int
    violations: list[Violation] = field(default_factory=list)
    steady_states: list[np.ndarray] = field(default_factory=list)
    error: str | None = None


@dataclass
class ClosureReport:
    trials: int
    violations: list[Violation]
    distinct_steady_states: list[list[np.ndarray]]
    seeds: list[int]
    params: ClosureParams
    errors: list[dict] = field(default_factory=list)

    def status_counts(self) -> dict[str, int]:
        counts = {s: 0 for s in STATUSES}
        for v in self.violations:
            counts[v.status] += 1
        return counts

    @property
    def confirmed_outliers(self) -> list[Violation]:
        return [v for v in self.violations if v.status == CONFIRMED_OUTLIER]

    @property
    def multistationary_trials(self) -> list[int]:
        return [k for k, reps in enumerate(self.distinct_steady_states) if len(reps) > 1]

    def as_json(self) -> dict:
        return {
            "trials": self.trials,
            "violations": [v.as_json() for v in self.violations],
            "steady_states": [
                {"trial": k, "points": [[float(x) for x in p] for p in reps]}
                for k, reps in enumerate(self.distinct_steady_states)
            ],
            "seeds": [int(s) for s in self.seeds],
            "params": self.params.as_json(),
            "errors": self.errors,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_json(), indent=2) + "\n"


def trial_seed(master_seed: int, trial: int) -> int:
    """64-bit per-trial seed derived by hashing ``(master_seed, trial)``."""
    ss = np.random.SeedSequence([int(master_seed) & (2**64 - 1), int(trial)])
    return int(ss.generate_state(1, np.uint64)[0])


def trial_inputs(params: ClosureParams, seed: int) -> tuple[ReactionNetwork, np.ndarray, list[int]]:
    """Network, start point and restart seeds of the trial with this seed."""
    rng = np.random.default_rng(np.uint64(seed))
    net_seed = int(rng.integers(2**63))
    x0 = rng.uniform(*params.x0_range, size=params.species)
    inner_seeds = [int(v) for v in rng.integers(2**63, size=params.inner_trials)]
    if params.linear:
        net = random_linear_network(params.species, params.rate_range, net_seed)
    else:
        net = random_network(params.species, params.complexes, params.max_degree, params.rate_range, net_seed)
    return net, x0, inner_seeds


def run_trial(params: ClosureParams, trial: int, seed: int) -> TrialRecord:
    rec = TrialRecord(trial, seed)
    try:
        net, x0, inner_seeds = trial_inputs(params, seed)
        f = build_vector_field(net)
        base = integrate(f, x0, params.integrator)
        if not base.reached_steady:
            raise AttainableError(f"no steady state within t={params.integrator.max_time:g}")
        chart = make_chart(net, x0)
        full = build_hull(base.points, chart)
        delta = params.spacing * full.scale
        hull = build_hull(thin_trajectory(base, delta).points, chart)
        cfg = TrialConfig(params.integrator, delta, params.tol)
        raw: list[Violation] = []
        finals = [base.final]
        for s in inner_seeds:
            c = sample_interior(hull, s)
            found, traj = _closure_pass(f, hull, c, cfg, trial)
            raw.extend(found)
            finals.append(traj.final)
        # denser subsets first: half spacing, then every recorded step
        rec.violations = recheck_violations(
            raw,
            base,
            lambda: [build_hull(thin_trajectory(base, delta / 2).points, chart), full],
            params.tol,
        )
        rec.steady_states = cluster_points(finals)
    except (AttainableError, ValueError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def _run_trial_args(args):
    return run_trial(*args)


def closure_experiment(
    params: ClosureParams, trials: int, master_seed: int, jobs: int = 1
) -> ClosureReport:
    """Run ``trials`` independent trials; the result depends only on the inputs."""
    seeds = [trial_seed(master_seed, k) for k in range(trials)]
    args = [(params, k, s) for k, s in enumerate(seeds)]
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_trial_args, args))
    else:
        records = [run_trial(*a) for a in args]
    violations = [v for r in records for v in r.violations]
    errors = [{"trial": r.trial, "error": r.error} for r in records if r.error]
    return ClosureReport(
        trials, violations, [r.steady_states for r in records], seeds, params, errors
    )
