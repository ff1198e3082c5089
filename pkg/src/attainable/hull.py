"""Convex hulls of trajectory samples in stoichiometry coordinates.

Points are projected onto ``x0 + P`` (``P`` the stoichiometry subspace) and
rescaled to unit bounding-box diameter; membership is a small LP instead of a
facet enumeration, so it works the same way in any dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateSubspace, OffChart
from .integrate import Trajectory
from .network import ReactionNetwork, orthonormal_span, stoichiometry_subspace
from .polynomial import PolynomialVectorField
from .simplex import simplex_from_basis

TANGENT_CUTOFF = 1e-8
RANK_CUTOFF = 1e-8
DEFAULT_TOL = 1e-6


@dataclass(frozen=True)
class AffineChart:
    origin: np.ndarray  # (s,)
    basis: np.ndarray  # (d, s) orthonormal rows

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1]

    def project(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.origin) @ self.basis.T

    def project_vector(self, v) -> np.ndarray:
        """Chart coordinates of a direction (no translation)."""
        return np.asarray(v, dtype=float) @ self.basis.T

    def lift(self, y) -> np.ndarray:
        return self.origin + np.asarray(y, dtype=float) @ self.basis

    def off_chart_distance(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.linalg.norm(x - self.lift(self.project(x)), axis=-1)


def make_chart(source, x0, tangents=None) -> AffineChart:
    """Chart on ``x0 + P``.

    ``source`` is a :class:`ReactionNetwork` (``P`` from its reaction vectors)
    or a :class:`PolynomialVectorField`; for a field ``P`` is estimated from the
    span of ``tangents`` (field values along a trajectory). Without explicit
    tangents a short trajectory from ``x0`` is integrated to collect them.
    """
    x0 = np.asarray(x0, dtype=float)
    if isinstance(source, ReactionNetwork):
        basis = stoichiometry_subspace(source).basis
    elif isinstance(source, PolynomialVectorField):
        if tangents is None:
            from .integrate import IntegratorConfig, integrate

            tangents = integrate(source, x0, IntegratorConfig(h=1e-3, max_time=2.0, max_points=2001)).tangents
        basis = orthonormal_span(tangents, TANGENT_CUTOFF, source.species_count)
    elif isinstance(source, Trajectory):
        basis = orthonormal_span(source.tangents, TANGENT_CUTOFF, source.species_count)
    else:
        raise TypeError(f"cannot build a chart from {type(source).__name__}")
    if basis.shape[0] == 0:
        raise DegenerateSubspace("stoichiometry subspace has dimension 0")
    return AffineChart(x0.copy(), basis)


def affine_rank(points, cutoff: float = RANK_CUTOFF) -> int:
    P = np.asarray(points, dtype=float)
    if len(P) <= 1:
        return 0
    sv = np.linalg.svd(P[1:] - P[0], compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > cutoff * sv[0]))


@dataclass(frozen=True)
class HullSample:
    """Generators of a polytope, kept both in ambient and in chart coordinates."""

    chart: AffineChart
    points: np.ndarray  # (N, s) ambient generators

    @cached_property
    def reduced_points(self) -> np.ndarray:
        return self.chart.project(self.points)

    @cached_property
    def center(self) -> np.ndarray:
        R = self.reduced_points
        return 0.5 * (R.min(axis=0) + R.max(axis=0))

    @cached_property
    def scale(self) -> float:
        """Bounding-box diameter of the reduced points (1 for a single point)."""
        R = self.reduced_points
        diam = float(np.linalg.norm(R.max(axis=0) - R.min(axis=0)))
        return diam if diam > 0 else 1.0

    def normalize(self, reduced) -> np.ndarray:
        return (np.asarray(reduced, dtype=float) - self.center) / self.scale

    @cached_property
    def normalized_points(self) -> np.ndarray:
        return self.normalize(self.reduced_points)

    @cached_property
    def rank(self) -> int:
        return affine_rank(self.reduced_points)

    def __len__(self) -> int:
        return len(self.points)


def build_hull(points, chart: AffineChart) -> HullSample:
    P = np.array(points, dtype=float)
    if P.ndim != 2 or len(P) == 0:
        raise ValueError("need a non-empty (N, s) array of points")
    return HullSample(chart, P)


@dataclass(frozen=True)
class MembershipResult:
    inside: bool
    margin: float
    weights: np.ndarray | None
    slack: float


def contains(hull: HullSample, query, tol: float = DEFAULT_TOL) -> MembershipResult:
    """Is ``query`` a convex combination of the hull generators?

    Solves ``min |r|_1`` over ``sum mu_i p_i + r = q``, ``sum mu_i + r_0 = 1``,
    ``mu >= 0`` in normalized chart coordinates. Inside iff the optimum is at
    most ``tol``. ``margin`` is the optimal slack when inside and the
    Euclidean residual of the (renormalized) best combination otherwise.
    """
    q = np.asarray(query, dtype=float)
    if q.shape != (hull.chart.ambient_dim,):
        raise ValueError(f"query has shape {q.shape}, expected ({hull.chart.ambient_dim},)")
    off = float(hull.chart.off_chart_distance(q)) / hull.scale
    if off > 10 * tol:
        raise OffChart(f"query lies {off:.3g} (normalized) off the affine slice")
    qn = hull.normalize(hull.chart.project(q))
    Pn = hull.normalized_points
    N, d = Pn.shape
    m = d + 1
    M = np.vstack([Pn.T, np.ones((1, N))])
    b = np.concatenate([qn, [1.0]])
    sign = np.where(b < 0, -1.0, 1.0)
    M = M * sign[:, None]
    b = b * sign
    eye = np.eye(m)
    # columns: weights | surplus (r < 0 side) | artificial (r > 0 side, initial basis)
    full = np.hstack([M, -eye, eye])
    cost = np.concatenate([np.zeros(N), np.ones(m), np.ones(m)])
    res = simplex_from_basis(full, b, cost, list(range(N + m, N + 2 * m)), 50 * (N + d))
    slack = float(res.objective)
    mu = res.x[:N]
    total = mu.sum()
    w = mu / total if total > 0 else mu
    if slack <= tol:
        return MembershipResult(True, slack, w, slack)
    resid = float(np.linalg.norm(qn - w @ Pn)) if total > 0 else float(np.linalg.norm(qn))
    return MembershipResult(False, resid, None, slack)


def sample_interior(hull: HullSample, seed: int, uniform: bool = False) -> np.ndarray:
    """Random convex combination of affinely independent generators.

    A random subset of ``rank + 1`` affinely independent generators gets
    symmetric Dirichlet weights (equal weights with ``uniform``).
    """
    rng = np.random.default_rng(np.uint64(seed))
    R = hull.reduced_points
    r = hull.rank
    if r == 0:
        return hull.points[0].copy()
    order = rng.permutation(len(R))
    chosen = [int(order[0])]
    for k in order[1:]:
        trial = chosen + [int(k)]
        if affine_rank(R[trial]) == len(trial) - 1:
            chosen = trial
        if len(chosen) == r + 1:
            break
    if len(chosen) < r + 1:
        raise DegenerateSubspace("could not find enough affinely independent generators")
    weights = np.full(len(chosen), 1.0 / len(chosen)) if uniform else rng.dirichlet(np.ones(len(chosen)))
    return weights @ hull.points[chosen]


def facet_hull(hull: HullSample):
    """Qhull H-representation of the normalized hull (cross-check for small d).

    Returns ``(A, b)`` with the polytope ``{y : A y <= b}`` in normalized
    chart coordinates.
    """
    from scipy.spatial import ConvexHull

    d = hull.chart.dim
    if d > 3:
        raise ValueError("facet enumeration is only offered for d <= 3")
    if d == 1:
        y = hull.normalized_points[:, 0]
        return np.array([[1.0], [-1.0]]), np.array([y.max(), -y.min()])
    qh = ConvexHull(hull.normalized_points)
    return qh.equations[:, :-1], -qh.equations[:, -1]
