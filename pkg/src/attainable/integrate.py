"""Fixed-step classical Runge-Kutta integration of polynomial vector fields."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NegativeBlowup, NonFinite
from .polynomial import PolynomialVectorField, evaluate_field

NEGATIVE_BAND = -1e-6


@dataclass(frozen=True)
class IntegratorConfig:
    h: float = 1e-3
    max_time: float = 10.0
    steady_tol: float = 1e-9  # relative: stop once |f(x)| < steady_tol * (1 + |x|)
    max_points: int = 10_000

    def __post_init__(self):
        if not (self.h > 0 and self.max_time > 0 and self.steady_tol > 0):
            raise ValueError("h, max_time and steady_tol must be positive")
        if self.h >= self.max_time:
            raise ValueError("step h must be smaller than max_time")
        if self.max_points < 1:
            raise ValueError("max_points must be positive")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    points: np.ndarray
    tangents: np.ndarray
    reached_steady: bool = False

    def __post_init__(self):
        if not (len(self.times) == len(self.points) == len(self.tangents)):
            raise ValueError("times, points and tangents must have equal length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        for arr in (self.times, self.points, self.tangents):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def species_count(self) -> int:
        return self.points.shape[1]

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def final(self) -> np.ndarray:
        return self.points[-1]

    def take(self, indices) -> Trajectory:
        idx = np.asarray(indices, dtype=np.int64)
        return Trajectory(
            self.times[idx].copy(), self.points[idx].copy(), self.tangents[idx].copy(), self.reached_steady
        )


def rk4_step(field: PolynomialVectorField, x, h: float) -> np.ndarray:
    """One classical four-stage Runge-Kutta step of size ``h``."""
    x = np.asarray(x, dtype=float)
    k1 = evaluate_field(field, x)
    k2 = evaluate_field(field, x + 0.5 * h * k1)
    k3 = evaluate_field(field, x + 0.5 * h * k2)
    k4 = evaluate_field(field, x + h * k3)
    for k in (k1, k2, k3, k4):
        if not np.all(np.isfinite(k)):
            raise NonFinite(f"field evaluated to a non-finite value near x={x.tolist()}")
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(
    field: PolynomialVectorField, x0, config: IntegratorConfig | None = None
) -> Trajectory:
    """Integrate from ``x0`` until steady state, ``max_time`` or ``max_points``.

    Every accepted step is recorded together with the exact field value at
    that point. Raises :class:`NonFinite` on NaN/inf and
    :class:`NegativeBlowup` when a coordinate falls below ``-1e-6``.
    """
    config = config or IntegratorConfig()
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (field.species_count,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({field.species_count},)")
    if np.any(x0 < 0):
        raise ValueError("x0 must be componentwise non-negative")
    n_steps = min(config.max_points - 1, math.ceil(config.max_time / config.h - 1e-9))
    s = field.species_count
    points = np.empty((n_steps + 1, s))
    tangents = np.empty((n_steps + 1, s))
    E = np.ascontiguousarray(field.monomials, dtype=np.int64)
    C = np.ascontiguousarray(field.coefficient_matrix, dtype=np.float64)
    if len(E) == 0:
        E = np.zeros((1, s), dtype=np.int64)
        C = np.zeros((1, s))
    count, status = _kernels.rk4_run(
        E, C, x0, float(config.h), n_steps, float(config.steady_tol), NEGATIVE_BAND, points, tangents
    )
    t_fail = (count - 1) * config.h
    if status == _kernels.STATUS_NONFINITE:
        raise NonFinite(f"non-finite state at t={t_fail:g}; step h={config.h:g} is too large for this system")
    if status == _kernels.STATUS_NEGATIVE:
        raise NegativeBlowup(
            f"coordinate below {NEGATIVE_BAND:g} at t={t_fail:g}: {points[count - 1].tolist()}"
        )
    return Trajectory(
        np.arange(count) * config.h,
        points[:count].copy(),
        tangents[:count].copy(),
        status == _kernels.STATUS_STEADY,
    )


def thin_trajectory(traj: Trajectory, min_spacing: float) -> Trajectory:
    """Greedy spacing filter: keep points at least ``min_spacing`` apart.

    The first and final points are always kept.
    """
    if not min_spacing > 0:
        raise ValueError("min_spacing must be positive")
    idx = _kernels.thin_indices(np.ascontiguousarray(traj.points), float(min_spacing))
    return traj.take(idx)
