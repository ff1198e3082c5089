"""Closed-form solutions of linear networks (``Y`` = identity).

With ``x`` a row vector the dynamics are ``dx/dt = x @ A``. For diagonalizable
``A = R diag(lam) L`` with ``L = R^-1`` the solution is

    x(t) = sum_k (x0 . r_k) l_k exp(lam_k t)

where ``r_k`` are the columns of ``R`` and ``l_k`` the rows of ``L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ComplexEigenvalue, IrrationalEigenvalue, NearDefective, NumericalFailure, UnstableSpectrum
from .polynomial import Polynomial

CONDITION_LIMIT = 1e8
IMAG_TOL = 1e-9
ZERO_EIG_TOL = 1e-10


def _as_matrix(a_kappa) -> np.ndarray:
    A = np.asarray(getattr(a_kappa, "a_kappa", a_kappa), dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("rate matrix must be square")
    return A


@dataclass(frozen=True)
class EigenSolution:
    eigenvalues: np.ndarray  # (n,) complex
    right: np.ndarray  # (n, n) columns r_k
    left: np.ndarray  # (n, n) rows l_k, normalised so l_k . r_k = 1
    condition_estimate: float


def eigensolve(a_kappa) -> EigenSolution:
    """Eigen-decomposition ordered by ascending real, then imaginary, part."""
    A = _as_matrix(a_kappa)
    lam, R = np.linalg.eig(A)
    order = np.lexsort((lam.imag, lam.real))
    lam = lam[order]
    R = R[:, order]
    R = R / np.linalg.norm(R, axis=0)
    cond = float(np.linalg.cond(R))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise NearDefective(f"eigenvector matrix condition estimate {cond:.3g} exceeds {CONDITION_LIMIT:g}")
    L = np.linalg.inv(R)
    return EigenSolution(lam, R, L, cond)


@dataclass(frozen=True)
class ClosedFormTrajectory:
    coefficients: np.ndarray  # (n, s) complex; row k is (x0 . r_k) l_k
    exponents: np.ndarray  # (n,) complex eigenvalues
    x0: np.ndarray

    @property
    def terms(self) -> list[tuple[np.ndarray, complex]]:
        return list(zip(self.coefficients, self.exponents))

    def complex_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.exp(np.multiply.outer(t, self.exponents)) @ self.coefficients

    def __call__(self, t) -> np.ndarray:
        """Real point(s) at time(s) ``t``; shape ``(s,)`` or ``(len(t), s)``."""
        z = self.complex_at(t)
        scale = 1.0 + np.abs(z).max(initial=0.0)
        if np.abs(z.imag).max(initial=0.0) > IMAG_TOL * scale:
            raise NumericalFailure("closed form has a non-negligible imaginary part")
        return z.real

    def derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return (np.exp(np.multiply.outer(t, self.exponents)) @ (self.exponents[:, None] * self.coefficients)).real

    def advance(self, t1: float) -> ClosedFormTrajectory:
        """The same trajectory restarted from its point at time ``t1``."""
        shift = np.exp(self.exponents * t1)
        return ClosedFormTrajectory(self.coefficients * shift[:, None], self.exponents, self(t1))


def solve_linear(a_kappa, x0) -> ClosedFormTrajectory:
    x0 = np.asarray(x0, dtype=float)
    A = _as_matrix(a_kappa)
    if x0.shape != (A.shape[0],):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({A.shape[0]},)")
    if np.any(x0 <= 0):
        raise ValueError("x0 must be strictly positive")
    eig = eigensolve(A)
    weights = x0 @ eig.right  # x0 . r_k
    coeffs = weights[:, None] * eig.left
    return ClosedFormTrajectory(coeffs, eig.eigenvalues, x0)


def steady_state(traj: ClosedFormTrajectory) -> np.ndarray:
    """Limit as ``t -> inf``: the sum of the zero-eigenvalue terms."""
    lam = traj.exponents
    if np.any(lam.real > ZERO_EIG_TOL):
        raise UnstableSpectrum(f"eigenvalue with positive real part: {lam[lam.real > ZERO_EIG_TOL]}")
    zero = np.abs(lam) <= ZERO_EIG_TOL * max(1.0, np.abs(lam).max(initial=0.0))
    return traj.coefficients[zero].sum(axis=0).real


@dataclass(frozen=True)
class MonomialFactorization:
    """``x(t) = phi @ u**a`` with ``u = exp(-t)`` in ``(0, 1]``."""

    exponents: tuple[Fraction, ...]
    phi: np.ndarray  # (s, n); column k multiplies u**a_k
    max_residual: float

    def __call__(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        a = np.array([float(q) for q in self.exponents])
        return np.power.outer(u, a) @ self.phi.T


def monomial_factorization(
    traj: ClosedFormTrajectory, tol_rational: float = 1e-9, max_denominator: int = 64
) -> MonomialFactorization:
    lam = traj.exponents
    if np.any(np.abs(lam.imag) > tol_rational):
        raise ComplexEigenvalue(f"complex eigenvalues {lam[np.abs(lam.imag) > tol_rational]}")
    rates = -lam.real
    exps = []
    for r in rates:
        q = Fraction(float(r)).limit_denominator(max_denominator)
        if abs(float(q) - r) > tol_rational * max(1.0, abs(r)):
            raise IrrationalEigenvalue(f"eigenvalue {-r!r} has no rational match with denominator <= {max_denominator}")
        exps.append(q)
    order = sorted(range(len(exps)), key=lambda k: (exps[k], k))
    phi = traj.coefficients.real[order].T.copy()
    fact = MonomialFactorization(tuple(exps[k] for k in order), phi, 0.0)
    t = np.linspace(0.0, 20.0, 100)
    x = traj(t)
    resid = np.linalg.norm(x - fact(np.exp(-t)), axis=1) / (1.0 + np.linalg.norm(x, axis=1))
    worst = float(resid.max())
    if worst > 1e-8:
        raise NumericalFailure(f"factorization residual {worst:.3g} exceeds 1e-8")
    return MonomialFactorization(fact.exponents, phi, worst)


def verify_implicit_equations(
    traj: ClosedFormTrajectory, polys: Sequence[Polynomial], t_samples
) -> float:
    """Largest normalised residual ``|p(x(t))| / (1 + |coefficients|)``."""
    x = traj(np.asarray(t_samples, dtype=float))
    worst = 0.0
    for p in polys:
        norm = 1.0 + np.linalg.norm(p.coefficients())
        worst = max(worst, float(np.abs(p(x)).max(initial=0.0)) / norm)
    return worst
