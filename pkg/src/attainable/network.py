"""Reaction network data model and the mass-action dynamics it induces.

Species concentrations form a row vector ``x``; complex ``i`` contributes the
monomial ``x**y_i`` and the dynamics are ``dx/dt = Psi(x) @ A @ Y`` where ``A``
is the rate matrix (negated weighted graph Laplacian) and ``Y`` stacks the
complex exponent vectors as rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .polynomial import PolynomialVectorField


@dataclass(frozen=True)
class Complex:
    exponents: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.exponents):
            raise ValueError(f"complex {self.exponents} has a negative coefficient")

    @property
    def is_zero(self) -> bool:
        return not any(self.exponents)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(
            (f"{e}" if e > 1 else "") + f"X{i + 1}" for i, e in enumerate(self.exponents) if e
        )


@dataclass(frozen=True)
class Reaction:
    source: int
    target: int
    rate: float


@dataclass(frozen=True)
class ReactionNetwork:
    """Weighted digraph on complexes.

    ``allow_zero_complex`` admits the empty complex (needed for inflow and
    outflow reactions); it is off by default.
    """

    species_count: int
    complexes: tuple[Complex, ...]
    edges: tuple[Reaction, ...]
    allow_zero_complex: bool = field(default=False, compare=False)

    def __post_init__(self):
        s = self.species_count
        if s < 1:
            raise ValueError("species_count must be positive")
        n = len(self.complexes)
        for k, c in enumerate(self.complexes):
            if len(c.exponents) != s:
                raise ValueError(f"complex {k} has {len(c.exponents)} entries, expected {s}")
            if c.is_zero and not self.allow_zero_complex:
                raise ValueError(f"complex {k} is the zero complex")
        seen = set()
        for r in self.edges:
            if not (0 <= r.source < n and 0 <= r.target < n):
                raise ValueError(f"edge {r.source}->{r.target} references a missing complex")
            if r.source == r.target:
                raise ValueError(f"self-loop on complex {r.source}")
            if (r.source, r.target) in seen:
                raise ValueError(f"duplicate edge {r.source}->{r.target}")
            if not (r.rate > 0 and np.isfinite(r.rate)):
                raise ValueError(f"edge {r.source}->{r.target} has non-positive rate {r.rate}")
            seen.add((r.source, r.target))

    @classmethod
    def build(
        cls,
        species_count: int,
        complexes: Iterable[Sequence[int]],
        edges: Iterable[tuple[int, int, float]],
        allow_zero_complex: bool = False,
    ) -> ReactionNetwork:
        return cls(
            species_count,
            tuple(Complex(tuple(int(e) for e in c)) for c in complexes),
            tuple(Reaction(int(i), int(j), float(k)) for i, j, k in edges),
            allow_zero_complex,
        )

    @property
    def complex_count(self) -> int:
        return len(self.complexes)

    @property
    def Y(self) -> np.ndarray:
        return np.array([c.exponents for c in self.complexes], dtype=float).reshape(
            self.complex_count, self.species_count
        )

    def reaction_vectors(self) -> np.ndarray:
        Y = self.Y
        if not self.edges:
            return np.zeros((0, self.species_count))
        return np.array([Y[r.target] - Y[r.source] for r in self.edges])

    def __str__(self) -> str:
        lines = [f"{self.complexes[r.source]} -> {self.complexes[r.target]}  (k={r.rate:g})" for r in self.edges]
        return "\n".join(lines)


@dataclass(frozen=True)
class Laplacian:
    a_kappa: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.a_kappa if dtype is None else self.a_kappa.astype(dtype)


def build_laplacian(network: ReactionNetwork) -> Laplacian:
    n = network.complex_count
    A = np.zeros((n, n))
    for r in network.edges:
        A[r.source, r.target] = r.rate
    # row sums are exactly zero for integer or dyadic rates; otherwise within
    # n*eps*max(rate) from float rounding
    for i in range(n):
        off = A[i].copy()
        off[i] = 0.0
        A[i, i] = -np.sum(off)
    A.setflags(write=False)
    return Laplacian(A)


def build_vector_field(network: ReactionNetwork) -> PolynomialVectorField:
    """Mass-action field: component ``j`` is ``sum_i x**y_i * (A @ Y)[i, j]``."""
    s = network.species_count
    AY = np.asarray(build_laplacian(network)) @ network.Y
    components = []
    for j in range(s):
        components.append(
            [(AY[i, j], c.exponents) for i, c in enumerate(network.complexes)]
        )
    return PolynomialVectorField.from_terms(s, components)


@dataclass(frozen=True)
class StoichiometrySubspace:
    ambient_dim: int
    basis: np.ndarray  # shape (d, s), orthonormal rows

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def project(self, v) -> np.ndarray:
        """Orthogonal projection of ``v`` (or rows of ``v``) onto the subspace."""
        v = np.asarray(v, dtype=float)
        return (v @ self.basis.T) @ self.basis

    def residual(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return v - self.project(v)


def orthonormal_span(vectors, rel_cutoff: float = 1e-8, ambient_dim: int | None = None) -> np.ndarray:
    """Orthonormal row basis of the span of ``vectors`` via SVD with a relative cutoff."""
    V = np.asarray(vectors, dtype=float)
    if ambient_dim is None:
        ambient_dim = V.shape[-1]
    if V.size == 0:
        return np.zeros((0, ambient_dim))
    _, sv, vt = np.linalg.svd(V, full_matrices=False)
    if sv[0] == 0.0:
        return np.zeros((0, ambient_dim))
    rank = int(np.sum(sv > rel_cutoff * sv[0]))
    return vt[:rank].copy()


def stoichiometry_subspace(network: ReactionNetwork) -> StoichiometrySubspace:
    basis = orthonormal_span(network.reaction_vectors(), 1e-10, network.species_count)
    return StoichiometrySubspace(network.species_count, basis)


def _adjacency(network: ReactionNetwork) -> csr_matrix:
    n = network.complex_count
    rows = [r.source for r in network.edges]
    cols = [r.target for r in network.edges]
    return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))


def linkage_and_reversibility(network: ReactionNetwork) -> tuple[int, bool]:
    """Number of linkage classes and whether every class is strongly connected."""
    adj = _adjacency(network)
    n_weak, _ = connected_components(adj, directed=True, connection="weak")
    n_strong, _ = connected_components(adj, directed=True, connection="strong")
    # strong components refine weak ones; equality means each weak class is strong
    return int(n_weak), bool(n_weak == n_strong)


def check_mass_action_admissible(field: PolynomialVectorField) -> bool:
    """Hars-Toth test: negative terms of component ``i`` must contain ``x_i``."""
    for i, comp in enumerate(field.components):
        for c, e in comp.terms:
            if c < 0 and e[i] < 1:
                return False
    return True


def realize_field(field: PolynomialVectorField, max_denominator: int = 10**6) -> ReactionNetwork:
    """Construct a mass-action network whose vector field equals ``field``.

    For every source monomial ``a`` with coefficient vector ``v_a`` the routine
    looks for non-negative rates ``k`` on reactions ``a -> b`` with
    ``sum k_b (b - a) = v_a``, restricting ``b - a`` to the span of all
    coefficient vectors so the stoichiometry subspace is not inflated. Targets
    are drawn from monomials of degree up to one above the field degree. If
    that fails the canonical decomposition ``a -> a +- e_i`` with rate
    ``|v_a[i]|`` is used, which always exists for admissible fields but may
    enlarge the subspace. Rates are recovered as exact rationals and the
    result is checked term-by-term.
    """
    from .simplex import solve_standard_lp

    if not check_mass_action_admissible(field):
        raise ValueError("field violates the mass-action sign condition")
    s = field.species_count
    E = field.monomials
    C = field.coefficient_matrix
    span = orthonormal_span(C, 1e-10, s) if len(C) else np.zeros((0, s))
    deg = max(field.degree, 1) + 1
    candidates = [
        np.bincount(np.array(combo, dtype=int), minlength=s)
        for total in range(1, deg + 1)
        for combo in combinations_with_replacement(range(s), total)
    ]

    def solve(a, v, targets):
        ws = []
        for b in targets:
            w = b - a
            if not w.any():
                continue
            if np.linalg.norm(w - (w @ span.T) @ span) > 1e-9 * (1 + np.linalg.norm(w)):
                continue
            ws.append((b, w))
        if not ws:
            return None
        M = np.array([w for _, w in ws], dtype=float).T
        res = solve_standard_lp(M, v.astype(float), np.zeros(len(ws)), phase_one_only=True)
        if res.status != "optimal" or res.infeasibility > 1e-9 * (1 + np.abs(v).sum()):
            return None
        out = []
        for k, (b, _) in enumerate(ws):
            if res.x[k] > 1e-12:
                out.append((tuple(int(t) for t in b), Fraction(res.x[k]).limit_denominator(max_denominator)))
        return out

    reactions: list[tuple[tuple[int, ...], tuple[int, ...], Fraction]] = []
    for a_row, v in zip(E, C):
        a = a_row.astype(int)
        sol = solve(a, v, candidates)
        if sol is None:
            sol = [
                (tuple(int(t) for t in a + np.sign(v[i]).astype(int) * np.eye(s, dtype=int)[i]),
                 Fraction(abs(float(v[i]))).limit_denominator(max_denominator))
                for i in range(s)
                if v[i] != 0
            ]
        reactions.extend((tuple(int(t) for t in a), b, k) for b, k in sol)

    index: dict[tuple[int, ...], int] = {}
    for src, tgt, _ in reactions:
        for c in (src, tgt):
            index.setdefault(c, len(index))
    # exact check of the recovered rates against the input coefficients
    for a_row, v in zip(E, C):
        a = tuple(int(t) for t in a_row)
        acc = [Fraction(0)] * s
        for src, tgt, k in reactions:
            if src == a:
                for i in range(s):
                    acc[i] += k * (tgt[i] - src[i])
        target = [Fraction(float(v[i])).limit_denominator(max_denominator) for i in range(s)]
        if acc != target:
            raise ValueError(f"rate recovery for monomial {a} is inexact")
    edges = [(index[src], index[tgt], float(k)) for src, tgt, k in reactions]
    return ReactionNetwork.build(
        s, list(index), edges, allow_zero_complex=any(not any(c) for c in index)
    )
