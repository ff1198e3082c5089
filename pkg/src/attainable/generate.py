"""Seeded random generation of strongly connected reaction networks."""

from __future__ import annotations

import math
from itertools import combinations_with_replacement

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .network import ReactionNetwork

MAX_DEGREE = 4


def monomial_exponents(s: int, max_degree: int, include_constant: bool = False) -> list[tuple[int, ...]]:
    """All exponent vectors in ``s`` variables with total degree ``<= max_degree``.

    Ordered by degree, then lexicographically in the variable multiset.
    """
    out = []
    for total in range(0 if include_constant else 1, max_degree + 1):
        for combo in combinations_with_replacement(range(s), total):
            e = [0] * s
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


def _scc_labels(n: int, edges: set[tuple[int, int]]) -> tuple[int, np.ndarray]:
    if edges:
        rows, cols = zip(*sorted(edges))
    else:
        rows, cols = (), ()
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    k, labels = connected_components(adj, directed=True, connection="strong")
    return int(k), labels


def random_strong_digraph(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Erdos-Renyi digraph patched into a single strongly connected component.

    Every ordered pair is an edge with probability ``min(1, 1.5 ln(n) / n)``.
    Then, while several components remain, each sink of the condensation gets
    one edge to a random vertex of a different component.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    p = min(1.0, 1.5 * math.log(n) / n) if n > 1 else 0.0
    edges = {(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p}
    k, labels = _scc_labels(n, edges)
    while k > 1:
        members = [np.flatnonzero(labels == c) for c in range(k)]
        has_out = np.zeros(k, dtype=bool)
        for i, j in edges:
            if labels[i] != labels[j]:
                has_out[labels[i]] = True
        for c in np.flatnonzero(~has_out):
            src = int(rng.choice(members[c]))
            others = [o for o in range(k) if o != c]
            dst_comp = int(rng.choice(others))
            edges.add((src, int(rng.choice(members[dst_comp]))))
        k, labels = _scc_labels(n, edges)
    return sorted(edges)


def random_network(
    s: int,
    n: int,
    max_degree: int,
    rate_range: tuple[float, float] = (1.0, 10.0),
    seed: int = 0,
    allow_constant: bool = False,
) -> ReactionNetwork:
    """Random weakly reversible network with a single linkage class.

    Complexes are ``n`` distinct monomials of total degree ``1..max_degree``
    (``0..max_degree`` with ``allow_constant``), rates uniform on ``rate_range``.
    """
    if s < 1 or n < 1:
        raise ValueError("s and n must be positive")
    if not 1 <= max_degree <= MAX_DEGREE:
        raise ValueError(f"max_degree must lie in 1..{MAX_DEGREE}")
    lo, hi = rate_range
    if not 0 < lo <= hi:
        raise ValueError("rate range must satisfy 0 < lo <= hi")
    pool = monomial_exponents(s, max_degree, allow_constant)
    if n > len(pool):
        raise ValueError(
            f"{n} complexes requested but only {len(pool)} distinct monomials of degree <= {max_degree} exist in {s} variables"
        )
    rng = np.random.default_rng(np.uint64(seed))
    chosen = rng.choice(len(pool), size=n, replace=False)
    complexes = [pool[int(k)] for k in chosen]
    edges = random_strong_digraph(n, rng)
    rates = rng.uniform(lo, hi, size=len(edges))
    return ReactionNetwork.build(
        s, complexes, [(i, j, r) for (i, j), r in zip(edges, rates)], allow_zero_complex=allow_constant
    )


def random_linear_network(
    s: int, rate_range: tuple[float, float] = (1.0, 10.0), seed: int = 0
) -> ReactionNetwork:
    """Strongly connected linear network: complex ``i`` is the single species ``X_i``."""
    lo, hi = rate_range
    if not 0 < lo <= hi:
        raise ValueError("rate range must satisfy 0 < lo <= hi")
    rng = np.random.default_rng(np.uint64(seed))
    edges = random_strong_digraph(s, rng)
    rates = rng.uniform(lo, hi, size=len(edges))
    eye = np.eye(s, dtype=int).tolist()
    return ReactionNetwork.build(s, eye, [(i, j, r) for (i, j), r in zip(edges, rates)])
