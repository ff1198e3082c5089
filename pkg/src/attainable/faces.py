"""Bordered face matrices of trajectory hulls and their determinant sign maps.

For points ``c_1..c_r`` on a curve (the first ``p`` of them interior, with
tangents ``c'_1..c'_p``) that span a face of the convex hull, every maximal
minor of

    [ 1   ...  1    0    ...  0    ]
    [ c_1 ... c_r  c'_1  ... c'_p  ]

vanishes. In chart coordinates of dimension ``d`` and with ``r + p = d + 1``
the matrix is square, so the face condition becomes one determinant whose
sign can be mapped over all index tuples of a sampled trajectory.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import WrongDimension
from .hull import AffineChart
from .integrate import Trajectory

DEFAULT_DEADBAND = 1e-10
DEFAULT_STRIDE = 3
DEFAULT_START = 2


def face_size(d: int) -> int:
    """Number of vertices ``r`` that makes the face matrix square in dimension ``d``."""
    if d < 2:
        raise WrongDimension(f"face matrices need hull dimension >= 2, got {d}")
    return (d + 1) // 2 if d % 2 else d // 2 + 1


@dataclass(frozen=True)
class FaceMatrix:
    matrix: np.ndarray
    r: int
    p: int

    @property
    def is_square(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1]

    def det(self) -> float:
        if not self.is_square:
            raise WrongDimension(f"matrix is {self.matrix.shape}, not square")
        return float(np.linalg.det(self.matrix))

    def column_scale(self) -> float:
        return float(np.prod(np.linalg.norm(self.matrix, axis=0)))


def face_matrix(points, tangents) -> FaceMatrix:
    """Assemble the bordered matrix from ``r`` points and ``p`` tangents.

    Tangents belong to the first ``p`` points; remaining points are boundary
    points and contribute no tangent column.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    T = np.asarray(tangents, dtype=float).reshape(-1, P.shape[1]) if np.size(tangents) else np.zeros((0, P.shape[1]))
    r, p = len(P), len(T)
    if p > r:
        raise ValueError("more tangents than points")
    dim = P.shape[1]
    top = np.concatenate([np.ones(r), np.zeros(p)])
    body = np.hstack([P.T, T.T]) if p else P.T
    M = np.vstack([top, body])
    if M.shape[1] != dim + 1 and M.shape[1] > M.shape[0]:
        raise ValueError(f"{r} points and {p} tangents give {M.shape[1]} columns for dimension {dim}")
    return FaceMatrix(M, r, p)


def face_minors(points, tangents) -> tuple[np.ndarray, int]:
    """All maximal minors of a tall face matrix, plus the sign of the largest.

    Fallback for ambient coordinates where the matrix has more rows than
    columns.
    """
    M = face_matrix(points, tangents).matrix
    rows, cols = M.shape
    if rows < cols:
        raise ValueError("matrix is wide; maximal minors are taken over column subsets there")
    minors = np.array([np.linalg.det(M[list(sub)]) for sub in combinations(range(rows), cols)])
    k = int(np.argmax(np.abs(minors)))
    return minors, int(np.sign(minors[k]))


@dataclass(frozen=True)
class SignGrid:
    """Determinant values over index tuples of a strided trajectory sample.

    Axis ``a`` position ``k`` corresponds to grid index ``indices[k]`` and to
    trajectory point ``stride * indices[k]``.
    """

    arity: int
    stride: int
    indices: np.ndarray
    values: np.ndarray
    signs: np.ndarray
    deadband: float
    pinned: bool = False

    @property
    def index_range(self) -> tuple[int, int]:
        return int(self.indices[0]), int(self.indices[-1])

    def value(self, *idx: int) -> float:
        pos = tuple(int(i) - int(self.indices[0]) for i in idx)
        return float(self.values[pos])

    def slice(self, k: int) -> np.ndarray:
        """Sign matrix for fixed third index ``k`` (grid index)."""
        if self.arity != 3:
            raise ValueError("slices exist only for triple grids")
        return self.signs[:, :, int(k) - int(self.indices[0])]

    def has_both_signs(self) -> bool:
        return bool((self.signs > 0).any() and (self.signs < 0).any())


def _grid_indices(n_points: int, stride: int, start: int, stop: int | None) -> np.ndarray:
    if stride < 1:
        raise ValueError("stride must be positive")
    last = (n_points - 1) // stride
    stop = last if stop is None else stop
    if stop > last:
        raise ValueError(f"grid index {stop} needs point {stop * stride}, trajectory has {n_points}")
    if stop < start:
        raise ValueError("empty index range")
    return np.arange(start, stop + 1)


def _reduced(traj: Trajectory, chart: AffineChart, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return chart.project(traj.points[idx]), chart.project_vector(traj.tangents[idx])


def _signs(values: np.ndarray, scale: np.ndarray, deadband: float) -> np.ndarray:
    s = np.sign(values).astype(np.int8)
    s[np.abs(values) < deadband * scale] = 0
    return s


def sign_grid_pairs(
    traj: Trajectory,
    chart: AffineChart,
    stride: int = DEFAULT_STRIDE,
    deadband: float = DEFAULT_DEADBAND,
    start: int = DEFAULT_START,
    stop: int | None = None,
    pin_x0: bool = False,
) -> SignGrid:
    """Pair grid for a 3-dimensional hull, or a 4-dimensional one with ``x0`` pinned.

    With ``pin_x0`` (required in dimension 4) the chart origin, i.e. the
    initial point, is the third, boundary vertex of every candidate face.
    """
    d = chart.dim
    if d == 4 and not pin_x0:
        raise WrongDimension("a 4-dimensional hull needs the start point pinned as a third vertex (pin_x0)")
    if d == 3 and pin_x0:
        raise WrongDimension("pinning the start point only applies to 4-dimensional hulls")
    if d not in (3, 4):
        raise WrongDimension(
            f"pair grids need hull dimension 3 (or 4 with the start point pinned); got {d}. "
            "Use triple grids for dimension 5."
        )
    idx = _grid_indices(len(traj), stride, start, stop)
    P, T = _reduced(traj, chart, idx * stride)
    K = len(idx)
    pcol = np.hstack([np.ones((K, 1)), P])
    tcol = np.hstack([np.zeros((K, 1)), T])
    pnorm = np.linalg.norm(pcol, axis=1)
    tnorm = np.linalg.norm(tcol, axis=1)
    values = np.zeros((K, K))
    scale = np.ones((K, K))
    for i in range(K - 1):
        js = np.arange(i + 1, K)
        n = len(js)
        # subtracting the first point column from the others leaves the
        # determinant unchanged and avoids cancellation between nearby points;
        # the deadband still uses the norms of the original columns
        cols = [np.broadcast_to(pcol[i], (n, d + 1)), np.hstack([np.zeros((n, 1)), P[js] - P[i]])]
        if pin_x0:
            # the chart origin is x0, whose original column (1, 0, ..., 0) has unit norm
            cols.append(np.broadcast_to(np.concatenate([[0.0], -P[i]]), (n, d + 1)))
        sc = pnorm[i] * pnorm[js] * tnorm[i] * tnorm[js]
        cols += [np.broadcast_to(tcol[i], (n, d + 1)), tcol[js]]
        dets = np.linalg.det(np.stack(cols, axis=2))
        values[i, js] = dets
        values[js, i] = dets
        scale[i, js] = sc
        scale[js, i] = sc
    # repeated index means repeated columns: the determinant is exactly zero
    np.fill_diagonal(values, 0.0)
    return SignGrid(2, stride, idx, values, _signs(values, scale, deadband), deadband, pin_x0)


def sign_grid_triples(
    traj: Trajectory,
    chart: AffineChart,
    stride: int = DEFAULT_STRIDE,
    deadband: float = DEFAULT_DEADBAND,
    start: int = DEFAULT_START,
    stop: int | None = None,
) -> SignGrid:
    """Triple grid for a 5-dimensional hull.

    Only ``i < j < k`` is evaluated; every transposition of indices swaps two
    column pairs, so the rest of the cube is filled by symmetry.
    """
    d = chart.dim
    if d != 5:
        raise WrongDimension(f"triple grids need hull dimension 5; got {d}")
    idx = _grid_indices(len(traj), stride, start, stop)
    P, T = _reduced(traj, chart, idx * stride)
    K = len(idx)
    pcol = np.hstack([np.ones((K, 1)), P])
    tcol = np.hstack([np.zeros((K, 1)), T])
    pnorm = np.linalg.norm(pcol, axis=1)
    tnorm = np.linalg.norm(tcol, axis=1)
    values = np.zeros((K, K, K))
    scale = np.ones((K, K, K))
    for i in range(K - 2):
        jj, kk = np.triu_indices(K - i - 1, k=1)
        jj = jj + i + 1
        kk = kk + i + 1
        n = len(jj)
        dj = np.hstack([np.zeros((n, 1)), P[jj] - P[i]])
        dk = np.hstack([np.zeros((n, 1)), P[kk] - P[i]])
        M = np.stack(
            [np.broadcast_to(pcol[i], (n, 6)), dj, dk, np.broadcast_to(tcol[i], (n, 6)), tcol[jj], tcol[kk]],
            axis=2,
        )
        dets = np.linalg.det(M)
        sc = pnorm[i] * pnorm[jj] * pnorm[kk] * tnorm[i] * tnorm[jj] * tnorm[kk]
        for a, b, c in ((i, jj, kk), (i, kk, jj), (jj, i, kk), (jj, kk, i), (kk, i, jj), (kk, jj, i)):
            values[a, b, c] = dets
            scale[a, b, c] = sc
    return SignGrid(3, stride, idx, values, _signs(values, scale, deadband), deadband)


_COLORS = {
    -1: (0, 0, 255),
    0: (255, 255, 255),
    1: (255, 0, 0),
}


def sign_image(signs: np.ndarray) -> np.ndarray:
    """RGB array for a 2-d sign matrix; first index runs left to right, second bottom to top."""
    rgb = np.empty(signs.shape + (3,), dtype=np.uint8)
    for s, color in _COLORS.items():
        rgb[signs == s] = color
    return np.ascontiguousarray(np.transpose(rgb, (1, 0, 2))[::-1])


def write_ppm(rgb: np.ndarray, path, scale: int = 1) -> Path:
    if scale > 1:
        rgb = np.repeat(np.repeat(rgb, scale, axis=0), scale, axis=1)
    path = Path(path)
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(rgb, dtype=np.uint8).tobytes())
    return path


def render_sign_grid(grid: SignGrid, path, slice_index: int | None = None, scale: int = 1) -> Path:
    """Write a binary PPM: red positive, blue negative, white inside the deadband."""
    if grid.arity == 2:
        signs = grid.signs
    elif slice_index is None:
        raise ValueError("triple grids need a slice index to render")
    else:
        signs = grid.slice(slice_index)
    return write_ppm(sign_image(signs), path, scale)


def write_grid_csv(grid: SignGrid, path) -> Path:
    """Dump ``i,j[,k],det`` for each unordered tuple (strictly increasing for triples)."""
    path = Path(path)
    idx = grid.indices
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if grid.arity == 2:
            w.writerow(["i", "j", "det"])
            for a in range(len(idx)):
                for b in range(a, len(idx)):
                    w.writerow([int(idx[a]), int(idx[b]), repr(float(grid.values[a, b]))])
        else:
            w.writerow(["i", "j", "k", "det"])
            for a in range(len(idx)):
                for b in range(a + 1, len(idx)):
                    for c in range(b + 1, len(idx)):
                        w.writerow([int(idx[a]), int(idx[b]), int(idx[c]), repr(float(grid.values[a, b, c]))])
    return path
