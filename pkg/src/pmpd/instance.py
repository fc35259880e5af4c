"""Problem data: a depot plus ``n`` targets and a symmetric travel-time matrix.

Node 0 is always the depot; nodes ``1..n`` are the targets.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DuplicatePoint,
    InstanceError,
    NegativeEntry,
    TooFewNodes,
    TriangleViolation,
)

DEPOT = 0
EPS_TRI = 1e-9
EPS_ABS = 1e-9
EPS_REL = 1e-9
DEFAULT_BOX = 100.0


def close(a: float, b: float) -> bool:
    """Equality used for every travel/revisit time comparison."""
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= EPS_ABS + EPS_REL * max(abs(a), abs(b))


def leq(a: float, b: float) -> bool:
    return a <= b or close(a, b)


@dataclass(frozen=True, eq=False)
class Instance:
    time: np.ndarray
    name: str = ""
    coords: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.time.shape[0] - 1

    @property
    def targets(self) -> range:
        return range(1, self.n + 1)

    @property
    def nodes(self) -> range:
        return range(self.n + 1)

    def d(self, a: int, b: int) -> float:
        return float(self.time[a, b])

    def as_lists(self) -> list[list[float]]:
        return self.time.tolist()

    def __repr__(self) -> str:
        return f"Instance(name={self.name!r}, n={self.n})"


def find_triangle_violation(time: np.ndarray, eps: float = EPS_TRI):
    """Return the first ``(a, b, c)`` with ``time[a,c] > time[a,b] + time[b,c] + eps``.

    Pairs ``a < c`` are scanned in lexicographic order, then the intermediate
    node ``b``. Returns ``None`` when the matrix is a (semi)metric.
    """
    m = time.shape[0]
    # slack[a, b, c] = time[a, b] + time[b, c] - time[a, c]
    slack = time[:, :, None] + time[None, :, :] - time[:, None, :]
    bad = slack < -eps
    if not bad.any():
        return None
    for a in range(m):
        for c in range(a + 1, m):
            bs = np.flatnonzero(bad[a, :, c])
            if bs.size:
                b = int(bs[0])
                return a, b, c, float(-slack[a, b, c])
    return None


def _check_matrix(time: np.ndarray) -> None:
    if time.ndim != 2 or time.shape[0] != time.shape[1]:
        raise InstanceError(f"travel-time matrix must be square, got shape {time.shape}")
    if time.shape[0] < 4:
        raise TooFewNodes(f"need a depot and at least 3 targets, got {time.shape[0]} nodes")
    if not np.all(np.isfinite(time)):
        raise InstanceError("travel-time matrix has non-finite entries")
    if np.any(time < 0):
        a, b = np.argwhere(time < 0)[0]
        raise NegativeEntry(f"time[{a}][{b}] = {time[a, b]} is negative")
    if np.any(np.diag(time) != 0):
        raise InstanceError("travel-time matrix must have a zero diagonal")
    if not np.array_equal(time, time.T):
        a, b = np.argwhere(time != time.T)[0]
        raise AsymmetricMatrix(f"time[{a}][{b}] != time[{b}][{a}]")
    hit = find_triangle_violation(time)
    if hit is not None:
        raise TriangleViolation(*hit)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


def from_matrix(matrix, n: Optional[int] = None, name: str = "") -> Instance:
    """Validated instance from an ``(n+1) x (n+1)`` matrix; row/col 0 is the depot."""
    time = np.asarray(matrix, dtype=float)
    if n is not None and time.shape != (n + 1, n + 1):
        raise InstanceError(f"expected a {(n + 1, n + 1)} matrix for n={n}, got {time.shape}")
    _check_matrix(time)
    return Instance(time=_freeze(time), name=name)


def euclidean_matrix(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def from_points(points: Sequence[Sequence[float]], depot_index: int = 0, name: str = "") -> Instance:
    """Euclidean instance. The depot is moved to node 0; targets keep their order."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InstanceError("points must be a list of (x, y) pairs")
    if len(pts) < 4:
        raise TooFewNodes(f"need at least 4 points (depot + 3 targets), got {len(pts)}")
    if not 0 <= depot_index < len(pts):
        raise InstanceError(f"depot_index {depot_index} out of range")
    order = [depot_index] + [i for i in range(len(pts)) if i != depot_index]
    pts = pts[order]
    uniq = np.unique(pts, axis=0)
    if len(uniq) != len(pts):
        raise DuplicatePoint("two nodes share the same coordinates")
    time = euclidean_matrix(pts)
    _check_matrix(time)
    return Instance(time=_freeze(time), name=name, coords=_freeze(pts))


def random_instance(seed: int, n: int, box_size: float = DEFAULT_BOX, name: str = "") -> Instance:
    """``n + 1`` points uniform in ``[0, box_size]^2`` (first point is the depot).

    Uses numpy's PCG64 generator, so a given seed is stable across platforms.
    """
    if n < 3:
        raise TooFewNodes(f"n must be at least 3, got {n}")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, box_size, size=(n + 1, 2))
    return from_points(pts, 0, name=name or f"rand-s{seed}-n{n}")


# -- JSON ---------------------------------------------------------------------


def instance_to_dict(inst: Instance) -> dict:
    if inst.coords is not None:
        return {
            "name": inst.name,
            "depot": [float(x) for x in inst.coords[0]],
            "targets": [[float(x), float(y)] for x, y in inst.coords[1:]],
        }
    return {"name": inst.name, "n": inst.n, "matrix": inst.as_lists()}


def instance_from_dict(data: dict) -> Instance:
    name = data.get("name", "")
    if "matrix" in data:
        return from_matrix(data["matrix"], data.get("n"), name=name)
    if "targets" in data and "depot" in data:
        return from_points([data["depot"], *data["targets"]], 0, name=name)
    raise InstanceError("instance JSON needs either 'matrix' or 'targets' + 'depot'")


def load_instance(path) -> Instance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def save_instance(inst: Instance, path) -> None:
    # json writes floats with repr(), which round-trips doubles exactly
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=2))
