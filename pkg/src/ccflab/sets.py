"""Finite point sets and their farthest-point / outer-radius primitives.

A :class:`PointSet` is an immutable, ordered list of vectors together with the
norm of its ambient space.  Because the sets are finite, every supremum in the
radius and diameter definitions is an exact maximum.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .norms import NormSpec, _as_batch, as_vector, eval_norm, norm_from_dict, norm_to_dict

__all__ = [
    "DEFAULT_ACHIEVER_TOL",
    "PointSet",
    "FarthestQuery",
    "outer_radius",
    "farthest_set",
    "diameter",
    "is_centerable",
    "distance_matrix_csv",
]

# All benchmark geometries have O(1) magnitudes, so achiever detection uses an
# absolute tolerance by default.
DEFAULT_ACHIEVER_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PointSet:
    """A nonempty, ordered, finite list of points with its ambient norm.

    Duplicate points are permitted and order is preserved; nontriviality
    (at least two *distinct* points) is exposed as a predicate rather than
    enforced, to keep ingestion forgiving.
    """

    norm: NormSpec
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1 and self.norm.dim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] != self.norm.dim:
            raise ValueError(
                f"points must have shape (m, {self.norm.dim}) with m >= 1, "
                f"got {np.shape(self.points)}"
            )
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite entries")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and self.norm == other.norm
            and np.array_equal(self.points, other.points)
        )

    @property
    def dim(self) -> int:
        return self.norm.dim

    @property
    def nontrivial(self) -> bool:
        """True iff the set has at least two distinct points."""
        return len(np.unique(self.points, axis=0)) >= 2

    def to_dict(self) -> dict:
        return {"norm": norm_to_dict(self.norm), "points": self.points.tolist()}

    @classmethod
    def from_dict(cls, obj: dict) -> "PointSet":
        if not isinstance(obj, dict) or "norm" not in obj or "points" not in obj:
            raise ValueError(f"malformed point-set object: {obj!r}")
        return cls(norm_from_dict(obj["norm"]), np.asarray(obj["points"], dtype=float))


@dataclass(frozen=True, eq=False)
class FarthestQuery:
    """Result of a farthest-point query from a viewpoint.

    ``achievers`` indexes every point whose distance is within ``tolerance``
    of ``radius``; for a finite set it is never empty.
    """

    viewpoint: np.ndarray
    radius: float
    achievers: tuple[int, ...]
    tolerance: float

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FarthestQuery)
            and np.array_equal(self.viewpoint, other.viewpoint)
            and self.radius == other.radius
            and self.achievers == other.achievers
            and self.tolerance == other.tolerance
        )

    def to_dict(self) -> dict:
        return {
            "viewpoint": np.asarray(self.viewpoint).tolist(),
            "radius": self.radius,
            "achievers": list(self.achievers),
            "tolerance": self.tolerance,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "FarthestQuery":
        return cls(
            viewpoint=np.asarray(obj["viewpoint"], dtype=float),
            radius=float(obj["radius"]),
            achievers=tuple(int(i) for i in obj["achievers"]),
            tolerance=float(obj["tolerance"]),
        )


def _distances_from(A: PointSet, x: np.ndarray) -> np.ndarray:
    return np.atleast_1d(eval_norm(A.norm, A.points - x))


def outer_radius(A: PointSet, x) -> float:
    """max_a ||x - a|| over the (finite) set: the outer radius at x."""
    ax = as_vector(x, A.dim)
    return float(np.max(_distances_from(A, ax)))


def farthest_set(A: PointSet, x, tol: float = DEFAULT_ACHIEVER_TOL) -> FarthestQuery:
    """All indices achieving the outer radius at ``x`` up to ``tol``."""
    if not (tol > 0.0):
        raise ValueError(f"tolerance must be positive, got {tol}")
    ax = as_vector(x, A.dim)
    dists = _distances_from(A, ax)
    radius = float(np.max(dists))
    achievers = tuple(int(i) for i in np.flatnonzero(dists >= radius - tol))
    return FarthestQuery(ax, radius, achievers, tol)


def diameter(A: PointSet) -> float:
    """Exact maximum pairwise distance; 0.0 for singletons."""
    pts = A.points
    m = len(pts)
    if m == 1:
        return 0.0
    best = 0.0
    # Row-by-row keeps memory linear; sets here are small.
    for i in range(m - 1):
        d = eval_norm(A.norm, pts[i + 1 :] - pts[i])
        best = max(best, float(np.max(d)))
    return best


def is_centerable(A: PointSet, radius: float, tol: float) -> bool:
    """Whether a certified Chebyshev radius equals half the diameter.

    ``radius`` is expected to come from the solver; this only compares it with
    diameter(A)/2 at tolerance ``tol``.
    """
    if radius < 0.0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    return abs(radius - diameter(A) / 2.0) <= tol


def distance_matrix_csv(A: PointSet, viewpoints) -> str:
    """CSV of distances: one row per point, one column per viewpoint."""
    vps = _as_batch(np.atleast_2d(np.asarray(viewpoints, dtype=float)), A.dim, "viewpoints")
    buf = io.StringIO()
    labels = ["|".join(repr(float(c)) for c in vp) for vp in vps]
    buf.write("point," + ",".join(labels) + "\n")
    for i, pt in enumerate(A.points):
        row = eval_norm(A.norm, vps - pt)
        buf.write(f"{i}," + ",".join(f"{float(d)!r}" for d in np.atleast_1d(row)) + "\n")
    return buf.getvalue()
