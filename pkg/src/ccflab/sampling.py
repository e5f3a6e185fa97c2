"""Deterministic, replayable sampling utilities.

Streams are built on the counter-based Philox generator, keyed by an explicit
seed plus string/int tags, so every sampler in the library is bit-identical
across runs and independent of scheduling order.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .norms import NormSpec, eval_norm, linf_lower_constant

__all__ = [
    "rng_stream",
    "sample_unit_vectors",
    "ball_box",
    "intersect_boxes",
    "rejection_sample_two_balls",
]


def _fold_tags(*tags) -> int:
    h = hashlib.blake2b(digest_size=8)
    for t in tags:
        h.update(repr(t).encode())
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")


def rng_stream(seed: int, *tags) -> np.random.Generator:
    """A Philox-backed generator keyed by (seed, *tags)."""
    key = (int(seed) & (2**64 - 1), _fold_tags(*tags))
    return np.random.Generator(np.random.Philox(key=key))


def sample_unit_vectors(norm: NormSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Directions on the unit sphere of ``norm`` (box-sampled, then normalized)."""
    out = np.empty((count, norm.dim))
    have = 0
    while have < count:
        cand = rng.uniform(-1.0, 1.0, size=(2 * (count - have) + 8, norm.dim))
        lens = np.atleast_1d(eval_norm(norm, cand))
        keep = lens > 1e-6
        cand, lens = cand[keep], lens[keep]
        take = min(count - have, len(cand))
        out[have : have + take] = cand[:take] / lens[:take, None]
        have += take
    return out


def ball_box(norm: NormSpec, center: np.ndarray, radius: float):
    """Axis-aligned bounding box of B[center, radius] under ``norm``."""
    half = radius / linf_lower_constant(norm)
    return center - half, center + half


def intersect_boxes(lo1, hi1, lo2, hi2):
    lo = np.maximum(lo1, lo2)
    hi = np.minimum(hi1, hi2)
    return lo, hi


def rejection_sample_two_balls(
    norm: NormSpec,
    c: np.ndarray,
    r: float,
    y: np.ndarray,
    R: float,
    proposals: int,
    rng: np.random.Generator,
):
    """Uniform sample of B[c, r] ∩ B[y, R] by box rejection.

    Returns (accepted points, accepted count, proposal count).  Proposals are
    drawn uniformly from the intersection of the two balls' bounding boxes, so
    accepted points are uniform on the intersection body.
    """
    lo, hi = intersect_boxes(*ball_box(norm, c, r), *ball_box(norm, y, R))
    if np.any(hi < lo) or proposals <= 0:
        return np.empty((0, norm.dim)), 0, max(proposals, 0)
    cand = rng.uniform(size=(proposals, norm.dim)) * (hi - lo) + lo
    keep = (np.atleast_1d(eval_norm(norm, cand - c)) <= r) & (
        np.atleast_1d(eval_norm(norm, cand - y)) <= R
    )
    pts = cand[keep]
    return pts, int(pts.shape[0]), proposals
