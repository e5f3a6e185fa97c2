"""Declarative norm families on R^n.

A norm is described by a :class:`NormSpec`: an ambient dimension plus one of a
closed set of families (p-norms, positive-weighted sums of child norms, the
sup-plus-weighted-l2 family, and weighted p-norms for discrete-measure Lp
spaces).  Because the enumeration is closed and fully declarative, every
downstream computation can be serialized, replayed and tested bit-identically;
no user-supplied callbacks are accepted.

All evaluators are pure functions of immutable values and are safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "INF",
    "PNorm",
    "SumComposite",
    "SupPlusWeightedL2",
    "WeightedPNorm",
    "NormSpec",
    "pnorm",
    "sum_composite",
    "sup_plus_weighted_l2",
    "weighted_pnorm",
    "eval_norm",
    "distance",
    "convexity_defect",
    "is_strictly_convex_family",
    "norm_subgradient",
    "linf_lower_constant",
    "norm_to_dict",
    "norm_from_dict",
]

INF = float("inf")


def as_vector(x, dim: int, name: str = "x") -> np.ndarray:
    """Validate and convert ``x`` to a finite float vector of length ``dim``."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != dim:
        raise ValueError(
            f"{name} must be a vector of dimension {dim}, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _as_batch(x, dim: int, name: str = "x") -> np.ndarray:
    """Like :func:`as_vector` but accepts stacked inputs of shape (..., dim)."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != dim:
        raise ValueError(
            f"{name} must have trailing dimension {dim}, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class PNorm:
    """The lp norm; ``p`` may be any real >= 1 or infinity."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if np.isnan(p) or p < 1.0:
            raise ValueError(f"p-norm requires p >= 1 or p = inf, got {self.p}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class SumComposite:
    """A positive-weighted sum of child norms sharing one ambient dimension."""

    terms: tuple[tuple[float, "NormSpec"], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("SumComposite needs at least one term")
        terms = []
        for weight, child in self.terms:
            w = float(weight)
            if not (w > 0.0) or not np.isfinite(w):
                raise ValueError(f"composite weights must be positive, got {weight}")
            if not isinstance(child, NormSpec):
                raise TypeError("composite children must be NormSpec instances")
            terms.append((w, child))
        object.__setattr__(self, "terms", tuple(terms))


@dataclass(frozen=True)
class SupPlusWeightedL2:
    """max_k |x_k| plus sqrt(sum_k w_k x_k^2), with strictly positive weights."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if not w or any(not (v > 0.0) or not np.isfinite(v) for v in w):
            raise ValueError("sup-plus-weighted-l2 weights must all be positive")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class WeightedPNorm:
    """(sum_k w_k |x_k|^p)^(1/p) for a finite discrete measure; 1 < p < inf."""

    p: float
    weights: tuple[float, ...]

    def __post_init__(self):
        p = float(self.p)
        if not (1.0 < p < INF):
            raise ValueError(f"weighted p-norm requires 1 < p < inf, got {self.p}")
        w = tuple(float(v) for v in self.weights)
        if not w or any(not (v > 0.0) or not np.isfinite(v) for v in w):
            raise ValueError("weighted p-norm weights must all be positive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "weights", w)


Family = Union[PNorm, SumComposite, SupPlusWeightedL2, WeightedPNorm]


@dataclass(frozen=True)
class NormSpec:
    """A norm on R^dim, given by a family descriptor.

    Invariants are checked at construction: children of a composite share the
    ambient dimension and per-coordinate weight lists have exactly ``dim``
    entries.
    """

    dim: int
    family: Family

    def __post_init__(self):
        dim = int(self.dim)
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        object.__setattr__(self, "dim", dim)
        fam = self.family
        if isinstance(fam, SumComposite):
            for _, child in fam.terms:
                if child.dim != dim:
                    raise ValueError(
                        f"composite child dimension {child.dim} != ambient {dim}"
                    )
        elif isinstance(fam, (SupPlusWeightedL2, WeightedPNorm)):
            if len(fam.weights) != dim:
                raise ValueError(
                    f"need exactly {dim} weights, got {len(fam.weights)}"
                )
        elif not isinstance(fam, PNorm):
            raise TypeError(f"unknown norm family: {type(fam).__name__}")


def pnorm(dim: int, p: float) -> NormSpec:
    return NormSpec(dim, PNorm(p))


def sum_composite(dim: int, terms) -> NormSpec:
    return NormSpec(dim, SumComposite(tuple((w, c) for w, c in terms)))


def sup_plus_weighted_l2(weights) -> NormSpec:
    w = tuple(float(v) for v in weights)
    return NormSpec(len(w), SupPlusWeightedL2(w))


def weighted_pnorm(p: float, weights) -> NormSpec:
    w = tuple(float(v) for v in weights)
    return NormSpec(len(w), WeightedPNorm(p, w))


def _eval_family(fam: Family, x: np.ndarray) -> np.ndarray:
    if isinstance(fam, PNorm):
        return np.linalg.norm(x, ord=fam.p, axis=-1)
    if isinstance(fam, SumComposite):
        total = np.zeros(x.shape[:-1])
        for w, child in fam.terms:
            total = total + w * _eval_family(child.family, x)
        return total
    if isinstance(fam, SupPlusWeightedL2):
        w = np.asarray(fam.weights)
        sup = np.max(np.abs(x), axis=-1)
        return sup + np.sqrt(np.sum(w * x * x, axis=-1))
    if isinstance(fam, WeightedPNorm):
        scale = np.asarray(fam.weights) ** (1.0 / fam.p)
        return np.linalg.norm(x * scale, ord=fam.p, axis=-1)
    raise TypeError(f"unknown norm family: {type(fam).__name__}")


def eval_norm(norm: NormSpec, x):
    """Evaluate ``norm`` at ``x``.

    ``x`` may be a single vector of length ``norm.dim`` or a stacked array of
    shape (..., dim); the result is a float or an array of shape (...).
    """
    arr = _as_batch(x, norm.dim)
    out = _eval_family(norm.family, arr)
    return float(out) if arr.ndim == 1 else out


def distance(norm: NormSpec, x, y):
    """The metric induced by ``norm``: eval_norm(norm, x - y)."""
    ax = _as_batch(x, norm.dim, "x")
    ay = _as_batch(y, norm.dim, "y")
    out = _eval_family(norm.family, ax - ay)
    return float(out) if out.ndim == 0 else out


def convexity_defect(norm: NormSpec, u, v) -> float:
    """Triangle-inequality slack ||u|| + ||v|| - ||u+v|| for nonzero u, v.

    The defect is always >= 0; for strictly convex families it is strictly
    positive unless u is a positive multiple of v.
    """
    au = as_vector(u, norm.dim, "u")
    av = as_vector(v, norm.dim, "v")
    if not np.any(au) or not np.any(av):
        raise ValueError("convexity_defect requires nonzero vectors")
    return float(
        _eval_family(norm.family, au)
        + _eval_family(norm.family, av)
        - _eval_family(norm.family, au + av)
    )


def is_strictly_convex_family(norm: NormSpec) -> bool:
    """Whether the unit sphere of ``norm`` contains no nontrivial segment.

    True for lp with 1 < p < inf, for weighted p-norms, for
    sup-plus-weighted-l2 (the weighted l2 part is strictly convex and
    injective), and for any composite containing a strictly convex child.
    False for l1 and linf.
    """
    fam = norm.family
    if isinstance(fam, PNorm):
        return 1.0 < fam.p < INF
    if isinstance(fam, SumComposite):
        return any(
            is_strictly_convex_family(child) for _, child in fam.terms
        )
    if isinstance(fam, (SupPlusWeightedL2, WeightedPNorm)):
        return True
    raise TypeError(f"unknown norm family: {type(fam).__name__}")


def _sgn_vertex(v: np.ndarray) -> np.ndarray:
    # Extreme vertex of the sign box: zeros resolve deterministically to +1.
    return np.where(v >= 0.0, 1.0, -1.0)


def norm_subgradient(norm: NormSpec, v) -> np.ndarray:
    """A deterministic subgradient of ``norm`` at ``v``.

    For smooth points this is the gradient.  At nonsmooth points the selection
    is deterministic: the l1 subgradient takes the +1 vertex on zero
    coordinates, and linf / the sup part of sup-plus-weighted-l2 take the
    lowest argmax coordinate.  At v = 0 the zero vector is returned (a valid
    subgradient of any norm at the origin).
    """
    av = as_vector(v, norm.dim, "v")
    if not np.any(av):
        return np.zeros(norm.dim)
    return _subgrad_family(norm.family, av)


def _subgrad_family(fam: Family, v: np.ndarray) -> np.ndarray:
    if isinstance(fam, PNorm):
        p = fam.p
        if p == 1.0:
            return _sgn_vertex(v)
        if p == INF:
            i = int(np.argmax(np.abs(v)))
            g = np.zeros_like(v)
            g[i] = 1.0 if v[i] >= 0.0 else -1.0
            return g
        if p == 2.0:
            return v / np.linalg.norm(v)
        # Normalize first so |v|^(p-1) cannot overflow for large p.
        scale = np.max(np.abs(v))
        u = v / scale
        num = np.sign(u) * np.abs(u) ** (p - 1.0)
        return num / np.linalg.norm(u, ord=p) ** (p - 1.0)
    if isinstance(fam, SumComposite):
        g = np.zeros_like(v)
        for w, child in fam.terms:
            g = g + w * _subgrad_family(child.family, v)
        return g
    if isinstance(fam, SupPlusWeightedL2):
        i = int(np.argmax(np.abs(v)))
        g = np.zeros_like(v)
        g[i] = 1.0 if v[i] >= 0.0 else -1.0
        w = np.asarray(fam.weights)
        l2 = np.sqrt(np.sum(w * v * v))
        if l2 > 0.0:
            g = g + w * v / l2
        return g
    if isinstance(fam, WeightedPNorm):
        p = fam.p
        w = np.asarray(fam.weights)
        scale = np.max(np.abs(v))
        u = v / scale
        total = np.sum(w * np.abs(u) ** p) ** (1.0 / p)
        num = w * np.sign(u) * np.abs(u) ** (p - 1.0)
        return num / total ** (p - 1.0)
    raise TypeError(f"unknown norm family: {type(fam).__name__}")


def linf_lower_constant(norm: NormSpec) -> float:
    """A constant a > 0 with ||v|| >= a * ||v||_inf for all v.

    Used to build axis-aligned bounding boxes for norm balls: B[c, r] fits in
    the box c +- r/a per coordinate.
    """
    fam = norm.family
    if isinstance(fam, PNorm):
        return 1.0
    if isinstance(fam, SumComposite):
        return sum(w * linf_lower_constant(child) for w, child in fam.terms)
    if isinstance(fam, SupPlusWeightedL2):
        return 1.0
    if isinstance(fam, WeightedPNorm):
        return min(fam.weights) ** (1.0 / fam.p)
    raise TypeError(f"unknown norm family: {type(fam).__name__}")


# --- JSON codec ------------------------------------------------------------
#
# Schema: {"dim": n, "family": F} with
#   F = {"pnorm": p}                      p a number or the string "inf"
#     | {"sum": [[w, spec], ...]}         spec a full NormSpec object
#     | {"sup_plus_wl2": [w_1, ..., w_n]}
#     | {"wlp": {"p": p, "weights": [...]}}


def _family_to_dict(fam: Family):
    if isinstance(fam, PNorm):
        return {"pnorm": "inf" if fam.p == INF else fam.p}
    if isinstance(fam, SumComposite):
        return {"sum": [[w, norm_to_dict(child)] for w, child in fam.terms]}
    if isinstance(fam, SupPlusWeightedL2):
        return {"sup_plus_wl2": list(fam.weights)}
    if isinstance(fam, WeightedPNorm):
        return {"wlp": {"p": fam.p, "weights": list(fam.weights)}}
    raise TypeError(f"unknown norm family: {type(fam).__name__}")


def norm_to_dict(norm: NormSpec) -> dict:
    return {"dim": norm.dim, "family": _family_to_dict(norm.family)}


def _family_from_dict(obj, dim: int) -> Family:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"malformed norm family object: {obj!r}")
    tag, payload = next(iter(obj.items()))
    if tag == "pnorm":
        p = INF if payload == "inf" else float(payload)
        return PNorm(p)
    if tag == "sum":
        terms = tuple(
            (float(w), norm_from_dict(child)) for w, child in payload
        )
        return SumComposite(terms)
    if tag == "sup_plus_wl2":
        return SupPlusWeightedL2(tuple(float(v) for v in payload))
    if tag == "wlp":
        return WeightedPNorm(
            float(payload["p"]), tuple(float(v) for v in payload["weights"])
        )
    raise ValueError(f"unknown norm family tag: {tag!r}")


def norm_from_dict(obj) -> NormSpec:
    if not isinstance(obj, dict) or "dim" not in obj or "family" not in obj:
        raise ValueError(f"malformed norm spec object: {obj!r}")
    dim = int(obj["dim"])
    return NormSpec(dim, _family_from_dict(obj["family"], dim))
