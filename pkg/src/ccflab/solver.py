"""Chebyshev center and radius computation for finite point sets.

The objective F(x) = max_a ||x - a|| is convex but nonsmooth at ties.  The
general solver is multi-start subgradient descent (the subgradient comes from
any achieving point's norm subdifferential, with deterministic tie-breaking),
followed by a bounded derivative-free polish in low dimension.  For the
Euclidean family the minimax problem is exactly the minimum enclosing ball
problem, which is solved exactly by a randomized-incremental algorithm
instead.

An independent brute-force grid oracle (:func:`brute_force_center`) is kept
deliberately separate from the solver path so the two can cross-check each
other in tests.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .norms import (
    NormSpec,
    PNorm,
    WeightedPNorm,
    as_vector,
    eval_norm,
    norm_subgradient,
)
from .sampling import rng_stream
from .sets import DEFAULT_ACHIEVER_TOL, PointSet, outer_radius

__all__ = [
    "SolverOptions",
    "CenterResult",
    "chebyshev_center",
    "chebyshev_radius",
    "brute_force_center",
    "symmetric_line_minimize",
]

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for :func:`chebyshev_center`.

    ``step_schedule`` is "geometric" (step decays by ``geometric_decay`` per
    iteration; None picks a decay that shrinks the step by 1e-6 over the
    budget) or "polyak_like" (uses diameter/2 as the objective lower bound).
    Runs are deterministic given ``seed``.
    """

    max_iters: int = 1200
    step_schedule: str = "geometric"
    geometric_decay: float | None = None
    starts: int = 8
    seed: int = 0
    tol: float = 1e-6
    polish: bool = True
    dim_cap: int = 64

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if not (self.tol > 0.0):
            raise ValueError("tol must be positive")
        if self.step_schedule not in ("geometric", "polyak_like"):
            raise ValueError(f"unknown step schedule {self.step_schedule!r}")
        if self.geometric_decay is not None and not (0.0 < self.geometric_decay < 1.0):
            raise ValueError("geometric decay must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class CenterResult:
    """A center estimate with certificate data.

    ``radius`` is always the exact outer radius of the set at ``center``.
    ``gap`` is a certified upper bound on radius - r(A), computed from the
    best known lower bound on r(A) (at least diameter/2); it may be loose.
    ``multi_start_spread`` is the max pairwise distance among per-start
    results (0.0 for the exact Euclidean path).
    """

    center: np.ndarray
    radius: float
    achieving_indices: tuple[int, ...]
    gap: float
    iterations: int
    multi_start_spread: float
    flags: tuple[str, ...] = ()

    @property
    def converged(self) -> bool:
        return "not_converged" not in self.flags

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CenterResult)
            and np.array_equal(self.center, other.center)
            and self.radius == other.radius
            and self.achieving_indices == other.achieving_indices
            and self.gap == other.gap
            and self.iterations == other.iterations
            and self.multi_start_spread == other.multi_start_spread
            and self.flags == other.flags
        )

    def to_dict(self) -> dict:
        out = {
            "center": np.asarray(self.center).tolist(),
            "radius": self.radius,
            "gap": self.gap,
            "achievers": list(self.achieving_indices),
            "iterations": self.iterations,
            "spread": self.multi_start_spread,
        }
        if self.flags:
            out["flags"] = list(self.flags)
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "CenterResult":
        return cls(
            center=np.asarray(obj["center"], dtype=float),
            radius=float(obj["radius"]),
            achieving_indices=tuple(int(i) for i in obj["achievers"]),
            gap=float(obj["gap"]),
            iterations=int(obj["iterations"]),
            multi_start_spread=float(obj["spread"]),
            flags=tuple(obj.get("flags", ())),
        )


# --- exact minimum enclosing ball for the Euclidean family ------------------


def _circumball(R: list[np.ndarray]):
    """Smallest ball with the affinely independent points of R on its boundary."""
    if not R:
        return None, -1.0
    q0 = R[0]
    if len(R) == 1:
        return q0.copy(), 0.0
    V = np.stack(R[1:]) - q0
    G = 2.0 * V @ V.T
    rhs = np.einsum("ij,ij->i", V, V)
    try:
        lam = np.linalg.solve(G, rhs)
    except np.linalg.LinAlgError:
        lam, *_ = np.linalg.lstsq(G, rhs, rcond=None)
    c = q0 + lam @ V
    return c, float(np.dot(c - q0, c - q0))


def _meb_recursive(pts: np.ndarray, rng: np.random.Generator):
    """Welzl's algorithm with randomized order; exact for small sets, any dim."""
    order = [pts[i] for i in rng.permutation(len(pts))]
    dim = pts.shape[1]
    limit = max(sys.getrecursionlimit(), 64 * (len(order) + 8))
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(limit)
    try:

        def mb(n: int, R: list[np.ndarray]):
            if n == 0 or len(R) == dim + 1:
                return _circumball(R)
            c, r2 = mb(n - 1, R)
            p = order[n - 1]
            if c is not None:
                d2 = float(np.dot(p - c, p - c))
                if d2 <= r2 * (1.0 + 1e-12) + 1e-30:
                    return c, r2
            return mb(n - 1, R + [p])

        c, r2 = mb(len(order), [])
    finally:
        sys.setrecursionlimit(old)
    return np.asarray(c), np.sqrt(max(r2, 0.0))


def _meb_2d(pts: np.ndarray, rng: np.random.Generator):
    """Randomized-incremental smallest enclosing circle; O(n) expected.

    Plain-float inner loops: fast enough for ~10^4-point samples and avoids
    recursion entirely.
    """
    idx = rng.permutation(len(pts))
    P = [(float(pts[i, 0]), float(pts[i, 1])) for i in idx]
    eps = 1e-12

    def d2(a, b):
        dx = a[0] - b[0]
        dy = a[1] - b[1]
        return dx * dx + dy * dy

    def circum(a, b, c):
        ax, ay = a
        bx, by = b
        cx, cy = c
        d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
        if abs(d) < 1e-14 * (abs(ax) + abs(bx) + abs(cx) + 1.0):
            # Nearly collinear: fall back to the widest diametral pair.
            pairs = [(a, b), (a, c), (b, c)]
            u, v = max(pairs, key=lambda uv: d2(*uv))
            ctr = ((u[0] + v[0]) / 2.0, (u[1] + v[1]) / 2.0)
            return ctr, d2(u, ctr)
        ux = (
            (ax * ax + ay * ay) * (by - cy)
            + (bx * bx + by * by) * (cy - ay)
            + (cx * cx + cy * cy) * (ay - by)
        ) / d
        uy = (
            (ax * ax + ay * ay) * (cx - bx)
            + (bx * bx + by * by) * (ax - cx)
            + (cx * cx + cy * cy) * (bx - ax)
        ) / d
        ctr = (ux, uy)
        return ctr, max(d2(ctr, a), d2(ctr, b), d2(ctr, c))

    c = P[0]
    r2 = 0.0
    for i in range(1, len(P)):
        p = P[i]
        if d2(p, c) <= r2 * (1.0 + eps) + 1e-30:
            continue
        c, r2 = p, 0.0
        for j in range(i):
            q = P[j]
            if d2(q, c) <= r2 * (1.0 + eps) + 1e-30:
                continue
            c = ((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)
            r2 = d2(p, c)
            for k in range(j):
                s = P[k]
                if d2(s, c) <= r2 * (1.0 + eps) + 1e-30:
                    continue
                c, r2 = circum(p, q, s)
    return np.array(c), np.sqrt(max(r2, 0.0))


def _euclidean_scaling(norm: NormSpec):
    """Per-coordinate scaling making ``norm`` the plain l2 norm, if possible."""
    fam = norm.family
    if isinstance(fam, PNorm) and fam.p == 2.0:
        return np.ones(norm.dim)
    if isinstance(fam, WeightedPNorm) and fam.p == 2.0:
        return np.sqrt(np.asarray(fam.weights))
    return None


# --- subgradient descent -----------------------------------------------------


def _diameter_lower_bound(A: PointSet) -> float:
    """Exact diameter for small sets; a two-sweep anchor bound for large ones."""
    pts = A.points
    m = len(pts)
    if m <= 1024:
        best = 0.0
        for i in range(m - 1):
            d = eval_norm(A.norm, pts[i + 1 :] - pts[i])
            best = max(best, float(np.max(d)))
        return best
    d0 = np.atleast_1d(eval_norm(A.norm, pts - pts[0]))
    a = pts[int(np.argmax(d0))]
    d1 = np.atleast_1d(eval_norm(A.norm, pts - a))
    b = pts[int(np.argmax(d1))]
    d2 = np.atleast_1d(eval_norm(A.norm, pts - b))
    return float(max(np.max(d1), np.max(d2)))


def _objective(A: PointSet, x: np.ndarray) -> float:
    return float(np.max(np.atleast_1d(eval_norm(A.norm, x - A.points))))


def _subgradient_run(A: PointSet, x0: np.ndarray, opts: SolverOptions, lb: float):
    pts = A.points
    norm = A.norm
    x = x0.astype(float).copy()
    dists = np.atleast_1d(eval_norm(norm, x - pts))
    best_f = float(np.max(dists))
    best_x = x.copy()
    trace_best = [best_f]

    scale = max(best_f, 1e-12)
    step0 = 0.5 * scale
    decay = opts.geometric_decay
    if decay is None:
        decay = (1e-6) ** (1.0 / max(opts.max_iters, 1))

    step = step0
    for k in range(opts.max_iters):
        i = int(np.argmax(dists))
        g = norm_subgradient(norm, x - pts[i])
        gn = float(np.linalg.norm(g))
        if gn <= 1e-15:
            break
        if opts.step_schedule == "polyak_like":
            step = max(best_f - lb, 0.0) / (gn * gn)
            step = min(step, scale)
            if step <= 1e-16:
                step = 1e-16
            x = x - step * g
        else:
            x = x - (step / gn) * g
            step *= decay
        dists = np.atleast_1d(eval_norm(norm, x - pts))
        f = float(np.max(dists))
        if f < best_f:
            best_f = f
            best_x = x.copy()
        trace_best.append(best_f)

    # Running minimum is non-increasing by construction; keep the sanity check
    # cheap but real.
    assert all(b >= a for a, b in zip(trace_best[1:], trace_best)), "running min increased"

    window = max(50, opts.max_iters // 4)
    if len(trace_best) > window:
        recent_gain = trace_best[-window - 1] - trace_best[-1]
    else:
        recent_gain = trace_best[0] - trace_best[-1]
    return best_x, best_f, recent_gain, len(trace_best) - 1


def _is_stationary(A: PointSet, x: np.ndarray, fx: float, opts: SolverOptions) -> bool:
    """Local probe: does any coordinate or random direction still descend?

    The objective is convex, so the probe decrease is bounded by the true
    suboptimality; a material decrease means max_iters stopped us early.
    """
    delta = max(10.0 * opts.tol, 1e-7) * (1.0 + fx)
    dirs = list(np.eye(A.dim))
    rng = rng_stream(opts.seed, "stationarity")
    for _ in range(4):
        d = rng.normal(size=A.dim)
        dirs.append(d / np.linalg.norm(d))
    threshold = 5.0 * opts.tol * (1.0 + fx)
    for d in dirs:
        if fx - _objective(A, x + delta * d) > threshold:
            return False
        if fx - _objective(A, x - delta * d) > threshold:
            return False
    return True


def _polish(A: PointSet, x: np.ndarray) -> np.ndarray:
    res = minimize(
        lambda v: _objective(A, v),
        x,
        method="Nelder-Mead",
        options={
            "xatol": 1e-10,
            "fatol": 1e-14,
            "maxiter": 400 * A.dim,
            "adaptive": A.dim > 3,
        },
    )
    return res.x if res.fun <= _objective(A, x) else x


def _start_points(A: PointSet, opts: SolverOptions, extra) -> list[np.ndarray]:
    pts = A.points
    centroid = pts.mean(axis=0)
    starts: list[np.ndarray] = [np.asarray(s, dtype=float) for s in (extra or [])]
    starts.append(centroid)
    for i in range(min(len(pts), max(opts.starts - 1, 0))):
        starts.append(pts[i].astype(float))
    rng = rng_stream(opts.seed, "solver-starts")
    spread = max(float(np.max(np.ptp(pts, axis=0))), 1e-6)
    while len(starts) < opts.starts + len(extra or []):
        starts.append(centroid + rng.normal(scale=0.25 * spread, size=A.dim))
    return starts[: opts.starts + len(extra or [])]


def chebyshev_center(
    A: PointSet, opts: SolverOptions | None = None, *, extra_starts=None
) -> CenterResult:
    """Minimize x -> max_a ||x - a|| over the ambient space.

    Deterministic given opts.seed.  ``extra_starts`` prepends additional
    deterministic starting points (used by callers that know structurally
    good candidates); they do not count against ``opts.starts``.

    Non-convergence within the iteration budget is reported via the
    ``not_converged`` flag on the result, never by raising.
    """
    opts = opts or SolverOptions()
    if A.dim > opts.dim_cap:
        raise ValueError(f"dimension {A.dim} exceeds solver cap {opts.dim_cap}")
    pts = A.points
    norm = A.norm

    diam_lb = _diameter_lower_bound(A)
    lb = diam_lb / 2.0

    if diam_lb == 0.0:  # all points identical
        center = pts[0].astype(float)
        return _assemble(A, center, gap_lb=0.0, iterations=0, spread=0.0, flags=())

    scaling = _euclidean_scaling(norm)
    if scaling is not None:
        rng = rng_stream(opts.seed, "meb")
        scaled = pts * scaling
        if A.dim == 2:
            c_s, _ = _meb_2d(scaled, rng)
        elif len(pts) <= 512:
            # linear recursion depth equals the point count; keep it stack-safe
            c_s, _ = _meb_recursive(scaled, rng)
        else:
            c_s = None
        if c_s is not None:
            center = np.asarray(c_s, dtype=float) / scaling
            # The support set certifies optimality; the enclosing-ball radius
            # is itself the best lower bound.
            return _assemble(
                A,
                center,
                gap_lb=outer_radius(A, center),
                iterations=len(pts),
                spread=0.0,
                flags=(),
            )

    starts = _start_points(A, opts, extra_starts)
    finals: list[list] = []
    total_iters = 0
    for x0 in starts:
        bx, bf, gain, iters = _subgradient_run(A, x0, opts, lb)
        total_iters += iters
        finals.append([bx, bf, gain])

    finals.sort(key=lambda t: t[1])
    if opts.polish and A.dim <= 16:
        n_polish = len(finals) if len(pts) * A.dim <= 4096 else 1
        for entry in finals[:n_polish]:
            entry[0] = _polish(A, entry[0])
            entry[1] = _objective(A, entry[0])
        finals.sort(key=lambda t: t[1])
    best_x, best_f, best_gain = finals[0]

    # Spread over converged starts only: those whose radius matches the best.
    close = [e for e in finals if e[1] <= best_f + 10.0 * opts.tol * (1.0 + best_f)]
    spread = 0.0
    for i in range(len(close)):
        for j in range(i + 1, len(close)):
            spread = max(spread, float(eval_norm(norm, close[i][0] - close[j][0])))

    if A.dim <= 16:
        converged = _is_stationary(A, best_x, best_f, opts)
    else:
        converged = best_gain <= opts.tol * (1.0 + best_f)
    flags: tuple[str, ...] = () if converged else ("not_converged",)

    return _assemble(A, best_x, gap_lb=lb, iterations=total_iters, spread=spread, flags=flags)


def _assemble(A, center, gap_lb, iterations, spread, flags) -> CenterResult:
    radius = outer_radius(A, center)
    dists = np.atleast_1d(eval_norm(A.norm, center - A.points))
    tol = max(DEFAULT_ACHIEVER_TOL, 1e-12 * radius)
    achievers = tuple(int(i) for i in np.flatnonzero(dists >= radius - tol))
    return CenterResult(
        center=np.asarray(center, dtype=float),
        radius=radius,
        achieving_indices=achievers,
        gap=max(radius - gap_lb, 0.0),
        iterations=int(iterations),
        multi_start_spread=float(spread),
        flags=flags,
    )


def chebyshev_radius(A: PointSet, opts: SolverOptions | None = None) -> float:
    return chebyshev_center(A, opts).radius


# --- independent grid oracle -------------------------------------------------


def brute_force_center(
    A: PointSet,
    box: tuple,
    grid_per_axis: int = 21,
    refine_levels: int = 3,
) -> CenterResult:
    """Exhaustive grid minimization of r(x, A) with recursive refinement.

    Kept independent of the solver path: it never calls chebyshev_center and
    uses only the norm evaluator.  ``gap`` reports the Lipschitz error bound
    (constant 1 times the final cell diagonal, measured in the ambient norm).
    If the final argmin sits on the boundary of the original box the result
    carries a ``box_boundary`` flag: the box may not contain a minimizer.
    """
    if A.dim > 3:
        raise ValueError("brute-force oracle supports dim <= 3")
    if grid_per_axis < 3:
        raise ValueError("grid_per_axis must be >= 3")
    lo0 = as_vector(box[0], A.dim, "box lo")
    hi0 = as_vector(box[1], A.dim, "box hi")
    if np.any(hi0 <= lo0):
        raise ValueError("box must have positive extent")

    lo, hi = lo0.copy(), hi0.copy()
    evals = 0
    best_radius = np.inf
    best_x = None
    spacing = (hi - lo) / (grid_per_axis - 1)
    for _level in range(refine_levels):
        axes = [np.linspace(lo[d], hi[d], grid_per_axis) for d in range(A.dim)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, A.dim)
        rvals = np.full(len(grid), -np.inf)
        for a in A.points:
            rvals = np.maximum(rvals, np.atleast_1d(eval_norm(A.norm, grid - a)))
        evals += len(grid)
        spacing = (hi - lo) / (grid_per_axis - 1)
        k = int(np.argmin(rvals))
        if float(rvals[k]) < best_radius:
            best_radius = float(rvals[k])
            best_x = grid[k]
        # The true minimizer (if inside the original box) lies within half a
        # cell of some grid point whose value is at most min + half-diagonal
        # (objective is 1-Lipschitz in the ambient norm), so the bounding box
        # of that sublevel set, padded by one cell, still contains it.  This
        # is robust to flat valleys, unlike refining around the argmin alone.
        half_diag = float(eval_norm(A.norm, spacing / 2.0))
        keep = grid[rvals <= rvals[k] + half_diag + 1e-12]
        lo = np.maximum(keep.min(axis=0) - spacing, lo0)
        hi = np.minimum(keep.max(axis=0) + spacing, hi0)

    flags: tuple[str, ...] = ()
    if np.any(best_x <= lo0 + 0.5 * spacing) or np.any(best_x >= hi0 - 0.5 * spacing):
        flags = ("box_boundary",)

    result = _assemble(A, best_x, gap_lb=0.0, iterations=evals, spread=0.0, flags=flags)
    cell_diag = float(eval_norm(A.norm, spacing))
    return replace(result, gap=cell_diag)


# --- one-dimensional symmetric-line minimization -----------------------------


def _golden_section(f, a: float, b: float, width: float):
    h = b - a
    c = b - _GOLDEN * h
    d = a + _GOLDEN * h
    fc, fd = f(c), f(d)
    while h > width:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - _GOLDEN * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _GOLDEN * h
            fd = f(d)
    return (a + b) / 2.0


def _parabolic_refine(f, s: float, h: float):
    f0, fp, fm = f(s), f(s + h), f(s - h)
    denom = fp - 2.0 * f0 + fm
    if denom <= 0.0:
        return None
    curv = denom / (h * h)
    if curv > 1e3 * (1.0 + abs(f0)):
        return None  # kink, not curvature: a parabola would shift the minimum
    return s - 0.5 * h * (fp - fm) / denom


def symmetric_line_minimize(
    A: PointSet, direction, opts: SolverOptions | None = None
) -> tuple[float, float]:
    """Minimize s -> r(s * direction, A) over the real line.

    The profile is convex (a max of convex functions of s), hence unimodal, so
    golden-section search over an automatic bracket applies; a guarded
    parabolic refinement then pushes smooth minima below the golden-section
    noise floor.  If the golden result ever disagrees with a coarse dense
    scan, the scan bracket is retried (defensive fallback; convexity should
    prevent it).
    """
    d = as_vector(direction, A.dim, "direction")
    if not np.any(d):
        raise ValueError("direction must be nonzero")
    dn = float(eval_norm(A.norm, d))
    pts_norms = np.atleast_1d(eval_norm(A.norm, A.points))
    reach = (2.0 * float(np.max(pts_norms)) + 1.0) / dn

    def f(s: float) -> float:
        return float(np.max(np.atleast_1d(eval_norm(A.norm, s * d - A.points))))

    s_star = _golden_section(f, -reach, reach, 1e-11 * max(1.0, reach))

    # Defensive unimodality cross-check against a coarse scan.
    grid = np.linspace(-reach, reach, 65)
    vals = [f(s) for s in grid]
    k = int(np.argmin(vals))
    if vals[k] < f(s_star) - 1e-9 * (1.0 + abs(vals[k])):
        a = grid[max(k - 1, 0)]
        b = grid[min(k + 1, len(grid) - 1)]
        s_star = _golden_section(f, a, b, 1e-11 * max(1.0, reach))

    # Accept the parabolic vertex only when two step sizes agree: at a kink
    # the two estimates differ by O(h) and the golden result stands.
    cand_a = _parabolic_refine(f, s_star, 1e-4)
    cand_b = _parabolic_refine(f, s_star, 1e-5)
    if cand_a is not None and cand_b is not None and abs(cand_a - cand_b) <= 1e-8:
        s_star = cand_b

    return s_star, f(s_star)
