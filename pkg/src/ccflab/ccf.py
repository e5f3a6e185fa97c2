"""CCF/CCNF machinery: witness verification, viewpoint amplification, the
two-ball reduction body, and sampled r_{t,z} scans.

Terminology: a finite set is *CCF* when one of its Chebyshev centers is also a
farthest point of the set from some viewpoint, and *CCNF* otherwise.  The
quantity r_{t,z} is the Chebyshev radius of the body B_X ∩ B[z, t] for a unit
vector z; spaces where r_{t,z} < t for every unit z and t in (0, 1] contain no
nontrivial CCF set.  The continuum body is handled here by inner
discretization only, so scans produce *evidence* with reported sampler
density, never a proof.
"""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .norms import NormSpec, as_vector, eval_norm, norm_from_dict, norm_to_dict
from .sampling import rejection_sample_two_balls, rng_stream, sample_unit_vectors
from .sets import DEFAULT_ACHIEVER_TOL, PointSet, farthest_set, outer_radius
from .solver import CenterResult, SolverOptions, chebyshev_center

__all__ = [
    "CONFIRMED",
    "CENTER_FAILS",
    "FARTHEST_FAILS",
    "INDETERMINATE",
    "CcfWitness",
    "WitnessVerdict",
    "verify_ccf_witness",
    "amplify_witness",
    "TwoBallSet",
    "build_two_ball_set",
    "TwoBallReport",
    "check_two_ball_properties",
    "RtzEstimate",
    "estimate_r_tz",
    "ScanResult",
    "ccnf_scan",
    "cap_containment_check",
    "CCNF_EVIDENCE_MAX_RATIO",
    "CCF_SIGNAL_MIN_RATIO",
]

CONFIRMED = "confirmed"
CENTER_FAILS = "center_fails"
FARTHEST_FAILS = "farthest_fails"
INDETERMINATE = "indeterminate"

# Default classification thresholds for scan verdicts (see ScanResult).  The
# signal threshold is deliberately high: strictly convex lp lenses can reach
# ratios near 0.997 at moderate t close to low-curvature sphere directions,
# so only near-exact cells count as a CCF signal.
CCNF_EVIDENCE_MAX_RATIO = 0.99
CCF_SIGNAL_MIN_RATIO = 0.9995

_SCAN_OPTS = SolverOptions(max_iters=250, starts=1, tol=1e-4)


@dataclass(frozen=True, eq=False)
class CcfWitness:
    """A candidate CCF triple: a set, a claimed center in it, a viewpoint."""

    set: PointSet
    center_index: int
    viewpoint: np.ndarray
    center_tol: float = 1e-6
    farthest_tol: float = DEFAULT_ACHIEVER_TOL

    def __post_init__(self):
        if not (0 <= self.center_index < len(self.set)):
            raise ValueError(f"center_index {self.center_index} out of range")
        if not (self.center_tol > 0.0 and self.farthest_tol > 0.0):
            raise ValueError("tolerances must be positive")
        object.__setattr__(
            self, "viewpoint", as_vector(self.viewpoint, self.set.dim, "viewpoint")
        )

    def to_dict(self) -> dict:
        return {
            "set": self.set.to_dict(),
            "center_index": self.center_index,
            "viewpoint": self.viewpoint.tolist(),
            "center_tol": self.center_tol,
            "farthest_tol": self.farthest_tol,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "CcfWitness":
        return cls(
            set=PointSet.from_dict(obj["set"]),
            center_index=int(obj["center_index"]),
            viewpoint=np.asarray(obj["viewpoint"], dtype=float),
            center_tol=float(obj.get("center_tol", 1e-6)),
            farthest_tol=float(obj.get("farthest_tol", DEFAULT_ACHIEVER_TOL)),
        )


@dataclass(frozen=True, eq=False)
class WitnessVerdict:
    """Outcome of witness verification plus the numbers behind it.

    ``center_margin`` is chebyshev_radius + tol - outer_radius(A, claimed
    center) (nonnegative when the center check passes) and
    ``farthest_margin`` is the claimed center's distance from the viewpoint
    minus the largest rival distance (>= -tol when the farthest check
    passes).
    """

    status: str
    chebyshev_radius: float
    center_outer_radius: float
    center_margin: float
    farthest_margin: float
    solver: CenterResult

    @property
    def confirmed(self) -> bool:
        return self.status == CONFIRMED

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WitnessVerdict)
            and self.status == other.status
            and self.chebyshev_radius == other.chebyshev_radius
            and self.center_outer_radius == other.center_outer_radius
            and self.center_margin == other.center_margin
            and self.farthest_margin == other.farthest_margin
            and self.solver == other.solver
        )

    def to_dict(self) -> dict:
        return {
            "verdict": self.status,
            "chebyshev_radius": self.chebyshev_radius,
            "center_outer_radius": self.center_outer_radius,
            "center_margin": self.center_margin,
            "farthest_margin": self.farthest_margin,
            "solver": self.solver.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "WitnessVerdict":
        return cls(
            status=str(obj["verdict"]),
            chebyshev_radius=float(obj["chebyshev_radius"]),
            center_outer_radius=float(obj["center_outer_radius"]),
            center_margin=float(obj["center_margin"]),
            farthest_margin=float(obj["farthest_margin"]),
            solver=CenterResult.from_dict(obj["solver"]),
        )


def verify_ccf_witness(w: CcfWitness, opts: SolverOptions | None = None) -> WitnessVerdict:
    """Check whether the claimed point is a Chebyshev center *and* a farthest
    point from the claimed viewpoint.

    The center check is one-sided: outer_radius(A, claimed) must not exceed
    the solved Chebyshev radius plus center_tol.  Solver non-convergence
    yields an indeterminate verdict rather than a hard failure.
    """
    A = w.set
    if not A.nontrivial:
        raise ValueError("witness set must be nontrivial (two distinct points)")
    claimed = A.points[w.center_index]
    solved = chebyshev_center(A, opts, extra_starts=[claimed])
    r_claimed = outer_radius(A, claimed)
    center_margin = solved.radius + w.center_tol - r_claimed

    dists = np.atleast_1d(eval_norm(A.norm, A.points - w.viewpoint))
    d_claimed = float(dists[w.center_index])
    rivals = np.delete(dists, w.center_index)
    far_margin = d_claimed - (float(np.max(rivals)) if rivals.size else 0.0)

    if not solved.converged:
        status = INDETERMINATE
    elif center_margin < 0.0:
        status = CENTER_FAILS
    elif w.center_index not in farthest_set(A, w.viewpoint, w.farthest_tol).achievers:
        status = FARTHEST_FAILS
    else:
        status = CONFIRMED
    return WitnessVerdict(
        status=status,
        chebyshev_radius=solved.radius,
        center_outer_radius=r_claimed,
        center_margin=center_margin,
        farthest_margin=far_margin,
        solver=solved,
    )


def amplify_witness(A: PointSet, c, z, t: float, tol: float = DEFAULT_ACHIEVER_TOL) -> np.ndarray:
    """Push a farthest-point viewpoint arbitrarily far away.

    Given that ``c`` is farthest in A from ``z``, the point y = t*z + (1-t)*c
    (t >= 1) keeps c farthest while ||y - c|| = t * ||z - c|| grows linearly
    in t.  The precondition is checked and violations are rejected.
    """
    if t < 1.0:
        raise ValueError(f"amplification factor must be >= 1, got {t}")
    ac = as_vector(c, A.dim, "c")
    az = as_vector(z, A.dim, "z")
    dists = np.atleast_1d(eval_norm(A.norm, A.points - az))
    d_c = float(eval_norm(A.norm, ac - az))
    if d_c < float(np.max(dists)) - tol:
        raise ValueError("precondition violated: c is not farthest in A from z")
    return t * az + (1.0 - t) * ac


@dataclass(frozen=True, eq=False)
class TwoBallSet:
    """The body B[c, r] ∩ B[y, R] with a deterministic rejection sampler."""

    c: np.ndarray
    r: float
    y: np.ndarray
    R: float
    norm: NormSpec
    sampler_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "c", as_vector(self.c, self.norm.dim, "c"))
        object.__setattr__(self, "y", as_vector(self.y, self.norm.dim, "y"))
        if self.r < 0.0 or self.R < 0.0:
            raise ValueError("ball radii must be nonnegative")
        if self.r > self.R + 1e-9 * (1.0 + self.R):
            raise ValueError(f"invariant violated: r = {self.r} exceeds R = {self.R}")

    def sample(self, proposals: int):
        """Uniform points of the body: (points, accepted, proposed).

        Degenerate bodies (r = 0) return just {c}.  Nested calls with growing
        ``proposals`` reuse a common prefix of the Philox stream, so samples
        are nested across sizes.
        """
        if self.r == 0.0:
            return self.c.reshape(1, -1), 1, max(proposals, 0)
        rng = rng_stream(self.sampler_seed, "two-ball")
        return rejection_sample_two_balls(
            self.norm, self.c, self.r, self.y, self.R, proposals, rng
        )

    def to_dict(self) -> dict:
        return {
            "c": self.c.tolist(),
            "r": self.r,
            "y": self.y.tolist(),
            "R": self.R,
            "norm": norm_to_dict(self.norm),
            "sampler_seed": self.sampler_seed,
        }


def build_two_ball_set(
    A: PointSet, c, r: float, y, *, tol: float = 1e-9, seed: int = 0
) -> TwoBallSet:
    """Construct B[c, r] ∩ B[y, R] with R = ||c - y||.

    ``r`` must be a certified Chebyshev radius for A with center ``c``, and
    ``c`` must be farthest in A from ``y``; the construction rejects inputs
    where r > R + tol or where the farthest precondition fails.
    """
    ac = as_vector(c, A.dim, "c")
    ay = as_vector(y, A.dim, "y")
    R = float(eval_norm(A.norm, ac - ay))
    if r > R + tol:
        raise ValueError(
            f"rejected: r = {r} exceeds R = ||c - y|| = {R}; "
            "the claimed center cannot be farthest from y"
        )
    dists = np.atleast_1d(eval_norm(A.norm, A.points - ay))
    if R < float(np.max(dists)) - tol:
        raise ValueError(
            "rejected: some point of A is farther from y than c is "
            f"({float(np.max(dists))} > {R})"
        )
    return TwoBallSet(c=ac, r=float(r), y=ay, R=R, norm=A.norm, sampler_seed=seed)


@dataclass(frozen=True)
class TwoBallReport:
    """Checks (a)-(d) for the two-ball body against its source set.

    (a) A sits inside both balls (exact); (b) the Chebyshev radius of a
    deterministic sample is at most r (the sample lies in B[c, r]); (c)
    r(c, sample) <= r exactly; (d) no sampled point is farther than R from y
    (exact by construction of the sampler).
    """

    containment_ok: bool
    sample_radius_ok: bool
    center_radius_ok: bool
    farthest_ok: bool
    sample_radius: float
    center_sample_radius: float
    max_sample_dist_to_y: float
    accepted: int
    proposals: int

    @property
    def all_ok(self) -> bool:
        return (
            self.containment_ok
            and self.sample_radius_ok
            and self.center_radius_ok
            and self.farthest_ok
        )

    def to_dict(self) -> dict:
        return {
            "containment_ok": self.containment_ok,
            "sample_radius_ok": self.sample_radius_ok,
            "center_radius_ok": self.center_radius_ok,
            "farthest_ok": self.farthest_ok,
            "sample_radius": self.sample_radius,
            "center_sample_radius": self.center_sample_radius,
            "max_sample_dist_to_y": self.max_sample_dist_to_y,
            "accepted": self.accepted,
            "proposals": self.proposals,
            "all_ok": self.all_ok,
        }


def check_two_ball_properties(
    U: TwoBallSet,
    A: PointSet,
    samples: int,
    opts: SolverOptions | None = None,
    tol: float = 1e-9,
) -> TwoBallReport:
    """Exercise the two-ball body's containment and radius properties."""
    d_c = np.atleast_1d(eval_norm(A.norm, A.points - U.c))
    d_y = np.atleast_1d(eval_norm(A.norm, A.points - U.y))
    containment = bool(np.all(d_c <= U.r + tol) and np.all(d_y <= U.R + tol))

    pts, accepted, proposed = U.sample(samples)
    if accepted == 0:
        # Balls nearly disjoint: report the failure explicitly.
        return TwoBallReport(
            containment_ok=containment,
            sample_radius_ok=False,
            center_radius_ok=False,
            farthest_ok=False,
            sample_radius=float("nan"),
            center_sample_radius=float("nan"),
            max_sample_dist_to_y=float("nan"),
            accepted=0,
            proposals=proposed,
        )
    sample_set = PointSet(A.norm, pts)
    solved = chebyshev_center(sample_set, opts or _SCAN_OPTS, extra_starts=[U.c])
    r_c_sample = outer_radius(sample_set, U.c)
    max_to_y = float(np.max(np.atleast_1d(eval_norm(A.norm, pts - U.y))))
    return TwoBallReport(
        containment_ok=containment,
        sample_radius_ok=bool(solved.radius <= U.r + tol),
        center_radius_ok=bool(r_c_sample <= U.r + tol),
        farthest_ok=bool(max_to_y <= U.R + tol),
        sample_radius=solved.radius,
        center_sample_radius=r_c_sample,
        max_sample_dist_to_y=max_to_y,
        accepted=accepted,
        proposals=proposed,
    )


@dataclass(frozen=True, eq=False)
class RtzEstimate:
    """Sampled lower estimate of r_{t,z}, the Chebyshev radius of B_X ∩ B[z,t].

    ``r_hat`` is the solved radius of a finite inner sample, so it
    under-estimates r_{t,z} up to solver slack; it never exceeds t (the start
    z already achieves radius <= t on any subset of B[z, t]).
    ``sample_count`` counts rejection-sampler acceptances; the solve also
    always includes the two deterministic anchor points z and (1-t)z.
    """

    z: np.ndarray
    t: float
    r_hat: float
    sample_count: int
    proposals: int
    gap: float
    flags: tuple[str, ...] = ()

    @property
    def ratio(self) -> float:
        return self.r_hat / self.t

    @property
    def accept_ratio(self) -> float:
        return self.sample_count / self.proposals if self.proposals else 0.0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RtzEstimate)
            and np.array_equal(self.z, other.z)
            and (self.t, self.r_hat, self.sample_count, self.proposals, self.gap, self.flags)
            == (other.t, other.r_hat, other.sample_count, other.proposals, other.gap, other.flags)
        )

    def to_dict(self) -> dict:
        return {
            "z": np.asarray(self.z).tolist(),
            "t": self.t,
            "r_hat": self.r_hat,
            "ratio": self.ratio,
            "sample_count": self.sample_count,
            "proposals": self.proposals,
            "accept_ratio": self.accept_ratio,
            "gap": self.gap,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "RtzEstimate":
        return cls(
            z=np.asarray(obj["z"], dtype=float),
            t=float(obj["t"]),
            r_hat=float(obj["r_hat"]),
            sample_count=int(obj["sample_count"]),
            proposals=int(obj["proposals"]),
            gap=float(obj["gap"]),
            flags=tuple(obj.get("flags", ())),
        )


def estimate_r_tz(
    norm: NormSpec,
    z,
    t: float,
    samples: int,
    opts: SolverOptions | None = None,
    seed: int = 0,
) -> RtzEstimate:
    """Inner-sample B_X ∩ B[z, t] and solve the sample's Chebyshev radius.

    ``z`` must lie on the unit sphere (tolerance 1e-9); ``samples`` counts
    rejection-sampler proposals drawn from the bounding box of the
    intersection.  The points z and (1-t)z always join the sample (both lie
    in the body), so the estimate is defined even for thin intersections;
    acceptance below 1e-3 is flagged as ``thin_intersection``.
    """
    az = as_vector(z, norm.dim, "z")
    if abs(float(eval_norm(norm, az)) - 1.0) > 1e-9:
        raise ValueError("z must lie on the unit sphere of the ambient norm")
    if not (0.0 < t <= 1.0):
        raise ValueError(f"t must lie in (0, 1], got {t}")

    origin = np.zeros(norm.dim)
    rng = rng_stream(seed, "rtz", float(t))
    pts, accepted, proposed = rejection_sample_two_balls(
        norm, origin, 1.0, az, t, samples, rng
    )
    anchors = np.stack([az, (1.0 - t) * az])
    pts = np.vstack([anchors, pts]) if accepted else anchors

    flags: tuple[str, ...] = ()
    if proposed and accepted / proposed < 1e-3:
        flags = ("thin_intersection",)

    sample_set = PointSet(norm, pts)
    solved = chebyshev_center(sample_set, opts or _SCAN_OPTS, extra_starts=[az])
    if not solved.converged:
        flags = flags + ("solver_not_converged",)
    return RtzEstimate(
        z=az,
        t=float(t),
        r_hat=solved.radius,
        sample_count=accepted,
        proposals=proposed,
        gap=solved.gap,
        flags=flags,
    )


@dataclass(frozen=True, eq=False)
class ScanResult:
    """Grid of r_{t,z} estimates over sampled unit directions and a t-grid.

    ``verdict`` classifies the evidence: "ccnf-evidence" when the largest
    r_hat/t stays at or below ``ccnf_threshold``, "ccf-signal" when some cell
    reaches ``ccf_threshold``, otherwise "inconclusive".  This is sampled
    evidence, not a certificate; density data stays attached to every row.
    """

    norm: NormSpec
    rows: tuple[RtzEstimate, ...]
    t_grid: tuple[float, ...]
    samples: int
    seed: int
    ccnf_threshold: float
    ccf_threshold: float

    @property
    def max_ratio(self) -> float:
        return max(row.ratio for row in self.rows)

    @property
    def verdict(self) -> str:
        m = self.max_ratio
        if m <= self.ccnf_threshold:
            return "ccnf-evidence"
        if m >= self.ccf_threshold:
            return "ccf-signal"
        return "inconclusive"

    def to_csv(self) -> str:
        dim = self.norm.dim
        buf = io.StringIO()
        cols = [f"z_{i + 1}" for i in range(dim)]
        buf.write(",".join(cols + ["t", "r_hat", "ratio", "samples", "accept_ratio"]) + "\n")
        for row in self.rows:
            z = [repr(float(v)) for v in row.z]
            buf.write(
                ",".join(
                    z
                    + [
                        repr(row.t),
                        repr(row.r_hat),
                        repr(row.ratio),
                        str(self.samples),
                        repr(row.accept_ratio),
                    ]
                )
                + "\n"
            )
        return buf.getvalue()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ScanResult)
            and self.norm == other.norm
            and self.rows == other.rows
            and (self.t_grid, self.samples, self.seed, self.ccnf_threshold, self.ccf_threshold)
            == (other.t_grid, other.samples, other.seed, other.ccnf_threshold, other.ccf_threshold)
        )

    def to_dict(self) -> dict:
        return {
            "norm": norm_to_dict(self.norm),
            "t_grid": list(self.t_grid),
            "samples": self.samples,
            "seed": self.seed,
            "rows": [row.to_dict() for row in self.rows],
            "max_ratio": self.max_ratio,
            "verdict": self.verdict,
            "ccnf_threshold": self.ccnf_threshold,
            "ccf_threshold": self.ccf_threshold,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ScanResult":
        return cls(
            norm=norm_from_dict(obj["norm"]),
            rows=tuple(RtzEstimate.from_dict(r) for r in obj["rows"]),
            t_grid=tuple(float(t) for t in obj["t_grid"]),
            samples=int(obj["samples"]),
            seed=int(obj["seed"]),
            ccnf_threshold=float(obj["ccnf_threshold"]),
            ccf_threshold=float(obj["ccf_threshold"]),
        )


def _worker_count() -> int:
    env = os.environ.get("CCFLAB_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def ccnf_scan(
    norm: NormSpec,
    z_count: int,
    t_grid,
    samples: int,
    seed: int = 0,
    opts: SolverOptions | None = None,
    ccnf_threshold: float = CCNF_EVIDENCE_MAX_RATIO,
    ccf_threshold: float = CCF_SIGNAL_MIN_RATIO,
) -> ScanResult:
    """Estimate r_{t,z} over a deterministic unit-sphere sample times a t-grid.

    Cells are independent; with CCFLAB_THREADS > 1 they are fanned out over a
    thread pool.  Every cell derives its own Philox stream from (seed, cell
    indices), so results are identical regardless of scheduling.
    """
    ts = tuple(float(t) for t in t_grid)
    if not ts:
        raise ValueError("t_grid must be nonempty")
    if any(not (0.0 < t <= 1.0) for t in ts):
        raise ValueError("t values must lie in (0, 1]")
    zs = sample_unit_vectors(norm, z_count, rng_stream(seed, "scan-z"))

    cells = [(zi, ti) for zi in range(z_count) for ti in range(len(ts))]

    def run_cell(cell):
        zi, ti = cell
        return estimate_r_tz(
            norm,
            zs[zi],
            ts[ti],
            samples,
            opts=opts,
            seed=_cell_seed(seed, zi, ti),
        )

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(run_cell, cells))
    else:
        rows = tuple(run_cell(c) for c in cells)
    return ScanResult(
        norm=norm,
        rows=rows,
        t_grid=ts,
        samples=samples,
        seed=seed,
        ccnf_threshold=ccnf_threshold,
        ccf_threshold=ccf_threshold,
    )


def _cell_seed(seed: int, zi: int, ti: int) -> int:
    return (int(seed) * 1_000_003 + zi * 1009 + ti) & (2**63 - 1)


def cap_containment_check(norm: NormSpec, u, v, samples: int = 256) -> float:
    """Max over sampled cap points s of ||s - w|| - r, for the chord u-v.

    The cap is the arc of the unit sphere cut off by the chord on the side
    away from the origin; w = (u+v)/2 and r = ||u-v||/2.  The chord must not
    pass through the origin (distance checked at 1e-9).  A nonpositive return
    certifies that every sampled cap point lies in w + r B_X.
    """
    if norm.dim != 2:
        raise ValueError("cap containment is a planar (dim 2) check")
    au = as_vector(u, 2, "u")
    av = as_vector(v, 2, "v")
    for name, vec in (("u", au), ("v", av)):
        if abs(float(eval_norm(norm, vec)) - 1.0) > 1e-9:
            raise ValueError(f"{name} must lie on the unit sphere")
    w = (au + av) / 2.0
    r = float(eval_norm(norm, au - av)) / 2.0
    if r == 0.0:
        return 0.0  # degenerate chord: the cap is the single point u

    # Segment-to-origin distance (Euclidean is fine for the hypothesis check:
    # "passes through the origin" is norm-independent).
    seg = av - au
    tt = np.clip(-np.dot(au, seg) / np.dot(seg, seg), 0.0, 1.0)
    if float(np.linalg.norm(au + tt * seg)) < 1e-9:
        raise ValueError("rejected: the chord passes through the origin")

    phi_u = float(np.arctan2(au[1], au[0]))
    phi_v = float(np.arctan2(av[1], av[0]))
    delta = (phi_v - phi_u) % (2.0 * np.pi)

    def arc_points(start, sweep, count):
        angles = start + sweep * np.linspace(0.0, 1.0, count)
        dirs = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
        lens = np.atleast_1d(eval_norm(norm, dirs))
        return dirs / lens[:, None]

    # The chord splits the sphere into two arcs; pick the one on the far side
    # of the chord line from the origin (test the arc midpoint).
    normal = np.array([-seg[1], seg[0]])
    offset = float(np.dot(normal, au))

    def far_side(pts):
        mid = pts[len(pts) // 2]
        return (np.dot(normal, mid) - offset) * offset > 0.0

    cand = arc_points(phi_u, delta, max(samples, 3))
    if not far_side(cand):
        cand = arc_points(phi_u, delta - 2.0 * np.pi, max(samples, 3))
        if not far_side(cand):
            raise ValueError("could not identify the far-side cap arc")
    dists = np.atleast_1d(eval_norm(norm, cand - w))
    return float(np.max(dists) - r)
