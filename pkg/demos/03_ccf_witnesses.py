"""CCF witnesses: confirmation, rejection, amplification, two-ball reduction.

A set is CCF when one of its Chebyshev centers is also a farthest point of
the set from some viewpoint.  On a flat face of the l1 ball that happens
easily; in the Euclidean plane it never does.  A confirmed witness can be
amplified (viewpoint pushed arbitrarily far) and reduced to the canonical
two-ball body B[c, r] ∩ B[y, R].
"""

import numpy as np

from ccflab import (
    CcfWitness,
    PointSet,
    amplify_witness,
    build_two_ball_set,
    check_two_ball_properties,
    distance,
    pnorm,
    verify_ccf_witness,
)

# l1 plane: the midpoint of a unit-sphere face segment is a center AND a
# farthest point from the origin.
A = PointSet(pnorm(2, 1), [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]])
verdict = verify_ccf_witness(CcfWitness(A, 2, [0.0, 0.0]))
print("l1 witness:", verdict.status, "| radius", verdict.chebyshev_radius)

# Euclidean plane: the same shape of claim fails (the endpoints always win).
B = PointSet(pnorm(2, 2), [[1.0, 0.0], [-1.0, 0.0], [0.0, 0.0]])
bad = verify_ccf_witness(CcfWitness(B, 2, [0.0, 5.0]))
print("euclidean claim:", bad.status, "| farthest margin", round(bad.farthest_margin, 6))

# Amplification: y_t = t z + (1-t) c keeps c farthest while ||y_t - c|| grows.
c, z = np.array([0.5, 0.5]), np.zeros(2)
for t in (1.0, 3.0, 10.0):
    y = amplify_witness(A, c, z, t)
    print(f"t={t:>4}: y = {y},  ||y - c|| = {distance(A.norm, y, c):.1f},",
          verify_ccf_witness(CcfWitness(A, 2, y)).status)

# Two-ball reduction: the body B[c, r] ∩ B[y, R] keeps the same radius,
# center, and farthest relation; sampled checks below.
U = build_two_ball_set(A, c, 1.0, z, seed=0)
report = check_two_ball_properties(U, A, samples=8000)
print("two-ball body: contains A:", report.containment_ok,
      "| sample radius", round(report.sample_radius, 4), "<= r:", report.sample_radius_ok,
      "| no sample beats c from y:", report.farthest_ok)
