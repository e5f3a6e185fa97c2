"""Tour of the declarative norm families.

Builds one norm of each family, evaluates a few vectors, probes the
triangle-inequality defect that separates strictly convex norms from
polyhedral ones, and round-trips a spec through JSON.
"""

import json

import numpy as np

from ccflab import (
    convexity_defect,
    distance,
    eval_norm,
    is_strictly_convex_family,
    norm_from_dict,
    norm_to_dict,
    pnorm,
    sum_composite,
    sup_plus_weighted_l2,
    weighted_pnorm,
)

specs = {
    "l1": pnorm(2, 1),
    "l2": pnorm(2, 2),
    "l4": pnorm(2, 4),
    "linf": pnorm(2, float("inf")),
    "l1 + 0.5 l2": sum_composite(2, [(1.0, pnorm(2, 1)), (0.5, pnorm(2, 2))]),
    "sup + weighted l2": sup_plus_weighted_l2([0.25, 0.0625]),
    "weighted l3": weighted_pnorm(3.0, [2.0, 0.5]),
}

x = np.array([1.0, 1.0])
print(f"evaluating each family at x = {x}:")
for name, spec in specs.items():
    flag = "strictly convex" if is_strictly_convex_family(spec) else "has flat faces"
    print(f"  {name:>18}: ||x|| = {eval_norm(spec, x):.6f}   ({flag})")

print()
print("triangle-inequality defect ||u|| + ||v|| - ||u+v|| for u=(1,0), v=(0,1):")
for name, spec in specs.items():
    d = convexity_defect(spec, [1.0, 0.0], [0.0, 1.0])
    print(f"  {name:>18}: {d:.6f}" + ("   <- exactly zero: u,v sit on one face" if d == 0 else ""))

print()
print("distances come from the same evaluator:")
print("  l1 distance (1,1)->(1,0):", distance(specs["l1"], [1, 1], [1, 0]))

blob = json.dumps(norm_to_dict(specs["sup + weighted l2"]))
print()
print("JSON round trip:", blob)
assert norm_from_dict(json.loads(blob)) == specs["sup + weighted l2"]
print("round trip OK")
