"""Matching a curve into a street map with free endpoints.

Map-matching finds the path in the graph minimizing the Fréchet distance to
a query curve.  Matched paths may start and end anywhere on edges, revisit
streets, and even turn around mid-edge, which matters for dead-end
excursions.
"""

import numpy as np

from pathdist import EmbeddedGraph, PolyLine, map_match_distance, match_decision

# A small map: a main street with a side loop and a dead end.
h = EmbeddedGraph(
    [
        ("a", (0, 0)),
        ("b", (100, 0)),
        ("c", (200, 0)),
        ("loop_n", (150, 60)),
        ("dead", (100, 80)),
    ],
    [
        ("main1", ("a", "b")),
        ("main2", ("b", "c")),
        ("side1", ("b", "loop_n", [(100, 0), (110, 40), (150, 60)])),
        ("side2", ("loop_n", "c", [(150, 60), (190, 40), (200, 0)])),
        ("stub", ("b", "dead")),
    ],
)

# A GPS-like trace running along the main street, 5 m off.
trace = PolyLine([(10, 5), (60, 5), (140, 5), (195, 5)])
print("offset trace distance:", round(map_match_distance(trace, h, 1e-3), 3))

# A trace that pokes halfway into the dead end and returns: the matched
# path mirrors the excursion without paying for the unvisited stub tail.
poke = PolyLine([(60, 0), (100, 0), (100, 40), (100, 0), (160, 0)])
print("dead-end excursion distance:", round(map_match_distance(poke, h, 1e-3), 3))

# Witness extraction: one concrete matched path at a given leash length.
ok, witness = match_decision(trace, h, 6.0, return_witness=True)
print("\nwitness for the offset trace at 6 m leash:")
print("  matched:", ok)
print("  path points:", np.round(witness.points, 1).tolist() if ok else None)
