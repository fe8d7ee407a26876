"""Cayley graph isomorphism across groups.

Takes an S-ring over C2xC8, an algebraic isomorphism onto an S-ring over
C4xC4 (when one exists), and unions of matching basic sets as connection
sets.  The pipeline decides isomorphism and returns a point map, which
is checked edge by edge.
"""

import numpy as np

from schurring.abelian import make_group
from schurring.algiso import enumerate_algisos
from schurring.catalogue import enumerate_srings
from schurring.comiso import graph_iso_pipeline_result

G, H = make_group([2, 8]), make_group([4, 4])
targets = enumerate_srings(H, up_to="aut")
found = None
for A in enumerate_srings(G, up_to="aut"):
    if A.rank < 4:
        continue
    for B in targets:
        phi = next(iter(enumerate_algisos(A, B)), None)
        if phi is not None:
            found = A, B, phi
            break
    if found:
        break

A, B, phi = found
X = sorted(A.classes[1] | A.classes[2])
Y = sorted(B.classes[phi.class_map[1]] | B.classes[phi.class_map[2]])
print("X =", [G.literal(x) for x in X])
print("Y =", [H.literal(y) for y in Y])
res = graph_iso_pipeline_result(G, X, H, Y)
print("isomorphic:", res.isomorphic, "reason:", res.reason)
if res.isomorphic:
    t = res.certificate.point_map.table
    EX = {(u, int(G.add[u, x])) for u in range(G.order) for x in X}
    EY = {(v, int(H.add[v, y])) for v in range(H.order) for y in Y}
    print("strategy:", res.certificate.detail)
    print("edges map onto edges:", {(int(t[u]), int(t[w])) for u, w in EX} == EY)

rng = np.random.default_rng(0)
Z = rng.choice(np.arange(1, 16), size=len(X), replace=False).tolist()
print("random set of the same size:", graph_iso_pipeline_result(G, X, H, Z).reason)
