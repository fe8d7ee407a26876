"""A first look: the 5-cycle as a Cayley graph over C5.

Builds the least Cayley scheme containing the graph, prints its basic
sets and a few structure constants, then checks them against the
intersection numbers of the scheme.
"""

import numpy as np

from schurring.abelian import make_group
from schurring.sring import dump, structure_constant
from schurring.wl import scheme_from_cayley_graph

G = make_group([5])
A = scheme_from_cayley_graph(G, [1, 4])
print(dump(A))

# c^Z_{X,Y}: ways to write a fixed z in Z as x + y
for X, Y, Z in [(1, 1, 0), (1, 1, 2), (1, 2, 1)]:
    print(f"c^{Z}_{{{X},{Y}}} = {structure_constant(A, X, Y, Z)}")

same = np.array_equal(A.tensor, A.scheme().intersection_numbers())
print("tensor equals intersection numbers:", same)
