"""Instantiate every row of the two tables at its minimal k.

Prints the order of the generated automorphism group next to the
tabulated one, the order of the S-ring radical and the valency profile.
Two rows are worth a second look: p=2 K9 at k=3, whose generators
generate a group of order 4, and p=3 K9, whose highest basic set does
not generate the ring on its own.
"""

from schurring.catalogue import TABLES, table_group_order, table_sring
from schurring.construct import closure
from schurring.sring import highest_basic_sets, sring_radical, valency_profile

for p in (2, 3):
    for e in TABLES[p].values():
        k = e.min_k
        A = table_sring(p, e.index, k)
        order = table_group_order(p, e.index, k)
        flag = "" if order == e.order and sring_radical(A).order == 1 else "  <-- mismatch"
        print(f"p={p} K{e.index:<2} k={k} |D|={A.group.order:<3} order={order} (table {e.order}) "
              f"|rad|={sring_radical(A).order} N={sorted(valency_profile(A))}{flag}")

A = table_sring(3, 9, 3)
X = sorted(A.classes[highest_basic_sets(A)[0]])
C = closure(A.group, [X])
print(f"\np=3 K9 k=3: rank {A.rank}; closure of one highest basic set has rank {C.rank}")
