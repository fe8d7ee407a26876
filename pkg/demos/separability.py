"""Separability at desk scale.

Every algebraic isomorphism from an S-ring over C2xC8 to an S-ring over
any abelian group of order 16 is induced by a point bijection.  Over
C4xC4 this fails, and the script prints the first algebraic isomorphism
with no inducing bijection.
"""

import time

from schurring.abelian import make_group
from schurring.catalogue import separability_sweep

for name, factors in [("C2xC8", [2, 8]), ("C4xC4", [4, 4])]:
    t = time.time()
    rep = separability_sweep(make_group(factors))
    print(f"{name}: separable={rep.separable} induced={rep.induced} empty={rep.empty} "
          f"methods={dict(sorted(rep.methods.items()))} ({time.time() - t:.0f}s)")
    empty = [line for line in rep.lines if "verdict=empty" in line]
    if empty:
        print("  first witness:", empty[0])
