"""Two-dimensional Weisfeiler-Leman refinement of colourings of ``V x V``.

A colouring is an ``n x n`` integer array.  One round replaces the colour
of ``(u, w)`` by the tuple

    (old colour, colour of (w, u), [u == w], sorted multiset of (c(u,v), c(v,w)))

and renumbers the distinct tuples in lexicographic order.  Since the old
colour leads the tuple, every new colour refines exactly one old colour and
the numbering is a function of the input data alone, so equal (or
isomorphic) inputs give equal (or correspondingly relabelled) outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .abelian import AbelianGroup
from .errors import InternalInvariantError


@dataclass(frozen=True, eq=False)
class RelationColoring:
    """A colouring of ordered pairs with dense colour ids ``0..k-1``.

    ``history`` records, per refinement round, the sorted table of distinct
    signatures; two colourings related by a bijection produce equal
    histories.
    """

    colours: np.ndarray
    history: tuple = field(default=())

    @property
    def n(self) -> int:
        return self.colours.shape[0]

    @property
    def num_colours(self) -> int:
        return int(self.colours.max()) + 1 if self.colours.size else 0

    def classes(self) -> list[np.ndarray]:
        """Pairs of each colour as an ``(m, 2)`` array."""
        return [np.argwhere(self.colours == i) for i in range(self.num_colours)]

    def same_history(self, other: "RelationColoring") -> bool:
        if len(self.history) != len(other.history):
            return False
        return all(a.shape == b.shape and (a == b).all() for a, b in zip(self.history, other.history))

    @staticmethod
    def from_array(arr: np.ndarray) -> "RelationColoring":
        arr = np.asarray(arr)
        _, dense = np.unique(arr, return_inverse=True)
        return RelationColoring(dense.reshape(arr.shape).astype(np.int64))


def _refine_once(col: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = col.shape[0]
    k = int(col.max()) + 1
    keys = col[:, :, None] * k + col.T[None, :, :]
    # keys[u, v, w] = (c(u,v), c(v,w)); gather all v for each (u, w)
    keys = np.sort(keys.transpose(0, 2, 1).reshape(n * n, n), axis=1)
    diag = np.eye(n, dtype=np.int64).reshape(-1, 1)
    rows = np.hstack([col.reshape(-1, 1), col.T.reshape(-1, 1), diag, keys])
    table, inverse = np.unique(rows, axis=0, return_inverse=True)
    return inverse.reshape(n, n).astype(np.int64), table


def wl_stabilize(initial: RelationColoring | np.ndarray) -> RelationColoring:
    """Refine until the number of colours stops growing."""
    if not isinstance(initial, RelationColoring):
        initial = RelationColoring.from_array(initial)
    col = RelationColoring.from_array(initial.colours).colours
    history = []
    count = int(col.max()) + 1
    while True:
        new, table = _refine_once(col)
        history.append(table)
        new_count = int(new.max()) + 1
        col = new
        if new_count == count:
            break
        count = new_count
    return RelationColoring(col, tuple(history))


def is_coherent(col: np.ndarray) -> bool:
    """Exhaustive check that triangle counts are constant on each colour."""
    k = int(col.max()) + 1
    onehot = np.stack([(col == i).astype(np.int64) for i in range(k)])
    for i in range(k):
        for j in range(k):
            P = onehot[i] @ onehot[j]
            for t in range(k):
                vals = P[onehot[t].astype(bool)]
                if len(vals) and (vals != vals[0]).any():
                    return False
    # transposes of colours are colours, and the diagonal is a union of colours
    for t in range(k):
        pairs = np.argwhere(col == t)
        if len(np.unique(col[pairs[:, 1], pairs[:, 0]])) != 1:
            return False
        d = pairs[:, 0] == pairs[:, 1]
        if d.any() and not d.all():
            return False
    return True


def cayley_coloring(G: AbelianGroup, seeds: Sequence[Iterable[int]]) -> RelationColoring:
    """Initial colouring: diagonal first, then off-diagonal pairs by seed membership.

    With a single seed ``X`` the colours are ``0`` (diagonal), ``1`` (arcs
    ``(g, x + g)``, ``x`` in ``X``) and ``2`` (everything else).
    """
    n = G.order
    diff = G.sub.T  # diff[u, w] = w - u
    code = np.ones((n, n), dtype=np.int64)
    for s, X in enumerate(seeds):
        member = np.zeros(n, dtype=bool)
        member[list(X)] = True
        code += (~member[diff]).astype(np.int64) << s
    code[np.arange(n), np.arange(n)] = 0
    return RelationColoring.from_array(code)


def translation_invariant_classes(G: AbelianGroup, col: np.ndarray) -> list[frozenset]:
    """The partition of ``G`` read off a translation-invariant colouring."""
    row = col[0]
    if not (col == row[G.sub.T]).all():
        raise InternalInvariantError("stabilised colouring is not translation invariant")
    classes: dict[int, set] = {}
    for g in range(G.order):
        classes.setdefault(int(row[g]), set()).add(g)
    return [frozenset(v) for _, v in sorted(classes.items())]


def ordered_cayley_partition(G: AbelianGroup, X: Iterable[int]) -> tuple[list[frozenset], RelationColoring]:
    """Basic sets of the least Cayley scheme containing ``X``, in WL colour order."""
    stab = wl_stabilize(cayley_coloring(G, [frozenset(X)]))
    return translation_invariant_classes(G, stab.colours), stab


def scheme_from_cayley_graph(G: AbelianGroup, X: Iterable[int]):
    """The S-ring of the least Cayley scheme in which ``R(X)`` is a union of relations."""
    from .sring import SRing, is_a_set

    X = frozenset(X)
    classes, _ = ordered_cayley_partition(G, X)
    A = SRing(G, classes, check=True)
    if not is_a_set(A, X):
        raise InternalInvariantError("connection set is not an A-set of its scheme")
    return A
