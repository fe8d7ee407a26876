"""Constructors for S-rings and detection of generalized wreath products."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .abelian import AbelianGroup, GroupHom, Section, Subgroup, make_group, quotient
from .sring import SRing, product_counts, radical
from .wl import cayley_coloring, translation_invariant_classes, wl_stabilize


def full_group_ring(G: AbelianGroup) -> SRing:
    return SRing(G, [[g] for g in range(G.order)])


def rank2(G: AbelianGroup) -> SRing:
    if G.order < 2:
        raise ValueError("the rank 2 S-ring needs |G| >= 2")
    return SRing(G, [[0], range(1, G.order)])


def trivial_sring(G: AbelianGroup) -> SRing:
    """The only S-ring over the one-element group (rank 1)."""
    if G.order != 1:
        raise ValueError("expected the trivial group")
    return SRing(G, [[0]])


def _as_table(G: AbelianGroup, f) -> np.ndarray:
    if isinstance(f, GroupHom):
        if f.source != G or f.target != G:
            raise ValueError("automorphism must map the group to itself")
        t = f.table
    else:
        t = np.asarray(f, dtype=np.int64)
    if t.shape != (G.order,) or len(np.unique(t)) != G.order:
        raise ValueError("map is not a bijection of the group")
    return t


def generated_automorphism_group(G: AbelianGroup, K: Sequence) -> np.ndarray:
    """All elements of the group generated by ``K``, as permutation rows."""
    gens = [_as_table(G, f) for f in K]
    ident = np.arange(G.order)
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                c = g[h]
                key = c.tobytes()
                if key not in seen:
                    seen[key] = c
                    nxt.append(c)
        frontier = nxt
    return np.array(sorted(seen.values(), key=lambda r: tuple(r)), dtype=np.int64)


def cyclotomic(K: Sequence, G: AbelianGroup) -> SRing:
    """``cyc(K, G)``: basic sets are the orbits of the group generated by ``K``."""
    group = generated_automorphism_group(G, K)
    orbits = []
    seen = np.zeros(G.order, dtype=bool)
    for g in range(G.order):
        if not seen[g]:
            orb = np.unique(group[:, g])
            seen[orb] = True
            orbits.append(orb.tolist())
    return SRing(G, orbits)


def tensor(A1: SRing, A2: SRing) -> SRing:
    G1, G2 = A1.group, A2.group
    G = make_group(G1.factors + G2.factors)
    n2 = G2.order
    classes = [[x1 * n2 + x2 for x1 in X1 for x2 in X2] for X1 in A1.classes for X2 in A2.classes]
    return SRing(G, classes)


def wreath(A1: SRing, A2: SRing) -> SRing:
    """Classes ``X1 x {e}`` and ``G1 x X2`` for ``X2`` different from ``{e}``."""
    G1, G2 = A1.group, A2.group
    G = make_group(G1.factors + G2.factors)
    n2 = G2.order
    classes = [[x1 * n2 for x1 in X1] for X1 in A1.classes]
    for X2 in A2.classes[1:]:
        classes.append([x1 * n2 + x2 for x1 in range(G1.order) for x2 in X2])
    return SRing(G, classes)


@dataclass(frozen=True, eq=False)
class GwrWitness:
    """An A-section ``U/L`` such that ``L <= rad(X)`` for every class outside ``U``."""

    U: Subgroup
    L: Subgroup
    proper: bool

    @cached_property
    def section(self) -> Section:
        return quotient(self.U.group, self.U, self.L)

    def __repr__(self):
        return f"GwrWitness(|U|={self.U.order}, |L|={self.L.order}, proper={self.proper})"


def gwr_sections(A: SRing) -> list[GwrWitness]:
    """Every A-section ``U/L`` for which ``A`` is the ``U/L``-wreath product."""
    G = A.group
    rads = [radical(G, X).elements for X in A.classes]
    out = []
    subs = A.a_subgroups
    for U in subs:
        outside = [i for i, X in enumerate(A.classes) if not X <= U.elements]
        common = frozenset(range(G.order))
        for i in outside:
            common &= rads[i]
        for L in subs:
            if L.elements <= U.elements and L.elements <= common:
                proper = L.order > 1 and U.order < G.order
                out.append(GwrWitness(U, L, proper))
    return out


def is_gwr(A: SRing, U: Subgroup, L: Subgroup) -> bool:
    G = A.group
    if not L.elements <= U.elements:
        return False
    return all(X <= U.elements or L.elements <= radical(G, X).elements for X in A.classes)


def labels_to_classes(labels: np.ndarray) -> list[frozenset]:
    out: dict[int, set] = {}
    for g, c in enumerate(labels.tolist()):
        out.setdefault(c, set()).add(g)
    return [frozenset(v) for v in out.values()]


def _seed_labels(G: AbelianGroup, seeds: Iterable[Iterable[int]]) -> np.ndarray:
    code = np.zeros(G.order, dtype=np.int64)
    for s, X in enumerate(seeds):
        member = np.zeros(G.order, dtype=bool)
        member[list(X)] = True
        code += member.astype(np.int64) << s
    code = code + 1
    code[0] = 0
    return code


def product_closure_labels(G: AbelianGroup, labels: np.ndarray) -> np.ndarray:
    """Coarsest S-ring partition refining ``labels`` (labels must isolate 0).

    Repeatedly splits classes by the inverse class and by the product count
    vectors ``z -> #{(x, y) in X x Y : x + y = z}`` until nothing changes.
    """
    _, lab = np.unique(labels, return_inverse=True)
    lab = lab.astype(np.int64)
    if (lab == lab[0]).sum() != 1:
        lab = lab + 1
        lab[0] = 0
        _, lab = np.unique(lab, return_inverse=True)
    k = int(lab.max()) + 1
    while True:
        I = np.zeros((k, G.order), dtype=np.int8)
        I[lab, np.arange(G.order)] = 1
        counts = product_counts(G, I)
        rows = np.ascontiguousarray(
            np.hstack([lab[:, None], lab[G.neg][:, None], counts.reshape(k * k, G.order).T]), dtype=np.int64
        )
        # rows as opaque byte strings: much faster than unique(axis=0)
        packed = rows.view(np.dtype((np.void, rows.shape[1] * 8))).ravel()
        _, new = np.unique(packed, return_inverse=True)
        new = new.reshape(-1).astype(np.int64)
        kk = int(new.max()) + 1
        lab = new
        if kk == k:
            return lab
        k = kk


def product_closure(G: AbelianGroup, seeds: Iterable[Iterable[int]]) -> SRing:
    """Closure computed by direct refinement; independent of the WL engine."""
    lab = product_closure_labels(G, _seed_labels(G, seeds))
    return SRing(G, labels_to_classes(lab))


def closure(G: AbelianGroup, seeds: Iterable[Iterable[int]]) -> SRing:
    """The least S-ring in which every seed is an A-set, via WL on ``G x G``."""
    seeds = [frozenset(X) for X in seeds]
    stab = wl_stabilize(cayley_coloring(G, seeds))
    return SRing(G, translation_invariant_classes(G, stab.colours))


def is_coarsening(A: SRing, B: SRing) -> bool:
    """True iff every basic set of ``A`` is a union of basic sets of ``B``."""
    if A.group != B.group:
        return False
    for X in A.classes:
        touched = {int(B.cls[x]) for x in X}
        if sum(int(B.sizes[c]) for c in touched) != len(X):
            return False
    return True


def sring_from_labels(G: AbelianGroup, labels: np.ndarray, check: bool = True) -> SRing:
    return SRing(G, labels_to_classes(np.asarray(labels)), check=check)
