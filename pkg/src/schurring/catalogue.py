"""Exhaustive S-ring enumeration, the K_i tables, classification and separability checks."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .abelian import (
    AbelianGroup,
    Subgroup,
    all_abelian_groups,
    automorphism_tables,
    invariant_factors,
    make_group,
    make_hom,
    quotient,
    subgroup_generated,
    units,
    whole_group,
)
from .algiso import AlgebraicIso, enumerate_algisos, image_of_aset, _class_invariants
from .comiso import find_inducing, find_inducing_iso_bruteforce, induces
from .construct import (
    cyclotomic,
    generated_automorphism_group,
    gwr_sections,
    labels_to_classes,
    product_closure_labels,
)
from .errors import AdmissibilityError, ClassificationError, ShapeError, SizeError
from .sring import (
    SRing,
    _p_shape,
    is_a_set,
    quotient_sring,
    radical,
    restrict,
    sring_radical,
)

#: Largest group order accepted by :func:`enumerate_srings`.
ENUM_BOUND = 32


# -- enumeration ------------------------------------------------------------------------------


class _BitPerm:
    """Apply element permutations to subsets encoded as integer bitmasks."""

    def __init__(self, perms: np.ndarray):
        perms = np.atleast_2d(perms)
        s, n = perms.shape
        self.nchunks = (n + 7) // 8
        bitval = np.zeros((s, self.nchunks * 8), dtype=np.uint64)
        bitval[:, :n] = np.left_shift(np.uint64(1), perms.astype(np.uint64))
        bytes_ = np.arange(256, dtype=np.uint64)
        bits = ((bytes_[:, None] >> np.arange(8, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(bool)
        self.tables = np.zeros((s, self.nchunks, 256), dtype=np.uint64)
        for c in range(self.nchunks):
            chunk = bitval[:, 8 * c : 8 * c + 8]  # (s, 8)
            acc = np.zeros((s, 256), dtype=np.uint64)
            for j in range(8):
                acc |= np.where(bits[:, j][None, :], chunk[:, j][:, None], np.uint64(0))
            self.tables[:, c, :] = acc

    def apply(self, masks: np.ndarray) -> np.ndarray:
        """``out[i, j]`` is the image of ``masks[j]`` under permutation ``i``."""
        masks = masks.astype(np.uint64)
        out = np.zeros((self.tables.shape[0], len(masks)), dtype=np.uint64)
        for c in range(self.nchunks):
            byte = ((masks >> np.uint64(8 * c)) & np.uint64(255)).astype(np.int64)
            out |= self.tables[:, c, byte]
        return out


def _mask_of(elements: Iterable[int]) -> int:
    m = 0
    for g in elements:
        m |= 1 << int(g)
    return m


def _elements_of(mask: int) -> list[int]:
    out = []
    g = 0
    while mask:
        if mask & 1:
            out.append(g)
        mask >>= 1
        g += 1
    return out


@lru_cache(maxsize=None)
def _unit_subgroups(e: int) -> tuple[frozenset, ...]:
    U = units(e)
    found = {frozenset({1 % max(e, 1)}) if e > 1 else frozenset({0})}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for m in U:
                if m in H:
                    continue
                K = set(H)
                grow = True
                while grow:
                    grow = False
                    for x in list(K):
                        y = (x * m) % e
                        if y not in K:
                            K.add(y)
                            grow = True
                K = frozenset(K)
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return tuple(sorted(found, key=lambda H: (len(H), sorted(H))))


class _Enumerator:
    """Depth-first split search over partitions closed under the S-ring axioms.

    A node is a closed partition ``W`` (an S-ring) together with a set of
    classes already known to be basic sets of every S-ring in its subtree.
    The pending class ``X`` of least (size, least element) is either declared
    final or its element ``x0 = min X`` is given a proper class ``Y`` inside
    ``X``; the partition is then closed again and the branch is dropped if a
    final class was split.

    ``rational=True`` additionally restricts ``Y`` to the shapes allowed by
    power maps permuting basic sets, and marks power-map images of final
    classes as final.  ``up_to_aut=True`` keeps one candidate per orbit of
    the automorphisms of ``G`` fixing the node, and returns one S-ring per
    orbit of ``Aut(G)``.
    """

    def __init__(self, G: AbelianGroup, rational: bool, up_to_aut: bool, max_candidates: int = 1 << 22):
        self.G = G
        self.n = G.order
        self.rational = rational
        self.up_to_aut = up_to_aut
        self.max_candidates = max_candidates
        e = G.exponent
        self.units = [m for m in units(e)] if e > 1 else [1]
        self.scales = [G.scale(m) for m in self.units] if rational else [G.neg]
        if not rational:
            self.scales = [np.arange(self.n), G.neg]
        self.neg_perm = _BitPerm(G.neg[None, :])
        self.auts = automorphism_tables(G) if up_to_aut else None
        self.stats = {"nodes": 0, "closures": 0, "pruned": 0}

    # ---- helpers

    def _close(self, lab: np.ndarray) -> np.ndarray:
        self.stats["closures"] += 1
        return product_closure_labels(self.G, lab)

    def _propagate(self, lab: np.ndarray, fin: np.ndarray) -> np.ndarray:
        sizes = np.bincount(lab)
        fin = fin | (sizes[lab] == 1)
        while True:
            new = fin.copy()
            for s in self.scales:
                new |= fin[s]
            # a class is final when all of it is known final
            cls_fin = np.zeros(len(sizes), dtype=bool)
            np.logical_or.at(cls_fin, lab, new)
            new = cls_fin[lab]
            if (new == fin).all():
                return fin
            fin = new

    def _node_stabiliser(self, lab: np.ndarray, fin: np.ndarray, x0: int) -> np.ndarray:
        T = self.auts
        T = T[T[:, x0] == x0]
        rep = np.zeros(self.n, dtype=np.int64)
        first: dict[int, int] = {}
        for g, c in enumerate(lab.tolist()):
            rep[g] = first.setdefault(c, g)
        ok = (lab[T] == lab[T[:, rep]]).all(axis=1)
        ok &= (fin[T] == fin[None, :]).all(axis=1)
        return T[ok]

    def _candidates(self, lab: np.ndarray, X: list[int], x0: int) -> np.ndarray:
        G = self.G
        Xset = set(X)
        Xmask = _mask_of(X)
        if not self.rational:
            others = [x for x in X if x != x0]
            if 1 << len(others) > self.max_candidates:
                raise SizeError(f"{1 << len(others)} candidate classes exceed the search limit")
            masks = np.array([1 << x0], dtype=np.uint64)
            for x in others:
                masks = np.concatenate([masks, masks | np.uint64(1 << x)])
        else:
            e = G.exponent
            scale_img = {m: G.scale(m) for m in self.units}
            stab_x0 = frozenset(m for m in self.units if scale_img[m][x0] == x0)
            orbit_of_x0 = {int(scale_img[m][x0]) for m in self.units}
            # rational orbits of the other elements of X
            seen = set(orbit_of_x0)
            rat_orbits = []
            for y in X:
                if y in seen:
                    continue
                O = {int(scale_img[m][y]) for m in self.units}
                seen |= O
                rat_orbits.append(sorted(O))
            pieces = []
            for M in _unit_subgroups(e):
                if not stab_x0 <= M:
                    continue
                base = {int(scale_img[m][x0]) for m in M}
                if not base <= Xset:
                    continue
                masks = np.array([_mask_of(base)], dtype=np.uint64)
                for O in rat_orbits:
                    choices = []
                    done = set()
                    for y in O:
                        if y in done or y not in Xset:
                            continue
                        orb = {int(scale_img[m][y]) for m in M}
                        done |= orb
                        stab_y = frozenset(m for m in self.units if scale_img[m][y] == y)
                        if orb <= Xset and stab_y <= M:
                            choices.append(_mask_of(orb))
                    if choices:
                        masks = np.concatenate([masks] + [masks | np.uint64(c) for c in choices])
                    if len(masks) > self.max_candidates:
                        raise SizeError("too many candidate classes")
                pieces.append(masks)
            masks = np.unique(np.concatenate(pieces))
        masks = masks[masks != np.uint64(Xmask)]
        # the inverse of a basic set is a basic set: disjoint or equal, inside one class
        neg = self.neg_perm.apply(masks)[0]
        negx0_class = _mask_of(np.flatnonzero(lab == lab[G.neg[x0]]))
        ok = ((neg == masks) | ((neg & masks) == 0)) & ((neg & ~np.uint64(negx0_class)) == 0)
        return masks[ok]

    def _orbit_reps(self, masks: np.ndarray, stab: np.ndarray) -> np.ndarray:
        if len(stab) <= 1 or not len(masks):
            return masks
        bp = _BitPerm(stab)
        keep = np.ones(len(masks), dtype=bool)
        step = max(1, 4_000_000 // len(stab))
        for i in range(0, len(masks), step):
            chunk = masks[i : i + step]
            imgs = bp.apply(chunk)
            keep[i : i + step] = imgs.min(axis=0) == chunk
        return masks[keep]

    # ---- search

    def run(self) -> Iterator[np.ndarray]:
        lab0 = np.ones(self.n, dtype=np.int64)
        lab0[0] = 0
        if self.n == 1:
            yield np.zeros(1, dtype=np.int64)
            return
        lab = self._close(lab0)
        fin = self._propagate(lab, np.zeros(self.n, dtype=bool))
        yield from self._rec(lab, fin)

    def _rec(self, lab: np.ndarray, fin: np.ndarray) -> Iterator[np.ndarray]:
        self.stats["nodes"] += 1
        pending = np.flatnonzero(~fin)
        if not len(pending):
            yield lab
            return
        sizes = np.bincount(lab)
        best = min(set(lab[pending].tolist()), key=lambda c: (sizes[c], int(np.flatnonzero(lab == c)[0])))
        X = np.flatnonzero(lab == best).tolist()
        x0 = X[0]
        # branch 1: X is a basic set
        fin1 = fin.copy()
        fin1[X] = True
        yield from self._rec(lab, self._propagate(lab, fin1))
        # branch 2: x0 lies in a proper subset Y of X
        masks = self._candidates(lab, X, x0)
        if self.up_to_aut:
            masks = self._orbit_reps(masks, self._node_stabiliser(lab, fin, x0))
        K = int(lab.max()) + 1
        for m in masks.tolist():
            Y = _elements_of(int(m))
            lab2 = lab.copy()
            lab2[Y] = K
            new = self._close(lab2)
            # final classes (and Y) must survive the closure
            fin2 = fin.copy()
            fin2[Y] = True
            old = np.where(fin2, lab2, -1)
            f_idx = np.flatnonzero(fin2)
            pairs = np.unique(old[f_idx] * (self.n + 1) + new[f_idx])
            if len(pairs) != len(np.unique(old[f_idx])):
                self.stats["pruned"] += 1
                continue
            yield from self._rec(new, self._propagate(new, fin2))


def _rep_min(labels: np.ndarray) -> np.ndarray:
    first: dict[int, int] = {}
    return np.array([first.setdefault(c, g) for g, c in enumerate(labels.tolist())], dtype=np.int64)


def canonical_partition_key(G: AbelianGroup, labels: np.ndarray) -> bytes:
    """Least image of the partition under ``Aut(G)``, as bytes."""
    T = automorphism_tables(G)
    k = int(labels.max()) + 1
    s, n = T.shape
    # image partition under sigma: class of sigma(g) is sigma(class of g)
    M = np.full((s, k), n, dtype=np.int64)
    np.minimum.at(M, (np.repeat(np.arange(s), n), np.tile(labels, s)), T.ravel())
    Tinv = np.empty_like(T)
    Tinv[np.arange(s)[:, None], T] = np.arange(n)[None, :]
    rows = M[np.arange(s)[:, None], labels[Tinv]]
    order = np.lexsort(rows.T[::-1])
    return rows[order[0]].tobytes()


def enumerate_srings(
    G: AbelianGroup,
    method: str = "rational",
    up_to: str = "none",
    bound: int = ENUM_BOUND,
    stats: dict | None = None,
) -> list[SRing]:
    """Every S-ring over ``G`` (``up_to='none'``) or one per ``Aut(G)``-orbit (``'aut'``).

    ``method='partition'`` uses only the S-ring axioms to prune;
    ``method='rational'`` also uses the fact that power maps by integers
    coprime to ``|G|`` permute basic sets.  Output order is sorted by
    (rank, partition key).
    """
    if G.order > bound:
        raise SizeError(f"|G| = {G.order} exceeds the enumeration bound {bound}")
    if method not in ("rational", "partition"):
        raise ValueError(f"unknown method {method!r}")
    if up_to not in ("none", "aut"):
        raise ValueError(f"unknown mode {up_to!r}")
    en = _Enumerator(G, rational=(method == "rational"), up_to_aut=True)
    reps: dict[bytes, np.ndarray] = {}
    for lab in en.run():
        key = canonical_partition_key(G, lab)
        if key not in reps:
            reps[key] = _rep_min(lab)
    if stats is not None:
        stats.update(en.stats)
        stats["orbits"] = len(reps)
    if up_to == "aut":
        out = [SRing(G, labels_to_classes(r)) for r in reps.values()]
    else:
        T = automorphism_tables(G)
        seen: dict[bytes, np.ndarray] = {}
        for r in reps.values():
            for sigma in T:
                Tinv = np.empty_like(sigma)
                Tinv[sigma] = np.arange(G.order)
                img = _rep_min(r[Tinv])
                seen.setdefault(img.tobytes(), img)
        out = [SRing(G, labels_to_classes(r)) for r in seen.values()]
    out.sort(key=lambda A: (A.rank, A.key))
    return out


def count_srings(G: AbelianGroup, method: str = "rational") -> tuple[int, int]:
    """``(number of S-rings, number of Aut(G)-orbits)``."""
    reps = enumerate_srings(G, method=method, up_to="aut")
    T = automorphism_tables(G)
    total = 0
    for A in reps:
        imgs = set()
        for sigma in T:
            Tinv = np.empty_like(sigma)
            Tinv[sigma] = np.arange(G.order)
            imgs.add(_rep_min(A.cls[Tinv]).tobytes())
        total += len(imgs)
    return total, len(reps)


# -- tables ------------------------------------------------------------------------------------


@dataclass(frozen=True)
class TableEntry:
    """One row of the classification tables: generators as formal maps on ``(a, b)``."""

    p: int
    index: int
    generators: tuple  # ((image of a, image of b), ...)
    order: int
    min_k: int

    def describe(self) -> str:
        return ", ".join(f"(a,b) -> ({ia},{ib})" for ia, ib in self.generators)


_TABLE_2 = {
    0: ((("a", "b"),), 1, 2),
    1: ((("a^-1", "b"),), 2, 3),
    2: ((("a1 a^-1", "b"),), 2, 3),
    3: ((("a^-1", "b a1"),), 2, 3),
    4: ((("a1 a^-1", "b a1"),), 2, 3),
    5: ((("b a2 a", "b a1"), ("a^-1", "b")), 4, 4),
    6: ((("b a2 a", "b a1"), ("a1 a^-1", "b")), 4, 4),
    7: ((("b a^-1", "b"),), 2, 4),
    8: ((("b a1 a^-1", "b"),), 2, 4),
    9: ((("b a2 a", "b a1"),), 2, 3),
    10: ((("b a2 a^-1", "b a1"),), 2, 4),
}

_TABLE_3 = {
    0: ((("a", "b"),), 1, 2),
    1: ((("a", "b^2"),), 2, 2),
    2: ((("a^-1", "b"),), 2, 2),
    3: ((("a^-1", "b"), ("a", "b^2")), 4, 2),
    4: ((("a^-1", "b^2"),), 2, 2),
    5: ((("b a^-1", "b"),), 2, 2),
    6: ((("b a", "b a1"),), 3, 3),
    7: ((("b a", "b a1"), ("a", "b^2 a1")), 6, 3),
    8: ((("b a", "b a1^2"), ("a^-1", "b a1")), 6, 3),
    9: ((("b a", "b a1^2"), ("a^-1", "b^2")), 6, 3),
}

TABLES = {
    2: {i: TableEntry(2, i, *row) for i, row in _TABLE_2.items()},
    3: {i: TableEntry(3, i, *row) for i, row in _TABLE_3.items()},
}

_TOKEN = re.compile(r"^(a1|a2|a|b)(?:\^(-?\d+))?$")


def d_group(p: int, k: int) -> AbelianGroup:
    """``D = B x A`` with ``|B| = p`` and ``|A| = p^k``; ``b = (1,0)``, ``a = (0,1)``."""
    return make_group([p, p**k])


def d_elements(p: int, k: int) -> dict[str, tuple[int, int]]:
    out = {"a": (0, 1), "b": (1, 0), "a1": (0, p ** (k - 1))}
    if k >= 2:
        out["a2"] = (0, p ** (k - 2))
    return out


def eval_word(word: str, p: int, k: int) -> tuple[int, int]:
    """Evaluate a product such as ``b a2 a^-1`` in ``D`` (written additively)."""
    syms = d_elements(p, k)
    x, y = 0, 0
    for tok in word.split():
        m = _TOKEN.match(tok)
        if not m or m.group(1) not in syms:
            raise ValueError(f"bad token {tok!r}")
        e = int(m.group(2) or 1)
        sx, sy = syms[m.group(1)]
        x, y = x + e * sx, y + e * sy
    return (x % p, y % p**k)


def table_entry(p: int, i: int, k: int) -> list:
    """Automorphisms of ``C_p x C_{p^k}`` generating ``K_i`` from the table for ``p``."""
    if p not in TABLES or i not in TABLES[p]:
        raise AdmissibilityError(f"no table row K_{i} for p = {p}")
    row = TABLES[p][i]
    if k < row.min_k:
        raise AdmissibilityError(f"K_{i} for p = {p} requires k >= {row.min_k}")
    G = d_group(p, k)
    out = []
    for ia, ib in row.generators:
        f = make_hom(G, G, [eval_word(ib, p, k), eval_word(ia, p, k)])
        if not f.is_bijective():
            raise AdmissibilityError(f"K_{i} generator is not an automorphism at k = {k}")
        out.append(f)
    return out


def table_group_order(p: int, i: int, k: int) -> int:
    return len(generated_automorphism_group(d_group(p, k), table_entry(p, i, k)))


@lru_cache(maxsize=None)
def table_sring(p: int, i: int, k: int) -> SRing:
    """``cyc(K_i, D)``."""
    return cyclotomic(table_entry(p, i, k), d_group(p, k))


def admissible_rows(p: int, k: int) -> list[int]:
    return [i for i, row in TABLES[p].items() if k >= row.min_k]


# -- classification ------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClassificationVerdict:
    statement: str  # element-1..5 or sring-1..3
    tag: str  # rank2 | tensor-split | wreath/gwr | cyclotomic
    table_index: int | None = None
    witness: dict = field(default_factory=dict)


def tensor_split(A: SRing, H: Subgroup, L: Subgroup) -> bool:
    """True iff ``G = H + L`` directly and every basic set is ``X_H + X_L``."""
    G = A.group
    if H.order * L.order != G.order or len(H.elements & L.elements) != 1:
        return False
    if not is_a_set(A, H.elements) or not is_a_set(A, L.elements):
        return False
    CH = [X for X in A.classes if X <= H.elements]
    CL = [X for X in A.classes if X <= L.elements]
    prod = set()
    for XH in CH:
        for XL in CL:
            prod.add(frozenset(int(G.add[x, y]) for x in XH for y in XL))
    return prod == set(A.classes)


def _restricted_rank(A: SRing, H: Subgroup) -> int:
    return sum(1 for X in A.classes if X <= H.elements)


def find_cayley_iso_to(A: SRing, B: SRing) -> np.ndarray | None:
    """An automorphism ``sigma`` of ``G`` mapping every basic set of ``A`` onto one of ``B``."""
    if A.group != B.group or A.rank != B.rank or sorted(A.sizes.tolist()) != sorted(B.sizes.tolist()):
        return None
    T = automorphism_tables(A.group)
    M = B.cls[T]
    ok = (M == M[:, A.reps[A.cls]]).all(axis=1)
    # class images must be whole classes: sizes agree
    for idx in np.flatnonzero(ok):
        sigma = T[idx]
        if all(len({int(B.cls[sigma[x]]) for x in X}) == 1 and B.sizes[B.cls[sigma[min(X)]]] == len(X) for X in A.classes):
            return sigma
    return None


def _element_check(A: SRing, p: int) -> ClassificationVerdict | None:
    G = A.group
    subs = [H for H in A.a_subgroups if H.order == p]
    if A.rank == 2:
        return ClassificationVerdict("element-1", "rank2")
    for H in subs:
        for L in subs:
            if tensor_split(A, H, L):
                return ClassificationVerdict("element-2", "tensor-split", witness={"H": H, "L": L})
    for L in subs:
        if all(X <= L.elements or L.elements <= radical(G, X).elements for X in A.classes):
            return ClassificationVerdict("element-3", "wreath/gwr", witness={"U": L, "L": L})
    if p == 3:
        inv = cyclotomic([make_hom(G, G, [(2, 0), (0, 2)])], G)
        if A == inv:
            return ClassificationVerdict("element-4", "cyclotomic", witness={"K": "inversion"})
        sigma = make_hom(G, G, [(0, 2), (1, 0)])  # a1 -> b, b -> a1^2 with a1 = a when k = 1
        B = cyclotomic([sigma], G)
        iso = find_cayley_iso_to(A, B)
        if iso is not None:
            return ClassificationVerdict("element-5", "cyclotomic", witness={"cayley_iso": iso, "target": B})
    return None


def _gwr_moreover(A: SRing, w, p: int) -> bool:
    G = A.group
    S = quotient(G, w.U, w.L)
    Q = quotient_sring(A, S)
    if Q.rank == Q.group.order or S.quotient.order <= 4:
        return True
    if w.L.order != p:
        return False
    AU, _ = restrict(A, w.U)
    try:
        return sring_radical(AU).order == 1
    except ShapeError:
        return False


def classify(A: SRing) -> ClassificationVerdict:
    """The first matching statement of the classification, with a witness."""
    G = A.group
    p, k = _p_shape(G)
    if len(invariant_factors(G)) != 2 or p not in (2, 3):
        raise ShapeError(f"{G.name} is not C_p x C_p^k with p in {{2, 3}}")
    if k == 1:
        v = _element_check(A, p)
        if v is None:
            raise ClassificationError(f"no statement matches {A!r}")
        return v
    rad = sring_radical(A)
    if rad.order == 1:
        for H in A.a_subgroups:
            if _restricted_rank(A, H) != 2 or H.order < p:
                continue
            for L in A.a_subgroups:
                if L.order <= p and tensor_split(A, H, L):
                    tag = "rank2" if A.rank == 2 else "tensor-split"
                    return ClassificationVerdict("sring-1", tag, witness={"H": H, "L": L})
    else:
        for w in gwr_sections(A):
            if w.proper and _gwr_moreover(A, w, p):
                return ClassificationVerdict("sring-2", "wreath/gwr", witness={"U": w.U, "L": w.L, "gwr": w})
    if rad.order == 1:
        for i in admissible_rows(p, k):
            B = table_sring(p, i, k)
            sigma = find_cayley_iso_to(A, B)
            if sigma is not None:
                return ClassificationVerdict("sring-3", "cyclotomic", i, {"cayley_iso": sigma, "target": B})
    raise ClassificationError(f"no statement matches {A!r}")


# -- separability ------------------------------------------------------------------------------------


@dataclass
class SeparabilityReport:
    lines: list = field(default_factory=list)
    induced: int = 0
    empty: int = 0
    errors: int = 0
    brute_mismatch: int = 0
    methods: dict = field(default_factory=dict)

    @property
    def separable(self) -> bool:
        return self.empty == 0 and self.errors == 0

    def text(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


def algebraic_fingerprint(A: SRing) -> tuple:
    return (A.group.order, A.rank, tuple(sorted(_class_invariants(A))))


@lru_cache(maxsize=None)
def _target_catalogue(n: int, method: str) -> tuple:
    out = []
    for H in all_abelian_groups(n):
        for B in enumerate_srings(H, method=method, up_to="aut"):
            out.append((H, B, algebraic_fingerprint(B)))
    return tuple(out)


def check_separability(
    A: SRing,
    targets: Iterable | None = None,
    a_id: str = "A",
    confirm_brute: bool = False,
    method: str = "rational",
    report: SeparabilityReport | None = None,
) -> SeparabilityReport:
    """Try to induce every algebraic isomorphism from ``A`` into the targets.

    ``targets`` defaults to one S-ring per ``Aut(G')``-orbit over every
    abelian group ``G'`` of order ``|G|``; this covers all targets because
    composing with a group automorphism of ``G'`` preserves inducibility.
    """
    rep = report if report is not None else SeparabilityReport()
    fp = algebraic_fingerprint(A)
    if targets is None:
        pool = [(H, B, f) for H, B, f in _target_catalogue(A.group.order, method) if f == fp]
    else:
        pool = [(B.group, B, None) for B in targets]
    for H, B, _ in pool:
        for idx, phi in enumerate(enumerate_algisos(A, B)):
            verdict, tag = "error", "-"
            try:
                res = find_inducing(A, B, phi.class_map)
                if res is None:
                    verdict, tag = "empty", "brute"
                else:
                    f, tag = res
                    verdict = "induced" if induces(f, A, B, phi.class_map) else "error"
            except SizeError:
                verdict, tag = "error", "scale"
            if confirm_brute and A.group.order <= 16:
                g = find_inducing_iso_bruteforce(A, B, phi.class_map)
                if (g is None) != (verdict == "empty"):
                    rep.brute_mismatch += 1
            rep.lines.append(f"A={a_id} G'={H.name} phi={idx} verdict={verdict} method={tag}")
            if verdict == "induced":
                rep.induced += 1
                rep.methods[tag] = rep.methods.get(tag, 0) + 1
            elif verdict == "empty":
                rep.empty += 1
            else:
                rep.errors += 1
    return rep


def separability_sweep(
    G: AbelianGroup, method: str = "rational", confirm_brute: bool = False, sources: str = "aut"
) -> SeparabilityReport:
    """Check every S-ring over ``G`` (``sources='none'``) or one per ``Aut(G)``-orbit (``'aut'``)."""
    rep = SeparabilityReport()
    for i, A in enumerate(enumerate_srings(G, method=method, up_to=sources)):
        check_separability(A, a_id=str(i), confirm_brute=confirm_brute, method=method, report=rep)
    return rep


# -- target group shape ------------------------------------------------------------------------------


def _d_subgroups(p: int, k: int) -> dict[str, Subgroup]:
    G = d_group(p, k)
    A_ = lambda l: subgroup_generated(G, [(0, p ** (k - l))])
    D_ = lambda l: subgroup_generated(G, [g for g in range(G.order) if G.orders[g] <= p**l])
    return {"A1": A_(1), "Ak-1": A_(k - 1), "Dk-2": D_(k - 2), "D1": D_(1), "A2": A_(2)}


def power_preimage_count(G: AbelianGroup, p: int, H: Subgroup) -> int:
    """``|{x in G : p x in H}|``."""
    img = G.scale(p)
    return int(np.isin(img, list(H.elements)).sum())


def power_preimage_excludes(G: AbelianGroup, p: int, needed: int) -> bool:
    """True when no subgroup ``H`` of order ``p`` has ``needed`` or more ``p``-th roots."""
    from .abelian import all_subgroups

    return all(power_preimage_count(G, p, H) < needed for H in all_subgroups(G) if H.order == p)


def verify_target_group_shape(A: SRing, phi: AlgebraicIso, B: SRing) -> dict:
    """Recompute the facts that pin down the target group of ``phi``."""
    D, H = A.group, B.group
    p, k = _p_shape(D)
    subs = _d_subgroups(p, k)
    out: dict = {}
    cyc_candidates = [S for S in A.a_subgroups if S.order == p ** (k - 1) and S.is_cyclic()]
    cyc_images = [subgroup_generated(H, image_of_aset(phi, S.elements)) for S in cyc_candidates]
    out["cyclic_image"] = bool(cyc_images) and all(S.is_cyclic() for S in cyc_images)
    F2 = cyc_images[0] if cyc_images else None
    Dk2 = subgroup_generated(H, image_of_aset(phi, subs["Dk-2"].elements))
    out["second_subgroup"] = Dk2.order == p ** (k - 1) and (F2 is None or Dk2.elements != F2.elements)
    A1 = subgroup_generated(H, image_of_aset(phi, subs["A1"].elements))
    out["A1_in_cyclic"] = F2 is not None and A1.order == p and A1.elements <= F2.elements
    Q = quotient(H, whole_group(H), A1)
    out["quotient_shape"] = invariant_factors(Q.quotient) == (p, p ** (k - 1))
    if k == 3:
        W = subgroup_generated(H, image_of_aset(phi, subs["D1"].elements))
        out["W_condition"] = (
            W.order == p * p
            and not W.is_cyclic()
            and F2 is not None
            and len(W.elements & F2.elements) == p
            and len(invariant_factors(quotient(H, whole_group(H), W).quotient)) <= 1
        )
    out["hypotheses"] = all(v for key, v in out.items())
    out["isomorphic"] = invariant_factors(H) == invariant_factors(D)
    return out
