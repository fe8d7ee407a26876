"""S-rings over finite abelian groups and their basic invariants.

An S-ring is stored by its partition of the group into basic sets.  Basic
sets are kept in a canonical order (the identity class first, then by size
and least element) so that class indices are reproducible.  The structure
constant tensor ``T[X, Y, Z]`` counts the ways a fixed ``z`` in ``Z`` can be
written as ``x + y`` with ``x`` in ``X`` and ``y`` in ``Y``.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .abelian import (
    AbelianGroup,
    Section,
    Subgroup,
    all_subgroups,
    invariant_factors,
    parse_element,
    parse_group,
    quotient,
    subgroup_generated,
)
from .errors import (
    InternalInvariantError,
    NotASectionError,
    ParseError,
    ShapeError,
    SRingAxiomError,
)


def _as_index_set(G: AbelianGroup, S: Iterable) -> frozenset:
    out = set()
    for s in S:
        if isinstance(s, (int, np.integer)):
            out.add(int(s))
        elif isinstance(s, str):
            out.add(parse_element(s, G))
        else:
            out.add(G.index(s))
    return frozenset(out)


def _class_key(X: frozenset):
    return (0 not in X, len(X), min(X))


def product_counts(G: AbelianGroup, indicator: np.ndarray, zs: np.ndarray | None = None) -> np.ndarray:
    """``out[X, Y, j]`` = number of ``(x, y)`` in ``X x Y`` with ``x + y = zs[j]``."""
    sub = G.sub if zs is None else G.sub[zs]
    I = indicator.astype(np.float64)
    # I[:, sub][Y, j, x] = [zs[j] - x in Y]
    shifted = I[:, sub]
    out = np.tensordot(I, shifted, axes=([1], [2]))
    return np.rint(out).astype(np.int64)


class SRing:
    """An S-ring over an abelian group, given by its basic sets.

    ``check=False`` skips axiom validation; it is meant for internal callers
    that already know the partition is an S-ring.
    """

    def __init__(self, group: AbelianGroup, partition: Iterable[Iterable], check: bool = True):
        self.group = group
        classes = [_as_index_set(group, X) for X in partition]
        if check:
            _check_partition(group, classes)
        classes.sort(key=_class_key)
        self.classes: tuple[frozenset, ...] = tuple(classes)
        self.rank = len(classes)
        cls = np.empty(group.order, dtype=np.int64)
        for i, X in enumerate(classes):
            cls[list(X)] = i
        self.cls = cls
        self.sizes = np.array([len(X) for X in classes], dtype=np.int64)
        self.reps = np.array([min(X) for X in classes], dtype=np.int64)
        if check:
            _check_axioms(self)

    # -- basic access ---------------------------------------------------------

    @property
    def basic_sets(self) -> tuple[frozenset, ...]:
        return self.classes

    identity_index = 0

    def class_of(self, g) -> int:
        if not isinstance(g, (int, np.integer)):
            g = self.group.index(g)
        return int(self.cls[g])

    @cached_property
    def indicator(self) -> np.ndarray:
        I = np.zeros((self.rank, self.group.order), dtype=np.int8)
        I[self.cls, np.arange(self.group.order)] = 1
        return I

    @cached_property
    def inverse_perm(self) -> np.ndarray:
        """``inverse_perm[i]`` is the index of the class ``-X_i``."""
        return self.cls[self.group.neg[self.reps]]

    @cached_property
    def tensor(self) -> np.ndarray:
        """Dense structure constants, shape ``(rank, rank, rank)``."""
        T = product_counts(self.group, self.indicator, self.reps)
        T.setflags(write=False)
        return T

    @cached_property
    def key(self) -> tuple:
        return tuple(tuple(sorted(X)) for X in self.classes)

    def __eq__(self, other):
        return isinstance(other, SRing) and other.group == self.group and other.key == self.key

    def __hash__(self):
        return hash((self.group, self.key))

    def __repr__(self):
        sizes = ",".join(str(s) for s in self.sizes)
        return f"SRing({self.group.name}, rank={self.rank}, sizes=[{sizes}])"

    def literal_classes(self) -> list[list[str]]:
        return [[self.group.literal(g) for g in sorted(X)] for X in self.classes]

    @cached_property
    def a_subgroups(self) -> tuple[Subgroup, ...]:
        return tuple(H for H in all_subgroups(self.group) if is_a_set(self, H.elements))

    def scheme(self) -> "CayleySchemeView":
        return CayleySchemeView(self)


# -- validation ------------------------------------------------------------------


def _check_partition(G: AbelianGroup, classes: Sequence[frozenset]) -> None:
    seen: dict[int, int] = {}
    for i, X in enumerate(classes):
        if not X:
            raise SRingAxiomError("not-a-partition", f"class {i} is empty", {"class": i})
        for g in X:
            if not 0 <= g < G.order:
                raise SRingAxiomError("not-a-partition", f"{g} is not an element of {G.name}", {"element": g})
            if g in seen:
                raise SRingAxiomError(
                    "not-a-partition",
                    f"{G.literal(g)} lies in classes {seen[g]} and {i}",
                    {"element": g, "classes": (seen[g], i)},
                )
            seen[g] = i
    if len(seen) != G.order:
        missing = min(set(range(G.order)) - set(seen))
        raise SRingAxiomError("not-a-partition", f"{G.literal(missing)} is not covered", {"element": missing})
    i0 = seen[0]
    if len(classes[i0]) != 1:
        raise SRingAxiomError(
            "identity-not-singleton-class",
            "the identity shares its class with other elements",
            {"class": sorted(classes[i0])},
        )


def _check_axioms(A: SRing) -> None:
    G = A.group
    for i, X in enumerate(A.classes):
        inv = frozenset(int(G.neg[x]) for x in X)
        if A.classes[A.inverse_perm[i]] != inv:
            raise SRingAxiomError(
                "not-inverse-closed",
                f"the inverse of class {i} is not a class",
                {"class": sorted(X), "inverse": sorted(inv)},
            )
    counts = product_counts(G, A.indicator)
    ref = counts[:, :, A.reps[A.cls]]
    bad = np.argwhere(counts != ref)
    if len(bad):
        X, Y, z = (int(v) for v in bad[0])
        z0 = int(A.reps[A.cls[z]])
        raise SRingAxiomError(
            "not-module-closed",
            f"c(X{X}, Y{Y}) differs at {G.literal(z0)} and {G.literal(z)} within class {int(A.cls[z])}",
            {"X": X, "Y": Y, "z": z0, "z_prime": z, "counts": (int(counts[X, Y, z0]), int(counts[X, Y, z]))},
        )


def validate_sring(group: AbelianGroup, partition: Iterable[Iterable]) -> SRing:
    """Check the three axioms and return the S-ring, or raise with a witness."""
    return SRing(group, partition, check=True)


def is_sring_partition(group: AbelianGroup, partition: Iterable[Iterable]) -> bool:
    try:
        SRing(group, partition, check=True)
    except SRingAxiomError:
        return False
    return True


def structure_constant(A: SRing, X: int, Y: int, Z: int) -> int:
    return int(A.tensor[X, Y, Z])


# -- A-sets and radicals ---------------------------------------------------------


def is_a_set(A: SRing, S: Iterable) -> bool:
    """True iff ``S`` is a union of basic sets."""
    S = S if isinstance(S, frozenset) else _as_index_set(A.group, S)
    if not S:
        return True
    touched = np.unique(A.cls[np.fromiter(S, dtype=np.int64)])
    return int(A.sizes[touched].sum()) == len(S)


def a_subgroups(A: SRing) -> list[Subgroup]:
    return list(A.a_subgroups)


def classes_in(A: SRing, S: Iterable[int]) -> list[int]:
    """Indices of the basic sets making up the A-set ``S``."""
    S = frozenset(S)
    return sorted({int(A.cls[s]) for s in S})


def radical(G: AbelianGroup, S: Iterable) -> Subgroup:
    """``{g : S + g = S}``."""
    S = S if isinstance(S, frozenset) else _as_index_set(G, S)
    if not S:
        raise ValueError("the radical of the empty set is undefined")
    arr = np.fromiter(S, dtype=np.int64)
    mask = np.zeros(G.order, dtype=bool)
    mask[arr] = True
    stab = np.flatnonzero(mask[G.add[arr]].all(axis=0))
    return subgroup_generated(G, [int(g) for g in stab])


def _p_shape(G: AbelianGroup) -> tuple[int, int]:
    """``(p, k)`` when ``G`` is ``C_{p^k}`` or ``C_p x C_{p^k}``; else shape error."""
    inv = invariant_factors(G)
    if not inv or len(inv) > 2:
        raise ShapeError(f"{G.name} is neither a cyclic p-group nor C_p x C_p^k")
    q = inv[-1]
    p = min(d for d in range(2, q + 1) if q % d == 0)
    k = round(math.log(q, p))
    if p**k != q or (len(inv) == 2 and inv[0] != p):
        raise ShapeError(f"{G.name} is neither a cyclic p-group nor C_p x C_p^k")
    return p, k


def highest_basic_sets(A: SRing) -> list[int]:
    """Basic sets containing an element of the largest order ``p^k``."""
    p, k = _p_shape(A.group)
    top = np.flatnonzero(A.group.orders == p**k)
    return sorted({int(A.cls[g]) for g in top})


def sring_radical(A: SRing) -> Subgroup:
    """``rad(A)`` for the two shapes where it is defined.

    Over a cyclic group it is the radical of a class containing a generator;
    over ``C_p x C_{p^k}`` it is generated by the radicals of all highest
    classes.
    """
    G = A.group
    highest = highest_basic_sets(A)
    if len(invariant_factors(G)) == 1:
        return radical(G, A.classes[highest[0]])
    gens: set[int] = set()
    for i in highest:
        gens |= radical(G, A.classes[i]).elements
    return subgroup_generated(G, gens)


# -- quotients ---------------------------------------------------------------------


def quotient_sring(A: SRing, S: Section) -> SRing:
    """The S-ring ``A_{U/L}`` induced on an A-section."""
    if not is_a_set(A, S.U.elements) or not is_a_set(A, S.L.elements):
        raise NotASectionError("U and L must both be A-subgroups")
    images = set()
    for X in A.classes:
        if X <= S.U.elements:
            images.add(S.project(X))
    return SRing(S.quotient, images, check=True)


def section_of(A: SRing, U: Subgroup, L: Subgroup) -> Section:
    if not is_a_set(A, U.elements) or not is_a_set(A, L.elements):
        raise NotASectionError("U and L must both be A-subgroups")
    return quotient(A.group, U, L)


def restrict(A: SRing, U: Subgroup) -> tuple[SRing, Section]:
    """``A_U`` together with the section ``U/{e}`` used to realise it."""
    G = A.group
    S = section_of(A, U, subgroup_generated(G, []))
    return quotient_sring(A, S), S


# -- Schur-Wielandt operators ----------------------------------------------------


def rational_conjugate(A: SRing, m: int) -> np.ndarray:
    """Permutation ``X -> X^(m)`` of class indices for ``gcd(m, |G|) = 1``."""
    G = A.group
    if math.gcd(m, G.order) != 1:
        raise ValueError(f"m = {m} is not coprime to |G| = {G.order}")
    image = G.scale(m)
    perm = A.cls[image[A.reps]]
    for i, X in enumerate(A.classes):
        if frozenset(int(image[x]) for x in X) != A.classes[perm[i]]:
            raise InternalInvariantError(f"power map by {m} does not permute the basic sets")
    return perm


def power_set_p(A: SRing, X: int, p: int) -> frozenset:
    """``{p x : x in X, |X cap (H + x)| not divisible by p}`` with ``H = {g : p g = 0}``."""
    G = A.group
    if p < 2 or G.order % p != 0:
        raise ValueError(f"{p} does not divide |G| = {G.order}")
    H = np.flatnonzero(G.scale(p) == 0)
    Xs = A.classes[X]
    mask = np.zeros(G.order, dtype=bool)
    mask[list(Xs)] = True
    out = set()
    for x in Xs:
        if int(mask[G.add[H, x]].sum()) % p != 0:
            out.add(G.multiple(p, x))
    out = frozenset(out)
    if not is_a_set(A, out):
        raise InternalInvariantError("X^[p] is not an A-set")
    return out


# -- predicates ----------------------------------------------------------------------


def is_quasi_thin(A: SRing) -> bool:
    return int(A.sizes.max()) <= 2


def is_symmetric(A: SRing) -> bool:
    return bool((A.inverse_perm == np.arange(A.rank)).all())


def valency_profile(A: SRing) -> frozenset:
    return frozenset(int(s) for s in A.sizes)


def is_group_ring(A: SRing) -> bool:
    return A.rank == A.group.order


def klein_obstruction(A: SRing) -> Subgroup | None:
    """An A-subgroup ``H = C_2 x C_2`` with ``A_H = ZH`` and ``A_{G/H} = Z(G/H)``."""
    G = A.group
    if G.order % 4:
        return None
    for H in A.a_subgroups:
        if H.order != 4 or any(int(G.orders[h]) > 2 for h in H.elements):
            continue
        if any(A.sizes[A.cls[h]] != 1 for h in H.elements):
            continue
        Q = quotient_sring(A, quotient(G, subgroup_generated(G, range(G.order)), H))
        if is_group_ring(Q):
            return H
    return None


# -- Cayley scheme view ------------------------------------------------------------


class CayleySchemeView:
    """The relations ``R(X) = {(g, x + g)}`` of an S-ring."""

    def __init__(self, A: SRing):
        self.sring = A
        G = A.group
        # colour[u, w] = class of w - u
        self.colour = A.cls[G.sub.T]

    def relation(self, i: int) -> np.ndarray:
        return self.colour == i

    def valencies(self) -> np.ndarray:
        return np.array([int(self.relation(i)[0].sum()) for i in range(self.sring.rank)])

    def intersection_numbers(self) -> np.ndarray:
        """``p[i, j, k]``, checked to be constant on every pair of ``R_k``."""
        A = self.sring
        k = A.rank
        mats = [self.relation(i).astype(np.int64) for i in range(k)]
        out = np.zeros((k, k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                P = mats[i] @ mats[j]
                for t in range(k):
                    vals = P[mats[t].astype(bool)]
                    if (vals != vals[0]).any():
                        raise InternalInvariantError("intersection number is not constant")
                    out[i, j, t] = vals[0]
        return out


# -- text dumps -------------------------------------------------------------------------


def dump(A: SRing, with_tensor: bool = False) -> str:
    lines = [f"sring {A.group.name} rank={A.rank}"]
    for row in A.literal_classes():
        lines.append(" ".join(row))
    if with_tensor:
        T = A.tensor
        for X, Y, Z in zip(*np.nonzero(T)):
            lines.append(f"c {X} {Y} {Z} = {T[X, Y, Z]}")
    return "\n".join(lines) + "\n"


def parse_dump(text: str) -> SRing:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("sring "):
        raise ParseError("missing 'sring <group> rank=<r>' header")
    head = lines[0].split()
    if len(head) != 3 or not head[2].startswith("rank="):
        raise ParseError(f"bad header: {lines[0]!r}")
    G = parse_group(head[1])
    rank = int(head[2][5:])
    rows = [ln for ln in lines[1:] if not ln.startswith("c ")]
    if len(rows) != rank:
        raise ParseError(f"header says rank {rank} but {len(rows)} classes follow")
    classes = [[parse_element(tok, G) for tok in row.replace(") (", ")\t(").split("\t")] for row in rows]
    A = SRing(G, classes)
    for ln in lines[1:]:
        if ln.startswith("c "):
            parts = ln[2:].replace("=", " ").split()
            X, Y, Z, n = (int(v) for v in parts)
            if int(A.tensor[X, Y, Z]) != n:
                raise ParseError(f"tensor entry mismatch in line {ln!r}")
    return A
