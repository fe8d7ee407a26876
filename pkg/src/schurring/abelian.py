"""Finite abelian groups given as direct products of cyclic factors.

Elements are residue tuples ``(x_1, ..., x_r)`` with ``0 <= x_i < d_i``.
Internally every element is addressed by its position in lexicographic
order (the first coordinate is the most significant), so subsets of a group
are plain ``frozenset``s of ints and all tables are numpy arrays indexed by
those positions.  Group operation is written additively throughout.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ContainmentError, InvalidFactorError, ParseError, SizeError

#: Largest group order for exhaustive subgroup / homomorphism scans.
DESK_BOUND = 256


class AbelianGroup:
    """``C_{d_1} x ... x C_{d_r}`` with elements in lexicographic order.

    Two groups are equal when their factor lists are equal; isomorphism is
    a separate question (see :func:`is_isomorphic`).
    """

    def __init__(self, factors: Iterable[int]):
        factors = tuple(int(d) for d in factors)
        for d in factors:
            if d < 2:
                raise InvalidFactorError(f"cyclic factor orders must be >= 2, got {d}")
        self.factors = factors
        self.order = math.prod(factors)
        self.exponent = math.lcm(*factors) if factors else 1
        strides = []
        s = 1
        for d in reversed(factors):
            strides.append(s)
            s *= d
        self.strides = tuple(reversed(strides))
        self.identity = 0

    # -- identity and display -------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and other.factors == self.factors

    def __hash__(self):
        return hash(("AbelianGroup", self.factors))

    @property
    def name(self) -> str:
        if not self.factors:
            return "C1"
        return "x".join(f"C{d}" for d in self.factors)

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"AbelianGroup({self.name})"

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    # -- element addressing ---------------------------------------------------

    @cached_property
    def coords_array(self) -> np.ndarray:
        if not self.factors:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.factors).reshape(len(self.factors), -1).T
        return np.ascontiguousarray(grids, dtype=np.int64)

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.factors):
            raise ParseError(f"{tuple(coords)} has the wrong length for {self.name}")
        return sum((int(x) % d) * s for x, d, s in zip(coords, self.factors, self.strides))

    def coords(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.coords_array[i])

    def literal(self, i: int) -> str:
        return "(" + ",".join(str(x) for x in self.coords(i)) + ")"

    def _encode(self, coords: np.ndarray) -> np.ndarray:
        d = np.asarray(self.factors, dtype=np.int64)
        s = np.asarray(self.strides, dtype=np.int64)
        return ((coords % d) * s).sum(axis=-1)

    # -- arithmetic tables ----------------------------------------------------

    @cached_property
    def add(self) -> np.ndarray:
        """``add[i, j]`` is the index of ``i + j``."""
        c = self.coords_array
        if not self.factors:
            return np.zeros((1, 1), dtype=np.int64)
        return self._encode(c[:, None, :] + c[None, :, :])

    @cached_property
    def neg(self) -> np.ndarray:
        if not self.factors:
            return np.zeros(1, dtype=np.int64)
        return self._encode(-self.coords_array)

    @cached_property
    def sub(self) -> np.ndarray:
        """``sub[z, x]`` is the index of ``z - x``."""
        return self.add[:, self.neg]

    def scale(self, m: int) -> np.ndarray:
        """Indices of ``m * x`` for every element ``x``."""
        if not self.factors:
            return np.zeros(1, dtype=np.int64)
        return self._encode(self.coords_array * m)

    def multiple(self, m: int, i: int) -> int:
        return self.index([m * x for x in self.coords(i)])

    def plus(self, i: int, j: int) -> int:
        return int(self.add[i, j])

    @cached_property
    def orders(self) -> np.ndarray:
        c = self.coords_array
        out = np.ones(self.order, dtype=np.int64)
        for k, d in enumerate(self.factors):
            part = d // np.gcd(c[:, k], d)
            out = np.lcm(out, part)
        return out

    def translate(self, S: Iterable[int], g: int) -> frozenset[int]:
        return frozenset(int(self.add[s, g]) for s in S)


@lru_cache(maxsize=None)
def _cached_group(factors: tuple[int, ...]) -> AbelianGroup:
    return AbelianGroup(factors)


def make_group(factors: Iterable[int]) -> AbelianGroup:
    """Return the (shared) group ``C_{d_1} x ... x C_{d_r}``.

    An empty factor list gives the trivial group.
    """
    factors = tuple(int(d) for d in factors)
    for d in factors:
        if d < 2:
            raise InvalidFactorError(f"cyclic factor orders must be >= 2, got {d}")
    return _cached_group(factors)


_GROUP_RE = re.compile(r"^\s*c(\d+)\s*((?:x\s*c\d+\s*)*)$", re.IGNORECASE)


def parse_group(text: str) -> AbelianGroup:
    """Parse a literal such as ``C2xC8`` (case-insensitive)."""
    parts = [p.strip() for p in text.strip().lower().split("x")]
    if not parts or any(not re.fullmatch(r"c\d+", p) for p in parts):
        raise ParseError(f"not a group literal: {text!r}")
    factors = [int(p[1:]) for p in parts]
    if factors == [1]:
        return make_group([])
    return make_group(factors)


def parse_element(text: str, G: AbelianGroup) -> int:
    m = re.fullmatch(r"\s*\(([-\d,\s]*)\)\s*", text)
    if not m:
        raise ParseError(f"not an element literal: {text!r}")
    body = m.group(1).strip()
    coords = [int(x) for x in body.split(",")] if body else []
    if len(coords) != len(G.factors):
        raise ParseError(f"{text!r} does not belong to {G.name}")
    for x, d in zip(coords, G.factors):
        if not 0 <= x < d:
            raise ParseError(f"coordinate {x} out of range in {text!r}")
    return G.index(coords)


def element_order(G: AbelianGroup, g) -> int:
    """Least ``n >= 1`` with ``n * g = 0``; ``g`` is an index or a tuple."""
    if not isinstance(g, (int, np.integer)):
        g = G.index(g)
    return int(G.orders[g])


# -- subgroups -----------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    group: AbelianGroup
    elements: frozenset
    generators: tuple = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def __lt__(self, other: "Subgroup") -> bool:
        return self.elements < other.elements

    def __len__(self):
        return len(self.elements)

    def sorted(self) -> list[int]:
        return sorted(self.elements)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def is_cyclic(self) -> bool:
        return any(int(self.group.orders[g]) == self.order for g in self.elements)

    def cosets(self) -> list[frozenset]:
        """Cosets of this subgroup in the whole group, ordered by least element."""
        seen = np.full(self.group.order, False)
        out = []
        els = np.fromiter(self.elements, dtype=np.int64)
        for g in range(self.group.order):
            if not seen[g]:
                c = self.group.add[els, g]
                seen[c] = True
                out.append(frozenset(int(x) for x in c))
        return out

    def __repr__(self):
        return f"Subgroup({self.group.name}, order={self.order}, gens={[self.group.literal(g) for g in self.generators]})"


def _span(G: AbelianGroup, gens: Iterable[int]) -> frozenset:
    current = {0}
    for g in gens:
        if g in current:
            continue
        frontier = set(current)
        new = set(current)
        while frontier:
            nxt = {int(G.add[x, g]) for x in frontier} - new
            new |= nxt
            frontier = nxt
        current = new
    return frozenset(current)


def subgroup_generated(G: AbelianGroup, S: Iterable = ()) -> Subgroup:
    """Smallest subgroup containing ``S`` (indices or coordinate tuples)."""
    items = [s if isinstance(s, (int, np.integer)) else G.index(s) for s in S]
    gens = []
    span = frozenset({0})
    # large orders first keeps the generating list short
    for g in sorted(set(int(x) for x in items), key=lambda x: (-int(G.orders[x]), x)):
        if g not in span:
            gens.append(g)
            span = _span(G, gens)
    return Subgroup(G, span, tuple(gens))


def subgroup_from_elements(G: AbelianGroup, elements: Iterable[int]) -> Subgroup:
    els = frozenset(int(x) for x in elements)
    H = subgroup_generated(G, els)
    if H.elements != els:
        raise ContainmentError("element set is not a subgroup")
    return H


def trivial_subgroup(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, frozenset({0}), ())


def whole_group(G: AbelianGroup) -> Subgroup:
    return subgroup_generated(G, range(G.order))


def _subgroup_key(H: Subgroup):
    return (H.order, tuple(sorted(H.elements)))


@lru_cache(maxsize=None)
def _all_subgroups(G: AbelianGroup) -> tuple[Subgroup, ...]:
    found = {frozenset({0}): trivial_subgroup(G)}
    frontier = [found[frozenset({0})]]
    while frontier:
        nxt = []
        for H in frontier:
            for g in range(G.order):
                if g in H.elements:
                    continue
                K = subgroup_generated(G, list(H.generators) + [g])
                if K.elements not in found:
                    found[K.elements] = K
                    nxt.append(K)
        frontier = nxt
    return tuple(sorted(found.values(), key=_subgroup_key))


def all_subgroups(G: AbelianGroup, bound: int = DESK_BOUND) -> list[Subgroup]:
    """Every subgroup of ``G`` sorted by order, then by element set."""
    if G.order > bound:
        raise SizeError(f"|G| = {G.order} exceeds the desk-scale bound {bound}")
    return list(_all_subgroups(G))


# -- invariant factors and explicit decompositions -------------------------------


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _invariant_factors_from_orders(orders: np.ndarray) -> tuple[int, ...]:
    m = len(orders)
    per_prime = []
    for p, e in _prime_factors(m).items():
        counts = [1]
        j = 1
        while counts[-1] < p**e:
            counts.append(int(np.sum(p**j % orders == 0)))
            j += 1
        steps = [round(math.log(counts[i] / counts[i - 1], p)) for i in range(1, len(counts))]
        exps = [sum(1 for s in steps if s >= i) for i in range(1, (max(steps) if steps else 0) + 1)]
        per_prime.append((p, exps))
    width = max((len(ex) for _, ex in per_prime), default=0)
    factors = []
    for i in range(width):
        factors.append(math.prod(p ** ex[i] for p, ex in per_prime if i < len(ex)))
    return tuple(sorted(factors))


def invariant_factors(G: AbelianGroup) -> tuple[int, ...]:
    """Invariant factors ``d_1 | d_2 | ...`` in ascending order."""
    return _invariant_factors_from_orders(G.orders)


def is_isomorphic(G: AbelianGroup, H: AbelianGroup) -> bool:
    return invariant_factors(G) == invariant_factors(H)


def canonical_group(G: AbelianGroup) -> AbelianGroup:
    return make_group(invariant_factors(G))


def _table_orders(add: np.ndarray) -> np.ndarray:
    m = add.shape[0]
    orders = np.zeros(m, dtype=np.int64)
    cur = np.arange(m)
    k = 1
    while (orders == 0).any():
        orders[(cur == 0) & (orders == 0)] = k
        cur = add[cur, np.arange(m)]
        k += 1
    return orders


def _decompose(add: np.ndarray) -> tuple[tuple[int, ...], np.ndarray]:
    """Find ``(factors, table)`` for an abstract abelian group given by ``add``.

    ``factors`` are the invariant factors (ascending) and ``table[j]`` is
    the abstract element represented by the j-th element of
    ``make_group(factors)``.  Element 0 must be the identity.
    """
    m = add.shape[0]
    orders = _table_orders(add)
    factors = _invariant_factors_from_orders(orders)
    if not factors:
        return (), np.zeros(1, dtype=np.int64)

    def span_add(span: np.ndarray, g: int, d: int) -> np.ndarray:
        mults = [0]
        for _ in range(d - 1):
            mults.append(int(add[mults[-1], g]))
        return add[span[:, None], np.asarray(mults)[None, :]].ravel()

    chosen: list[int] = [0] * len(factors)

    def search(pos: int, span: np.ndarray) -> bool:
        if pos < 0:
            return True
        d = factors[pos]
        inspan = np.zeros(m, dtype=bool)
        inspan[span] = True
        for g in np.flatnonzero(orders == d):
            new = span_add(span, int(g), d)
            if len(np.unique(new)) == len(span) * d:
                chosen[pos] = int(g)
                if search(pos - 1, new):
                    return True
        return False

    if not search(len(factors) - 1, np.zeros(1, dtype=np.int64)):
        raise AssertionError("no basis found for a finite abelian group")
    C = make_group(factors)
    table = np.zeros(C.order, dtype=np.int64)
    coords = C.coords_array
    for j in range(C.order):
        x = 0
        for g, c in zip(chosen, coords[j]):
            for _ in range(int(c)):
                x = int(add[x, g])
        table[j] = x
    return factors, table


@dataclass(frozen=True, eq=False)
class Section:
    """A section ``U/L`` together with an explicit quotient group.

    ``projection[g]`` is the quotient element of ``g`` for ``g`` in ``U``
    (``-1`` elsewhere) and ``cosets[q]`` is the ``L``-coset mapped to ``q``.
    """

    U: Subgroup
    L: Subgroup
    quotient: AbelianGroup
    projection: np.ndarray
    cosets: tuple

    @property
    def group(self) -> AbelianGroup:
        return self.U.group

    def project(self, S: Iterable[int]) -> frozenset:
        return frozenset(int(self.projection[s]) for s in S)

    def lift(self, Q: Iterable[int]) -> frozenset:
        out: set[int] = set()
        for q in Q:
            out |= self.cosets[q]
        return frozenset(out)

    def __repr__(self):
        return f"Section({self.U.order}/{self.L.order} ~ {self.quotient.name})"


def quotient(G: AbelianGroup, U: Subgroup, L: Subgroup) -> Section:
    """Section ``U/L`` with its quotient in invariant-factor form."""
    if not L.elements <= U.elements:
        raise ContainmentError("L is not contained in U")
    if U.group != G or L.group != G:
        raise ContainmentError("subgroups belong to a different group")
    Ls = np.fromiter(sorted(L.elements), dtype=np.int64)
    rep_of = {}
    reps = []
    for u in sorted(U.elements):
        if u in rep_of:
            continue
        coset = G.add[Ls, u]
        for x in coset:
            rep_of[int(x)] = len(reps)
        reps.append(u)
    m = len(reps)
    add = np.zeros((m, m), dtype=np.int64)
    for i, r in enumerate(reps):
        for j, s in enumerate(reps):
            add[i, j] = rep_of[int(G.add[r, s])]
    if L.is_trivial() and U.order == G.order and invariant_factors(G) == G.factors:
        factors, table = G.factors, np.arange(G.order)
    else:
        factors, table = _decompose(add)
    Q = make_group(factors)
    coset_to_q = np.empty(m, dtype=np.int64)
    coset_to_q[table] = np.arange(Q.order)
    projection = np.full(G.order, -1, dtype=np.int64)
    for u, c in rep_of.items():
        projection[u] = coset_to_q[c]
    cosets = [set() for _ in range(Q.order)]
    for u in U.elements:
        cosets[projection[u]].add(u)
    return Section(U, L, Q, projection, tuple(frozenset(c) for c in cosets))


# -- homomorphisms -------------------------------------------------------------


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism determined by the images of the unit-vector generators."""

    source: AbelianGroup
    target: AbelianGroup
    images: tuple

    def __post_init__(self):
        if len(self.images) != len(self.source.factors):
            raise ValueError("one image per source generator is required")
        for d, h in zip(self.source.factors, self.images):
            if d % int(self.target.orders[h]) != 0:
                raise ValueError(
                    f"image {self.target.literal(h)} has order not dividing {d}"
                )

    @cached_property
    def table(self) -> np.ndarray:
        T = self.target
        out = np.zeros(self.source.order, dtype=np.int64)
        coords = self.source.coords_array
        for k, h in enumerate(self.images):
            mults = [0]
            for _ in range(self.source.factors[k] - 1):
                mults.append(int(T.add[mults[-1], h]))
            out = T.add[out, np.asarray(mults)[coords[:, k]]]
        return out

    def __call__(self, x) -> int:
        if not isinstance(x, (int, np.integer)):
            x = self.source.index(x)
        return int(self.table[x])

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(np.unique(self.table)) == self.target.order

    def image_set(self, S: Iterable[int]) -> frozenset:
        return frozenset(int(self.table[s]) for s in S)

    def __repr__(self):
        ims = ", ".join(self.target.literal(h) for h in self.images)
        return f"GroupHom({self.source.name} -> {self.target.name}: [{ims}])"


AutMap = GroupHom


def make_hom(G: AbelianGroup, H: AbelianGroup, images: Sequence) -> GroupHom:
    ims = tuple(h if isinstance(h, (int, np.integer)) else H.index(h) for h in images)
    return GroupHom(G, H, tuple(int(h) for h in ims))


def enumerate_homs(G: AbelianGroup, H: AbelianGroup, iso_only: bool = False) -> Iterator[GroupHom]:
    """Every homomorphism ``G -> H`` once, in lexicographic order of images."""
    if iso_only and G.order != H.order:
        return
    if iso_only and not is_isomorphic(G, H):
        return
    cand = [
        [int(h) for h in np.flatnonzero(d % H.orders == 0)] for d in G.factors
    ]
    r = len(G.factors)
    images = [0] * r

    def rec(i: int, span: np.ndarray):
        if i == r:
            yield GroupHom(G, H, tuple(images))
            return
        d = G.factors[i]
        for h in cand[i]:
            if iso_only:
                mults = [0]
                for _ in range(d - 1):
                    mults.append(int(H.add[mults[-1], h]))
                new = np.unique(H.add[span[:, None], np.asarray(mults)[None, :]])
                if len(new) != len(span) * d:
                    continue
            else:
                new = span
            images[i] = h
            yield from rec(i + 1, new)

    yield from rec(0, np.zeros(1, dtype=np.int64))


@lru_cache(maxsize=None)
def automorphism_tables(G: AbelianGroup) -> np.ndarray:
    """All automorphisms of ``G`` as rows of an element permutation array."""
    return np.array([f.table for f in enumerate_homs(G, G, iso_only=True)], dtype=np.int64)


def automorphisms(G: AbelianGroup) -> list[GroupHom]:
    return list(enumerate_homs(G, G, iso_only=True))


def all_abelian_groups(n: int) -> list[AbelianGroup]:
    """One group per isomorphism type of order ``n``, in invariant-factor form."""
    if n == 1:
        return [make_group([])]
    primes = _prime_factors(n)

    def partitions(k: int, largest: int | None = None):
        largest = k if largest is None else largest
        if k == 0:
            yield []
            return
        for first in range(min(k, largest), 0, -1):
            for rest in partitions(k - first, first):
                yield [first] + rest

    out = []
    for combo in itertools.product(*[list(partitions(e)) for e in primes.values()]):
        width = max(len(c) for c in combo)
        factors = []
        for i in range(width):
            factors.append(math.prod(p ** c[i] for p, c in zip(primes, combo) if i < len(c)))
        out.append(make_group(sorted(factors)))
    out.sort(key=lambda G: (len(G.factors), G.factors))
    return out


def iso_to_canonical(G: AbelianGroup) -> tuple[AbelianGroup, np.ndarray]:
    """Canonical form of ``G`` and the element map ``G -> canonical``."""
    S = quotient(G, whole_group(G), trivial_subgroup(G))
    return S.quotient, S.projection


def units(n: int) -> list[int]:
    return [m for m in range(1, max(n, 2)) if math.gcd(m, n) == 1]
