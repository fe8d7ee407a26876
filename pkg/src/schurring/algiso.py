"""Algebraic isomorphisms: bijections of basic sets preserving the tensor."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .abelian import Section, quotient, subgroup_from_elements
from .errors import ParseError, SizeError
from .sring import SRing, is_a_set, quotient_sring, radical
from .abelian import subgroup_generated


@dataclass(frozen=True, eq=False)
class AlgebraicIso:
    source: SRing
    target: SRing
    class_map: tuple

    def __call__(self, i: int) -> int:
        return self.class_map[i]

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraicIso)
            and other.source == self.source
            and other.target == self.target
            and other.class_map == self.class_map
        )

    def __hash__(self):
        return hash(self.class_map)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.class_map, dtype=np.int64)

    def inverse(self) -> "AlgebraicIso":
        inv = [0] * len(self.class_map)
        for i, j in enumerate(self.class_map):
            inv[j] = i
        return AlgebraicIso(self.target, self.source, tuple(inv))

    def then(self, other: "AlgebraicIso") -> "AlgebraicIso":
        """Apply ``self`` first, then ``other``."""
        return AlgebraicIso(self.source, other.target, tuple(other.class_map[j] for j in self.class_map))

    def is_identity(self) -> bool:
        return self.class_map == tuple(range(len(self.class_map)))

    def dump(self) -> str:
        lines = [f"algiso {len(self.class_map)}"]
        lines += [f"{i} -> {j}" for i, j in enumerate(self.class_map)]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"AlgebraicIso({self.source.group.name} -> {self.target.group.name}, {list(self.class_map)})"


def parse_algiso_dump(text: str) -> tuple:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("algiso "):
        raise ParseError("missing 'algiso <rank>' header")
    rank = int(lines[0].split()[1])
    out = [None] * rank
    for ln in lines[1:]:
        i, j = (int(v) for v in ln.split("->"))
        out[i] = j
    if None in out:
        raise ParseError("incomplete class map")
    return tuple(out)


class AlgisoCheck(NamedTuple):
    ok: bool
    witness: tuple | None

    def __bool__(self):
        return self.ok


def verify_algiso(A: SRing, B: SRing, class_map) -> AlgisoCheck:
    """Check ``c^Z_{X,Y} = c^{Z'}_{X',Y'}`` for all triples.

    On failure the witness is ``(X, Y, Z, c_A, c_B)``; triples with ``Z``
    the identity class are inspected first.
    """
    phi = np.asarray(class_map, dtype=np.int64)
    if A.rank != B.rank or len(phi) != A.rank:
        raise ValueError(f"rank mismatch: {A.rank} vs {B.rank} (map of length {len(phi)})")
    if sorted(phi.tolist()) != list(range(B.rank)):
        raise ValueError("class map is not a bijection")
    TA, TB = A.tensor, B.tensor
    mapped = TB[np.ix_(phi, phi, phi)]
    for Z in [0] + list(range(1, A.rank)):
        bad = np.argwhere(mapped[:, :, Z] != TA[:, :, Z])
        if len(bad):
            X, Y = (int(v) for v in bad[0])
            return AlgisoCheck(False, (X, Y, Z, int(TA[X, Y, Z]), int(mapped[X, Y, Z])))
    return AlgisoCheck(True, None)


# -- enumeration ------------------------------------------------------------------


def _class_invariants(A: SRing) -> list[tuple]:
    G = A.group
    T = A.tensor
    out = []
    for i, X in enumerate(A.classes):
        gen = subgroup_generated(G, X).order
        rad = radical(G, X).order
        out.append(
            (
                int(A.sizes[i]),
                bool(A.inverse_perm[i] == i),
                gen,
                rad,
                tuple(np.sort(T[i].ravel()).tolist()),
                tuple(np.sort(T[:, :, i].ravel()).tolist()),
            )
        )
    return out


def _membership(A: SRing, kind: str) -> np.ndarray:
    """``M[i, j]`` is true when class ``j`` lies in ``<X_i>`` (or ``rad(X_i)``)."""
    G = A.group
    M = np.zeros((A.rank, A.rank), dtype=bool)
    for i, X in enumerate(A.classes):
        H = subgroup_generated(G, X) if kind == "gen" else radical(G, X)
        for h in H.elements:
            M[i, A.cls[h]] = True
    return M


def enumerate_algisos(A: SRing, B: SRing, fixed: dict | None = None) -> Iterator[AlgebraicIso]:
    """Every algebraic isomorphism ``A -> B`` exactly once.

    ``fixed`` optionally prescribes images of some classes.  Classes are
    assigned in order of (size, index); a class and its inverse are assigned
    together.  Partial assignments are checked on every tensor entry whose
    three indices are assigned, and on the generated-subgroup and radical
    memberships, which an algebraic isomorphism must preserve.
    """
    if A.rank != B.rank or A.group.order != B.group.order:
        return
    if sorted(A.sizes.tolist()) != sorted(B.sizes.tolist()):
        return
    k = A.rank
    invA, invB = _class_invariants(A), _class_invariants(B)
    cand = [[j for j in range(k) if invB[j] == invA[i]] for i in range(k)]
    if any(not c for c in cand):
        return
    fixed = dict(fixed or {})
    fixed[0] = 0
    for i, j in fixed.items():
        if j not in cand[i]:
            return
        cand[i] = [j]
    TA, TB = A.tensor, B.tensor
    genA, genB = _membership(A, "gen"), _membership(B, "gen")
    radA, radB = _membership(A, "rad"), _membership(B, "rad")
    ipA, ipB = A.inverse_perm, B.inverse_perm
    order = sorted(range(k), key=lambda i: (len(cand[i]) > 1, int(A.sizes[i]), i))

    phi = np.full(k, -1, dtype=np.int64)
    used = np.zeros(k, dtype=bool)
    dom: list[int] = []

    def consistent(new: list[int]) -> bool:
        d = np.asarray(dom, dtype=np.int64)
        im = phi[d]
        for x in new:
            xp = phi[x]
            if (TA[x][np.ix_(d, d)] != TB[xp][np.ix_(im, im)]).any():
                return False
            if (TA[np.ix_(d, [x], d)] != TB[np.ix_(im, [xp], im)]).any():
                return False
            if (TA[np.ix_(d, d, [x])] != TB[np.ix_(im, im, [xp])]).any():
                return False
            for M, N in ((genA, genB), (radA, radB)):
                if (M[x, d] != N[xp, im]).any() or (M[d, x] != N[im, xp]).any():
                    return False
        return True

    def assign(x: int, xp: int) -> list[int] | None:
        xi, xpi = int(ipA[x]), int(ipB[xp])
        if (xi == x) != (xpi == xp):
            return None
        pairs = [(x, xp)] if xi == x else [(x, xp), (xi, xpi)]
        for a, b in pairs:
            if phi[a] != -1 or used[b] or b not in cand[a]:
                return None
        for a, b in pairs:
            phi[a] = b
            used[b] = True
            dom.append(a)
        return [a for a, _ in pairs]

    def undo(new: list[int]):
        for a in new:
            used[phi[a]] = False
            phi[a] = -1
            dom.pop()

    def rec(pos: int):
        while pos < k and phi[order[pos]] != -1:
            pos += 1
        if pos == k:
            if verify_algiso(A, B, phi):
                yield AlgebraicIso(A, B, tuple(int(v) for v in phi))
            return
        x = order[pos]
        for xp in cand[x]:
            if used[xp]:
                continue
            new = assign(x, xp)
            if new is None:
                continue
            if consistent(new):
                yield from rec(pos + 1)
            undo(new)

    yield from rec(0)


def enumerate_algisos_unpruned(A: SRing, B: SRing, limit: int = 2_000_000) -> list[AlgebraicIso]:
    """Reference oracle: test every size-preserving bijection of classes."""
    if A.rank != B.rank or sorted(A.sizes.tolist()) != sorted(B.sizes.tolist()):
        return []
    groupsA: dict[int, list[int]] = {}
    groupsB: dict[int, list[int]] = {}
    for i, s in enumerate(A.sizes.tolist()):
        groupsA.setdefault(s, []).append(i)
    for j, s in enumerate(B.sizes.tolist()):
        groupsB.setdefault(s, []).append(j)
    total = math.prod(math.factorial(len(v)) for v in groupsA.values())
    if total > limit:
        raise SizeError(f"{total} size-compatible bijections exceed the oracle limit {limit}")
    sizes = sorted(groupsA)
    out = []
    for perms in itertools.product(*[itertools.permutations(groupsB[s]) for s in sizes]):
        phi = [0] * A.rank
        for s, perm in zip(sizes, perms):
            for i, j in zip(groupsA[s], perm):
                phi[i] = j
        if verify_algiso(A, B, phi):
            out.append(AlgebraicIso(A, B, tuple(phi)))
    return out


# -- induced maps -------------------------------------------------------------------


def image_of_aset(phi: AlgebraicIso, S: Iterable[int]) -> frozenset:
    A, B = phi.source, phi.target
    S = frozenset(S)
    if not is_a_set(A, S):
        raise ValueError("argument is not an A-set")
    out: set[int] = set()
    for c in {int(A.cls[s]) for s in S}:
        out |= B.classes[phi.class_map[c]]
    return frozenset(out)


def image_section(phi: AlgebraicIso, S: Section) -> Section:
    B = phi.target
    U2 = subgroup_from_elements(B.group, image_of_aset(phi, S.U.elements))
    L2 = subgroup_from_elements(B.group, image_of_aset(phi, S.L.elements))
    return quotient(B.group, U2, L2)


def induced_on_section(phi: AlgebraicIso, S: Section, S_image: Section | None = None) -> AlgebraicIso:
    """The algebraic isomorphism ``A_{U/L} -> A'_{U'/L'}`` induced by ``phi``."""
    A, B = phi.source, phi.target
    S2 = S_image if S_image is not None else image_section(phi, S)
    QA = quotient_sring(A, S)
    QB = quotient_sring(B, S2)
    if QA.rank != QB.rank:
        raise ValueError("sections have quotient S-rings of different rank")
    m = [-1] * QA.rank
    for i, X in enumerate(A.classes):
        if not X <= S.U.elements:
            continue
        qa = int(QA.cls[S.projection[min(X)]])
        Xp = B.classes[phi.class_map[i]]
        qb = int(QB.cls[S2.projection[min(Xp)]])
        if m[qa] not in (-1, qb):
            raise ValueError("induced class map is not well defined")
        m[qa] = qb
    check = verify_algiso(QA, QB, m)
    if not check:
        raise ValueError(f"induced map is not an algebraic isomorphism: {check.witness}")
    return AlgebraicIso(QA, QB, tuple(m))


def identity_algiso(A: SRing) -> AlgebraicIso:
    return AlgebraicIso(A, A, tuple(range(A.rank)))
