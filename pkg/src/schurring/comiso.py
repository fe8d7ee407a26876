"""Combinatorial isomorphisms of Cayley schemes and the graph isomorphism pipeline.

A point map ``f: G -> G'`` is a combinatorial isomorphism from ``A`` to
``A'`` inducing the class map ``phi`` when ``f(w) - f(u)`` lies in
``phi(X)`` whenever ``w - u`` lies in ``X``.  All finders below search for
maps with that property; the cascade tries, in order, the trivial case,
group isomorphisms, the generalized wreath assembly and finally plain
backtracking.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .abelian import (
    AbelianGroup,
    Section,
    automorphism_tables,
    enumerate_homs,
    is_isomorphic,
    quotient,
    subgroup_from_elements,
    trivial_subgroup,
    whole_group,
)
from .algiso import AlgebraicIso, enumerate_algisos, image_section, induced_on_section, verify_algiso
from .construct import GwrWitness, gwr_sections
from .errors import (
    AutLiftingError,
    InternalInvariantError,
    NotAnIsomorphismError,
    ShapeError,
    SizeError,
)
from .sring import SRing, _p_shape, quotient_sring
from .wl import ordered_cayley_partition

#: Largest group order for the exponential backtracking finders.
BRUTE_BOUND = 32


@dataclass(frozen=True, eq=False)
class PointMap:
    source: AbelianGroup
    target: AbelianGroup
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        object.__setattr__(self, "table", t)
        if t.shape != (self.source.order,) or self.source.order != self.target.order:
            raise ValueError("point map must be a bijection between groups of equal order")
        if len(np.unique(t)) != self.target.order:
            raise ValueError("point map is not a bijection")

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __eq__(self, other):
        return (
            isinstance(other, PointMap)
            and other.source == self.source
            and other.target == self.target
            and np.array_equal(other.table, self.table)
        )

    def __hash__(self):
        return hash(self.table.tobytes())

    def inverse(self) -> "PointMap":
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(len(self.table))
        return PointMap(self.target, self.source, inv)

    def then(self, other: "PointMap") -> "PointMap":
        """Apply ``self`` first, then ``other``."""
        return PointMap(self.source, other.target, other.table[self.table])

    def dump(self) -> str:
        S, T = self.source, self.target
        lines = [f"pointmap {S.name} -> {T.name}"]
        lines += [f"{S.literal(g)} -> {T.literal(int(h))}" for g, h in enumerate(self.table)]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"PointMap({self.source.name} -> {self.target.name})"


def identity_map(G: AbelianGroup) -> PointMap:
    return PointMap(G, G, np.arange(G.order))


def translation_map(G: AbelianGroup, h: int) -> PointMap:
    return PointMap(G, G, G.add[:, h])


# -- induced algebraic isomorphisms --------------------------------------------------


def induced_class_map(f: PointMap, A: SRing, B: SRing) -> tuple:
    """Class map ``X -> X'`` with ``R(X)^f = R(X')``, or raise with a witness."""
    G, H = A.group, B.group
    if f.source != G or f.target != H:
        raise ValueError("point map does not match the S-rings' groups")
    t = f.table
    # img[g, x] = class of f(x + g) - f(g)
    img = B.cls[H.sub[t[G.add], t[:, None]]]
    phi = []
    for i, X in enumerate(A.classes):
        cols = img[:, sorted(X)]
        first = int(cols[0, 0])
        bad = np.argwhere(cols != first)
        if len(bad):
            g, j = (int(v) for v in bad[0])
            x = sorted(X)[j]
            raise NotAnIsomorphismError(
                f"relation of class {i} is not mapped onto a single relation",
                {"pair": (0, sorted(X)[0]), "other_pair": (g, int(G.add[x, g])), "classes": (first, int(cols[g, j]))},
            )
        if int(B.sizes[first]) != len(X):
            raise NotAnIsomorphismError(f"class {i} maps into a class of different size", {"class": i})
        phi.append(first)
    if len(set(phi)) != len(phi):
        raise NotAnIsomorphismError("two relations are mapped onto the same relation", {"map": phi})
    return tuple(phi)


def induced_algiso(f: PointMap, A: SRing, B: SRing) -> AlgebraicIso:
    phi = induced_class_map(f, A, B)
    check = verify_algiso(A, B, phi)
    if not check:
        raise InternalInvariantError(f"induced class map fails the tensor check: {check.witness}")
    return AlgebraicIso(A, B, phi)


def induces(f: PointMap, A: SRing, B: SRing, phi) -> bool:
    try:
        return induced_class_map(f, A, B) == tuple(int(v) for v in phi)
    except NotAnIsomorphismError:
        return False


@dataclass(frozen=True, eq=False)
class IsoCertificate:
    """A point map together with the algebraic isomorphism it induces.

    The induced map is recomputed on construction.
    """

    point_map: PointMap
    induced: AlgebraicIso
    method: str
    detail: str = ""

    def __post_init__(self):
        phi = induced_class_map(self.point_map, self.induced.source, self.induced.target)
        if phi != tuple(self.induced.class_map):
            raise NotAnIsomorphismError("certificate does not induce the stated algebraic isomorphism", {"induced": phi})


# -- backtracking engine ----------------------------------------------------------------


def _cayley_colours(A: SRing) -> np.ndarray:
    """``col[u, w]`` = class of ``w - u``."""
    return A.cls[A.group.sub.T]


def _search(required: np.ndarray, colB: np.ndarray, C0: np.ndarray | None = None) -> Iterator[np.ndarray]:
    """Bijections ``f`` with ``colB[f(u), f(w)] = required[u, w]`` for all pairs.

    ``C0[u, v]`` restricts the allowed images.  Depth-first, choosing the
    point with the fewest remaining candidates; yields every solution.
    """
    n = required.shape[0]
    C = np.ones((n, n), dtype=bool) if C0 is None else C0.copy()
    diag_req = np.diag(required)
    diag_b = np.diag(colB)
    C &= diag_b[None, :] == diag_req[:, None]
    f = np.full(n, -1, dtype=np.int64)

    def rec(C: np.ndarray, assigned: int):
        if assigned == n:
            yield f.copy()
            return
        counts = np.where(f == -1, C.sum(axis=1), n + 1)
        u = int(np.argmin(counts))
        if counts[u] == 0:
            return
        for v in np.flatnonzero(C[u]):
            v = int(v)
            C2 = C & (colB[v][None, :] == required[u][:, None]) & (colB[:, v][None, :] == required[:, u][:, None])
            C2[:, v] = False
            C2[u] = False
            C2[u, v] = True
            if not C2.any(axis=1).all():
                continue
            f[u] = v
            yield from rec(C2, assigned + 1)
            f[u] = -1

    if C.any(axis=1).all():
        yield from rec(C, 0)


def _first(it):
    return next(iter(it), None)


def _phi_required(A: SRing, phi) -> np.ndarray:
    return np.asarray(phi, dtype=np.int64)[_cayley_colours(A)]


def find_inducing_iso_bruteforce(A: SRing, B: SRing, phi, bound: int = BRUTE_BOUND) -> PointMap | None:
    """Some ``f`` with ``phi_f = phi``, or ``None`` when no such ``f`` exists.

    ``f(e) = e'`` is imposed, which loses nothing because right translations
    preserve every relation.
    """
    G, H = A.group, B.group
    if G.order > bound:
        raise SizeError(f"|G| = {G.order} exceeds the brute-force bound {bound}")
    if G.order != H.order or A.rank != B.rank:
        return None
    C0 = np.ones((G.order, H.order), dtype=bool)
    C0[0] = False
    C0[:, 0] = False
    C0[0, 0] = True
    sol = _first(_search(_phi_required(A, phi), _cayley_colours(B), C0))
    if sol is None:
        return None
    return PointMap(G, H, sol)


def all_inducing_isos(A: SRing, B: SRing, phi, bound: int = 16) -> list[PointMap]:
    """Every ``f`` with ``phi_f = phi`` (exhaustive; tiny groups only)."""
    G, H = A.group, B.group
    if G.order > bound:
        raise SizeError(f"|G| = {G.order} exceeds the bound {bound}")
    return [PointMap(G, H, s) for s in _search(_phi_required(A, phi), _cayley_colours(B))]


# -- automorphism groups ------------------------------------------------------------------


def _chain_order(required: np.ndarray, colB: np.ndarray, C0: np.ndarray | None = None) -> int:
    """Order of the group of solutions of ``_search`` (source = target).

    Uses a stabiliser chain: fix points one at a time and multiply the sizes
    of the orbits of the successive point stabilisers.
    """
    n = required.shape[0]
    base = np.ones((n, n), dtype=bool) if C0 is None else C0.copy()
    order = 1
    for u in range(n):
        orbit = 0
        for v in np.flatnonzero(base[u]):
            C = base.copy()
            C[u] = False
            C[u, v] = True
            if v == u or _first(_search(required, colB, C)) is not None:
                orbit += 1
        order *= orbit
        base[u] = False
        base[u, u] = True
        base[:, u] = False
        base[u, u] = True
    return order


def aut_group_order(A: SRing, bound: int = 64) -> int:
    if A.group.order > bound:
        raise SizeError(f"|G| = {A.group.order} exceeds the bound {bound}")
    col = _cayley_colours(A)
    return _chain_order(col, col)


def aut_group(A: SRing, bound: int = BRUTE_BOUND, limit: int = 200_000) -> list[PointMap]:
    """Every automorphism of the Cayley scheme of ``A``."""
    if A.group.order > bound:
        raise SizeError(f"|G| = {A.group.order} exceeds the bound {bound}")
    order = aut_group_order(A, bound)
    if order > limit:
        raise SizeError(f"|Aut| = {order} is too large to list (limit {limit})")
    col = _cayley_colours(A)
    G = A.group
    return [PointMap(G, G, s) for s in _search(col, col)]


# -- Cayley isomorphisms ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def isomorphism_tables(G: AbelianGroup, H: AbelianGroup) -> np.ndarray:
    """Every group isomorphism ``G -> H`` as rows of an element table."""
    if G.order != H.order or not is_isomorphic(G, H):
        return np.zeros((0, G.order), dtype=np.int64)
    f0 = next(enumerate_homs(G, H, iso_only=True))
    return f0.table[automorphism_tables(G)]


def _cayley_search(A: SRing, B: SRing, phi) -> PointMap | None:
    tables = isomorphism_tables(A.group, B.group)
    if not len(tables):
        return None
    want = np.asarray(phi, dtype=np.int64)[A.cls]
    ok = np.flatnonzero((B.cls[tables] == want[None, :]).all(axis=1))
    if not len(ok):
        return None
    return PointMap(A.group, B.group, tables[ok[0]])


def find_cayley_inducing(A: SRing, B: SRing, phi) -> PointMap | None:
    """A group isomorphism inducing ``phi``, or ``None`` if this strategy fails."""
    p, _ = _p_shape(A.group)
    if p not in (2, 3):
        raise ShapeError("Cayley search is provided for 2- and 3-groups of the supported shapes")
    return _cayley_search(A, B, phi)


# -- generalized wreath assembly ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GwrData:
    """Sections, quotient S-rings and induced maps attached to a ``U/L`` witness."""

    SU: Section
    SU2: Section
    SGL: Section
    SGL2: Section
    SUL: Section
    AU: SRing
    BU: SRing
    AGL: SRing
    BGL: SRing
    phi_U: AlgebraicIso
    phi_GL: AlgebraicIso


def gwr_data(A: SRing, B: SRing, phi: AlgebraicIso, witness: GwrWitness) -> GwrData:
    G = A.group
    U, L = witness.U, witness.L
    SU = quotient(G, U, trivial_subgroup(G))
    SGL = quotient(G, whole_group(G), L)
    SU2 = image_section(phi, SU)
    SGL2 = image_section(phi, SGL)
    phi_U = induced_on_section(phi, SU, SU2)
    phi_GL = induced_on_section(phi, SGL, SGL2)
    SUL = quotient(G, U, L)
    return GwrData(SU, SU2, SGL, SGL2, SUL, phi_U.source, phi_U.target, phi_GL.source, phi_GL.target, phi_U, phi_GL)


def _section_point_map(S: Section, S2: Section, F: PointMap) -> dict:
    """Lift a map between quotient groups to a map of cosets ``frozenset -> frozenset``."""
    return {S.cosets[q]: S2.cosets[int(F.table[q])] for q in range(S.quotient.order)}


def assemble_gwr_iso(
    A: SRing,
    B: SRing,
    phi: AlgebraicIso,
    witness: GwrWitness,
    f1: PointMap,
    f2: PointMap,
    data: GwrData | None = None,
) -> PointMap:
    """Glue ``f1`` (on ``U``) and ``f2`` (on ``G/L``) into ``f`` with ``phi_f = phi``.

    On each ``U``-coset ``X`` with least element ``t`` the map is
    ``x -> f1(h_X(x - t)) + t'``, where ``t'`` is the least element of the
    image coset ``X'`` and ``h_X`` is an automorphism of ``A_U`` lifting the
    quotient correction ``f0 = f1^{-1} o (translate by -t') o f2 o (translate by t)``.
    """
    G, H = A.group, B.group
    d = data if data is not None else gwr_data(A, B, phi, witness)
    if not induces(f1, d.AU, d.BU, d.phi_U.class_map):
        raise ValueError("f1 does not induce the restriction of phi to U")
    if not induces(f2, d.AGL, d.BGL, d.phi_GL.class_map):
        raise ValueError("f2 does not induce the map of phi on G/L")
    U = witness.U
    # f1 on real elements of U
    f1_real = {}
    for u in U.elements:
        q = int(d.SU.projection[u])
        (img,) = d.SU2.cosets[int(f1.table[q])]
        f1_real[u] = img
    f1_inv = {v: u for u, v in f1_real.items()}
    coset_map = _section_point_map(d.SGL, d.SGL2, f2)  # L-coset -> L'-coset

    # A_U realised on the canonical quotient of U; L-cosets there
    QU = d.SU.quotient
    colU = _cayley_colours(d.AU)

    table = np.full(G.order, -1, dtype=np.int64)
    for X in U.cosets():
        t = min(X)
        Xp = set()
        for x in X:
            Xp |= coset_map_of(d.SGL, coset_map, x)
        tp = min(Xp)
        # f0 on L-cosets inside U, expressed on QU
        target_of = {}
        for u in U.elements:
            c_img = coset_map_of(d.SGL, coset_map, int(G.add[u, t]))
            back = {f1_inv[int(H.sub[y, tp])] for y in c_img}
            target_of[int(d.SU.projection[u])] = frozenset(int(d.SU.projection[b]) for b in back)
        C0 = np.zeros((QU.order, QU.order), dtype=bool)
        for q in range(QU.order):
            C0[q, sorted(target_of[q])] = True
        hX = _first(_search(colU, colU, C0))
        if hX is None:
            raise AutLiftingError("no automorphism of A_U lifts the quotient correction")
        for x in X:
            u = int(G.sub[x, t])
            hu = int(hX[int(d.SU.projection[u])])
            (u_real,) = d.SU.cosets[hu]
            table[x] = int(H.add[f1_real[u_real], tp])
    f = PointMap(G, H, table)
    return f


def coset_map_of(S: Section, coset_map: dict, x: int) -> frozenset:
    return coset_map[S.cosets[int(S.projection[x])]]


def check_gwr_properties(A: SRing, B: SRing, phi: AlgebraicIso, witness: GwrWitness, f: PointMap,
                         data: GwrData | None = None) -> dict:
    """Evaluate the three conditions characterising ``iso(A, B, phi)`` for a ``U/L``-wreath product."""
    G, H = A.group, B.group
    d = data if data is not None else gwr_data(A, B, phi, witness)
    U, L = witness.U, witness.L
    U2, L2 = d.SU2.U, d.SGL2.L
    t = f.table
    cos_U2 = set(U2.cosets())
    cos_L2 = set(L2.cosets())
    prop1 = all(frozenset(int(t[x]) for x in X) in cos_U2 for X in U.cosets()) and all(
        frozenset(int(t[x]) for x in X) in cos_L2 for X in L.cosets()
    )
    prop2 = prop3 = False
    if prop1:
        q_table = np.empty(d.SGL.quotient.order, dtype=np.int64)
        for q, c in enumerate(d.SGL.cosets):
            q_table[q] = int(d.SGL2.projection[int(t[min(c)])])
        F2 = PointMap(d.SGL.quotient, d.SGL2.quotient, q_table)
        prop2 = induces(F2, d.AGL, d.BGL, d.phi_GL.class_map)
        prop3 = True
        for X in U.cosets():
            x0 = min(X)
            tp = min(int(t[x]) for x in X)
            q_table = np.empty(d.SU.quotient.order, dtype=np.int64)
            for u in U.elements:
                q_table[int(d.SU.projection[u])] = int(d.SU2.projection[int(H.sub[int(t[int(G.add[u, x0])]), tp])])
            try:
                F = PointMap(d.SU.quotient, d.SU2.quotient, q_table)
            except ValueError:
                prop3 = False
                break
            if not induces(F, d.AU, d.BU, d.phi_U.class_map):
                prop3 = False
                break
    return {"property1": prop1, "property2": prop2, "property3": prop3}


def aut_lift_holds(A: SRing, witness: GwrWitness) -> bool:
    """Whether every automorphism of ``A_{U/L}`` lifts to ``A_U``, compared by group orders.

    The image of ``Aut(A_U)`` in the permutations of ``U/L`` always lies in
    ``Aut(A_{U/L})``; equality holds iff ``|Aut(A_U)| / |kernel|`` equals
    ``|Aut(A_{U/L})|``, where the kernel fixes every ``L``-coset setwise.
    """
    G = A.group
    SU = quotient(G, witness.U, trivial_subgroup(G))
    AU = quotient_sring(A, SU)
    QU = SU.quotient
    Lq = subgroup_from_elements(QU, SU.project(witness.L.elements))
    SQ = quotient(QU, whole_group(QU), Lq)
    AUL = quotient_sring(AU, SQ)
    colU = _cayley_colours(AU)
    full = _chain_order(colU, colU)
    mask = SQ.projection[:, None] == SQ.projection[None, :]
    kernel = _chain_order(colU, colU, mask)
    colQ = _cayley_colours(AUL)
    return full // kernel == _chain_order(colQ, colQ)


# -- strategy cascade ------------------------------------------------------------------------------


def find_inducing(A: SRing, B: SRing, phi, brute_bound: int = BRUTE_BOUND, use_gwr: bool = True) -> tuple[PointMap, str] | None:
    """Run the cascade; ``None`` means a complete search showed ``iso(A, B, phi)`` is empty.

    Raises a size error if every constructive strategy failed and the
    groups are too large for backtracking.
    """
    G, H = A.group, B.group
    phi = tuple(int(v) for v in (phi.class_map if isinstance(phi, AlgebraicIso) else phi))
    if G.order != H.order or A.rank != B.rank:
        return None
    if A.rank <= 2:
        # only the diagonal and its complement; any bijection with e -> e' works
        return PointMap(G, H, np.arange(G.order)), "trivial"
    f = _cayley_search(A, B, phi)
    if f is not None:
        return f, "cayley"
    if use_gwr:
        aphi = AlgebraicIso(A, B, phi)
        for w in gwr_sections(A):
            if not w.proper:
                continue
            try:
                f = gwr_inducing(A, B, aphi, w, brute_bound)
            except (AutLiftingError, SizeError):
                continue
            if f is not None:
                return f, "gwr-assembly"
    if G.order > brute_bound:
        raise SizeError(f"no constructive strategy succeeded and |G| = {G.order} exceeds {brute_bound}")
    f = find_inducing_iso_bruteforce(A, B, phi, bound=brute_bound)
    if f is None:
        return None
    return f, "brute"


def gwr_inducing(A: SRing, B: SRing, phi: AlgebraicIso, witness: GwrWitness, brute_bound: int = BRUTE_BOUND) -> PointMap | None:
    """Solve the two smaller problems recursively, then assemble."""
    d = gwr_data(A, B, phi, witness)
    r1 = find_inducing(d.AU, d.BU, d.phi_U, brute_bound)
    r2 = find_inducing(d.AGL, d.BGL, d.phi_GL, brute_bound)
    if r1 is None or r2 is None:
        return None
    f = assemble_gwr_iso(A, B, phi, witness, r1[0], r2[0], d)
    if not induces(f, A, B, phi.class_map):
        raise InternalInvariantError("assembled map does not induce phi")
    return f


# -- graph isomorphism pipeline -------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PipelineResult:
    """Verdict of the pipeline: a certificate, or the reason for non-isomorphism."""

    certificate: IsoCertificate | None
    reason: str
    source: SRing | None = None
    target: SRing | None = None

    @property
    def isomorphic(self) -> bool:
        return self.certificate is not None


def check_pipeline_shape(G: AbelianGroup) -> None:
    p, k = _p_shape(G)
    from .abelian import invariant_factors

    if p not in (2, 3) or len(invariant_factors(G)) != 2:
        raise ShapeError(f"{G.name} is not C_p x C_p^k with p in {{2, 3}}")


def graph_iso_pipeline_result(G: AbelianGroup, X: Iterable[int], H: AbelianGroup, Y: Iterable[int],
                              brute_bound: int = BRUTE_BOUND) -> PipelineResult:
    check_pipeline_shape(G)
    X, Y = frozenset(X), frozenset(Y)
    if 0 in X or (H.order and 0 in Y):
        raise ValueError("connection sets must not contain the identity")
    if G.order != H.order:
        return PipelineResult(None, "order")
    if len(X) != len(Y):
        return PipelineResult(None, "valency")
    cA, stA = ordered_cayley_partition(G, X)
    cB, stB = ordered_cayley_partition(H, Y)
    if len(cA) != len(cB) or not stA.same_history(stB):
        return PipelineResult(None, "wl")
    A = SRing(G, cA)
    B = SRing(H, cB)
    phi = [0] * A.rank
    for XA, XB in zip(cA, cB):
        phi[int(A.cls[min(XA)])] = int(B.cls[min(XB)])
    if not verify_algiso(A, B, phi):
        # alignment failed; look for any algebraic isomorphism carrying X to Y
        XA_cls = {int(A.cls[x]) for x in X}
        found = None
        for psi in enumerate_algisos(A, B):
            if frozenset(y for c in XA_cls for y in B.classes[psi.class_map[c]]) == Y:
                found = psi.class_map
                break
        if found is None:
            return PipelineResult(None, "algebraic", A, B)
        phi = list(found)
    res = find_inducing(A, B, phi, brute_bound)
    if res is None:
        return PipelineResult(None, "empty-iso-set", A, B)
    f, strategy = res
    EA = np.zeros((G.order, G.order), dtype=bool)
    EB = np.zeros((H.order, H.order), dtype=bool)
    mX = np.zeros(G.order, dtype=bool)
    mX[list(X)] = True
    mY = np.zeros(H.order, dtype=bool)
    mY[list(Y)] = True
    EA[:] = mX[G.sub.T]
    EB[:] = mY[H.sub.T]
    t = f.table
    if not np.array_equal(EB[np.ix_(t, t)], EA):
        raise InternalInvariantError("pipeline map is not a graph isomorphism")
    cert = IsoCertificate(f, AlgebraicIso(A, B, tuple(phi)), "pipeline", strategy)
    return PipelineResult(cert, "isomorphic", A, B)


def graph_iso_pipeline(G: AbelianGroup, X: Iterable[int], H: AbelianGroup, Y: Iterable[int],
                       brute_bound: int = BRUTE_BOUND) -> IsoCertificate | None:
    """Isomorphism test for Cayley graphs ``Cay(G, X)`` and ``Cay(H, Y)``."""
    return graph_iso_pipeline_result(G, X, H, Y, brute_bound).certificate
