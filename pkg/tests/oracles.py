"""Slow, independent reference implementations used only by the tests.

Everything here works on coordinate tuples with plain Python arithmetic and
does not touch the numpy tables of the package.
"""

from __future__ import annotations

import itertools
from collections import Counter

import networkx as nx


def elements(factors):
    return list(itertools.product(*[range(d) for d in factors]))


def add(factors, x, y):
    return tuple((a + b) % d for a, b, d in zip(x, y, factors))


def neg(factors, x):
    return tuple((-a) % d for a, d in zip(x, factors))


def span(factors, gens):
    zero = tuple(0 for _ in factors)
    out = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = add(factors, x, g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def subgroups(factors):
    """All subgroups, by joining cyclic subgroups until nothing new appears."""
    els = elements(factors)
    found = {span(factors, [])}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for g in els:
                if g in H:
                    continue
                K = span(factors, list(H) + [g])
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return found


def automorphism_count(factors):
    """Number of bijective homomorphisms, by testing every image of the standard basis."""
    els = elements(factors)
    count = 0
    for imgs in itertools.product(els, repeat=len(factors)):
        # the image of a generator of order d must have order dividing d
        ok = all(
            all((c * d) % f == 0 for c, f in zip(img, factors)) for img, d in zip(imgs, factors)
        )
        if not ok:
            continue
        image = set()
        for x in els:
            y = tuple(0 for _ in factors)
            for coef, img in zip(x, imgs):
                for _ in range(coef):
                    y = add(factors, y, img)
            image.add(y)
        if len(image) == len(els):
            count += 1
    return count


def is_sring_partition(factors, classes):
    """Check the S-ring axioms by counting representations directly."""
    zero = tuple(0 for _ in factors)
    classes = [frozenset(X) for X in classes]
    if frozenset([zero]) not in classes:
        return False
    for X in classes:
        if frozenset(neg(factors, x) for x in X) not in classes:
            return False
    for X in classes:
        for Y in classes:
            cnt = Counter(add(factors, x, y) for x in X for y in Y)
            for Z in classes:
                if len({cnt.get(z, 0) for z in Z}) != 1:
                    return False
    return True


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def all_srings(factors):
    """Every S-ring partition, by testing every set partition of the non-identity elements."""
    els = elements(factors)
    zero = els[0]
    out = []
    for part in set_partitions(els[1:]):
        classes = [[zero]] + part
        if is_sring_partition(factors, classes):
            out.append(frozenset(frozenset(X) for X in classes))
    return out


def naive_wl(n, colour):
    """Textbook 2-WL on a dict ``(u, w) -> colour``; returns the final partition of pairs."""
    col = dict(colour)
    while True:
        sig = {}
        for u in range(n):
            for w in range(n):
                multiset = tuple(sorted((col[u, v], col[v, w]) for v in range(n)))
                sig[u, w] = (col[u, w], col[w, u], u == w, multiset)
        relabel = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {k: relabel[s] for k, s in sig.items()}
        if len(set(new.values())) == len(set(col.values())):
            return pair_partition(new)
        col = new


def pair_partition(col):
    groups = {}
    for k, c in col.items():
        groups.setdefault(c, set()).add(k)
    return frozenset(frozenset(v) for v in groups.values())


def cayley_digraph(elements_list, connection, addf):
    g = nx.DiGraph()
    g.add_nodes_from(range(len(elements_list)))
    index = {x: i for i, x in enumerate(elements_list)}
    for x in elements_list:
        for s in connection:
            g.add_edge(index[x], index[addf(x, s)])
    return g


def coloured_complete_digraph(n, colour_of_pair):
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    for u in range(n):
        for w in range(n):
            if u != w:
                g.add_edge(u, w, c=int(colour_of_pair(u, w)))
    return g


def scheme_automorphism_count(n, colour_of_pair):
    g = coloured_complete_digraph(n, colour_of_pair)
    gm = nx.algorithms.isomorphism.DiGraphMatcher(g, g, edge_match=lambda a, b: a["c"] == b["c"])
    return sum(1 for _ in gm.isomorphisms_iter())
