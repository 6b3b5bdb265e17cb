"""Shared generators for the randomized tests.

Everything takes an explicit random.Random so each test pins its own seed.
"""

from __future__ import annotations

import random

from graphck.graphs import OMEGA, EdgeBundle, Graph, SignedEdge, is_omega
from graphck.paths import Path


def random_graph(
    rng: random.Random,
    max_vertices: int = 8,
    max_bundles: int = 12,
    allow_omega: bool = True,
    allow_multi: bool = True,
) -> Graph:
    n = rng.randint(1, max_vertices)
    vertices = ["v%d" % i for i in range(n)]
    bundles = []
    for j in range(rng.randint(0, max_bundles)):
        mult: object = 1
        roll = rng.random()
        if allow_omega and roll < 0.08:
            mult = OMEGA
        elif allow_multi and roll < 0.2:
            mult = rng.randint(2, 3)
        bundles.append(
            EdgeBundle("e%d" % j, rng.choice(vertices), rng.choice(vertices), mult)
        )
    return Graph(vertices, bundles)


def random_tree_graph(rng: random.Random, n: int) -> Graph:
    """A connected graph whose undirected shape is a tree, multiplicities 1."""
    vertices = ["n%d" % i for i in range(n)]
    bundles = []
    for i in range(1, n):
        p = vertices[rng.randrange(i)]
        c = vertices[i]
        if rng.random() < 0.5:
            bundles.append(EdgeBundle("t%d" % i, p, c))
        else:
            bundles.append(EdgeBundle("t%d" % i, c, p))
    return Graph(vertices, bundles)


def _signed_extensions(g: Graph, at: str, omega_cap: int = 3) -> list[SignedEdge]:
    out = []
    for b in g.delta1(at).bundles:
        cap = omega_cap if is_omega(b.multiplicity) else None
        out.extend(SignedEdge(e) for e in b.instances(cap))
    for b in g.in_bundles(at):
        cap = omega_cap if is_omega(b.multiplicity) else None
        out.extend(SignedEdge(e, forward=False) for e in b.instances(cap))
    return out


def random_walk_path(
    rng: random.Random, g: Graph, max_len: int = 6, start: str | None = None
) -> Path:
    at = start if start is not None else rng.choice(g.vertices)
    p = Path.unit(at)
    for _ in range(rng.randint(0, max_len)):
        options = [
            s
            for s in _signed_extensions(g, p.terminus)
            if not (p.word and s == p.word[-1].reverse())
        ]
        if not options:
            break
        s = rng.choice(options)
        p = Path(p.origin, p.word + (s,))
    return p


def random_directed_path(
    rng: random.Random, g: Graph, max_len: int = 6, start: str | None = None
) -> Path:
    at = start if start is not None else rng.choice(g.vertices)
    p = Path.unit(at)
    for _ in range(rng.randint(0, max_len)):
        d1 = g.delta1(p.terminus)
        options = []
        for b in d1.bundles:
            cap = 3 if is_omega(b.multiplicity) else None
            options.extend(b.instances(cap))
        if not options:
            break
        p = p.append(rng.choice(options))
    return p


def cone_oracle(g, v, excluded=frozenset()):
    """Extensional cone of a finite tree graph: plain BFS over successors."""
    succ = {u: [] for u in g.vertices}
    for b in g.bundles:
        succ[b.origin].append((b.instance(0), b.terminus))
    out = {v}
    stack = [w for (e, w) in succ[v] if e not in excluded]
    while stack:
        w = stack.pop()
        if w not in out:
            out.add(w)
            stack.extend(t for (_, t) in succ[w])
    return out


def ringset_extension(g, rs):
    out = set()
    for b in rs.blocks:
        out |= cone_oracle(g, b.apex, b.excluded)
    return out


def random_basic(rng, tree):
    from graphck.ringsets import BasicSet

    apex = rng.choice(tree.vertices)
    d1 = tree.out_edges(apex).finite_instances()
    excluded = frozenset(e for e in d1 if rng.random() < 0.4)
    return BasicSet(apex, excluded)


def random_lasso(rng, g, max_stem: int = 4):
    """A random eventually periodic end, or None if no circuit is found."""
    from graphck.points import Lasso

    for _ in range(40):
        p = random_directed_path(rng, g, max_len=8)
        hits = {p.origin: 0}
        loop = None
        for i, s in enumerate(p.word):
            if s.terminus in hits:
                loop = (hits[s.terminus], i + 1)
                break
            hits[s.terminus] = i + 1
        if loop is None:
            continue
        start, stop = loop
        return Lasso.of(p.prefix(start), p.word[start:stop])
    return None


def random_point(rng, g, allow_lasso: bool = True):
    from graphck.points import FinitePath

    if allow_lasso and rng.random() < 0.4:
        x = random_lasso(rng, g)
        if x is not None:
            return x
    return FinitePath(random_walk_path(rng, g))


def arrow_into(rng, g, x, max_len: int = 5):
    """A random walk composable with the point x."""
    back = random_walk_path(rng, g, max_len=max_len, start=x.origin)
    return back.inverse()


def _naive_family_ok(g: Graph, nset, fmap) -> bool:
    """Clause-by-clause check straight off the definition, one instance
    at a time.  Omega bundles always keep instances outside the finite
    exclusion sets, so those act like a single non-excluded instance."""
    for u in nset:
        d = g.delta1(u)
        fset = fmap.get(u, frozenset())
        if not d.infinite and fset:
            return False
        for b in d.bundles:
            t = b.terminus
            if is_omega(b.multiplicity):
                instances = [b.instance(i) for i in range(3)]
                free = True
            else:
                instances = list(b.instances())
                free = any(e not in fset for e in instances)
            if free and (t not in nset or fmap.get(t, frozenset())):
                return False
            for e in instances:
                if e in fset and t in nset and not fmap.get(t, frozenset()):
                    return False
    for u in g.vertices:
        if u in nset:
            continue
        d = g.delta1(u)
        if d.is_empty or d.infinite:
            continue
        if all(b.terminus in nset and not fmap.get(b.terminus, frozenset()) for b in d.bundles):
            return False
    return True


def naive_invariants(g: Graph, skip_above: int = 50000):
    """Brute force over families, exclusion sets ranging over arbitrary
    subsets of the finite-bundle instances at each vertex.  Returns a set
    of (vertices, ((u, exclusions), ...)) pairs, or None when the search
    space is over budget."""
    import itertools

    verts = sorted(g.vertices)
    options = {}
    for u in verts:
        d = g.delta1(u)
        if d.infinite:
            fin = [e for b in d.bundles if not is_omega(b.multiplicity) for e in b.instances()]
            opts = []
            for k in range(len(fin) + 1):
                opts.extend(frozenset(c) for c in itertools.combinations(fin, k))
            options[u] = opts
        else:
            options[u] = [frozenset()]
    work = 1
    for u in verts:
        work *= 1 + len(options[u])
    if work > skip_above:
        return None
    out = set()
    for k in range(len(verts) + 1):
        for combo in itertools.combinations(verts, k):
            nset = frozenset(combo)
            for picks in itertools.product(*[options[u] for u in combo]):
                fmap = dict(zip(combo, picks))
                if _naive_family_ok(g, nset, fmap):
                    key = tuple(sorted((u, f) for u, f in fmap.items() if f))
                    out.add((nset, key))
    return out
