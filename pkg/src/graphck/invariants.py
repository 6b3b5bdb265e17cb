"""Vertex families with exclusion sets, and their boundary dictionary.

An admissible family is a vertex set N together with a finite excluded
out-edge set F_u at each member, subject to: members of finite valence
exclude nothing; an unexcluded edge from a member lands on a member that
excludes nothing; an excluded edge landing on a member lands on one that
excludes something; and a finite-valence vertex all of whose out-edges
land on members with empty exclusions is itself a member.

Over a tree, each family spreads to the open set union of the cones
V(u; F_u), and conversely an open set is scanned back to the family of
apexes whose cone boundary it swallows; the two directions invert each
other.  Quotient data collapses a family to the graph seen by what is
left over.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .graphs import EdgeBundle, EdgeInstance, Graph, GraphError, is_omega, subgraph_le
from .paths import Path
from .ringsets import BasicSet, RingSet
from .trees import FiberTree


class InvariantError(GraphError):
    pass


@dataclass(frozen=True)
class Invariant:
    """A vertex family plus per-vertex excluded out-edge sets.

    exclusions holds only the nonempty sets, sorted by vertex, so equal
    families compare equal structurally.
    """

    vertices: frozenset[str]
    exclusions: tuple[tuple[str, frozenset[EdgeInstance]], ...] = ()

    @classmethod
    def make(cls, vertices: Iterable[str], exclusions: Mapping[str, Iterable[EdgeInstance]] = {}) -> "Invariant":
        vs = frozenset(vertices)
        pairs = []
        for u, es in exclusions.items():
            es = frozenset(es)
            if not es:
                continue
            if u not in vs:
                raise InvariantError("exclusions at %s, which is not in the family" % u)
            pairs.append((u, es))
        pairs.sort()
        return cls(vs, tuple(pairs))

    def f(self, u: str) -> frozenset[EdgeInstance]:
        for v, es in self.exclusions:
            if v == u:
                return es
        return frozenset()

    @property
    def r_vertices(self) -> frozenset[str]:
        return frozenset(u for u, _ in self.exclusions)

    def sort_key(self):
        return (
            len(self.vertices),
            tuple(sorted(self.vertices)),
            tuple((u, tuple(sorted(e.sort_key() for e in es))) for u, es in self.exclusions),
        )

    def __str__(self) -> str:
        vs = ",".join(sorted(self.vertices))
        if not self.exclusions:
            return "({%s})" % vs
        fs = "; ".join(
            "%s:%s" % (u, ",".join(sorted(str(e) for e in es))) for u, es in self.exclusions
        )
        return "({%s} | %s)" % (vs, fs)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failures: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_invariant(g: Graph, inv: Invariant) -> CheckResult:
    """Decide admissibility, with human-readable failure witnesses.

    Edges are handled bundle-wise: an omega bundle always has instances
    outside the finite exclusion set, so its terminus is forced into the
    family with empty exclusions; excluded instances of the same bundle
    then contradict that.  This avoids quantifying over instances.
    """
    failures = []
    notes = []
    nset = inv.vertices
    for u in nset:
        g.check_vertex(u)
    fmap = {u: inv.f(u) for u in nset}
    for u, excl in inv.exclusions:
        for e in excl:
            try:
                known = g.bundle(e.bundle.name) == e.bundle
            except GraphError:
                known = False
            if not known or e.origin != u:
                failures.append("excluded edge %s does not leave %s" % (e, u))
    if failures:
        return CheckResult(False, tuple(failures))

    for u in sorted(nset):
        d = g.delta1(u)
        excl = fmap[u]
        if not d.infinite and excl:
            failures.append("vertex %s has finite valence but excludes %d edges" % (u, len(excl)))
        chosen: dict[EdgeBundle, int] = {}
        for e in excl:
            chosen[e.bundle] = chosen.get(e.bundle, 0) + 1
        for b in d.bundles:
            picked = chosen.get(b, 0)
            t = b.terminus
            if is_omega(b.multiplicity) or picked < b.multiplicity:
                # some instance is not excluded
                if t not in nset:
                    failures.append("edge %s leaves the family at %s" % (b.name, u))
                elif fmap[t]:
                    failures.append(
                        "edge %s from %s lands on %s, which must exclude nothing" % (b.name, u, t)
                    )
            if picked and t in nset:
                if not fmap[t]:
                    failures.append(
                        "excluded edge %s from %s lands on %s, which needs a nonempty exclusion set"
                        % (b.name, u, t)
                    )
                elif g.delta1(t).infinite:
                    notes.append(
                        "excluded edge %s lands on the infinite-valence member %s with exclusions"
                        % (b.name, t)
                    )
    for u in g.vertices:
        if u in nset:
            continue
        d = g.delta1(u)
        if d.is_empty or d.infinite:
            continue
        if all(b.terminus in nset and not fmap[b.terminus] for b in d.bundles):
            failures.append(
                "vertex %s sees only members with empty exclusions and must join the family" % u
            )
    return CheckResult(not failures, tuple(failures), tuple(notes))


def invariant_leq(a: Invariant, b: Invariant) -> bool:
    """a below b: smaller family, larger exclusion sets where both defined."""
    if not a.vertices <= b.vertices:
        return False
    return all(a.f(u) >= b.f(u) for u in a.vertices)


@dataclass(frozen=True)
class Enumeration:
    invariants: tuple[Invariant, ...]
    flagged: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def __iter__(self):
        return iter(self.invariants)

    def __len__(self):
        return len(self.invariants)


def _f_options(g: Graph, u: str, omega_f_bound: int):
    """Candidate exclusion sets at an infinite-valence member.

    Whole finite bundles in any combination; with a positive bound, also
    index prefixes of the omega bundles, to probe for families the
    bundle-wise rules would flag.
    """
    d = g.delta1(u)
    finite_bundles = [b for b in d.bundles if not is_omega(b.multiplicity)]
    omega_bundles = [b for b in d.bundles if is_omega(b.multiplicity)]
    base = []
    for k in range(len(finite_bundles) + 1):
        for combo in itertools.combinations(finite_bundles, k):
            base.append(frozenset(e for b in combo for e in b.instances()))
    if omega_f_bound <= 0 or not omega_bundles:
        return base
    out = []
    prefix_choices = [range(omega_f_bound + 1)] * len(omega_bundles)
    for sizes in itertools.product(*prefix_choices):
        extra = frozenset(
            b.instance(i) for b, size in zip(omega_bundles, sizes) for i in range(size)
        )
        for fs in base:
            out.append(fs | extra)
    return out


def enumerate_invariants(g: Graph, omega_f_bound: int = 0) -> Enumeration:
    """All admissible families, smallest first.

    Exclusion sets are searched over whole finite bundles at the
    infinite-valence members; omega_f_bound > 0 additionally probes
    exclusion sets sampling the omega bundles, and any admissible family
    found that way is flagged as the finite shadow of an infinite batch.
    """
    verts = sorted(g.vertices)
    emitters = sorted(set(verts) & g.infinite_emitters)
    found = []
    flagged = []
    notes = set()
    for k in range(len(verts) + 1):
        for combo in itertools.combinations(verts, k):
            nset = frozenset(combo)
            live = [u for u in emitters if u in nset]
            options = [_f_options(g, u, omega_f_bound) for u in live]
            for picks in itertools.product(*options):
                inv = Invariant.make(nset, dict(zip(live, picks)))
                res = is_invariant(g, inv)
                if res.ok:
                    found.append(inv)
                    notes.update(res.notes)
                    if any(is_omega(e.bundle.multiplicity) for _, es in inv.exclusions for e in es):
                        flagged.append(
                            "%s stands for an infinite batch of families along its omega exclusions"
                            % inv
                        )
    found.sort(key=lambda i: i.sort_key())
    return Enumeration(tuple(found), tuple(flagged), tuple(sorted(notes)))


def hasse_edges(invariants) -> list[tuple[int, int]]:
    """Covering pairs (i, j) with element i directly below element j."""
    invs = list(invariants)
    below = [
        [invariant_leq(a, b) and a != b for b in invs]
        for a in invs
    ]
    edges = []
    for i, a in enumerate(invs):
        for j, b in enumerate(invs):
            if not below[i][j]:
                continue
            if any(below[i][m] and below[m][j] for m in range(len(invs))):
                continue
            edges.append((i, j))
    return edges


def _endpoint(tree, p):
    return p.terminus if isinstance(tree, FiberTree) else p


def _universe(tree, depth: int, omega_cap: int):
    # the family calculus lives on the directed part of the fiber: cones
    # at vertices reached against the direction are not translation stable
    if isinstance(tree, FiberTree):
        return tree.directed_to_depth(depth, omega_cap)
    return list(tree.vertices)


def open_set_of(tree, inv: Invariant, depth: int = 4, omega_cap: int = 3) -> RingSet:
    """The union of the cones V(p; F at endpoint) over member vertices.

    Over a fiber the union runs over all walks up to the given depth;
    unions absorb, so deeper walks only matter until their cones are
    covered.
    """
    rs = RingSet.empty(tree)
    for p in _universe(tree, depth, omega_cap):
        u = _endpoint(tree, p)
        if u in inv.vertices:
            block = RingSet.of(tree, [BasicSet(p, inv.f(u))])
            if not rs.contains(block):
                rs = rs.union(block)
    return rs


def residue_part_of(tree, inv: Invariant, depth: int = 4, omega_cap: int = 3) -> RingSet:
    """The full cones at members with empty exclusions only.

    The open set of the family splits as this part together with the
    single points at the excluding members.
    """
    rs = RingSet.empty(tree)
    rv = inv.r_vertices
    for p in _universe(tree, depth, omega_cap):
        u = _endpoint(tree, p)
        if u in inv.vertices and u not in rv:
            block = RingSet.of(tree, [BasicSet(p, frozenset())])
            if not rs.contains(block):
                rs = rs.union(block)
    return rs


def _named_omega_indices(w: RingSet, p) -> dict[EdgeBundle, int]:
    """Highest omega-bundle index appearing in the set's blocks or in p."""
    mx: dict[EdgeBundle, int] = {}

    def note(e: EdgeInstance):
        if is_omega(e.bundle.multiplicity):
            prev = mx.get(e.bundle, -1)
            if e.index > prev:
                mx[e.bundle] = e.index

    for b in w.blocks:
        if isinstance(b.apex, Path):
            for s in b.apex.word:
                note(s.edge)
        for e in b.excluded:
            note(e)
    if isinstance(p, Path):
        for s in p.word:
            note(s.edge)
    return mx


def tree_invariant_of(w: RingSet, depth: int = 4, omega_cap: int = 3) -> dict:
    """Scan the tree for apexes whose cone boundary the set swallows.

    Returns {vertex: minimal exclusion set}.  Finite-valence vertices may
    only join with the full cone.  At an infinite-valence vertex the
    exclusion candidates are the finitely many indices the set itself
    names; one fresh index probes all the rest at once, since unnamed
    siblings are interchangeable.
    """
    tree = w.tree
    universe = list(_universe(tree, depth, omega_cap))
    seen = set(universe)
    for b in w.blocks:
        if b.apex not in seen:
            universe.append(b.apex)
            seen.add(b.apex)

    def swallows(block: BasicSet) -> bool:
        return w.boundary_contains(RingSet.of(tree, [block]))

    fam = {}
    for p in universe:
        d = tree.out_edges(p)
        if not d.infinite:
            if swallows(BasicSet(p, frozenset())):
                fam[p] = frozenset()
            continue
        named = _named_omega_indices(w, p)
        ok = True
        for b in d.bundles:
            if is_omega(b.multiplicity):
                probe = b.instance(named.get(b, -1) + 1)
                if not swallows(BasicSet(tree.child(p, probe), frozenset())):
                    ok = False
                    break
        if not ok:
            continue
        candidates = []
        for b in d.bundles:
            if is_omega(b.multiplicity):
                candidates.extend(b.instance(i) for i in range(named.get(b, -1) + 1))
            else:
                candidates.extend(b.instances())
        fmin = frozenset(
            e for e in candidates if not swallows(BasicSet(tree.child(p, e), frozenset()))
        )
        if swallows(BasicSet(p, fmin)):
            fam[p] = fmin
    return fam


def family_open_set(tree, fam: dict) -> RingSet:
    """The union of the cones of a scanned family, smallest walks first."""
    def size(p):
        return len(p.word) if isinstance(p, Path) else 0

    rs = RingSet.empty(tree)
    for p in sorted(fam, key=lambda p: (size(p), tree.vkey(p))):
        block = RingSet.of(tree, [BasicSet(p, fam[p])])
        if not rs.contains(block):
            rs = rs.union(block)
    return rs


@dataclass(frozen=True)
class QuotientData:
    """What is left of a graph after collapsing a family.

    Kept vertices are the outsiders plus the excluding members; all
    positive edges between kept vertices survive.  Marks collect the
    excluding members and the outsiders of finite positive valence in
    the original graph.
    """

    r_vertices: frozenset[str]
    graph: Graph
    s_marks: frozenset[str]


def quotient_data(g: Graph, inv: Invariant) -> QuotientData:
    res = is_invariant(g, inv)
    if not res.ok:
        raise InvariantError("not an admissible family: %s" % (res.failures[0],))
    rset = inv.r_vertices
    kept = [v for v in g.vertices if v not in inv.vertices or v in rset]
    keptset = set(kept)
    bundles = [b for b in g.bundles if b.origin in keptset and b.terminus in keptset]
    name = (g.name or "graph") + ".quotient"
    q = Graph(kept, bundles, name=name)
    marks = set(rset)
    for u in g.vertices:
        if u in inv.vertices:
            continue
        d = g.delta1(u)
        if not d.is_empty and not d.infinite:
            marks.add(u)
    bad = frozenset(marks) - q.regular_vertices
    if bad:
        raise InvariantError("marks %s fell out of the regular vertices" % sorted(bad))
    return QuotientData(rset, q, frozenset(marks))


def induced_marks(sub: Graph, sup: Graph, marks: Iterable[str]) -> frozenset[str]:
    """Push marked regular vertices down a subgraph inclusion.

    A mark survives when the subgraph already carries every out-edge the
    larger graph gives it, instance for instance.
    """
    if not subgraph_le(sub, sup):
        raise InvariantError("not a subgraph inclusion")
    marks = frozenset(marks)
    bad = marks - sup.regular_vertices
    if bad:
        raise InvariantError("marks %s are not regular vertices" % sorted(bad))
    out = set()
    for v in marks:
        if not sub.has_vertex(v):
            continue
        full = True
        for b in sup.delta1(v).bundles:
            try:
                small = sub.bundle(b.name)
            except GraphError:
                full = False
                break
            if is_omega(b.multiplicity):
                if not is_omega(small.multiplicity):
                    full = False
                    break
            elif is_omega(small.multiplicity) or small.multiplicity != b.multiplicity:
                full = False
                break
        if full:
            out.add(v)
    return frozenset(out)
