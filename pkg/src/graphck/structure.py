"""Cycle census and the decidable structure flags of a graph.

Cycles are found at the bundle level (one representative instance each)
and classified by what their exits do: none (terminal), some but none
leading back (transitory), or at least one returning.  The flags are
boolean combinations of the census with reachability facts, each carrying
a human-readable witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import (
    OMEGA,
    CapError,
    EdgeBundle,
    EdgeInstance,
    Graph,
    GraphError,
    SignedEdge,
    is_omega,
)
from .paths import Path
from .points import AperiodicDescriptor, FinitePath, act


class StructureError(GraphError):
    pass


class CycleCapError(StructureError, CapError):
    pass


@dataclass(frozen=True)
class Cycle:
    """A vertex-simple directed cycle, one instance per step.

    Parallel instances along the same bundles are not listed separately;
    count says how many instance-level cycles the representative stands
    for.  The tuple is rotated so the smallest step comes first.
    """

    instances: tuple[EdgeInstance, ...]
    kind: str
    count: object = 1

    @property
    def origin(self) -> str:
        return self.instances[0].origin

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(e.origin for e in self.instances)

    def path(self) -> Path:
        return Path(self.origin, tuple(SignedEdge(e) for e in self.instances))

    def __str__(self) -> str:
        body = ".".join(str(e) for e in self.instances)
        return "[%s]" % body

    __repr__ = __str__


def _canonical_rotation(steps: tuple[EdgeInstance, ...]) -> tuple[EdgeInstance, ...]:
    best = None
    for j in range(len(steps)):
        rot = steps[j:] + steps[:j]
        key = tuple(e.sort_key() for e in rot)
        if best is None or key < best[0]:
            best = (key, rot)
    return best[1]


def _cycle_count(bundles) -> object:
    total = 1
    for b in bundles:
        if is_omega(b.multiplicity):
            return OMEGA
        total *= b.multiplicity
    return total


def find_cycles(g: Graph, cap: int = 10000) -> tuple[Cycle, ...]:
    """All vertex-simple directed cycles, classified, smallest first."""
    seen: dict[tuple, tuple[EdgeBundle, ...]] = {}
    order = {v: i for i, v in enumerate(g.vertices)}

    def walk(start: str, at: str, trail: tuple[EdgeBundle, ...], onpath: set):
        for b in g.delta1(at).bundles:
            t = b.terminus
            if t == start:
                steps = _canonical_rotation(tuple(x.instance(0) for x in trail + (b,)))
                seen[tuple(e.sort_key() for e in steps)] = trail + (b,)
                if len(seen) > cap:
                    raise CycleCapError("more than %d cycles" % cap)
            elif t not in onpath and order[t] > order[start]:
                walk(start, t, trail + (b,), onpath | {t})

    for v in g.vertices:
        walk(v, v, (), {v})
    out = []
    for key in sorted(seen):
        bundles = seen[key]
        steps = _canonical_rotation(tuple(b.instance(0) for b in bundles))
        out.append(Cycle(steps, _classify_cycle(g, steps), _cycle_count(bundles)))
    return tuple(out)


def _exits(g: Graph, steps: tuple[EdgeInstance, ...]):
    """Instances leaving a cycle vertex other than the cycle's own step."""
    for e in steps:
        for b in g.delta1(e.origin).bundles:
            if b is e.bundle and not is_omega(b.multiplicity) and b.multiplicity == 1:
                continue
            if b is e.bundle:
                # another parallel instance of the same bundle
                yield b.instance(1 if e.index == 0 else 0)
            else:
                yield b.instance(0)


def _classify_cycle(g: Graph, steps: tuple[EdgeInstance, ...]) -> str:
    vset = set(e.origin for e in steps)
    kinds = set()
    for e in _exits(g, steps):
        if vset & g.reachable(e.terminus):
            return "returning"
        kinds.add("leaves")
    return "transitory" if kinds else "terminal"


def _scc_partition(g: Graph) -> list[frozenset[str]]:
    """Strongly connected components, reverse topological order."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    onstack: set[str] = set()
    stack: list[str] = []
    out: list[frozenset[str]] = []
    counter = [0]

    def strong(v: str):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        onstack.add(v)
        for b in g.delta1(v).bundles:
            w = b.terminus
            if w not in index:
                strong(w)
                low[v] = min(low[v], low[w])
            elif w in onstack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = set()
            while True:
                w = stack.pop()
                onstack.discard(w)
                comp.add(w)
                if w == v:
                    break
            out.append(frozenset(comp))

    for v in g.vertices:
        if v not in index:
            strong(v)
    return out


def _has_internal_cycle(g: Graph, comp: frozenset[str]) -> bool:
    if len(comp) > 1:
        return True
    (v,) = comp
    return any(b.terminus == v for b in g.delta1(v).bundles)


@dataclass(frozen=True)
class StructureReport:
    graph: Graph
    cycles: tuple[Cycle, ...]
    af: bool
    locally_contractive: bool
    cofinal: bool
    essentially_free: bool
    essentially_principal: bool
    simple: bool
    purely_infinite_simple: bool
    witnesses: dict = field(default_factory=dict)

    def flags(self) -> dict:
        return {
            "af": self.af,
            "locally_contractive": self.locally_contractive,
            "cofinal": self.cofinal,
            "essentially_free": self.essentially_free,
            "essentially_principal": self.essentially_principal,
            "simple": self.simple,
            "purely_infinite_simple": self.purely_infinite_simple,
        }


def structure_report(g: Graph, cycle_cap: int = 10000) -> StructureReport:
    cycles = find_cycles(g, cycle_cap)
    wit: dict[str, str] = {}
    terminal = [c for c in cycles if c.kind == "terminal"]
    transitory = [c for c in cycles if c.kind == "transitory"]

    af = not cycles
    if cycles:
        wit["af"] = "cycle %s" % cycles[0]

    essentially_free = not terminal
    if terminal:
        wit["essentially_free"] = "cycle %s has no exit" % terminal[0]
    essentially_principal = not terminal and not transitory
    if terminal:
        wit["essentially_principal"] = wit["essentially_free"]
    elif transitory:
        wit["essentially_principal"] = "no walk returns to the cycle %s" % transitory[0]

    cycle_verts = set()
    for c in cycles:
        cycle_verts.update(c.vertices)
    reach = {v: g.reachable(v) for v in g.vertices}
    meets_all = True
    for v in g.vertices:
        if not (reach[v] & cycle_verts):
            meets_all = False
            if cycles:
                wit.setdefault(
                    "locally_contractive", "no walk from %s meets a cycle" % v
                )
            break
    if not cycles:
        wit["locally_contractive"] = "no cycles at all"
    locally_contractive = bool(cycles) and not terminal and meets_all
    if terminal and "locally_contractive" not in wit:
        wit["locally_contractive"] = wit["essentially_free"]

    sccs = _scc_partition(g)
    cycle_sccs = [comp for comp in sccs if _has_internal_cycle(g, comp)]
    singular = set(g.sinks) | set(g.infinite_emitters)
    cofinal = True
    for v in g.vertices:
        for comp in cycle_sccs:
            if not (reach[v] & comp):
                cofinal = False
                wit.setdefault(
                    "cofinal",
                    "vertex %s does not reach the cycle component at %s"
                    % (v, sorted(comp)[0]),
                )
        for s in singular:
            if s not in reach[v]:
                cofinal = False
                wit.setdefault("cofinal", "vertex %s does not reach %s" % (v, s))

    simple = cofinal and not terminal
    if not cofinal:
        wit["simple"] = wit["cofinal"]
    elif terminal:
        wit["simple"] = wit["essentially_free"]

    purely_infinite_simple = simple and bool(cycles) and meets_all
    if not purely_infinite_simple and "purely_infinite_simple" not in wit:
        if not simple:
            wit["purely_infinite_simple"] = wit["simple"]
        else:
            wit["purely_infinite_simple"] = wit["locally_contractive"]

    return StructureReport(
        graph=g,
        cycles=cycles,
        af=af,
        locally_contractive=locally_contractive,
        cofinal=cofinal,
        essentially_free=essentially_free,
        essentially_principal=essentially_principal,
        simple=simple,
        purely_infinite_simple=purely_infinite_simple,
        witnesses=wit,
    )


def isotropy(x):
    """(kind, fixing walk): nontrivial exactly on the lasso points."""
    if x.kind != "lasso":
        return ("trivial", None)
    loop = Path(x.stem.terminus, x.cycle)
    alpha = x.stem * loop * x.stem.inverse()
    assert act(alpha, x) == x
    return ("nontrivial", alpha)


def _bfs_to(g: Graph, u: str, targets) -> Path | None:
    prev: dict[str, tuple[str, EdgeInstance]] = {}
    seen = {u}
    queue = [u]
    while queue:
        at = queue.pop(0)
        if at in targets:
            word = []
            while at != u:
                parent, e = prev[at]
                word.append(SignedEdge(e))
                at = parent
            return Path(u, tuple(reversed(word)))
        for b in g.delta1(at).bundles:
            t = b.terminus
            if t not in seen:
                seen.add(t)
                prev[t] = (at, b.instance(0))
                queue.append(t)
    return None


def _path_within(g: Graph, comp: frozenset[str], src: str, dst: str) -> tuple[EdgeInstance, ...]:
    if src == dst:
        return ()
    prev: dict[str, tuple[str, EdgeInstance]] = {}
    seen = {src}
    queue = [src]
    while queue:
        at = queue.pop(0)
        for b in g.delta1(at).bundles:
            t = b.terminus
            if t not in comp or t in seen:
                continue
            prev[t] = (at, b.instance(0))
            if t == dst:
                word = []
                while t != src:
                    parent, e = prev[t]
                    word.append(e)
                    t = parent
                return tuple(reversed(word))
            seen.add(t)
            queue.append(t)
    raise StructureError("no path from %s to %s inside the component" % (src, dst))


def free_point_from(g: Graph, u: str):
    """A boundary point from u that no nonunit walk fixes.

    A walk to a sink or an infinite emitter works; otherwise a component
    with a genuine choice of steps feeds an aperiodic ray with strictly
    growing cycle runs.  Raises when every walk from u is eventually
    periodic.
    """
    g.check_vertex(u)
    singular = set(g.sinks) | set(g.infinite_emitters)
    hit = _bfs_to(g, u, singular)
    if hit is not None:
        return FinitePath(hit)
    reach = g.reachable(u)
    for comp in _scc_partition(g):
        if not (comp & reach):
            continue
        branching = None
        for v in comp:
            inside = []
            for b in g.delta1(v).bundles:
                if b.terminus not in comp:
                    continue
                n = 2 if is_omega(b.multiplicity) else b.multiplicity
                inside.extend(b.instance(i) for i in range(min(n, 2)))
            if len(inside) >= 2:
                branching = (v, inside)
                break
        if branching is None:
            continue
        w, inside = branching
        first = inside[0]
        gamma = (first,) + _path_within(g, comp, first.terminus, w)
        exit_step = next(e for e in inside if e != first)
        ret = (exit_step,) + _path_within(g, comp, exit_step.terminus, w)
        alpha = _bfs_to(g, u, {w})
        if alpha is None:
            continue
        return AperiodicDescriptor(
            alpha,
            tuple(SignedEdge(e) for e in gamma),
            tuple(SignedEdge(e) for e in ret),
        )
    raise StructureError("every walk from %s is eventually periodic" % u)


def count_paths_into(g: Graph, u: str):
    """Directed paths ending at u, the unit included; OMEGA when infinite.

    Infinite exactly when some cycle vertex or some target of an
    infinite bundle reaches u.
    """
    g.check_vertex(u)
    from .trees import vertices_on_cycles

    sources = set(vertices_on_cycles(g))
    for b in g.bundles:
        if is_omega(b.multiplicity):
            sources.add(b.terminus)
    for s in sources:
        if u in g.reachable(s):
            return OMEGA
    memo: dict[str, int] = {}

    def f(v: str) -> int:
        if v not in memo:
            memo[v] = 1 + sum(
                b.multiplicity * f(b.origin) for b in g.in_bundles(v)
            )
        return memo[v]

    return f(u)


def toeplitz_ideal_report(g: Graph, marks) -> dict[str, object]:
    """Per marked vertex, the size of the matrix block its relation kills.

    Marking a regular vertex u collapses a copy of the compacts over the
    directed paths into u; the report maps u to that path count.
    """
    marks = frozenset(marks)
    bad = marks - g.regular_vertices
    if bad:
        raise StructureError("marks %s are not regular vertices" % sorted(bad))
    return {u: count_paths_into(g, u) for u in sorted(marks)}
