"""Oriented, labeled graphs of Phi-strings and their DOT rendering.

There is an arrow ``nu -> nu + alpha_i`` labeled ``i`` whenever both ends lie
in the string and ``i`` is in Phi.

DOT grammar produced by :func:`emit_dot` (UTF-8, LF line endings)::

    digraph phi_string {
      "<c1>,<c2>,..." [label="<expression>"];      one per node, ascending level
      "<from>" -> "<to>" [label="a<i>"];           one per edge, by (from, i)
    }

Node identifiers are the ambient coefficients; the display expression is
``λ`` followed by the Phi-coefficient differences from the base root, for
example ``λ+α1+2α2``. Indices are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError
from .rootsys import Root, RootSystem, level_key
from .strings import StringSet


@dataclass(frozen=True)
class StringGraph:
    nodes: tuple[Root, ...]
    edges: tuple[tuple[int, int, int], ...]
    base: Root
    phi: frozenset[int]
    in_span: bool = False

    def index(self, v: Root) -> int:
        return self.nodes.index(v)

    def in_degree(self) -> list[int]:
        deg = [0] * len(self.nodes)
        for _, t, _ in self.edges:
            deg[t] += 1
        return deg


def build_string_graph(rs: RootSystem, phi, s: StringSet) -> StringGraph:
    phi = frozenset(phi)
    if s.ambient != rs:
        raise DomainError(f"string lives in {s.ambient.rtype}, not {rs.rtype}")
    if s.phi != phi:
        raise DomainError(f"string was computed for Phi={sorted(s.phi)}, not {sorted(phi)}")
    for mu in s.members:
        if mu != rs.zero and mu not in rs.roots:
            raise DomainError(f"member {mu} is not a root of {rs.rtype}")
        if any(m != b for i, (m, b) in enumerate(zip(mu, s.base)) if i not in phi):
            raise DomainError(f"member {mu} differs from the base outside Phi")
    nodes = tuple(sorted(s.members, key=level_key))
    where = {v: k for k, v in enumerate(nodes)}
    edges = []
    for k, v in enumerate(nodes):
        for i in sorted(phi):
            w = tuple(x + (j == i) for j, x in enumerate(v))
            if w in where:
                edges.append((k, where[w], i))
    return StringGraph(nodes, tuple(edges), s.base, phi, s.in_span)


def node_expression(base: Root, v: Root) -> str:
    """``λ`` plus the coefficient differences, e.g. ``λ+α1+2α2`` or ``λ-α3``."""
    out = "λ"
    for i, (a, b) in enumerate(zip(v, base)):
        d = a - b
        if d:
            sign = "+" if d > 0 else "-"
            mag = "" if abs(d) == 1 else str(abs(d))
            out += f"{sign}{mag}α{i + 1}"
    return out


def _node_id(v: Root) -> str:
    return ",".join(map(str, v))


def emit_dot(g: StringGraph) -> str:
    lines = ["digraph phi_string {"]
    for v in g.nodes:
        lines.append(f'  "{_node_id(v)}" [label="{node_expression(g.base, v)}"];')
    for a, b, i in g.edges:
        lines.append(f'  "{_node_id(g.nodes[a])}" -> "{_node_id(g.nodes[b])}" [label="a{i + 1}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_text(g: StringGraph) -> str:
    """Plain listing: one node per line with its outgoing arrows."""
    out = []
    for k, v in enumerate(g.nodes):
        arrows = [f"a{i + 1}->{node_expression(g.base, g.nodes[b])}" for a, b, i in g.edges if a == k]
        out.append(f"{node_expression(g.base, v)}  [{_node_id(v)}]" + ("  " + " ".join(arrows) if arrows else ""))
    return "\n".join(out) + "\n"


def graph_as_dict(g: StringGraph) -> dict:
    return {
        "nodes": [{"id": list(v), "label": node_expression(g.base, v)} for v in g.nodes],
        "edges": [{"from": list(g.nodes[a]), "to": list(g.nodes[b]), "label": f"a{i + 1}"} for a, b, i in g.edges],
    }


@dataclass
class InvariantReport:
    sources: list[Root] = field(default_factory=list)
    unreachable: list[Root] = field(default_factory=list)
    broken_squares: list[tuple[Root, int, int]] = field(default_factory=list)
    checked_source: bool = True

    @property
    def ok(self) -> bool:
        source_ok = not self.checked_source or len(self.sources) == 1
        return source_ok and not self.unreachable and not self.broken_squares

    def failures(self) -> list[str]:
        out = []
        if self.checked_source and len(self.sources) != 1:
            out.append(f"expected one source, found {len(self.sources)}: {self.sources}")
        if self.unreachable:
            out.append(f"unreachable from the source: {self.unreachable}")
        for v, i, j in self.broken_squares:
            out.append(f"square at {v} with a{i + 1}, a{j + 1} is missing an edge")
        return out


def graph_invariants(g: StringGraph) -> InvariantReport:
    """Unique source, reachability, in-degree and commuting squares.

    Source and reachability checks are skipped when the base lies in span Phi,
    where the string is a whole subsystem and has no bottom.
    """
    rep = InvariantReport(checked_source=not g.in_span)
    deg = g.in_degree()
    out: dict[int, list[int]] = {}
    for a, b, _ in g.edges:
        out.setdefault(a, []).append(b)
    if rep.checked_source:
        rep.sources = [g.nodes[k] for k, d in enumerate(deg) if d == 0]
        if g.nodes:
            # Reachability is measured from the lowest node, whatever the sources are.
            seen = {0}
            stack = [0]
            while stack:
                for b in out.get(stack.pop(), []):
                    if b not in seen:
                        seen.add(b)
                        stack.append(b)
            rep.unreachable = [v for k, v in enumerate(g.nodes) if k not in seen]
    where = {v: k for k, v in enumerate(g.nodes)}
    edge_set = {(a, b, i) for a, b, i in g.edges}
    phi = sorted(g.phi)

    def step(v: Root, i: int) -> Root:
        return tuple(x + (j == i) for j, x in enumerate(v))

    for k, v in enumerate(g.nodes):
        for x, i in enumerate(phi):
            for j in phi[x + 1:]:
                vi, vj, vij = step(v, i), step(v, j), step(step(v, i), j)
                if vi in where and vj in where and vij in where:
                    need = [(k, where[vi], i), (k, where[vj], j), (where[vi], where[vij], j), (where[vj], where[vij], i)]
                    if not all(e in edge_set for e in need):
                        rep.broken_squares.append((v, i, j))
    return rep


def without_node(g: StringGraph, v: Root) -> StringGraph:
    """Copy of ``g`` with one node and its edges deleted (for negative checks)."""
    k = g.index(v)
    remap = {old: new for new, old in enumerate(i for i in range(len(g.nodes)) if i != k)}
    edges = tuple((remap[a], remap[b], i) for a, b, i in g.edges if k not in (a, b))
    nodes = tuple(n for n in g.nodes if n != v)
    return StringGraph(nodes, edges, g.base, g.phi, g.in_span)
