"""Phi-strings by direct enumeration, and the subsystems they live in."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from . import _linalg
from .errors import ConsistencyError, ConstructionError, DomainError
from .rootsys import (
    Root,
    RootSystem,
    RootSystemType,
    cartan_integer,
    cartan_matrix,
    connected_components,
    dynkin_graph,
    level,
    level_key,
)


@dataclass(frozen=True)
class StringSet:
    """The Phi-string of ``base``: members of roots + {0} differing from it on Phi only.

    ``in_span`` is set when ``base`` lies in the span of Phi; the string is
    then the subsystem spanned by Phi together with 0.
    """

    ambient: RootSystem
    phi: frozenset[int]
    base: Root
    members: frozenset[Root]
    in_span: bool

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def sorted_members(self) -> list[Root]:
        return sorted(self.members, key=level_key)


def _check_phi(rs: RootSystem, phi: Iterable[int]) -> frozenset[int]:
    phi = frozenset(phi)
    bad = sorted(i for i in phi if not (isinstance(i, int) and 0 <= i < rs.rank))
    if bad:
        raise DomainError(f"simple indices {bad} out of range for {rs.rtype} (rank {rs.rank})")
    return phi


def _off_key(v: Sequence[int], phi: frozenset[int]) -> tuple[int, ...]:
    return tuple(x for i, x in enumerate(v) if i not in phi)


@lru_cache(maxsize=4096)
def _partition(rs: RootSystem, phi: frozenset[int]) -> dict[tuple[int, ...], frozenset[Root]]:
    # Two elements share a Phi-string iff they agree on every coordinate outside Phi.
    buckets: dict[tuple[int, ...], set[Root]] = {}
    for r in rs.roots | {rs.zero}:
        buckets.setdefault(_off_key(r, phi), set()).add(r)
    return {k: frozenset(v) for k, v in buckets.items()}


def phi_string(rs: RootSystem, phi: Iterable[int], lam: Sequence[int]) -> StringSet:
    """All of roots + {0} of the form ``lam + sum(n_i * alpha_i for i in phi)``."""
    phi = _check_phi(rs, phi)
    lam = tuple(lam)
    if len(lam) != rs.rank:
        raise DomainError(f"lambda has {len(lam)} coefficients, expected {rs.rank}")
    if lam not in rs.roots:
        raise DomainError(f"lambda {lam} is not a root of {rs.rtype}")
    key = _off_key(lam, phi)
    members = _partition(rs, phi)[key]
    return StringSet(rs, phi, lam, members, in_span=not any(key))


def minimum_level_root(s: StringSet) -> Root:
    """The unique member of least level (requires ``base`` outside span Phi)."""
    if s.in_span:
        raise DomainError("subsystem string has no distinguished base: lambda lies in span Phi")
    ordered = s.sorted_members()
    if len(ordered) > 1 and level(ordered[0]) == level(ordered[1]):
        raise ConsistencyError(f"two members of minimum level: {ordered[0]} and {ordered[1]}")
    return ordered[0]


def is_minimum_level(rs: RootSystem, phi: Iterable[int], lam: Sequence[int]) -> tuple[bool, int | None]:
    """Whether ``lam`` is the minimum of its Phi-string; otherwise a simple index ``i``
    in Phi with ``lam - alpha_i`` a root."""
    phi = _check_phi(rs, phi)
    lam = tuple(lam)
    if lam not in rs.roots:
        raise DomainError(f"lambda {lam} is not a root of {rs.rtype}")
    if not any(_off_key(lam, phi)):
        raise DomainError("lambda lies in span Phi")
    for i in sorted(phi):
        down = tuple(x - (j == i) for j, x in enumerate(lam))
        if down in rs.roots:
            return False, i
    return True, None


def cartan_pattern(rs: RootSystem, phi: Iterable[int], lam: Sequence[int]) -> dict[int, int]:
    """``A_{alpha_i, lam}`` for every ``i`` in Phi."""
    return {i: cartan_integer(rs, rs.simple_root(i), lam) for i in sorted(_check_phi(rs, phi))}


def attached_simple_roots(rs: RootSystem, phi: Iterable[int], lam: Sequence[int]) -> list[int]:
    """Indices ``i`` in Phi with ``lam + alpha_i`` a root."""
    lam = tuple(lam)
    return [
        i for i in sorted(_check_phi(rs, phi))
        if tuple(x + (j == i) for j, x in enumerate(lam)) in rs.roots
    ]


@dataclass(frozen=True)
class Subsystem:
    """Roots of the ambient system lying in the integer span of ``generators``."""

    ambient: RootSystem
    generators: tuple[Root, ...]
    roots: frozenset[Root]
    simple_system: tuple[Root, ...]

    @property
    def rank(self) -> int:
        return len(self.simple_system)

    @property
    def positives(self) -> frozenset[Root]:
        return frozenset(r for r in self.roots if level(r) > 0)

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coefficients of ``v`` over ``simple_system`` (None if not in its span)."""
        return _linalg.SpanSolver(self.simple_system).integer_coordinates(tuple(v))

    def is_reduced(self) -> bool:
        return not any(tuple(2 * x for x in r) in self.roots for r in self.roots)


def span_subsystem(rs: RootSystem, S: Iterable[Sequence[int]]) -> Subsystem:
    """``span_Z(S)`` intersected with the roots, with a simple system for it.

    Positivity is inherited from the ambient system. When ``S`` itself is the
    simple system, it is returned in the given order.
    """
    return _span_subsystem(rs, tuple(tuple(s) for s in S))


@lru_cache(maxsize=4096)
def _span_subsystem(rs: RootSystem, gens: tuple[Root, ...]) -> Subsystem:
    if not gens:
        raise DomainError("empty generating set")
    for g in gens:
        if g not in rs.roots:
            raise DomainError(f"generator {g} is not a root of {rs.rtype}")
    if not _linalg.is_independent(gens):
        raise DomainError("generators are linearly dependent")
    solver = _linalg.SpanSolver(gens)
    roots = frozenset(r for r in rs.roots if solver.integer_coordinates(r) is not None)
    pos = [r for r in roots if level(r) > 0]
    posset = set(pos)
    simple = []
    for r in pos:
        decomposable = any(
            tuple(a - b for a, b in zip(r, p)) in posset for p in pos if p != r
        )
        if not decomposable:
            simple.append(r)
    if len(simple) != len(gens):
        raise ConsistencyError(f"found {len(simple)} simple roots for a rank {len(gens)} span")
    if set(simple) == set(gens):
        simple_system = gens
    else:
        simple_system = tuple(sorted(simple, key=level_key))
    return Subsystem(rs, gens, roots, simple_system)


def axiom_failures(rs: RootSystem, roots: Iterable[Root]) -> list[str]:
    """Check reflection closure and Cartan integrality on a finite set of roots."""
    roots = set(roots)
    out = []
    for a in sorted(roots):
        for b in sorted(roots):
            try:
                c = cartan_integer(rs, a, b)
            except DomainError as exc:
                out.append(f"integrality fails for {a}, {b}: {exc}")
                continue
            refl = tuple(y - c * x for x, y in zip(a, b))
            if refl not in roots:
                out.append(f"reflection of {b} in {a} gives {refl}, not in the set")
    return out


# Catalog of families tried, in order, when naming a connected Dynkin diagram.
_CATALOG = ("A", "B", "C", "D", "E", "F", "G")


def _candidates(rank: int) -> Iterator[RootSystemType]:
    for fam in _CATALOG:
        if fam == "B" and rank < 2 or fam == "C" and rank < 3 or fam == "D" and rank < 4:
            continue
        try:
            yield RootSystemType(fam, rank)
        except ConstructionError:
            continue


def isomorphisms(
    cm: Sequence[Sequence[int]], target: Sequence[Sequence[int]]
) -> Iterator[tuple[int, ...]]:
    """All node maps ``p`` with ``cm[i][j] == target[p[i]][p[j]]`` (backtracking)."""
    n = len(cm)
    if len(target) != n:
        return

    def degree(m: Sequence[Sequence[int]], i: int) -> tuple[int, ...]:
        return tuple(sorted(m[i][j] for j in range(n) if j != i))

    sig_src = [degree(cm, i) for i in range(n)]
    sig_dst = [degree(target, j) for j in range(n)]
    assign: list[int] = []
    used = [False] * n

    def extend() -> Iterator[tuple[int, ...]]:
        i = len(assign)
        if i == n:
            yield tuple(assign)
            return
        for j in range(n):
            if used[j] or sig_src[i] != sig_dst[j]:
                continue
            if all(cm[i][k] == target[j][assign[k]] and cm[k][i] == target[assign[k]][j] for k in range(i)):
                used[j] = True
                assign.append(j)
                yield from extend()
                assign.pop()
                used[j] = False

    yield from extend()


@dataclass(frozen=True)
class TypeMatch:
    """Dynkin type of a subsystem; ``node_map[k]`` is the canonical index of simple root ``k``."""

    rtype: RootSystemType
    node_map: tuple[int, ...]


def classify_type(sub: Subsystem) -> TypeMatch:
    """Name the irreducible type of ``sub`` by matching Cartan matrices against the catalog."""
    rs = sub.ambient
    graph = dynkin_graph(rs, sub.simple_system)
    if not graph.is_connected():
        raise DomainError("subsystem is reducible; classify its components separately")
    cm = graph.cartan
    rank = len(cm)
    if not sub.is_reduced():
        target = RootSystemType("BC", rank)
        p = next(isomorphisms(cm, cartan_matrix(target)), None)
        if p is None:
            raise ConsistencyError("non-reduced subsystem does not match BC")
        return TypeMatch(target, p)
    for cand in _candidates(rank):
        p = next(isomorphisms(cm, cartan_matrix(cand)), None)
        if p is not None:
            return TypeMatch(cand, p)
    raise ConsistencyError(f"Cartan matrix {cm} matches no catalog entry")


def product_string(rs: RootSystem, blocks: Sequence[Iterable[int]], lam: Sequence[int]) -> StringSet:
    """Assemble the string over a union of orthogonal connected blocks from the block strings."""
    blocks = [_check_phi(rs, b) for b in blocks]
    lam = tuple(lam)
    for b in blocks:
        if not b:
            raise DomainError("empty block")
        if len(connected_components(rs, b)) != 1:
            raise DomainError(f"block {sorted(b)} is not connected")
    for x in range(len(blocks)):
        for y in range(x + 1, len(blocks)):
            if blocks[x] & blocks[y]:
                raise DomainError("blocks overlap")
            if any(rs._igram[i][j] for i in blocks[x] for j in blocks[y]):
                raise DomainError(f"blocks {sorted(blocks[x])} and {sorted(blocks[y])} are not orthogonal")
    union = frozenset().union(*blocks)
    ok, witness = is_minimum_level(rs, union, lam)
    if not ok:
        raise DomainError(f"lambda is not of minimum level: lambda - alpha_{witness + 1} is a root")
    deltas = []
    for b in blocks:
        s = phi_string(rs, b, lam)
        deltas.append([tuple(m - l for m, l in zip(mu, lam)) for mu in s.members])
    members = set()
    for combo in product(*deltas):
        members.add(tuple(l + sum(d[i] for d in combo) for i, l in enumerate(lam)))
    return StringSet(rs, union, lam, frozenset(members), in_span=False)


@dataclass(frozen=True)
class PairDescriptor:
    """Types of the subsystems spanned by Phi and by {lambda} + Phi.

    ``attach`` is the canonical 0-based node of the extended diagram taken by
    lambda (None when lambda is not in the extended simple system).
    """

    phi_type: RootSystemType
    extended_type: RootSystemType
    attach: int | None

    def __str__(self) -> str:
        where = "" if self.attach is None else f", lambda at node {self.attach + 1}"
        return f"({self.phi_type}, {self.extended_type}{where})"


def describe_pair(rs: RootSystem, phi: Iterable[int], lam: Sequence[int]) -> PairDescriptor:
    phi = _check_phi(rs, phi)
    lam = tuple(lam)
    if not phi or len(connected_components(rs, phi)) != 1:
        raise DomainError("Phi must be nonempty and connected")
    simple = [rs.simple_root(i) for i in sorted(phi)]
    phi_match = classify_type(span_subsystem(rs, simple))
    ext = span_subsystem(rs, [lam] + simple)
    ext_match = classify_type(ext)
    attach = None
    if lam in ext.simple_system:
        attach = ext_match.node_map[ext.simple_system.index(lam)]
    return PairDescriptor(phi_match.rtype, ext_match.rtype, attach)
