"""Exact construction of (possibly non-reduced) irreducible root systems.

Roots are integer coefficient tuples over the simple basis. All geometry
goes through a rational Gram matrix of the simple roots, normalized so that
long roots have squared length 2 (short roots 1; 2/3 for the short roots
of G2). Only Cartan integers are scale-invariant, so any other consistent
scale would give the same combinatorics.

Simple-root labels (0-based here, 1-based in user-facing output):

* A, B, BC, C, D: the usual chain order, with the special node(s) at the
  high end. B/BC: last node short. C: last node long. D: nodes n-2 and n-1
  both attach to n-3.
* E: node 1 (label 2) sits on the branch and attaches to node 3 (label 4);
  the long arm is 0 - 2 - 3 - 4 - ...
* F4: nodes 0, 1 short, nodes 2, 3 long, double bond between 1 and 2.
* G2: node 0 short, node 1 long.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

from . import _linalg
from .errors import ConsistencyError, ConstructionError, DomainError

Root = tuple[int, ...]

FAMILIES = ("A", "B", "C", "D", "BC", "E", "F", "G")

_ALIASES = {("C", 1): ("A", 1), ("D", 3): ("A", 3)}


@dataclass(frozen=True)
class RootSystemType:
    """Family letter plus rank, e.g. ``RootSystemType("E", 8)``.

    ``C1`` and ``D3`` are accepted and canonicalized to ``A1`` and ``A3``;
    the original spelling is kept in ``alias``.
    """

    family: str
    rank: int
    alias: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        family = self.family.upper() if isinstance(self.family, str) else self.family
        if family not in FAMILIES:
            raise ConstructionError(f"unknown root system family {self.family!r}")
        if not isinstance(self.rank, int) or isinstance(self.rank, bool):
            raise ConstructionError(f"rank must be an integer, got {self.rank!r}")
        rank = self.rank
        if (family, rank) in _ALIASES:
            object.__setattr__(self, "alias", f"{family}{rank}")
            family, rank = _ALIASES[(family, rank)]
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "rank", rank)
        _check_rank(family, rank)

    @classmethod
    def parse(cls, text: str) -> "RootSystemType":
        m = re.fullmatch(r"\s*(BC|[A-G])_?(\d+)\s*", text.upper())
        if not m:
            raise ConstructionError(f"cannot parse root system type {text!r}")
        return cls(m.group(1), int(m.group(2)))

    @property
    def reduced(self) -> bool:
        return self.family != "BC"

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def _check_rank(family: str, rank: int) -> None:
    bounds = {
        "A": rank >= 1,
        "B": rank >= 1,
        "BC": rank >= 1,
        "C": rank >= 2,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }
    if not bounds[family]:
        need = {
            "A": "rank >= 1",
            "B": "rank >= 1",
            "BC": "rank >= 1",
            "C": "rank >= 2",
            "D": "rank >= 3",
            "E": "rank in {6, 7, 8}",
            "F": "rank == 4",
            "G": "rank == 2",
        }[family]
        raise ConstructionError(f"{family}{rank}: family {family} requires {need}")


def _as_type(rtype: RootSystemType | str) -> RootSystemType:
    return RootSystemType.parse(rtype) if isinstance(rtype, str) else rtype


def gram_matrix(rtype: RootSystemType | str) -> tuple[tuple[Fraction, ...], ...]:
    """Gram matrix of the simple roots, long roots normalized to length^2 = 2."""
    rtype = _as_type(rtype)
    n, fam = rtype.rank, rtype.family
    norms = [Fraction(2)] * n
    edges: list[tuple[int, int]] = []
    if fam in ("A", "B", "BC", "C"):
        edges = [(i, i + 1) for i in range(n - 1)]
        if fam in ("B", "BC"):
            norms[-1] = Fraction(1)
        elif fam == "C":
            norms = [Fraction(1)] * (n - 1) + [Fraction(2)]
    elif fam == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif fam == "E":
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(i, i + 1) for i in range(4, n - 1)]
    elif fam == "F":
        norms = [Fraction(1), Fraction(1), Fraction(2), Fraction(2)]
        edges = [(0, 1), (1, 2), (2, 3)]
    elif fam == "G":
        norms = [Fraction(2, 3), Fraction(2)]
        edges = [(0, 1)]
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = norms[i]
    for i, j in edges:
        # The longer root always sees the shorter one with Cartan integer -1.
        g[i][j] = g[j][i] = -max(norms[i], norms[j]) / 2
    return tuple(tuple(row) for row in g)


def cartan_matrix(rtype: RootSystemType | str) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix ``C[i][j] = A_{alpha_i, alpha_j}`` of the simple roots."""
    g = gram_matrix(rtype)
    n = len(g)
    return tuple(tuple(int(2 * g[i][j] / g[i][i]) for j in range(n)) for i in range(n))


def level(mu: Sequence[int]) -> int:
    """Sum of the coefficients over the simple basis."""
    return sum(mu)


def level_key(mu: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort key: ascending level, ties broken lexicographically."""
    return (sum(mu), tuple(mu))


def _add(u: Sequence[int], v: Sequence[int], k: int = 1) -> Root:
    return tuple(a + k * b for a, b in zip(u, v))


def _unit(n: int, i: int) -> Root:
    return tuple(int(j == i) for j in range(n))


@dataclass(frozen=True, eq=False)
class RootSystem:
    """An immutable root system given by its simple-basis Gram matrix and roots."""

    rtype: RootSystemType
    gram: tuple[tuple[Fraction, ...], ...]
    roots: frozenset[Root]
    positives: tuple[Root, ...]
    _igram: tuple[tuple[int, ...], ...] = field(repr=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootSystem) and self.rtype == other.rtype

    def __hash__(self) -> int:
        return hash(("RootSystem", self.rtype))

    @property
    def rank(self) -> int:
        return self.rtype.rank

    @property
    def zero(self) -> Root:
        return (0,) * self.rank

    def simple_root(self, i: int) -> Root:
        return _unit(self.rank, i)

    def simple_roots(self) -> list[Root]:
        return [self.simple_root(i) for i in range(self.rank)]

    def is_root(self, v: Sequence[int]) -> bool:
        return tuple(v) in self.roots

    def inner(self, u: Sequence[int], v: Sequence[int]) -> Fraction:
        return Fraction(self._iinner(u, v)) * self.gram[0][0] / self._igram[0][0]

    def norm2(self, u: Sequence[int]) -> Fraction:
        return self.inner(u, u)

    def _iinner(self, u: Sequence[int], v: Sequence[int]) -> int:
        ig = self._igram
        total = 0
        for i, a in enumerate(u):
            if a:
                row = ig[i]
                total += a * sum(row[j] * b for j, b in enumerate(v) if b)
        return total

    def highest_root(self) -> Root:
        return max(self.positives, key=level_key)

    def dump(self) -> str:
        """Positive roots, one per line as comma-separated coefficients."""
        return "".join(",".join(map(str, r)) + "\n" for r in self.positives)


def cartan_integer(rs: RootSystem, alpha: Sequence[int], beta: Sequence[int]) -> int:
    """``A_{alpha,beta} = 2<alpha,beta>/|alpha|^2`` computed exactly."""
    den = rs._iinner(alpha, alpha)
    if den == 0:
        raise DomainError("Cartan integer undefined for the zero vector")
    num = 2 * rs._iinner(alpha, beta)
    if num % den:
        raise DomainError(f"2<a,b>/|a|^2 = {Fraction(num, den)} is not an integer for {tuple(alpha)}, {tuple(beta)}")
    return num // den


def _generate_positives(rtype: RootSystemType, igram: Sequence[Sequence[int]]) -> list[Root]:
    """Positive roots of the reduced part, built level by level with the p - q rule."""
    n = rtype.rank
    simple = [_unit(n, i) for i in range(n)]
    known: set[Root] = set(simple)
    layer = list(simple)
    out = list(simple)

    def ip(u: Root, v: Root) -> int:
        return sum(u[i] * igram[i][j] * v[j] for i in range(n) if u[i] for j in range(n) if v[j])

    while layer:
        nxt: list[Root] = []
        seen: set[Root] = set()
        for beta in layer:
            for i, alpha in enumerate(simple):
                if beta == alpha:
                    continue
                p = 0
                down = _add(beta, alpha, -1)
                while down in known:
                    p += 1
                    down = _add(down, alpha, -1)
                q = p - 2 * ip(alpha, beta) // igram[i][i]
                if q > 0:
                    up = _add(beta, alpha)
                    if up not in seen:
                        seen.add(up)
                        nxt.append(up)
        known.update(nxt)
        out.extend(nxt)
        layer = nxt
    return out


@lru_cache(maxsize=None)
def _build(rtype: RootSystemType) -> RootSystem:
    gram = gram_matrix(rtype)
    scale = lcm(*(x.denominator for row in gram for x in row))
    igram = tuple(tuple(int(x * scale) for x in row) for row in gram)
    positives = _generate_positives(rtype, igram)
    if rtype.family == "BC":
        short = min(igram[i][i] for i in range(rtype.rank))
        doubles = []
        for r in positives:
            if sum(r[i] * igram[i][j] * r[j] for i in range(rtype.rank) for j in range(rtype.rank)) == short:
                doubles.append(tuple(2 * x for x in r))
        positives = positives + doubles
    positives.sort(key=level_key)
    roots = frozenset(positives) | frozenset(tuple(-x for x in r) for r in positives)
    return RootSystem(rtype, gram, roots, tuple(positives), igram)


def build_root_system(rtype: RootSystemType | str) -> RootSystem:
    """Construct the root system of the given type (e.g. ``"E8"`` or ``RootSystemType("BC", 3)``)."""
    return _build(_as_type(rtype))


def alpha_string(rs: RootSystem, alpha: Sequence[int], lam: Sequence[int]) -> list[Root]:
    """The alpha-string through ``lam``: ``lam - p*alpha, ..., lam + q*alpha`` in order."""
    alpha, lam = tuple(alpha), tuple(lam)
    if alpha not in rs.roots:
        raise DomainError(f"{alpha} is not a root of {rs.rtype}")
    if lam != rs.zero and lam not in rs.roots:
        raise DomainError(f"{lam} is neither a root of {rs.rtype} nor zero")

    def member(v: Root) -> bool:
        return v in rs.roots or v == rs.zero

    lo = lam
    while member(_add(lo, alpha, -1)):
        lo = _add(lo, alpha, -1)
    out = [lo]
    while member(_add(out[-1], alpha)):
        out.append(_add(out[-1], alpha))
    return out


def simple_decomposition(rs: RootSystem, lam: Sequence[int]) -> list[int]:
    """Simple indices ``i_1..i_k`` with every left partial sum a positive root."""
    lam = tuple(lam)
    positives = set(rs.positives)
    if lam not in positives:
        raise DomainError(f"{lam} is not a positive root of {rs.rtype}")
    seq: list[int] = []
    cur = lam
    while level(cur) > 1:
        for i in range(rs.rank):
            down = _add(cur, rs.simple_root(i), -1)
            if down in positives:
                seq.append(i)
                cur = down
                break
        else:
            raise ConsistencyError(f"no simple root can be peeled off {cur}")
    seq.append(cur.index(1))
    seq.reverse()
    return seq


def connected_components(rs: RootSystem, phi: Iterable[int]) -> list[frozenset[int]]:
    """Split simple indices into Dynkin-connected blocks, ordered by smallest index."""
    todo = sorted(set(phi))
    for i in todo:
        if not 0 <= i < rs.rank:
            raise DomainError(f"simple index {i} out of range for {rs.rtype}")
    blocks: list[frozenset[int]] = []
    remaining = set(todo)
    while remaining:
        start = min(remaining)
        block = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in list(remaining - block):
                if rs._igram[i][j] != 0:
                    block.add(j)
                    stack.append(j)
        remaining -= block
        blocks.append(frozenset(block))
    return blocks


def connected_sum(rs: RootSystem, psi: Iterable[int]) -> Root:
    """Sum of the simple roots in a connected set; always a positive root."""
    psi = set(psi)
    if not psi:
        raise DomainError("empty index set")
    if len(connected_components(rs, psi)) != 1:
        raise DomainError(f"simple indices {sorted(psi)} are not connected")
    total = tuple(int(i in psi) for i in range(rs.rank))
    if total not in rs.roots:
        raise ConsistencyError(f"sum over connected set {sorted(psi)} is not a root")
    return total


@dataclass(frozen=True)
class DynkinGraph:
    """Dynkin diagram of a simple system.

    ``bonds`` maps ``(i, j)`` with ``i < j`` to the bond multiplicity;
    ``arrows`` holds ``(long, short)`` pairs for multiple bonds.
    """

    nodes: tuple[int, ...]
    bonds: dict[tuple[int, int], int]
    arrows: frozenset[tuple[int, int]]
    cartan: tuple[tuple[int, ...], ...]
    norms: tuple[Fraction, ...]

    def multiplicity(self, i: int, j: int) -> int:
        return self.bonds.get((min(i, j), max(i, j)), 0)

    def neighbors(self, i: int) -> list[int]:
        return [j for j in self.nodes if j != i and self.multiplicity(i, j)]

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            for j in self.neighbors(stack.pop()):
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == len(self.nodes)

    def is_acyclic(self) -> bool:
        # A forest has |E| = |V| - (number of components).
        comps = 0
        seen: set[int] = set()
        for start in self.nodes:
            if start in seen:
                continue
            comps += 1
            seen.add(start)
            stack = [start]
            while stack:
                for j in self.neighbors(stack.pop()):
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
        return len(self.bonds) == len(self.nodes) - comps


def dynkin_graph(rs: RootSystem, simple_system: Sequence[Sequence[int]]) -> DynkinGraph:
    """Dynkin diagram of a simple system given as ambient coefficient vectors."""
    S = [tuple(s) for s in simple_system]
    if not S:
        raise DomainError("empty simple system")
    if not _linalg.is_independent(S):
        raise DomainError("roots are linearly dependent: not a simple system")
    k = len(S)
    cartan = tuple(tuple(cartan_integer(rs, S[i], S[j]) for j in range(k)) for i in range(k))
    bonds: dict[tuple[int, int], int] = {}
    arrows = set()
    norms = tuple(rs.norm2(s) for s in S)
    for i in range(k):
        for j in range(i + 1, k):
            if cartan[i][j] > 0:
                raise DomainError(f"positive Cartan integer between nodes {i} and {j}: not a simple system")
            m = cartan[i][j] * cartan[j][i]
            if m:
                bonds[(i, j)] = m
                if m >= 2:
                    arrows.add((i, j) if norms[i] > norms[j] else (j, i))
    return DynkinGraph(tuple(range(k)), bonds, frozenset(arrows), cartan, norms)
