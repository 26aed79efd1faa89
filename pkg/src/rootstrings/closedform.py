"""Phi-strings from closed-form member lists, independent of enumeration.

Every supported configuration (Phi connected, lambda of minimum level) is
described by a *template*: the type of the extended system spanned by
{lambda} + Phi, the canonical node taken by lambda, and the canonical nodes
taken by alpha_1..alpha_n in the order the member formulas use them.

Classical families produce coefficient vectors over alpha_1..alpha_n from an
explicit formula. Exceptional families read their members from a packaged
data table whose coefficients are over the canonical extended nodes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence, Union

from .errors import ConsistencyError, DomainError
from .rootsys import (
    Root,
    RootSystem,
    RootSystemType,
    alpha_string,
    build_root_system,
    cartan_integer,
    cartan_matrix,
    connected_components,
    dynkin_graph,
)
from .strings import (
    PairDescriptor,
    StringSet,
    classify_type,
    describe_pair,
    is_minimum_level,
    isomorphisms,
    phi_string,
    span_subsystem,
)

Coeffs = tuple[int, ...]

CLASSICAL_TAGS = ("A-A/B/BC", "A-C", "A-D", "B/BC-B/BC", "C-C", "D-D")

# Smallest n for which each classical family is defined. C-C is admitted at
# n = 2 because (B2 = C2, C3) with lambda on the short end matches no other family.
_MIN_N = {"A-A/B/BC": 1, "A-C": 1, "A-D": 3, "B/BC-B/BC": 2, "C-C": 2, "D-D": 3}


@dataclass(frozen=True)
class ClassicalFamily:
    tag: str
    n: int

    def __post_init__(self) -> None:
        if self.tag not in _MIN_N:
            raise DomainError(f"unknown classical family {self.tag!r}")
        if not isinstance(self.n, int) or self.n < _MIN_N[self.tag]:
            raise DomainError(f"{self.tag} requires n >= {_MIN_N[self.tag]}, got {self.n}")

    def __str__(self) -> str:
        return f"{self.tag} (n={self.n})"


EXCEPTIONAL_TAGS = ("A5-E6", "A6-E7", "A7-E8", "D5-E6", "D6-E7", "D7-E8", "E6-E7", "E7-E8", "B3-F4", "C3-F4")


@dataclass(frozen=True)
class ExceptionalFamily:
    tag: str

    def __post_init__(self) -> None:
        if self.tag not in EXCEPTIONAL_TAGS:
            raise DomainError(f"unknown exceptional family {self.tag!r}")

    def __str__(self) -> str:
        return self.tag


@dataclass(frozen=True)
class RankOne:
    """Phi is a single simple root; the string is an alpha-string."""

    def __str__(self) -> str:
        return "rank one"


Family = Union[ClassicalFamily, ExceptionalFamily, RankOne]


@dataclass(frozen=True)
class Template:
    ext: RootSystemType
    lam_node: int
    alpha_nodes: tuple[int, ...]


def _chain(m: int) -> tuple[int, ...]:
    return tuple(range(1, m))


def _reversed_chain(m: int) -> tuple[int, ...]:
    return tuple(range(m - 2, -1, -1))


def classical_templates(fam: ClassicalFamily) -> list[Template]:
    """Templates realizing ``fam``, one per admissible extended type."""
    n, m = fam.n, fam.n + 1
    if fam.tag == "A-A/B/BC":
        return [
            Template(RootSystemType("A", m), 0, _chain(m)),
            Template(RootSystemType("B", m), n, _reversed_chain(m)),
            Template(RootSystemType("BC", m), n, _reversed_chain(m)),
        ]
    if fam.tag == "A-C":
        return [Template(RootSystemType("C", m), n, _reversed_chain(m))]
    if fam.tag == "A-D":
        # alpha_2 sits at the branch node, lambda and alpha_1 on the two short legs.
        nodes = (n, n - 2) + tuple(n - k for k in range(3, n + 1))
        return [Template(RootSystemType("D", m), n - 1, nodes)]
    if fam.tag == "B/BC-B/BC":
        return [
            Template(RootSystemType("B", m), 0, _chain(m)),
            Template(RootSystemType("BC", m), 0, _chain(m)),
        ]
    if fam.tag == "C-C":
        return [Template(RootSystemType("C", m), 0, _chain(m))]
    return [Template(RootSystemType("D", m), 0, _chain(m))]


# (extended type, lambda node) for each exceptional family; nodes are 0-based.
_EXCEPTIONAL = {
    "A5-E6": ("E6", 1),
    "A6-E7": ("E7", 1),
    "A7-E8": ("E8", 1),
    "D5-E6": ("E6", 0),
    "D6-E7": ("E7", 0),
    "D7-E8": ("E8", 0),
    "E6-E7": ("E7", 6),
    "E7-E8": ("E8", 7),
    "B3-F4": ("F4", 0),
    "C3-F4": ("F4", 3),
}

# Which data-table list each family reads, and how many leading entries.
_TABLE_SLICE = {
    "A5-E6": ("A-E", 20),
    "A6-E7": ("A-E", 35),
    "A7-E8": ("A-E", 56),
    "D5-E6": ("D-E", 16),
    "D6-E7": ("D-E", 32),
    "D7-E8": ("D-E", 64),
    "E6-E7": ("E6-E7", 27),
    "E7-E8": ("E7-E8", 56),
    "B3-F4": ("B3-F4", 8),
    "C3-F4": ("C3-F4", 14),
}


def exceptional_template(fam: ExceptionalFamily) -> Template:
    ext, lam_node = _EXCEPTIONAL[fam.tag]
    rtype = RootSystemType.parse(ext)
    return Template(rtype, lam_node, tuple(k for k in range(rtype.rank) if k != lam_node))


@dataclass(frozen=True)
class Labeling:
    """Where a configuration sits in an ambient system.

    ``phi[i]`` is the ambient simple index playing the role of ``alpha_{i+1}``.
    """

    ambient: RootSystem
    base: Root
    phi: tuple[int, ...]

    def place(self, coeffs: Sequence[int]) -> Root:
        """``base + sum(coeffs[i] * alpha_{phi[i]})`` as an ambient vector."""
        out = list(self.base)
        for i, c in zip(self.phi, coeffs):
            out[i] += c
        return tuple(out)


def canonical_labeling(template: Template) -> Labeling:
    rs = build_root_system(template.ext)
    return Labeling(rs, rs.simple_root(template.lam_node), template.alpha_nodes)


def _labeling_cartan(lab: Labeling) -> list[list[int]]:
    rs = lab.ambient
    vecs = [lab.base] + [rs.simple_root(i) for i in lab.phi]
    return [[cartan_integer(rs, a, b) for b in vecs] for a in vecs]


def _template_cartan(t: Template) -> list[list[int]]:
    cm = cartan_matrix(t.ext)
    order = (t.lam_node,) + t.alpha_nodes
    return [[cm[a][b] for b in order] for a in order]


def check_labeling(templates: Sequence[Template], lab: Labeling) -> Template:
    """Return the template whose diagram ``lab`` realizes, or raise DomainError."""
    rs = lab.ambient
    if lab.base not in rs.roots:
        raise DomainError(f"base {lab.base} is not a root of {rs.rtype}")
    if len(set(lab.phi)) != len(lab.phi) or any(not 0 <= i < rs.rank for i in lab.phi):
        raise DomainError(f"bad simple indices {lab.phi}")
    n = templates[0].alpha_nodes
    if len(lab.phi) != len(n):
        raise DomainError(f"labeling has {len(lab.phi)} simple roots, family needs {len(n)}")
    got = _labeling_cartan(lab)
    ext = span_subsystem(rs, [lab.base] + [rs.simple_root(i) for i in lab.phi])
    reduced = ext.is_reduced()
    for t in templates:
        if t.ext.reduced == reduced and _template_cartan(t) == got:
            return t
    raise DomainError("labeling does not realize the family's diagram")


def _beta(n: int, l: int) -> list[int]:
    return [1 if i < l else 0 for i in range(n)]


def classical_coefficients(fam: ClassicalFamily) -> set[Coeffs]:
    """Member coefficient vectors over alpha_1..alpha_n (lambda implicit)."""
    n, tag = fam.n, fam.tag
    zero = (0,) * n
    betas = [tuple(_beta(n, l)) for l in range(1, n + 1)]
    out: set[Coeffs] = {zero}
    if tag == "A-A/B/BC":
        out.update(betas)
    elif tag == "A-C":
        out.update(betas)
        for l in range(1, n + 1):
            for m in range(1, l + 1):
                out.add(tuple(a + b for a, b in zip(_beta(n, l), _beta(n, m))))
    elif tag == "A-D":
        # sums run from alpha_2, optionally topped up with alpha_1..alpha_k
        for l in range(2, n + 1):
            tail = [1 if 1 <= i < l else 0 for i in range(n)]
            out.add(tuple(tail))
            for k in range(1, l):
                out.add(tuple(t + b for t, b in zip(tail, _beta(n, k))))
    elif tag == "B/BC-B/BC":
        out.update(betas)
        for k in range(0, n):
            v = _beta(n, n)
            for j in range(0, k + 1):
                v[n - 1 - j] += 1
            out.add(tuple(v))
    elif tag == "C-C":
        out.update(betas)
        for k in range(1, n):
            v = _beta(n, n)
            for j in range(1, k + 1):
                v[n - 1 - j] += 1
            out.add(tuple(v))
    elif tag == "D-D":
        out.update(betas)
        v = _beta(n, n)
        v[n - 2] -= 1
        out.add(tuple(v))
        for k in range(2, n):
            v = _beta(n, n)
            for j in range(2, k + 1):
                v[n - 1 - j] += 1
            out.add(tuple(v))
    return out


def classical_string_formula(fam: ClassicalFamily, labeling: Labeling | None = None) -> StringSet:
    """Members predicted by the closed formula, placed via ``labeling``.

    Without a labeling the first template's canonical ambient is used.
    """
    templates = classical_templates(fam)
    lab = labeling or canonical_labeling(templates[0])
    check_labeling(templates, lab)
    members = frozenset(lab.place(c) for c in classical_coefficients(fam))
    return StringSet(lab.ambient, frozenset(lab.phi), lab.base, members, in_span=False)


def string_cardinality(fam: Family) -> int:
    if isinstance(fam, ClassicalFamily):
        n = fam.n
        return {
            "A-A/B/BC": n + 1,
            "A-C": (n + 1) * (n + 2) // 2,
            "A-D": n * (n + 1) // 2,
            "B/BC-B/BC": 2 * n + 1,
            "C-C": 2 * n,
            "D-D": 2 * n,
        }[fam.tag]
    if isinstance(fam, ExceptionalFamily):
        return _TABLE_SLICE[fam.tag][1]
    raise DomainError("rank-one string length depends on the Cartan integer, not on the family")


# ---------------------------------------------------------------------------
# Exceptional data tables


@dataclass(frozen=True)
class FixtureRow:
    family: str
    position: int
    coefficients: tuple[int, ...]
    norm: str | None
    anchor: str


FixtureTable = dict[str, list[FixtureRow]]


def _parse_table(text: str) -> FixtureTable:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    table: FixtureTable = {}
    for rec in csv.DictReader(io.StringIO("\n".join(lines))):
        try:
            row = FixtureRow(
                family=rec["family"],
                position=int(rec["position"]),
                coefficients=tuple(int(x) for x in rec["coefficients"].split()),
                norm=rec["norm"] or None,
                anchor=rec["anchor"],
            )
        except (KeyError, ValueError, AttributeError) as exc:
            raise ConsistencyError(f"malformed fixture record {rec}: {exc}") from exc
        table.setdefault(row.family, []).append(row)
    for rows in table.values():
        rows.sort(key=lambda r: r.position)
    return table


@lru_cache(maxsize=1)
def _packaged_table() -> FixtureTable:
    text = resources.files("rootstrings").joinpath("data/exceptional_strings.csv").read_text("utf-8")
    return _parse_table(text)


def load_fixture_table(path: str | Path | None = None) -> FixtureTable:
    """Read the exceptional data table (the packaged copy by default)."""
    if path is None:
        return _packaged_table()
    return _parse_table(Path(path).read_text("utf-8"))


def fixture_rows(fam: ExceptionalFamily, table: FixtureTable | None) -> list[FixtureRow]:
    table = load_fixture_table() if table is None else table
    name, count = _TABLE_SLICE[fam.tag]
    rows = table.get(name, [])[:count]
    if len(rows) != count:
        raise ConsistencyError(f"{fam.tag}: table {name!r} has {len(rows)} usable entries, need {count}")
    return rows


def _fixture_vectors(fam: ExceptionalFamily, table: FixtureTable | None) -> list[tuple[Root, str | None]]:
    """Table entries truncated to the extended rank, in canonical node coordinates."""
    r = exceptional_template(fam).ext.rank
    out = []
    for row in fixture_rows(fam, table):
        v = row.coefficients
        if len(v) < r or any(v[r:]):
            raise ConsistencyError(f"{fam.tag} entry {row.position}: {v} does not fit rank {r}")
        out.append((tuple(v[:r]), row.norm))
    return out


def exceptional_string(fam: ExceptionalFamily, labeling: Labeling | None = None,
                       table: FixtureTable | None = None) -> StringSet:
    """Members read from the data table, placed via ``labeling`` (canonical by default)."""
    t = exceptional_template(fam)
    lab = labeling or canonical_labeling(t)
    check_labeling([t], lab)
    members = set()
    for v, _ in _fixture_vectors(fam, table):
        if v[t.lam_node] != 1:
            raise ConsistencyError(f"{fam.tag}: entry {v} has lambda-coefficient {v[t.lam_node]}")
        members.add(lab.place([v[k] for k in t.alpha_nodes]))
    return StringSet(lab.ambient, frozenset(lab.phi), lab.base, frozenset(members), in_span=False)


def exceptional_string_fixture(fam: ExceptionalFamily, table: FixtureTable | None = None) -> StringSet:
    """The tabulated string in the canonical extended system."""
    return exceptional_string(fam, None, table)


def fixture_consistency(table: FixtureTable | None = None) -> list[str]:
    """Check each table entry is a positive root of its extended system with lambda-coefficient 1."""
    problems = []
    for tag in EXCEPTIONAL_TAGS:
        fam = ExceptionalFamily(tag)
        t = exceptional_template(fam)
        rs = build_root_system(t.ext)
        try:
            vecs = _fixture_vectors(fam, table)
        except ConsistencyError as exc:
            problems.append(str(exc))
            continue
        seen = set()
        for pos, (v, _) in enumerate(vecs, 1):
            if v not in rs.positives:
                problems.append(f"{tag} entry {pos}: {v} is not a positive root of {t.ext}")
            elif v[t.lam_node] != 1:
                problems.append(f"{tag} entry {pos}: lambda-coefficient is {v[t.lam_node]}")
            if v in seen:
                problems.append(f"{tag} entry {pos}: {v} repeated")
            seen.add(v)
    return problems


# ---------------------------------------------------------------------------
# Rank one and dispatch


def rank_one_string(rs: RootSystem, alpha_index: int, lam: Sequence[int]) -> StringSet:
    """The {alpha}-string of ``lam`` from the alpha-string through it."""
    lam = tuple(lam)
    if lam not in rs.roots:
        raise DomainError(f"lambda {lam} is not a root of {rs.rtype}")
    alpha = rs.simple_root(alpha_index)
    proportional = all(x == 0 for i, x in enumerate(lam) if i != alpha_index)
    members = alpha_string(rs, alpha, lam)
    if not proportional:
        members = [m for m in members if m != rs.zero]
    return StringSet(rs, frozenset({alpha_index}), lam, frozenset(members), in_span=proportional)


@dataclass(frozen=True)
class FamilyMatch:
    family: Family
    labeling: Labeling
    descriptor: PairDescriptor | None


def _all_families(n: int) -> list[Family]:
    fams: list[Family] = []
    for tag in CLASSICAL_TAGS:
        if n >= _MIN_N[tag]:
            fams.append(ClassicalFamily(tag, n))
    fams.extend(ExceptionalFamily(t) for t in EXCEPTIONAL_TAGS)
    return fams


def _templates(fam: Family) -> list[Template]:
    if isinstance(fam, ClassicalFamily):
        return classical_templates(fam)
    return [exceptional_template(fam)]


def pair_type(rs: RootSystem, phi: Iterable[int], lam: Sequence[int]) -> FamilyMatch:
    """Identify which closed-form family governs the Phi-string of ``lam``.

    Requires Phi connected, ``lam`` of minimum level outside span Phi, and a
    string with more than one member.
    """
    phi = sorted(set(phi))
    lam = tuple(lam)
    if not phi or len(connected_components(rs, phi)) != 1:
        raise DomainError("Phi must be nonempty and connected")
    if lam not in rs.roots or sum(lam) <= 0:
        raise DomainError(f"lambda {lam} is not a positive root of {rs.rtype}")
    ok, witness = is_minimum_level(rs, phi, lam)
    if not ok:
        raise DomainError(f"lambda is not of minimum level: lambda - alpha_{witness + 1} is a root")
    if len(phi_string(rs, phi, lam)) == 1:
        raise DomainError("the Phi-string of lambda is trivial")
    if len(phi) == 1:
        return FamilyMatch(RankOne(), Labeling(rs, lam, tuple(phi)), None)
    simple = [rs.simple_root(i) for i in phi]
    ext = span_subsystem(rs, [lam] + simple)
    if ext.simple_system != tuple([lam] + simple):
        raise ConsistencyError("{lambda} + Phi is not the simple system of the span it generates")
    ext_type = classify_type(ext).rtype
    cm = dynkin_graph(rs, ext.simple_system).cartan
    n = len(phi)
    for fam in _all_families(n):
        for t in _templates(fam):
            if t.ext != ext_type or len(t.alpha_nodes) != n:
                continue
            for p in isomorphisms(cm, cartan_matrix(t.ext)):
                if p[0] != t.lam_node:
                    continue
                inverse = {c: q for q, c in enumerate(p)}
                lab = Labeling(rs, lam, tuple(phi[inverse[a] - 1] for a in t.alpha_nodes))
                return FamilyMatch(fam, lab, describe_pair(rs, phi, lam))
    raise ConsistencyError(f"no family covers Phi={phi}, lambda={lam} in {rs.rtype} (extended type {ext_type})")


def family_string(match: FamilyMatch, table: FixtureTable | None = None) -> StringSet:
    """Closed-form string for a dispatched configuration."""
    fam, lab = match.family, match.labeling
    if isinstance(fam, ClassicalFamily):
        return classical_string_formula(fam, lab)
    if isinstance(fam, ExceptionalFamily):
        return exceptional_string(fam, lab, table)
    return rank_one_string(lab.ambient, lab.phi[0], lab.base)


# ---------------------------------------------------------------------------
# Length and exclusion claims


def _family_coeffs(lab: Labeling, mu: Root) -> Coeffs:
    return tuple(mu[i] - lab.base[i] for i in lab.phi)


def length_claim_failures(fam: Family, s: StringSet, lab: Labeling,
                          table: FixtureTable | None = None) -> list[str]:
    """Check the squared-norm relations predicted for ``fam`` on the string ``s``."""
    rs = lab.ambient
    lam2 = rs.norm2(lab.base)
    norms = {mu: rs.norm2(mu) for mu in s.members}
    out: list[str] = []

    def expect(mu: Root, value: Fraction, why: str) -> None:
        if norms[mu] != value:
            out.append(f"{mu}: |mu|^2 = {norms[mu]}, expected {value} ({why})")

    if isinstance(fam, RankOne):
        return out
    if isinstance(fam, ExceptionalFamily) and fam.tag == "C3-F4":
        t = exceptional_template(fam)
        for v, tag in _fixture_vectors(fam, table):
            mu = lab.place([v[k] for k in t.alpha_nodes])
            if mu in norms:
                expect(mu, lam2 if tag == "long" else lam2 / 2, f"tagged {tag}")
        return out
    if isinstance(fam, ExceptionalFamily) or fam.tag in ("A-A/B/BC", "C-C", "A-D", "D-D"):
        for mu in s.members:
            expect(mu, lam2, "single length")
        return out
    if fam.tag == "A-C":
        for mu in s.members:
            c = _family_coeffs(lab, mu)
            twos = sum(1 for x in c if x == 2)
            nonzero = sum(1 for x in c if x)
            if twos and twos == nonzero:
                expect(mu, lam2, "lambda + 2 beta_k")
            elif 1 <= twos < nonzero:
                expect(mu, lam2 / 2, "lambda + beta_l + beta_m, m < l")
        return out
    # B/BC: every member other than lambda + (sum of all alpha) is twice as long
    top = lab.place([1] * fam.n)
    for mu in s.members:
        if mu != top and top in norms:
            expect(mu, 2 * norms[top], "twice |lambda + sum alpha|^2")
    return out


def bc_exclusion_failures(fam: ClassicalFamily, s: StringSet, lab: Labeling) -> list[str]:
    """For non-reduced extended systems, the doubled roots lie in the span but not in the string."""
    rs = lab.ambient
    ext = span_subsystem(rs, [lab.base] + [rs.simple_root(i) for i in lab.phi])
    if ext.is_reduced():
        return []
    n = fam.n
    if fam.tag == "A-A/B/BC":
        doubles = [tuple(2 * x for x in lab.place(_beta(n, l))) for l in range(0, n + 1)]
    elif fam.tag == "B/BC-B/BC":
        doubles = [tuple(2 * x for x in lab.place([1] * n))]
    else:
        return []
    out = []
    for d in doubles:
        if d not in ext.roots:
            out.append(f"{d} expected in the extended system")
        if d in s.members:
            out.append(f"{d} must not be in the string")
    return out
