"""Catalog verification: closed forms against enumeration."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterator, Sequence

from .closedform import (
    CLASSICAL_TAGS,
    EXCEPTIONAL_TAGS,
    ClassicalFamily,
    ExceptionalFamily,
    RankOne,
    Template,
    bc_exclusion_failures,
    canonical_labeling,
    classical_string_formula,
    classical_templates,
    exceptional_string,
    exceptional_template,
    family_string,
    fixture_consistency,
    length_claim_failures,
    load_fixture_table,
    pair_type,
    string_cardinality,
)
from .errors import RootStringError
from .rootsys import RootSystem, build_root_system, connected_components
from .stringgraph import build_string_graph, graph_invariants
from .strings import StringSet, is_minimum_level, phi_string

DEFAULT_MAX_RANK = 7
DEFAULT_BC_RANK = 6
MAX_RANK_ENV = "ROOTSTRING_MAX_RANK"


def rank_caps(env: dict | None = None) -> tuple[int, int]:
    """(classical cap, BC cap) on n, read from ``ROOTSTRING_MAX_RANK`` if set."""
    env = os.environ if env is None else env
    raw = env.get(MAX_RANK_ENV)
    if raw is None or raw == "":
        return DEFAULT_MAX_RANK, DEFAULT_BC_RANK
    try:
        k = int(raw)
    except ValueError as exc:
        raise RootStringError(f"{MAX_RANK_ENV} must be an integer, got {raw!r}") from exc
    if k < 1:
        raise RootStringError(f"{MAX_RANK_ENV} must be positive, got {k}")
    return k, min(k, DEFAULT_BC_RANK)


@dataclass
class CaseResult:
    name: str
    passed: bool
    expected: int | None = None
    got: int | None = None
    problems: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        count = f" |I|={self.got}" if self.got is not None else ""
        if self.expected is not None and self.expected != self.got:
            count += f" (expected {self.expected})"
        detail = f": {self.problems[0]}" if self.problems else ""
        return f"{status} {self.name}{count}{detail}"


@dataclass
class Report:
    results: list[CaseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def first_failure(self) -> CaseResult | None:
        return next((r for r in self.results if not r.passed), None)

    def counts(self) -> tuple[int, int]:
        ok = sum(r.passed for r in self.results)
        return ok, len(self.results) - ok


def compare(name: str, predicted: StringSet, expected_count: int | None,
            extra: Sequence[str] = ()) -> CaseResult:
    """Check ``predicted`` against the enumerated string and its graph invariants."""
    rs = predicted.ambient
    brute = phi_string(rs, predicted.phi, predicted.base)
    problems = list(extra)
    missing = brute.members - predicted.members
    surplus = predicted.members - brute.members
    if missing:
        problems.append(f"closed form misses {sorted(missing)}")
    if surplus:
        problems.append(f"closed form has non-members {sorted(surplus)}")
    if expected_count is not None and len(predicted) != expected_count:
        problems.append(f"cardinality {len(predicted)} != {expected_count}")
    report = graph_invariants(build_string_graph(rs, brute.phi, brute))
    problems.extend(report.failures())
    return CaseResult(name, not problems, expected_count, len(predicted), problems)


def classical_cases(max_n: int, bc_n: int) -> Iterator[tuple[ClassicalFamily, Template]]:
    for tag in CLASSICAL_TAGS:
        for n in range(1, max_n + 1):
            try:
                fam = ClassicalFamily(tag, n)
            except RootStringError:
                continue
            for t in classical_templates(fam):
                if t.ext.family == "BC" and n > bc_n:
                    continue
                yield fam, t


def run_classical(fam: ClassicalFamily, t: Template) -> CaseResult:
    name = f"{fam.tag} n={fam.n} in {t.ext}"
    try:
        lab = canonical_labeling(t)
        s = classical_string_formula(fam, lab)
        extra = length_claim_failures(fam, s, lab) + bc_exclusion_failures(fam, s, lab)
        return compare(name, s, string_cardinality(fam), extra)
    except RootStringError as exc:
        return CaseResult(name, False, problems=[f"{type(exc).__name__}: {exc}"])


def run_exceptional(fam: ExceptionalFamily, fixtures: str | Path | None = None) -> CaseResult:
    name = f"{fam.tag}"
    try:
        table = load_fixture_table(fixtures)
        t = exceptional_template(fam)
        lab = canonical_labeling(t)
        s = exceptional_string(fam, lab, table)
        extra = length_claim_failures(fam, s, lab, table)
        return compare(name, s, string_cardinality(fam), extra)
    except RootStringError as exc:
        return CaseResult(name, False, problems=[f"{type(exc).__name__}: {exc}"])


def run_configuration(rs: RootSystem, phi: Sequence[int], lam: Sequence[int],
                      fixtures: str | Path | None = None) -> CaseResult:
    """Dispatch one (ambient, Phi, lambda) to its family and compare."""
    phi = tuple(sorted(phi))
    name = f"{rs.rtype} phi={[i + 1 for i in phi]} lambda={list(lam)}"
    try:
        match = pair_type(rs, phi, lam)
        table = load_fixture_table(fixtures)
        s = family_string(match, table)
        name += f" [{match.family}]"
        expected = None if isinstance(match.family, RankOne) else string_cardinality(match.family)
        extra = length_claim_failures(match.family, s, match.labeling, table)
        return compare(name, s, expected, extra)
    except RootStringError as exc:
        return CaseResult(name, False, problems=[f"{type(exc).__name__}: {exc}"])


SWEEP_AMBIENTS = ("A5", "B4", "BC3", "C4", "D5", "E6", "E7", "E8", "F4", "G2")


def sweep_cases(ambients: Sequence[str] = SWEEP_AMBIENTS) -> Iterator[tuple[str, tuple[int, ...], tuple[int, ...]]]:
    """Every connected proper Phi and minimum-level lambda with a nontrivial string."""
    for name in ambients:
        rs = build_root_system(name)
        for k in range(1, rs.rank):
            for phi in combinations(range(rs.rank), k):
                if len(connected_components(rs, phi)) != 1:
                    continue
                for lam in rs.positives:
                    if not any(x for i, x in enumerate(lam) if i not in phi):
                        continue
                    if is_minimum_level(rs, phi, lam)[0] and len(phi_string(rs, phi, lam)) > 1:
                        yield name, phi, lam


def _run_task(task: tuple) -> CaseResult:
    kind = task[0]
    if kind == "classical":
        return run_classical(task[1], task[2])
    if kind == "exceptional":
        return run_exceptional(task[1], task[2])
    return run_configuration(build_root_system(task[1]), task[2], task[3], task[4])


def verify_all(max_n: int | None = None, bc_n: int | None = None,
               fixtures: str | Path | None = None, sweep: bool = False,
               jobs: int = 1) -> Report:
    """Run the full catalog; deterministic order regardless of ``jobs``."""
    cap, bc_cap = rank_caps()
    max_n = cap if max_n is None else max_n
    bc_n = bc_cap if bc_n is None else bc_n
    report = Report()
    try:
        problems = fixture_consistency(load_fixture_table(fixtures))
    except RootStringError as exc:
        problems = [f"{type(exc).__name__}: {exc}"]
    report.results.append(CaseResult("fixture table consistency", not problems, problems=problems))
    tasks: list[tuple] = [("classical", fam, t) for fam, t in classical_cases(max_n, bc_n)]
    tasks += [("exceptional", ExceptionalFamily(tag), fixtures) for tag in EXCEPTIONAL_TAGS]
    if sweep:
        tasks += [("config", name, phi, lam, fixtures) for name, phi, lam in sweep_cases()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            report.results.extend(pool.map(_run_task, tasks, chunksize=16))
    else:
        report.results.extend(_run_task(t) for t in tasks)
    return report
