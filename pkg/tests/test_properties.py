"""Randomized checks of string invariants across ambients."""

from itertools import combinations

from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from rootstrings.closedform import family_string, pair_type
from rootstrings.rootsys import alpha_string, build_root_system, cartan_integer, connected_components, level
from rootstrings.stringgraph import build_string_graph, emit_dot, graph_invariants
from rootstrings.strings import is_minimum_level, minimum_level_root, phi_string, product_string

AMBIENTS = {
    "A6": ("A", 6), "B5": ("B", 5), "BC4": ("BC", 4), "C5": ("C", 5), "D6": ("D", 6),
    "E6": ("E", 6), "E7": ("E", 7), "E8": ("E", 8), "F4": ("F", 4), "G2": ("G", 2),
}


@st.composite
def cases(draw):
    name = draw(st.sampled_from(sorted(AMBIENTS)))
    rs = build_root_system(name)
    phi = draw(st.sets(st.integers(0, rs.rank - 1), max_size=rs.rank - 1))
    lam = draw(st.sampled_from(sorted(rs.roots)))
    return name, rs, frozenset(phi), lam


@settings(max_examples=300, deadline=None)
@given(cases())
def test_string_matches_oracle(case):
    name, rs, phi, lam = case
    assert phi_string(rs, phi, lam).members == oracles.phi_string(oracles.roots(*AMBIENTS[name]), phi, lam)


@settings(max_examples=300, deadline=None)
@given(cases())
def test_string_invariants(case):
    _, rs, phi, lam = case
    s = phi_string(rs, phi, lam)
    assert phi_string(rs, phi, tuple(-x for x in lam)).members == {tuple(-x for x in m) for m in s.members}
    if s.in_span:
        return
    low = minimum_level_root(s)
    assert all(level(m) > level(low) for m in s.members if m != low)
    g = build_string_graph(rs, phi, s)
    assert graph_invariants(g).ok
    again = build_string_graph(rs, sorted(phi), phi_string(rs, sorted(phi), low))
    assert (again.nodes, again.edges) == (g.nodes, g.edges)
    assert emit_dot(g) == emit_dot(build_string_graph(rs, phi, s))


def _configurations(connected):
    out = []
    for name in sorted(AMBIENTS):
        rs = build_root_system(name)
        for k in range(1, rs.rank):
            for phi in combinations(range(rs.rank), k):
                if (len(connected_components(rs, phi)) == 1) == connected:
                    out.append((name, phi))
    return out


CONNECTED = _configurations(True)
DISCONNECTED = _configurations(False)


@st.composite
def configured(draw, pool):
    name, phi = draw(st.sampled_from(pool))
    rs = build_root_system(name)
    lam = draw(st.sampled_from(sorted(rs.positives)))
    s = phi_string(rs, phi, lam)
    assume(not s.in_span)
    return rs, phi, s


@settings(max_examples=300, deadline=None)
@given(configured(CONNECTED))
def test_connected_dispatch(case):
    rs, phi, s = case
    assume(len(s) > 1)
    low = minimum_level_root(s)
    assert family_string(pair_type(rs, phi, low)).members == s.members


@settings(max_examples=300, deadline=None)
@given(configured(DISCONNECTED))
def test_product_formula(case):
    rs, phi, s = case
    blocks = connected_components(rs, phi)
    low = minimum_level_root(s)
    assert product_string(rs, blocks, low).members == s.members
    for gamma in s.members:
        whole = is_minimum_level(rs, phi, gamma)[0]
        parts = all(is_minimum_level(rs, b, gamma)[0] for b in blocks)
        assert whole == parts


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(sorted(AMBIENTS)), st.data())
def test_alpha_strings(name, data):
    rs = build_root_system(name)
    roots = sorted(rs.roots)
    a = data.draw(st.sampled_from(roots))
    lam = data.draw(st.sampled_from(roots + [rs.zero]))
    s = alpha_string(rs, a, lam)
    p = s.index(lam)
    assert p - (len(s) - 1 - p) == cartan_integer(rs, a, lam)
    assert all(m in rs.roots or m == rs.zero for m in s)
    assert all(tuple(y - x for x, y in zip(u, v)) == a for u, v in zip(s, s[1:]))
