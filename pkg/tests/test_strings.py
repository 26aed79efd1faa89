from itertools import combinations

import pytest

import oracles
from rootstrings.errors import ConsistencyError, DomainError
from rootstrings.rootsys import RootSystemType, build_root_system, connected_components, level
from rootstrings.strings import (
    StringSet,
    attached_simple_roots,
    axiom_failures,
    cartan_pattern,
    classify_type,
    describe_pair,
    is_minimum_level,
    minimum_level_root,
    phi_string,
    product_string,
    span_subsystem,
)

AMBIENTS = ["A4", "B4", "BC3", "C4", "D5", "E6", "F4", "G2"]


def proper_subsets(n):
    for k in range(n):
        yield from combinations(range(n), k)


def outside_span(lam, phi):
    return any(x for i, x in enumerate(lam) if i not in phi)


class TestPhiString:
    def test_empty_phi(self):
        rs = build_root_system("A3")
        assert phi_string(rs, [], (0, 1, 1)).members == {(0, 1, 1)}

    def test_a2(self):
        rs = build_root_system("A2")
        assert phi_string(rs, [0], (0, 1)).members == {(0, 1), (1, 1)}

    def test_f4_c3(self):
        rs = build_root_system("F4")
        s = phi_string(rs, [0, 1, 2], (0, 0, 0, 1))
        assert len(s) == 14 and not s.in_span

    def test_subsystem_case(self):
        rs = build_root_system("A2")
        s = phi_string(rs, [0, 1], (1, 1))
        assert s.in_span
        assert s.members == rs.roots | {(0, 0)}

    def test_zero_only_in_span(self):
        rs = build_root_system("B3")
        assert (0, 0, 0) in phi_string(rs, [0, 1], (1, 1, 0))
        assert (0, 0, 0) not in phi_string(rs, [0, 1], (1, 1, 1))

    def test_errors(self):
        rs = build_root_system("A2")
        with pytest.raises(DomainError):
            phi_string(rs, [0], (1, -1))
        with pytest.raises(DomainError):
            phi_string(rs, [5], (1, 0))

    @pytest.mark.parametrize("name,family,n", [("A4", "A", 4), ("BC3", "BC", 3), ("F4", "F", 4), ("G2", "G", 2)])
    def test_matches_oracle(self, name, family, n):
        rs = build_root_system(name)
        oroots = oracles.roots(family, n)
        for phi in proper_subsets(n):
            for lam in rs.roots:
                got = phi_string(rs, phi, lam).members
                assert got == oracles.phi_string(oroots, set(phi), lam)
                if len(phi) <= 2:
                    assert got == oracles.phi_string_bounded(oroots, phi, lam)


class TestMinimum:
    def test_singleton(self):
        rs = build_root_system("A3")
        assert minimum_level_root(phi_string(rs, [], (0, 1, 0))) == (0, 1, 0)

    def test_a2(self):
        rs = build_root_system("A2")
        assert minimum_level_root(phi_string(rs, [0], (1, 1))) == (0, 1)

    def test_f4(self):
        rs = build_root_system("F4")
        assert minimum_level_root(phi_string(rs, [0, 1, 2], (2, 4, 3, 1))) == (0, 0, 0, 1)

    def test_in_span_rejected(self):
        rs = build_root_system("A2")
        with pytest.raises(DomainError, match="no distinguished base"):
            minimum_level_root(phi_string(rs, [0, 1], (1, 1)))

    def test_tie_is_internal_error(self):
        rs = build_root_system("A3")
        fake = StringSet(rs, frozenset({0, 2}), (1, 1, 0), frozenset({(1, 1, 0), (0, 1, 1)}), False)
        with pytest.raises(ConsistencyError):
            minimum_level_root(fake)


class TestIsMinimumLevel:
    def test_trivial(self):
        rs = build_root_system("A3")
        assert is_minimum_level(rs, [2], (1, 0, 0)) == (True, None)

    def test_a2_witness(self):
        rs = build_root_system("A2")
        assert is_minimum_level(rs, [0], (1, 1)) == (False, 0)

    def test_in_span_rejected(self):
        with pytest.raises(DomainError):
            is_minimum_level(build_root_system("A2"), [0], (1, 0))

    def test_length_condition_is_needed(self):
        # C3 with lambda the long simple root and Phi the two short ones.
        rs = build_root_system("C3")
        phi = [0, 1]
        gamma = (0, 1, 1)  # lambda + alpha_1 in the labeling where alpha_1 is next to lambda
        assert cartan_pattern(rs, phi, gamma) == {0: -1, 1: 0}
        assert is_minimum_level(rs, phi, gamma) == (False, 1)
        assert is_minimum_level(rs, phi, (0, 0, 1)) == (True, None)


class TestSubsystem:
    def test_full(self):
        rs = build_root_system("D4")
        sub = span_subsystem(rs, rs.simple_roots())
        assert sub.roots == rs.roots
        assert sub.simple_system == tuple(rs.simple_roots())

    def test_b3_a2(self):
        rs = build_root_system("B3")
        sub = span_subsystem(rs, [(1, 0, 0), (0, 1, 0)])
        assert sub.roots == {(-1, -1, 0), (-1, 0, 0), (0, -1, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)}
        assert classify_type(sub).rtype == RootSystemType("A", 2)

    def test_f4_whole(self):
        rs = build_root_system("F4")
        sub = span_subsystem(rs, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
        assert len(sub.roots) == 48
        assert classify_type(sub).rtype == RootSystemType("F", 4)

    def test_non_simple_generators(self):
        # {a1, a1 + a2} spans A2 but is not its simple system
        rs = build_root_system("A2")
        sub = span_subsystem(rs, [(1, 0), (1, 1)])
        assert set(sub.simple_system) == {(1, 0), (0, 1)}

    def test_long_roots_of_b3(self):
        # the long roots of B3 form D3 = A3
        rs = build_root_system("B3")
        sub = span_subsystem(rs, [(1, 0, 0), (0, 1, 0), (0, 1, 2)])
        assert classify_type(sub).rtype == RootSystemType("A", 3)

    def test_dependent(self):
        with pytest.raises(DomainError):
            span_subsystem(build_root_system("A2"), [(1, 0), (2, 0)])

    @pytest.mark.parametrize("name", ["B4", "BC3", "F4", "E6", "G2"])
    def test_axioms_and_signs(self, name):
        rs = build_root_system(name)
        n = rs.rank
        for phi in list(proper_subsets(n))[1:]:
            for lam in rs.positives:
                if not outside_span(lam, phi) or not is_minimum_level(rs, phi, lam)[0]:
                    continue
                S = [lam] + [rs.simple_root(i) for i in phi]
                sub = span_subsystem(rs, S)
                assert sub.simple_system == tuple(S)
                for r in sub.roots:
                    c = sub.coordinates(r)
                    assert all(x >= 0 for x in c) or all(x <= 0 for x in c)
        for phi in [(0,), tuple(range(n))]:
            sub = span_subsystem(rs, [rs.simple_root(i) for i in phi])
            assert axiom_failures(rs, sub.roots) == []


class TestClassify:
    def test_single_node(self):
        rs = build_root_system("G2")
        assert classify_type(span_subsystem(rs, [(1, 0)])).rtype == RootSystemType("A", 1)

    @pytest.mark.parametrize("name", ["A5", "B4", "BC3", "C4", "D5", "E7", "F4", "G2", "B2"])
    def test_whole_systems(self, name):
        rs = build_root_system(name)
        match = classify_type(span_subsystem(rs, rs.simple_roots()))
        assert match.rtype == rs.rtype
        assert sorted(match.node_map) == list(range(rs.rank))

    def test_chain_plus_lambda(self):
        rs = build_root_system("A5")
        sub = span_subsystem(rs, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0)])
        assert classify_type(sub).rtype == RootSystemType("A", 3)

    def test_reducible(self):
        rs = build_root_system("A3")
        with pytest.raises(DomainError):
            classify_type(span_subsystem(rs, [(1, 0, 0), (0, 0, 1)]))

    def test_pair_descriptors(self):
        f4 = build_root_system("F4")
        d = describe_pair(f4, [1, 2, 3], (1, 0, 0, 0))
        assert (str(d.phi_type), str(d.extended_type), d.attach) == ("B3", "F4", 0)
        d = describe_pair(f4, [0, 1, 2], (0, 0, 0, 1))
        assert (str(d.phi_type), str(d.extended_type), d.attach) == ("C3", "F4", 3)
        c3 = build_root_system("C3")
        assert str(describe_pair(c3, [0, 1], (0, 0, 1)).extended_type) == "C3"


class TestProduct:
    def test_single_block(self):
        rs = build_root_system("A4")
        assert product_string(rs, [{1, 2}], (1, 0, 0, 0)).members == phi_string(rs, [1, 2], (1, 0, 0, 0)).members

    def test_a5(self):
        rs = build_root_system("A5")
        lam = (0, 1, 0, 0, 0)
        s = product_string(rs, [{0}, {2, 3}], lam)
        assert s.members == {
            (0, 1, 0, 0, 0), (0, 1, 1, 0, 0), (0, 1, 1, 1, 0),
            (1, 1, 0, 0, 0), (1, 1, 1, 0, 0), (1, 1, 1, 1, 0),
        }
        assert s.members == phi_string(rs, [0, 2, 3], lam).members

    def test_d4_three_blocks(self):
        rs = build_root_system("D4")
        s = product_string(rs, [{0}, {2}, {3}], (0, 1, 0, 0))
        assert len(s) == 8
        assert s.members == phi_string(rs, [0, 2, 3], (0, 1, 0, 0)).members

    def test_not_orthogonal(self):
        rs = build_root_system("A4")
        with pytest.raises(DomainError, match="not orthogonal"):
            product_string(rs, [{0}, {1}], (0, 0, 1, 0))

    def test_not_minimum(self):
        rs = build_root_system("A4")
        with pytest.raises(DomainError, match="minimum level"):
            product_string(rs, [{0}, {3}], (1, 1, 0, 0))


@pytest.mark.parametrize("name", AMBIENTS)
def test_structural_invariants(name):
    rs = build_root_system(name)
    n = rs.rank
    for phi in proper_subsets(n):
        phi_set = set(phi)
        connected = bool(phi) and len(connected_components(rs, phi)) == 1
        for lam in rs.positives:
            s = phi_string(rs, phi, lam)
            neg = phi_string(rs, phi, tuple(-x for x in lam))
            assert neg.members == {tuple(-x for x in m) for m in s.members}
            assert lam in s
            if s.in_span:
                continue
            low = minimum_level_root(s)
            assert sum(1 for m in s.members if level(m) == level(low)) == 1
            for m in s.members:
                assert all(x >= 0 for x in (a - b for a, b in zip(m, low)))
                if m != low:
                    assert any(tuple(x - (j == i) for j, x in enumerate(m)) in s for i in phi_set)
            assert is_minimum_level(rs, phi, low)[0]
            assert len(attached_simple_roots(rs, phi, low)) <= 3
            if connected and len(s) > 1 and lam == low:
                pattern = cartan_pattern(rs, phi, lam)
                negative = [i for i, c in pattern.items() if c < 0]
                assert len(negative) == 1
                assert all(c == 0 for i, c in pattern.items() if i not in negative)


@pytest.mark.parametrize("name", AMBIENTS)
def test_characterization_converse_under_length_hypothesis(name):
    rs = build_root_system(name)
    n = rs.rank
    for phi in proper_subsets(n):
        if not phi or len(connected_components(rs, phi)) != 1:
            continue
        for gamma in rs.positives:
            if not outside_span(gamma, phi):
                continue
            pattern = cartan_pattern(rs, phi, gamma)
            negative = [i for i, c in pattern.items() if c < 0]
            if len(negative) != 1 or any(c != 0 for i, c in pattern.items() if i not in negative):
                continue
            s = phi_string(rs, phi, gamma)
            if all(rs.norm2(b) <= rs.norm2(rs.simple_root(a)) for b in s.members for a in phi):
                assert is_minimum_level(rs, phi, gamma)[0]
