from itertools import combinations

import pytest

from mapschema.bounds import lb_a2a_unit
from mapschema.core import DomainError, cost_report, pair_multiplicity, validate_a2a
from mapschema.equal import (au_plus_one_schema, au_schema, is_prime, q2_teams, schema_q2,
                             schema_q3, teams_pow2)

EIGHT_TABLE = [
    [(1, 5), (2, 6), (3, 7), (4, 8)],
    [(1, 6), (2, 7), (3, 8), (4, 5)],
    [(1, 7), (2, 8), (3, 5), (4, 6)],
    [(1, 8), (2, 5), (3, 6), (4, 7)],
    [(1, 3), (2, 4), (5, 7), (6, 8)],
    [(1, 4), (2, 3), (5, 8), (6, 7)],
    [(1, 2), (3, 4), (5, 6), (7, 8)],
]


def as_ints(teamed):
    return [[tuple(int(i) for i in red) for red in team] for team in teamed.schema.team_groups()]


def exactly_once(teamed):
    counts = pair_multiplicity(teamed.schema)
    ids = [it.id for it in teamed.instance.inputs]
    return all(counts.get(frozenset(p)) == 1 for p in combinations(ids, 2))


def each_team_once(teamed):
    for team in teamed.schema.team_groups():
        seen = [i for red in team for i in red]
        if len(seen) != len(set(seen)):
            return False
    return True


class TestQ2:
    def test_eight_input_table(self):
        assert as_ints(schema_q2(8)) == EIGHT_TABLE

    def test_two(self):
        assert as_ints(schema_q2(2)) == [[(1, 2)]]

    def test_four(self):
        t = schema_q2(4)
        assert [len(team) for team in t.schema.teams] == [2, 2, 2]
        assert exactly_once(t)

    @pytest.mark.parametrize("m", range(2, 20))
    def test_any_m(self, m):
        t = schema_q2(m)
        assert t.schema.reducer_count == m * (m - 1) // 2
        assert exactly_once(t)
        assert each_team_once(t)
        assert validate_a2a(t.schema, t.instance).feasible

    def test_full_teams_hold_every_input(self):
        for team in schema_q2(16).schema.team_groups():
            assert sorted(int(i) for red in team for i in red) == list(range(1, 17))

    def test_too_small(self):
        with pytest.raises(DomainError):
            schema_q2(1)


class TestQ3:
    def test_fifteen_layout(self):
        t = schema_q3(15)
        teams = as_ints(t)
        assert len(teams) == 11
        expected = [[a + b + (8 + n,) for a, b in team] for n, team in enumerate(
            [[((x,), (y,)) for x, y in row] for row in EIGHT_TABLE], start=1)]
        assert teams[:7] == expected
        assert teams[7:10] == [
            [(9, 11, 13), (10, 12, 13)],
            [(9, 12, 14), (10, 11, 14)],
            [(9, 10, 15), (11, 12, 15)],
        ]
        assert teams[10] == [(13, 14, 15)]

    def test_counts(self):
        assert schema_q3(15).schema.reducer_count == 35
        assert schema_q3(3).schema.reducer_count == 1
        assert schema_q3(7).schema.reducer_count == 7

    @pytest.mark.parametrize("m", range(3, 40))
    def test_feasible_any_m(self, m):
        t = schema_q3(m)
        assert validate_a2a(t.schema, t.instance).feasible
        assert max(r.load for r in t.schema.reducers) <= 3

    @pytest.mark.parametrize("m", [3, 7, 15, 31, 63])
    def test_matches_unit_bound(self, m):
        t = schema_q3(m)
        assert t.schema.reducer_count == m * (m - 1) // 6
        assert t.schema.communication_cost == lb_a2a_unit(m, 3).cost_bound

    def test_set_a_teams_hold_inputs_once(self):
        t = schema_q3(31)
        for n, team in enumerate(t.schema.team_groups()[:15]):
            assert sorted(int(i) for red in team for i in red[:2]) == list(range(1, 17))
            # the leftover unit rides along in every reducer of its team
            assert {red[2] for red in team} == {str(17 + n)}

    def test_too_small(self):
        with pytest.raises(DomainError):
            schema_q3(2)


class TestAU:
    def test_nine_layout(self):
        assert as_ints(au_schema(3, 9)) == [
            [(1, 2, 3), (4, 5, 6), (7, 8, 9)],
            [(1, 8, 6), (4, 2, 9), (7, 5, 3)],
            [(1, 5, 9), (4, 8, 3), (7, 2, 6)],
            [(1, 4, 7), (2, 5, 8), (3, 6, 9)],
        ]

    @pytest.mark.parametrize("q", [2, 3, 5, 7, 11])
    def test_optimal(self, q):
        t = au_schema(q, q * q)
        rep = cost_report(t.schema, t.instance)
        assert t.schema.reducer_count == q * (q + 1)
        assert rep.communication_cost == q * q * (q + 1) == lb_a2a_unit(q * q, q).cost_bound
        assert exactly_once(t)
        assert each_team_once(t)

    def test_rejects(self):
        with pytest.raises(DomainError):
            au_schema(4, 16)
        with pytest.raises(DomainError):
            au_schema(3, 10)


class TestAUPlusOne:
    def test_thirteen(self):
        t = au_plus_one_schema(3)
        assert (t.instance.m, t.unit_capacity, t.schema.reducer_count) == (13, 4, 13)
        assert exactly_once(t)

    def test_fano(self):
        t = au_plus_one_schema(2)
        assert (t.instance.m, t.schema.reducer_count) == (7, 7)
        assert all(len(r.inputs) == 3 for r in t.schema.reducers)
        assert exactly_once(t)

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_projective_counts(self, p):
        t = au_plus_one_schema(p)
        assert t.schema.reducer_count == p * p + p + 1
        assert validate_a2a(t.schema, t.instance).feasible

    def test_rejects_composite(self):
        with pytest.raises(DomainError):
            au_plus_one_schema(4)


class TestTeamsPow2:
    def test_basis(self):
        t = teams_pow2(2)
        assert t.schema.teams == ((0,),)

    def test_same_table_as_q2(self):
        assert as_ints(teams_pow2(8, 1)) == EIGHT_TABLE

    def test_four(self):
        t = teams_pow2(4, 3)
        assert t.schema.reducer_count == 6
        assert {r.load for r in t.schema.reducers} == {6}
        assert exactly_once(t)

    def test_not_power(self):
        with pytest.raises(DomainError):
            teams_pow2(6, 1)


def test_q2_teams_generic_tokens():
    teams = q2_teams(["a", "b", "c", "d"])
    assert teams == [[("a", "c"), ("b", "d")], [("a", "d"), ("b", "c")], [("a", "b"), ("c", "d")]]


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
