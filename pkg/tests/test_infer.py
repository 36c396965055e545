import itertools
import random

import pytest

from gsds import (
    ContradictoryDataError,
    Field,
    StateSeries,
    TransitionData,
    constrained_interpolate,
    global_map,
    infer_network,
    interpolate,
    solution_space,
    sparsest_interpolate,
    support_vars,
    trajectory,
)
from gsds.infer import load_series, save_series, series_from_dict, series_to_dict
from gsds.polyring import Polynomial, iter_points, parse_poly

from conftest import build_example1
from oracles import oracle_interpolate_gf3

GF2 = Field(2)
GF3 = Field(3)

EX3_SERIES = [(2, 1, 2), (0, 1, 0), (1, 1, 1), (2, 1, 2)]


# -- transition data -----------------------------------------------------------


def test_transition_data_from_series():
    data = TransitionData.from_series(GF3, EX3_SERIES)
    assert len(data) == 3
    assert data.pairs[0] == ((2, 1, 2), (0, 1, 0))


def test_transition_data_deduplicates_consistent_repeats():
    series = [(0, 0), (1, 1), (0, 0), (1, 1)]
    data = TransitionData.from_series(GF2, series)
    assert len(data) == 2


def test_contradictory_data_rejected():
    with pytest.raises(ContradictoryDataError) as err:
        TransitionData.from_series(GF2, [(0, 0), (1, 1), (0, 0), (0, 1)])
    assert err.value.state == (0, 0)
    assert err.value.first == (1, 1)
    assert err.value.second == (0, 1)


# -- interpolation ----------------------------------------------------------------


def test_interpolant_matches_observed_outputs():
    data = TransitionData.from_series(GF3, EX3_SERIES)
    for i in range(3):
        poly = interpolate(data, i)
        for state, image in data.pairs:
            assert poly.eval(state) == image[i]


def test_second_coordinate_constant_on_data():
    data = TransitionData.from_series(GF3, EX3_SERIES)
    poly = interpolate(data, 1)
    for state, _ in data.pairs:
        assert poly.eval(state) == 1
    # the canonical interpolant vanishes on unspecified points
    specified = set(data.inputs())
    for point in iter_points(GF3, 3):
        if point not in specified:
            assert poly.eval(point) == 0


def test_empty_data_gives_zero_polynomial():
    data = TransitionData(GF3, 2, [])
    assert interpolate(data, 0) == Polynomial.zero(GF3, 2)


def test_full_truth_table_recovers_reduced_form():
    target = parse_poly("x1 + x2", 2, GF3)
    pairs = [(p, (target.eval(p), 0)) for p in iter_points(GF3, 2)]
    data = TransitionData(GF3, 2, pairs)
    assert interpolate(data, 0) == target


def test_interpolant_matches_mod3_solver_oracle_on_full_tables():
    rng = random.Random(53)
    for _ in range(10):
        points = list(iter_points(GF3, 2))
        outputs = [rng.randint(0, 2) for _ in points]
        data = TransitionData(GF3, 2, [(p, (o, 0)) for p, o in zip(points, outputs)])
        got = interpolate(data, 0)
        expected = oracle_interpolate_gf3(points, outputs, 2)
        assert got.terms == expected


# -- solution spaces -----------------------------------------------------------------


def test_solution_space_dimension():
    data = TransitionData.from_series(GF3, EX3_SERIES)
    for i in range(3):
        assert solution_space(data, i).dimension == 27 - 3 == 24


def test_full_table_has_unique_solution():
    target = parse_poly("x1*x2 + 1", 2, GF2)
    pairs = [(p, (target.eval(p),) * 2) for p in iter_points(GF2, 2)]
    data = TransitionData(GF2, 2, pairs)
    space = solution_space(data, 0)
    assert space.dimension == 0
    assert space.particular == target


def test_known_coordinate_functions_are_members():
    data = TransitionData.from_series(GF3, EX3_SERIES)
    for i, text in enumerate(("x1 + x2", "x2", "x2 + x3")):
        assert solution_space(data, i).is_solution(parse_poly(text, 3, GF3))


def test_every_basis_combination_is_a_solution():
    rng = random.Random(59)
    data = TransitionData.from_series(GF3, EX3_SERIES)
    space = solution_space(data, 0)
    for _ in range(20):
        coeffs = [rng.randint(0, 2) for _ in range(space.dimension)]
        member = space.member(coeffs)
        assert space.is_solution(member)


def test_solution_space_exhaustive_small_case():
    # q=2, n=2, two specified points: every function that agrees on them
    # is particular + span of the two unspecified indicators, and nothing
    # else is a solution
    pairs = [((0, 0), (1, 0)), ((1, 1), (0, 0))]
    data = TransitionData(GF2, 2, pairs)
    space = solution_space(data, 0)
    assert space.dimension == 2
    members = set()
    for coeffs in itertools.product(range(2), repeat=2):
        members.add(tuple(space.member(coeffs).eval(p) for p in iter_points(GF2, 2)))
    assert len(members) == 4
    for table in itertools.product(range(2), repeat=4):
        poly = Polynomial.zero(GF2, 2)
        points = list(iter_points(GF2, 2))
        for point, value in zip(points, table):
            if value:
                from gsds.polyring import indicator_poly

                poly = poly + indicator_poly(GF2, point).scale(value)
        agrees = poly.eval((0, 0)) == 1 and poly.eval((1, 1)) == 0
        assert agrees == (table in members)


# -- constrained and sparsest interpolation ----------------------------------------


def test_constrained_on_second_variable_only():
    data = TransitionData.from_series(GF3, EX3_SERIES)
    poly = constrained_interpolate(data, 1, {2})
    assert poly is not None
    assert support_vars(poly) <= {2}
    for state, image in data.pairs:
        assert poly.eval(state) == image[1]


def test_constrained_infeasible_when_variable_missing():
    # two inputs differing only in x1 with different outputs
    pairs = [((0, 0), (0, 0)), ((1, 0), (1, 0))]
    data = TransitionData(GF2, 2, pairs)
    assert constrained_interpolate(data, 0, {2}) is None
    assert constrained_interpolate(data, 0, {1}) is not None


def test_constrained_with_all_variables_interpolates():
    data = TransitionData.from_series(GF3, EX3_SERIES)
    poly = constrained_interpolate(data, 0, {1, 2, 3})
    for state, image in data.pairs:
        assert poly.eval(state) == image[0]


def test_constrained_rejects_bad_variables():
    data = TransitionData.from_series(GF3, EX3_SERIES)
    with pytest.raises(ValueError):
        constrained_interpolate(data, 0, {0})
    with pytest.raises(ValueError):
        constrained_interpolate(data, 0, {4})


def test_sparsest_prefers_constants():
    data = TransitionData.from_series(GF3, EX3_SERIES)
    poly = sparsest_interpolate(data, 1)
    assert poly == Polynomial.constant(GF3, 3, 1)


def test_sparsest_single_variable_solution():
    data = TransitionData.from_series(GF3, EX3_SERIES)
    poly = sparsest_interpolate(data, 0)
    assert support_vars(poly) == {1}
    assert poly == parse_poly("x1 + 1", 3, GF3)


def test_sparsest_support_is_minimal():
    rng = random.Random(61)
    for _ in range(15):
        n = 3
        states = [tuple(rng.randint(0, 1) for _ in range(n)) for _ in range(4)]
        series = states + [states[0]]
        try:
            data = TransitionData.from_series(GF2, series)
        except ContradictoryDataError:
            continue
        poly = sparsest_interpolate(data, 0)
        sup = support_vars(poly)
        canonical = interpolate(data, 0)
        assert len(sup) <= len(support_vars(canonical))
        # no strict subset of the support interpolates
        for smaller in itertools.combinations(sorted(sup), len(sup) - 1):
            assert constrained_interpolate(data, 0, smaller) is None


# -- network inference -----------------------------------------------------------------


def test_infer_example_series_sparsest():
    result = infer_network(GF3, EX3_SERIES, "sparsest",
                           genes=["g1", "g2", "g3"], display="balanced")
    rendered = [p.render() for p in result.coordinate_polys]
    assert rendered == ["x1 + 1", "1", "x1 + 1"]
    assert result.dimensions == [24, 24, 24]
    assert result.model.parallel


def test_infer_graph_for_known_solution():
    # wiring the known 3-gene solution: edges j -> i where coordinate i
    # reads x_j
    polys = [parse_poly(s, 3, GF3) for s in ("x1 + x2", "x2", "x2 + x3")]
    edges = set()
    for i, p in enumerate(polys):
        for var in support_vars(p):
            edges.add((var - 1, i))
    assert (1, 0) in edges and (1, 2) in edges
    assert edges == {(0, 0), (1, 0), (1, 1), (1, 2), (2, 2)}


def test_infer_constant_series():
    result = infer_network(GF3, [(1, 2), (1, 2), (1, 2)], "sparsest")
    assert [p.render() for p in result.coordinate_polys] == ["1", "2"]
    assert result.edges == []


def test_infer_recovers_model_from_full_truth_table():
    m = build_example1()
    f = global_map(m)
    # a series visiting every state: list all (state, image) transitions
    # as chained two-step series is equivalent to feeding the pairs
    pairs = [(s, f(s)) for s in iter_points(GF2, 4)]
    data = TransitionData(GF2, 4, pairs)
    coords = f.coordinate_polys()
    for i in range(4):
        assert interpolate(data, i) == coords[i]
        assert solution_space(data, i).dimension == 0


def test_infer_round_trip_on_series():
    result = infer_network(GF3, EX3_SERIES, "canonical")
    got = trajectory(result.model, EX3_SERIES[0], len(EX3_SERIES) - 1)
    assert got == [tuple(s) for s in EX3_SERIES]


def test_infer_needs_two_states():
    with pytest.raises(ValueError):
        infer_network(GF3, [(0, 0, 0)])


def test_infer_contradictory_series():
    with pytest.raises(ContradictoryDataError):
        infer_network(GF2, [(0, 0), (1, 0), (0, 0), (0, 1)])


# -- random partially defined functions -------------------------------------------------


def test_random_partial_functions_interpolate_exactly():
    rng = random.Random(67)
    points = list(iter_points(GF3, 3))
    for _ in range(30):
        size = rng.randint(1, 27)
        inputs = rng.sample(points, size)
        outputs = {p: rng.randint(0, 2) for p in inputs}
        pairs = [(p, (outputs[p], 0, 0)) for p in inputs]
        data = TransitionData(GF3, 3, pairs)
        poly = interpolate(data, 0)
        for p in inputs:
            assert poly.eval(p) == outputs[p]
        space = solution_space(data, 0)
        assert space.dimension == 27 - size


# -- series files -------------------------------------------------------------------------


def test_series_file_round_trip(tmp_path):
    series = StateSeries(GF3, EX3_SERIES, ["g1", "g2", "g3"], display="balanced")
    path = tmp_path / "series.json"
    save_series(series, path)
    loaded = load_series(path)
    assert loaded.states == [tuple(s) for s in EX3_SERIES]
    assert loaded.genes == ["g1", "g2", "g3"]
    assert loaded.display == "balanced"


def test_series_dict_balanced_values():
    series = StateSeries(GF3, EX3_SERIES, display="balanced")
    d = series_to_dict(series)
    assert d["states"][0] == [-1, 1, -1]
    assert series_from_dict(d).states[0] == (2, 1, 2)


def test_series_dict_version_check():
    d = series_to_dict(StateSeries(GF3, EX3_SERIES))
    d["format_version"] = 3
    with pytest.raises(ValueError):
        series_from_dict(d)
