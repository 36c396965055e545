"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line.  Run with ``pytest tests/test_acceptance.py -v -s``."""

import random
import time
from contextlib import contextmanager

from gsds import (
    Field,
    GsdsModel,
    DependencyGraph,
    RatePolicy,
    check_translated,
    compare_schedules,
    discretize_series,
    fit_from_samples,
    gf4_table_errata,
    global_map,
    hybrid_simulate,
    interpolate,
    parallel_to_sequential,
    phase_portrait,
    solution_space,
)
from gsds.cli import main as cli_main
from gsds.infer import TransitionData
from gsds.network import save_model
from gsds.polyring import Polynomial, iter_points, parse_poly
from gsds.translate import GeneThresholds, ThresholdMap

from conftest import (
    EX3_ROWS,
    EX3_TIMES,
    build_ex3_thresholds,
    build_example1,
    build_example3,
)
from oracles import oracle_interpolate_gf3

GF2 = Field(2)
GF3 = Field(3)


@contextmanager
def criterion(number, description):
    try:
        yield
    except BaseException:
        print(f"FAIL  criterion {number:2d}: {description}")
        raise
    print(f"PASS  criterion {number:2d}: {description}")


def test_criterion_1_example1_composition():
    with criterion(1, "4-gene composition yields (1, 1, x0*x1, x1*(x2+1))"):
        start = time.perf_counter()
        m = build_example1()
        f = global_map(m)
        coords = f.coordinate_polys()
        expected = [
            parse_poly(s, 4, GF2)
            for s in ("1", "1", "x1*x2", "x2*(x3+1)")
        ]
        assert list(coords) == expected
        for state in iter_points(GF2, 4):
            assert f(state) == tuple(p.eval(state) for p in expected)
        assert time.perf_counter() - start < 1.0


def test_criterion_2_schedule_sensitivity():
    with criterion(2, "reversed word is constant (1,1,1,0) and differs"):
        m = build_example1()
        reversed_model = GsdsModel(
            m.field, m.genes, m.graph, m.local_polys, [0, 1, 2, 3]
        )
        f_rev = global_map(reversed_model)
        images = {f_rev(s) for s in m.iter_states()}
        assert images == {(1, 1, 1, 0)}
        witness = compare_schedules(m, (3, 2, 1, 0), (0, 1, 2, 3))
        assert witness is not None


def test_criterion_3_example1_dynamics():
    with criterion(3, "one fixed-point attractor, max transient 3, basin 16"):
        p = phase_portrait(build_example1())
        assert len(p.attractors) == 1
        assert p.cycles() == [[(1, 1, 1, 0)]]
        assert p.max_transient() == 3
        assert p.basin_sizes() == [16]


def test_criterion_4_gf4_conformance():
    with criterion(4, "GF(4) axioms hold; errata lists every divergent cell"):
        f4 = Field(4)
        assert f4.mul(2, 2) == f4.add(2, 1)  # a^2 = a + 1
        assert f4.pow(2, 3) == 1  # a^3 = 1
        for a in f4.elements():
            assert f4.add(a, a) == 0
        for q in (2, 3, 4, 5, 7):
            fld = Field(q)
            elems = list(fld.elements())
            for a in elems:
                assert fld.add(a, 0) == a and fld.mul(a, 1) == a
                assert fld.add(a, fld.neg(a)) == 0
                if a:
                    assert fld.mul(a, fld.inv(a)) == 1
                for b in elems:
                    assert fld.add(a, b) == fld.add(b, a)
                    assert fld.mul(a, b) == fld.mul(b, a)
                    for c in elems:
                        assert fld.add(fld.add(a, b), c) == fld.add(a, fld.add(b, c))
                        assert fld.mul(fld.mul(a, b), c) == fld.mul(a, fld.mul(b, c))
                        assert fld.mul(a, fld.add(b, c)) == fld.add(
                            fld.mul(a, b), fld.mul(a, c)
                        )
        assert gf4_table_errata() == [
            ("add", 1, 1, 0, 2),
            ("add", 1, 3, 2, 0),
            ("mul", 1, 2, 2, 1),
        ]


def test_criterion_5_example3_fit():
    with criterion(5, "microarray fit reproduces all segment coefficients"):
        expected = {
            0: [(0.28, 0.5), (0.72, 0.06), (-1.0, 3.5)],
            1: [(0.0, 1.2), (0.0, 1.2), (0.0, 1.2)],
            2: [(0.75, 0.5), (0.25, 1.0), (-1.0, 3.5)],
        }
        for j, segments in expected.items():
            curve = fit_from_samples(EX3_TIMES, [r[j] for r in EX3_ROWS])
            for (a, b), (ea, eb) in zip(curve.segments, segments):
                assert abs(a - ea) <= 1e-12
                assert abs(b - eb) <= 1e-12


def test_criterion_6_example3_discretization():
    with criterion(6, "thresholds map the four samples to the known states"):
        tmap = build_ex3_thresholds()
        states = discretize_series(tmap, EX3_ROWS)
        assert states == [(2, 1, 2), (0, 1, 0), (1, 1, 1), (2, 1, 2)]


def test_criterion_7_example3_inference():
    with criterion(7, "known map is in every solution space; dimension 24; 3/3 pairs"):
        series = [(2, 1, 2), (0, 1, 0), (1, 1, 1), (2, 1, 2)]
        data = TransitionData.from_series(GF3, series)
        known = [parse_poly(s, 3, GF3) for s in ("x1 + x2", "x2", "x2 + x3")]
        for i in range(3):
            space = solution_space(data, i)
            assert space.dimension == 24
            assert space.is_solution(known[i])
        m = build_example3()
        outcome = check_translated(
            global_map(m), list(zip(EX3_ROWS, EX3_ROWS[1:])),
            build_ex3_thresholds(),
        )
        assert outcome.compatible and outcome.checked == 3


def test_criterion_8_interpolation_oracle_equivalence():
    with criterion(8, "100 random partial functions interpolate; dim-0 matches oracle"):
        rng = random.Random(101)
        points = list(iter_points(GF3, 3))
        sizes = [27] * 8 + [rng.randint(1, 27) for _ in range(92)]
        for size in sizes:
            inputs = rng.sample(points, size)
            outputs = {p: rng.randint(0, 2) for p in inputs}
            data = TransitionData(GF3, 3, [(p, (outputs[p], 0, 0)) for p in inputs])
            poly = interpolate(data, 0)
            for p in inputs:
                assert poly.eval(p) == outputs[p]
            if size == 27:
                expected = oracle_interpolate_gf3(
                    inputs, [outputs[p] for p in inputs], 3
                )
                assert poly.terms == expected


def test_criterion_9_parallel_sequential_round_trip():
    with criterion(9, "doubled-node models reproduce 50 random parallel maps"):
        rng = random.Random(103)
        for _ in range(50):
            q = rng.choice([2, 3])
            n = rng.randint(1, 3)
            field = Field(q)
            polys = [
                Polynomial(
                    field,
                    n,
                    {
                        tuple(rng.randint(0, q - 1) for _ in range(n)):
                            rng.randint(1, q - 1)
                        for _ in range(rng.randint(0, 4))
                    },
                )
                for _ in range(n)
            ]
            doubled = parallel_to_sequential(polys)
            f = global_map(doubled)
            for state in iter_points(field, n):
                expected = tuple(p.eval(state) for p in polys)
                assert f(state + state)[:n] == expected


def test_criterion_10_hybrid_discrete_closure():
    with criterion(10, "hybrid run sampled between events commutes with the map"):
        polys = [parse_poly("1", 2, GF2), parse_poly("x1", 2, GF2)]
        m = GsdsModel(GF2, ["a", "b"], DependencyGraph(2, {(0, 1)}), polys, [1, 0])
        tmap = ThresholdMap(
            GF2, [GeneThresholds([1.0], [0, 1], [1]) for _ in range(2)]
        )
        rates = RatePolicy([{0: -1.0, 1: 1.0}, {0: -1.0, 1: 1.0}])
        result = hybrid_simulate(m, rates, tmap, [0.75, 0.5], 3.0)
        # closed-form event times: gene 1 crosses at (1-0.75)/1, gene 2
        # falls to 0.25 then rises to 1 at 0.25 + (1-0.25)/1
        assert [e.time for e in result.events] == [0.25, 1.0]
        mids = [(t0 + t1) / 2 for t0, t1, _ in result.phases]
        samples = [
            tuple(tr.value(t) for tr in result.trajectories) for t in mids
        ]
        outcome = check_translated(
            global_map(m), list(zip(samples, samples[1:])), tmap
        )
        assert outcome.compatible
        assert outcome.checked == len(result.phases) - 1 == 2


def test_criterion_11_portrait_determinism(tmp_path, capsys):
    with criterion(11, "portrait output byte-identical for 1, 2, and 8 workers"):
        start = time.perf_counter()
        # 3-gene GF(3) model (27 states)
        small = tmp_path / "small.json"
        save_model(build_example3(), small)
        # 12-gene GF(2) ring model (4096 states)
        n = 12
        ring_polys = [
            parse_poly(f"x{(j - 1) % n + 1} + x{(j + 1) % n + 1}", n, GF2)
            for j in range(n)
        ]
        edges = {(j, (j + 1) % n) for j in range(n)}
        ring = GsdsModel(
            GF2,
            [f"g{j}" for j in range(n)],
            DependencyGraph(n, edges),
            ring_polys,
            list(range(n)),
        )
        big = tmp_path / "big.json"
        save_model(ring, big)
        for path in (small, big):
            outputs = []
            for workers in ("1", "2", "8"):
                dot = tmp_path / f"{path.stem}-{workers}.dot"
                rc = cli_main([
                    "portrait", str(path), "--workers", workers,
                    "--dot", str(dot),
                ])
                captured = capsys.readouterr()
                assert rc == 0
                outputs.append(captured.out.encode() + dot.read_bytes())
            assert outputs[0] == outputs[1] == outputs[2]
        assert time.perf_counter() - start < 5.0
