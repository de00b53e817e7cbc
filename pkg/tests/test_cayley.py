import math
import random

import numpy as np
import pytest

from isocayley.abelian import FiniteAbelianGroup, full_subgroup, op_inv, subgroup_generated
from isocayley.cayley import (
    SCAN_CSV_HEADER,
    EstimateParams,
    build,
    connected_components,
    eigenvalue_prediction,
    expansion,
    find_expander_bound,
    log_integral,
    scan_table_csv,
    spectrum_by_characters,
    spectrum_numeric,
    to_dot,
    to_json_adjacency,
)
from isocayley.errors import InputError, PreconditionError
from isocayley.quadform import class_group, generating_multiset


def cyclic(n):
    g = FiniteAbelianGroup((n,))
    return g, full_subgroup(g)


def pair_gens(group, *values):
    """Labeled generator list with inverses appended where needed."""
    gens = []
    for v in values:
        e = group.element(v)
        gens.append((str(v), e))
        if op_inv(e) != e:
            gens.append((f"{v}^-1", op_inv(e)))
    return gens


def random_graph(rng):
    choices = [(2,), (4,), (6,), (2, 4), (3, 9), (12,), (2, 2, 4), (16,), (5,)]
    inv = rng.choice(choices)
    group = FiniteAbelianGroup(inv)
    h = full_subgroup(group)
    gens = []
    for _ in range(rng.randint(1, 3)):
        coords = tuple(rng.randrange(d) for d in inv)
        gens += pair_gens(group, coords)
    if rng.random() < 0.3:
        gens.append(("e", group.identity))
        gens.append(("e", group.identity))
    return build(h, gens)


class TestBuild:
    def test_triangle(self):
        g, h = cyclic(3)
        tri = build(h, [("1", g.element((1,))), ("2", g.element((2,)))])
        assert tri.order == 3 and tri.degree == 2
        a = tri.adjacency()
        assert (a == np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]])).all()

    def test_double_identity_gives_two_loops(self):
        g, h = cyclic(3)
        loops = build(h, [("e", g.identity), ("e", g.identity)])
        a = loops.adjacency()
        assert (a == 2 * np.eye(3, dtype=int)).all()

    def test_class_group_three_cycle(self):
        cg = class_group(-23)
        h = full_subgroup(cg.group)
        s = generating_multiset(cg, 3, h)
        cay = build(h, [(x.label, x.element) for x in s])
        assert cay.degree == 2 and cay.order == 3
        assert connected_components(cay) == 1

    def test_generator_outside_subgroup(self):
        g = FiniteAbelianGroup((4,))
        h = subgroup_generated(g, [g.element((2,))])
        with pytest.raises(InputError):
            build(h, [("1", g.element((1,))), ("3", g.element((3,)))])

    def test_not_inversion_closed(self):
        g, h = cyclic(5)
        with pytest.raises(InputError):
            build(h, [("1", g.element((1,)))])

    def test_inverse_slot_is_a_correct_involution(self):
        rng = random.Random(77)
        for _ in range(20):
            graph = random_graph(rng)
            pairing = graph.inverse_slot
            for j, (_, s) in enumerate(graph.generators):
                assert pairing[pairing[j]] == j
                assert graph.generators[pairing[j]][1] == op_inv(s)


class TestSpectrum:
    def test_triangle_values(self):
        g, h = cyclic(3)
        tri = build(h, [("1", g.element((1,))), ("2", g.element((2,)))])
        spec = spectrum_by_characters(tri)
        assert spec.lambda_triv == pytest.approx(2.0, abs=1e-12)
        assert sorted(spec.sorted_values()) == pytest.approx([-1.0, -1.0, 2.0], abs=1e-9)
        assert spectrum_numeric(tri) == pytest.approx([2.0, -1.0, -1.0], abs=1e-9)

    def test_z4_values(self):
        g, h = cyclic(4)
        c4 = build(h, [("1", g.element((1,))), ("3", g.element((3,)))])
        assert spectrum_by_characters(c4).sorted_values() == pytest.approx(
            [2.0, 0.0, 0.0, -2.0], abs=1e-9
        )

    def test_char_vs_numeric_random(self):
        rng = random.Random(20260815)
        for _ in range(50):
            graph = random_graph(rng)
            if graph.order > 512:
                continue
            exact = spectrum_by_characters(graph).sorted_values()
            numeric = spectrum_numeric(graph)
            assert len(exact) == graph.order
            assert exact == pytest.approx(numeric, abs=1e-9)

    def test_trace_identity(self):
        rng = random.Random(4)
        for _ in range(25):
            graph = random_graph(rng)
            spec = spectrum_by_characters(graph)
            loops = sum(1 for _, s in graph.generators if s.is_identity())
            total = sum(lam for _, lam in spec.entries)
            assert abs(total - graph.order * loops) < 1e-6

    def test_trivial_multiplicity_counts_components(self):
        g, h = cyclic(4)
        dis = build(h, pair_gens(g, (2,)))
        spec = spectrum_by_characters(dis)
        mult = sum(1 for _, lam in spec.entries if abs(lam - spec.lambda_triv) < 1e-9)
        assert mult == connected_components(dis) == 2

    def test_numeric_size_limit(self):
        g, h = cyclic(4192)
        big = build(h, pair_gens(g, (1,)))
        with pytest.raises(PreconditionError):
            spectrum_numeric(big)


class TestExpansion:
    def test_triangle(self):
        g, h = cyclic(3)
        tri = build(h, [("1", g.element((1,))), ("2", g.element((2,)))])
        d1, d2, c = expansion(tri)
        assert c == pytest.approx(1.0, abs=1e-9)
        assert d2 == pytest.approx(0.5, abs=1e-9)
        assert d1 == pytest.approx(1.5, abs=1e-9)

    def test_bipartite_z2(self):
        g, h = cyclic(2)
        k2 = build(h, [("1", g.element((1,)))])
        d1, d2, c = expansion(k2)
        assert d2 == pytest.approx(0.0, abs=1e-12)
        assert c == pytest.approx(1.0, abs=1e-12)

    def test_empty_generators(self):
        g, h = cyclic(3)
        empty = build(h, [])
        with pytest.raises(PreconditionError):
            expansion(empty)


def li_series(x):
    # Li(x) = gamma + ln ln x + sum_k (ln x)^k / (k * k!), independent oracle
    gamma = 0.5772156649015329
    def entire(y):
        ly = math.log(y)
        total, term = 0.0, 1.0
        for k in range(1, 200):
            term *= ly / k
            total += term / k
            if abs(term / k) < 1e-16:
                break
        return gamma + math.log(ly) + total
    return entire(x) - entire(2.0)


class TestPrediction:
    def test_li_against_series(self):
        for b in (2.5, 3, 10, 100, 1000, 9973):
            assert log_integral(b) == pytest.approx(li_series(b), abs=1e-6)

    def test_li_documented_value(self):
        assert log_integral(100) == pytest.approx(29.081, abs=5e-4)

    def test_li_at_two(self):
        assert log_integral(2) == 0.0

    def test_prediction_terms(self):
        p = EstimateParams(n=2, d_k=23, nfm=1, index=3, b=100)
        main, env = eigenvalue_prediction(p, trivial=True)
        assert main == pytest.approx(log_integral(100) / 3, abs=1e-9)
        assert env == pytest.approx(2 * math.sqrt(100) * math.log(100 * 23), abs=1e-9)
        main0, env0 = eigenvalue_prediction(p, trivial=False)
        assert main0 == 0.0 and env0 == env

    def test_b_below_two_rejected(self):
        with pytest.raises(InputError):
            eigenvalue_prediction(EstimateParams(n=2, d_k=3, nfm=1, index=1, b=1), True)

    def test_nonpositive_params_rejected(self):
        with pytest.raises(InputError):
            EstimateParams(n=0, d_k=3, nfm=1, index=1, b=10)


class TestExpanderScan:
    def test_documented_bound(self):
        cg = class_group(-23)
        h = full_subgroup(cg.group)
        b, rows = find_expander_bound(cg, h, 0.4, 50)
        assert b == 3
        assert rows[0].b == 3 and rows[0].lambda_triv == 2
        assert rows[0].delta2 == pytest.approx(0.5, abs=1e-9)

    def test_stricter_delta_needs_larger_bound(self):
        cg = class_group(-23)
        h = full_subgroup(cg.group)
        b4, _ = find_expander_bound(cg, h, 0.4, 200)
        b6, rows = find_expander_bound(cg, h, 0.6, 200)
        assert b6 > b4
        # the first row at or past b6 on the grid must clear the target
        hit = next(r for r in rows if r.b == b6)
        assert hit.delta2 >= 0.6
        for r in rows:
            if r.b < b6 and r.lambda_triv > 0:
                assert r.delta2 < 0.6

    def test_scan_rows_consistent(self):
        cg = class_group(-47)
        h = full_subgroup(cg.group)
        _, rows = find_expander_bound(cg, h, 0.1, 300)
        for r in rows:
            assert r.b >= 3
            if r.lambda_triv:
                assert r.delta2 == pytest.approx(1 - r.c / r.lambda_triv, abs=1e-12)
            assert r.li_over_index == pytest.approx(log_integral(r.b), abs=1e-7)
            assert r.error_envelope > 0

    def test_trivial_subgroup_vacuous(self):
        cg = class_group(-23)
        triv = subgroup_generated(cg.group, [])
        assert find_expander_bound(cg, triv, 0.9, 10) == (2, [])

    def test_subgroup_not_generated(self):
        cg = class_group(-479)
        h5 = subgroup_generated(cg.group, [cg.group.element((5,))])
        with pytest.raises(PreconditionError):
            find_expander_bound(cg, h5, 0.1, 60)  # no prime forms below 60 in C5

    def test_unreachable_delta(self):
        cg = class_group(-23)
        with pytest.raises(PreconditionError):
            find_expander_bound(cg, full_subgroup(cg.group), 0.99, 30)

    def test_csv_shape(self):
        cg = class_group(-23)
        _, rows = find_expander_bound(cg, full_subgroup(cg.group), 0.4, 60)
        text = scan_table_csv(rows)
        lines = text.splitlines()
        assert lines[0] == SCAN_CSV_HEADER
        assert len(lines) == len(rows) + 1
        assert all(len(line.split(",")) == 6 for line in lines[1:])


class TestExports:
    def test_dot_deterministic_and_complete(self):
        g, h = cyclic(4)
        c4 = build(h, [("1", g.element((1,))), ("3", g.element((3,)))])
        dot = to_dot(c4, title="c4")
        assert dot == to_dot(c4, title="c4")
        edge_lines = [l for l in dot.splitlines() if "--" in l]
        assert len(edge_lines) == 4  # 4-cycle
        assert dot.startswith('graph "c4" {')

    def test_dot_names(self):
        cg = class_group(-23)
        h = full_subgroup(cg.group)
        s = generating_multiset(cg, 3, h)
        cay = build(h, [(x.label, x.element) for x in s])
        names = [str(cg.from_element[v].triple()) for v in cay.vertices]
        dot = to_dot(cay, names=names)
        assert "(1, 1, 6)" in dot
        with pytest.raises(InputError):
            to_dot(cay, names=["just-one"])

    def test_json_adjacency(self):
        g, h = cyclic(3)
        tri = build(h, [("1", g.element((1,))), ("2", g.element((2,)))])
        data = to_json_adjacency(tri)
        assert data["order"] == 3 and data["degree"] == 2
        assert data["adjacency"][0] == [[1, "1"], [2, "2"]]
        # labeled slots at each vertex exactly k
        assert all(len(slots) == 2 for slots in data["adjacency"])
