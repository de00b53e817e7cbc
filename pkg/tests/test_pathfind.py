import json
from fractions import Fraction
from statistics import mean, stdev

import pytest

from isocayley.abelian import FiniteAbelianGroup, full_subgroup
from isocayley.cayley import build
from isocayley.errors import InputError, PreconditionError, TrialCapError
from isocayley.pathfind import (
    PathStep,
    certificate_from_json,
    certificate_to_json,
    certificate_to_json_text,
    collect_neighbors,
    expected_trials_bound,
    find_path,
    meet_from_target,
    replay,
)


def cycle_graph(n, gens=(1,)):
    g = FiniteAbelianGroup((n,))
    labels = []
    for k in gens:
        labels.append((str(k), g.element((k,))))
        labels.append((f"-{k}", g.element((n - k,))))
    return build(full_subgroup(g), labels)


def test_small_graph_rejected():
    g = cycle_graph(5)
    with pytest.raises(PreconditionError) as info:
        collect_neighbors(g, g.vertices[0], seed=1)
    assert "exhaustive" in str(info.value)


def test_collect_neighbors_z9():
    g = cycle_graph(9)
    neighbors, stats = collect_neighbors(g, g.vertices[0], seed=7)
    # ceil(sqrt(9)) = 3 distinct endpoints wanted
    assert stats.distinct_neighbors == 3
    assert len(neighbors) == 3
    assert stats.h == 9
    for vertex, cert in neighbors.items():
        assert cert.end == vertex
        assert replay(g, cert)


def test_find_path_z9_documented():
    g = cycle_graph(9)
    cert, stats = find_path(g, g.vertices[0], g.vertices[4], seed=7)
    assert cert.start == g.vertices[0]
    assert cert.end == g.vertices[4]
    # both halves capped at ceil(ln(2h)) = 3
    assert cert.length <= 6
    assert replay(g, cert)
    assert stats.step1_trials >= stats.distinct_neighbors


def test_find_path_deterministic():
    g = cycle_graph(16, gens=(1, 2))
    a, b = g.vertices[2], g.vertices[11]
    c1, s1 = find_path(g, a, b, seed=42)
    c2, s2 = find_path(g, a, b, seed=42)
    assert c1 == c2 and s1 == s2


def test_find_path_seed_changes_search():
    g = cycle_graph(16, gens=(1, 2))
    a, b = g.vertices[0], g.vertices[9]
    certs = {find_path(g, a, b, seed=s)[0].steps for s in range(6)}
    assert len(certs) > 1  # different streams explore differently
    for s in range(6):
        assert replay(g, find_path(g, a, b, seed=s)[0])


def test_identical_endpoints_give_empty_certificate():
    g = cycle_graph(9)
    cert, stats = find_path(g, g.vertices[3], g.vertices[3], seed=1)
    assert cert.steps == ()
    assert cert.length == 0
    assert replay(g, cert)
    assert stats.step1_trials == 0 and stats.step2_trials == 0


def test_unreachable_target_hits_trial_cap():
    # S = {3, 9} only reaches the coset of <3> inside Z/12
    g = FiniteAbelianGroup((12,))
    graph = build(
        full_subgroup(g), [("3", g.element((3,))), ("9", g.element((9,)))]
    )
    a = graph.vertices[0]
    b = graph.vertices[1]  # different component
    with pytest.raises(TrialCapError):
        find_path(graph, a, b, seed=3)


def test_trial_cap_is_a_precondition_error():
    assert issubclass(TrialCapError, PreconditionError)


def test_meet_from_target_explicit_length():
    g = cycle_graph(9)
    neighbors, _ = collect_neighbors(g, g.vertices[0], seed=5)
    cert, stats = meet_from_target(g, g.vertices[2], neighbors, seed=5, length=4)
    assert cert.start == g.vertices[2]
    assert cert.end in neighbors
    assert cert.length <= 4
    assert stats.step2_trials >= 1


def test_replay_rejects_unknown_label():
    g = cycle_graph(9)
    cert, _ = find_path(g, g.vertices[0], g.vertices[4], seed=7)
    bad = cert.__class__(
        cert.start, cert.end, (PathStep("nope", False),) + cert.steps[1:]
    )
    with pytest.raises(InputError):
        replay(g, bad)


def test_replay_detects_tampered_endpoint():
    g = cycle_graph(9)
    cert, _ = find_path(g, g.vertices[0], g.vertices[4], seed=7)
    forged = cert.__class__(cert.start, g.vertices[5], cert.steps)
    assert not replay(g, forged)


def test_step_flip_is_involution():
    s = PathStep("2", False)
    assert s.flipped().flipped() == s
    assert s.flipped().inverted


class TestExpectedTrialsBound:
    def test_documented_values(self):
        assert expected_trials_bound(9, 3) == 12
        assert expected_trials_bound(100, 10) == Fraction(4000, 289)

    def test_zero_neighbors(self):
        assert expected_trials_bound(50, 0) == 0

    def test_breakdown_regime_rejected(self):
        with pytest.raises(PreconditionError):
            expected_trials_bound(9, 6)  # 3n = 2h
        with pytest.raises(PreconditionError):
            expected_trials_bound(10, 7)

    def test_dominates_per_step_sum(self):
        # summing the worst single-step bound over i < n can only shrink
        for h, n in [(9, 3), (100, 10), (400, 20), (57, 8)]:
            per_step = sum(
                Fraction(4 * h * h, (2 * h - 3 * i) ** 2) for i in range(n)
            )
            assert per_step <= expected_trials_bound(h, n)

    def test_exact_rational_arithmetic(self):
        b = expected_trials_bound(100, 10)
        assert isinstance(b, Fraction)
        assert b == Fraction(4 * 10 * 100 * 100, (200 - 30) ** 2)


def test_mean_trials_within_theory_plus_noise():
    # 200 independent searches; sample mean of step-1 trials should sit
    # below the expectation bound by a wide margin of error
    g = cycle_graph(25, gens=(1, 3))
    runs = [find_path(g, g.vertices[0], g.vertices[13], seed=s)[1] for s in range(200)]
    trials = [s.step1_trials for s in runs]
    n = runs[0].distinct_neighbors
    bound = float(expected_trials_bound(25, n))
    slack = 3 * stdev(trials) / len(trials) ** 0.5
    assert mean(trials) <= bound + slack, (mean(trials), bound, slack)


def test_certificate_json_round_trip():
    g = cycle_graph(9)
    cert, _ = find_path(g, g.vertices[0], g.vertices[4], seed=7)
    blob = certificate_to_json(cert, g)
    again = certificate_from_json(blob, g)
    assert again == cert
    assert replay(g, again)
    text = certificate_to_json_text(cert, g)
    assert json.loads(text) == blob
    assert text.endswith("\n")


def test_certificate_json_custom_names():
    g = cycle_graph(9)
    names = [f"v{i}" for i in range(9)]
    cert, _ = find_path(g, g.vertices[0], g.vertices[4], seed=7)
    blob = certificate_to_json(cert, g, names=names)
    assert blob["start"] == "v0" and blob["end"] == "v4"
    assert certificate_from_json(blob, g, names=names) == cert


def test_certificate_json_rejects_malformed():
    g = cycle_graph(9)
    cert, _ = find_path(g, g.vertices[0], g.vertices[4], seed=7)
    blob = certificate_to_json(cert, g)
    missing = {k: v for k, v in blob.items() if k != "steps"}
    with pytest.raises(InputError):
        certificate_from_json(missing, g)
    renamed = dict(blob, start="nowhere")
    with pytest.raises(InputError):
        certificate_from_json(renamed, g)
    short = dict(blob, length=cert.length + 1)
    with pytest.raises(InputError):
        certificate_from_json(short, g)
