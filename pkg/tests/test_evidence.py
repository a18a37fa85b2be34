import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expertfusion.evidence import (
    MassFunction,
    SensorReport,
    TotalConflictError,
    belief,
    build_mass_functions,
    combine_sensors,
    conflict,
    ds_combine,
    ds_combine_tableau,
    multisensor_rank,
    plausibility,
    sensor_entropy,
)
from expertfusion.fusion import RankedList, combsum
from expertfusion.sensors import EventScoreTable
from conftest import AUTHORS
from oracles import tableau_general

FRAME = AUTHORS


def mass(a1, a2, a3, theta):
    return MassFunction({"author1": a1, "author2": a2, "author3": a3}, theta, FRAME)


# masses printed in the worked example
TEXT = mass(0.4118, 0.2549, 0.0, 0.3333)
PROFILE = mass(0.1723, 0.0, 0.4944, 0.3333)
CITATION = mass(0.1065, 0.1281, 0.4321, 0.3333)
TEXT_PROFILE = mass(0.4241, 0.1357, 0.2630, 0.1772)


def approx_mass(m, a1, a2, a3, theta, tol):
    assert m["author1"] == pytest.approx(a1, abs=tol)
    assert m["author2"] == pytest.approx(a2, abs=tol)
    assert m["author3"] == pytest.approx(a3, abs=tol)
    assert m.theta_mass == pytest.approx(theta, abs=tol)


def random_mass(rng, frame, zero_prob=0.2):
    w = rng.random(len(frame) + 1)
    w[:-1][rng.random(len(frame)) < zero_prob] = 0.0
    w /= w.sum()
    return MassFunction(dict(zip(frame, w[:-1])), w[-1], frame)


def test_mass_function_validation():
    with pytest.raises(ValueError):
        MassFunction({"a": 0.5}, 0.6, ("a", "b"))
    with pytest.raises(ValueError):
        MassFunction({"z": 0.5}, 0.5, ("a",))
    with pytest.raises(ValueError):
        MassFunction({"a": -0.1}, 1.1, ("a",))


def test_entropy_all_positive():
    t = EventScoreTable.from_raw("text", AUTHORS, ("e1", "e2"), [[1, 2], [3, 4], [5, 6]])
    h, max_h = sensor_entropy(t)
    assert h == pytest.approx(-3 * (2 / 6) * math.log2(2 / 6))
    assert h == pytest.approx(1.5850, abs=1e-4)
    assert max_h == pytest.approx(2.5850, abs=1e-4)
    assert h / max_h == pytest.approx(0.6132, abs=1e-4)


def test_entropy_all_zero():
    t = EventScoreTable.from_raw("text", AUTHORS, ("e1", "e2"), np.zeros((3, 2)))
    assert sensor_entropy(t)[0] == 0.0


def test_entropy_needs_two_cells():
    t = EventScoreTable.from_raw("text", ("a",), ("e",), [[1.0]])
    with pytest.raises(ValueError):
        sensor_entropy(t)


def test_entropy_random_binary_patterns():
    rng = np.random.default_rng(3)
    for _ in range(50):
        raw = rng.integers(0, 2, size=(4, 3)) * rng.random((4, 3))
        t = EventScoreTable.from_raw("text", list("abcd"), ("x", "y", "z"), raw)
        h, max_h = sensor_entropy(t)
        expected = 0.0
        for row in raw:
            r = sum(1 for v in row if v > 0)
            if r:
                p = r / 12
                expected -= p * math.log2(p)
        assert h == pytest.approx(expected, abs=1e-12)
        assert max_h == pytest.approx(math.log2(12))
        assert 0 <= h <= max_h


def _reports(scores_by_sensor, ratio=None):
    out = []
    for scores in scores_by_sensor:
        fused = RankedList.from_scores(dict(zip(AUTHORS, scores)), "combsum")
        out.append((fused, 1.5849625007211563, math.log2(6)))
    return out


def test_mass_profile_and_citation_columns():
    ms = build_mass_functions(
        _reports([(1.9440, 1.2032, 0.0), (0.6969, 0.0, 2.0), (0.4929, 0.5928, 2.0)]), AUTHORS
    )
    approx_mass(ms[1], 0.1723, 0.0, 0.4944, 1 / 3, 1e-4)
    approx_mass(ms[2], 0.1065, 0.1281, 0.4321, 1 / 3, 1e-4)
    # text column of the printed mass table
    approx_mass(ms[0], 0.4118, 0.2549, 0.0, 1 / 3, 1e-4)


def test_mass_text_column_from_misprinted_sum():
    # fed the 1.9940 that the CombSUM table prints, the same rule gives these
    ms = build_mass_functions(
        _reports([(1.9940, 1.2032, 0.0), (0.6969, 0.0, 2.0), (0.4929, 0.5928, 2.0)]), AUTHORS
    )
    scale = (1 - 1 / 3) / 3.1972
    approx_mass(ms[0], 1.9940 * scale, 1.2032 * scale, 0.0, 1 / 3, 1e-9)
    approx_mass(ms[0], 0.4158, 0.2509, 0.0, 1 / 3, 1e-4)


def test_mass_all_zero_scores_is_vacuous():
    ms = build_mass_functions(_reports([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]), AUTHORS)
    assert ms[0].theta_mass == 1.0
    assert ms[1].theta_mass == pytest.approx(0.5)


def test_mass_no_evidence_is_error():
    fused = RankedList.from_scores(dict(zip(AUTHORS, (0.0, 0.0, 0.0))), "combsum")
    with pytest.raises(ValueError):
        build_mass_functions([(fused, 0.0, 2.0), (fused, 0.0, 2.0)], AUTHORS)


def test_mass_single_sensor_keeps_ratio():
    (m,) = build_mass_functions(_reports([(2.0, 1.0, 0.0)]), AUTHORS)
    assert m.theta_mass == pytest.approx(0.6132, abs=1e-4)
    assert m["author1"] == pytest.approx(2 * m["author2"])


def test_mass_condorcet_uses_scaled_wins():
    fused = RankedList((("author3", 2.0), ("author1", 1.0), ("author2", 0.0)), "condorcet")
    (m,) = build_mass_functions([(fused, 1.0, 2.0)], AUTHORS)
    assert m["author3"] == pytest.approx(2 * m["author1"])
    assert m["author2"] == 0.0


@settings(max_examples=50)
@given(st.lists(st.floats(0, 10), min_size=3, max_size=3), st.floats(0.01, 100))
def test_mass_scale_invariance(scores, c):
    if sum(scores) == 0:
        return
    base = build_mass_functions(_reports([scores, (1, 0, 0)]), AUTHORS)
    scaled = build_mass_functions(_reports([[s * c for s in scores], (c, 0, 0)]), AUTHORS)
    for a, b in zip(base, scaled):
        for x in AUTHORS:
            assert a[x] == pytest.approx(b[x], abs=1e-12)
        assert a.theta_mass == pytest.approx(b.theta_mass, abs=1e-12)


def test_combine_text_profile():
    assert conflict(TEXT, PROFILE) == pytest.approx(0.3735, abs=1e-4)
    approx_mass(ds_combine(TEXT, PROFILE), 0.4241, 0.1357, 0.2630, 0.1772, 2e-4)


def test_combine_second_step_tableau():
    assert conflict(TEXT_PROFILE, CITATION) == pytest.approx(0.3724, abs=1e-4)
    m = ds_combine_tableau(TEXT_PROFILE, CITATION)
    approx_mass(m, 0.3274, 0.1359, 0.4428, 0.0942, 2e-4)


def test_vacuous_is_neutral():
    m = ds_combine(TEXT, MassFunction.vacuous(FRAME))
    approx_mass(m, TEXT["author1"], TEXT["author2"], TEXT["author3"], TEXT.theta_mass, 1e-15)


def test_same_singleton_concentrates():
    a = MassFunction({"author1": 1.0}, 0.0, FRAME)
    assert conflict(a, a) == 0
    assert ds_combine_tableau(a, a)["author1"] == 1.0
    assert ds_combine(a, a)["author1"] == 1.0


def test_total_conflict_raises():
    a = MassFunction({"author1": 1.0}, 0.0, FRAME, "text")
    b = MassFunction({"author2": 1.0}, 0.0, FRAME, "profile")
    with pytest.raises(TotalConflictError, match="text.*profile"):
        ds_combine(a, b)
    with pytest.raises(TotalConflictError):
        ds_combine_tableau(a, b)


def test_tableau_frame_limit():
    frame = tuple(f"c{i}" for i in range(13))
    v = MassFunction.vacuous(frame)
    with pytest.raises(ValueError):
        ds_combine_tableau(v, v)


def test_closed_form_matches_tableau_and_general_oracle():
    rng = np.random.default_rng(11)
    frame = tuple("abcde")
    for _ in range(1000):
        m1, m2 = random_mass(rng, frame), random_mass(rng, frame)
        fast = ds_combine(m1, m2)
        ref = ds_combine_tableau(m1, m2)
        cells, k = tableau_general(m1.focal_elements(), m2.focal_elements())
        assert k == pytest.approx(conflict(m1, m2), abs=1e-12)
        for x in frame:
            assert abs(fast[x] - ref[x]) < 1e-12
            assert abs(fast[x] - cells.get(frozenset(x), 0.0)) < 1e-12
        assert abs(fast.theta_mass - ref.theta_mass) < 1e-12


def test_commutative_and_associative():
    rng = np.random.default_rng(5)
    frame = tuple("abcd")
    for _ in range(200):
        a, b, c = (random_mass(rng, frame) for _ in range(3))
        ab, ba = ds_combine(a, b), ds_combine(b, a)
        left, right = ds_combine(ab, c), ds_combine(a, ds_combine(b, c))
        for x in frame:
            assert abs(ab[x] - ba[x]) < 1e-12
            assert abs(left[x] - right[x]) < 1e-12
        assert abs(left.theta_mass - right.theta_mass) < 1e-12


def test_zero_in_one_sensor_still_positive():
    m = ds_combine(TEXT, PROFILE)
    assert TEXT["author3"] == 0 and m["author3"] > 0


def test_belief_and_plausibility():
    final = ds_combine(TEXT_PROFILE, CITATION)
    assert belief(final, FRAME) == pytest.approx(1.0)
    assert belief(final, []) == 0.0
    assert belief(final, ["author1"]) == pytest.approx(0.3274, abs=2e-4)
    # printed final masses round to a total of 1.0003, so check the computed one
    assert plausibility(final, ["author1"]) == pytest.approx(0.3274 + 0.0942, abs=5e-4)
    assert plausibility(final, FRAME) == pytest.approx(1.0)
    assert plausibility(final, []) == 0.0


def test_plausibility_is_one_minus_belief_of_complement():
    rng = np.random.default_rng(9)
    frame = tuple("abcde")
    for _ in range(200):
        m = random_mass(rng, frame)
        subset = [x for x in frame if rng.random() < 0.5] or ["a"]
        rest = [x for x in frame if x not in subset]
        assert belief(m, subset) <= plausibility(m, subset) + 1e-15
        assert plausibility(m, subset) == pytest.approx(1 - belief(m, rest), abs=1e-12)


def test_multisensor_rank_worked_example():
    reports = [
        SensorReport("citation", RankedList((), "combsum"), 0, 1, CITATION),
        SensorReport("text", RankedList((), "combsum"), 0, 1, TEXT),
        SensorReport("profile", RankedList((), "combsum"), 0, 1, PROFILE),
    ]
    ranked = multisensor_rank(reports)
    assert ranked.authors == ["author3", "author1", "author2"]
    assert list(ranked.scores().values()) == pytest.approx([0.4428, 0.3274, 0.1359], abs=2e-3)


def test_multisensor_rank_builds_masses_from_tables(paper_tables):
    reports = []
    for kind, t in paper_tables.items():
        h, max_h = sensor_entropy(t)
        reports.append(SensorReport(kind, combsum(t), h, max_h))
    assert multisensor_rank(reports).authors == ["author3", "author1", "author2"]


def test_single_sensor_keeps_mass_order():
    ranked = multisensor_rank([SensorReport("text", RankedList((), "combsum"), 0, 1, TEXT)])
    assert ranked.authors == ["author1", "author2", "author3"]


def test_fold_order_irrelevant():
    a = combine_sensors([TEXT, PROFILE, CITATION]).mass
    b = ds_combine(TEXT, ds_combine(PROFILE, CITATION))
    for x in FRAME:
        assert abs(a[x] - b[x]) < 1e-12
