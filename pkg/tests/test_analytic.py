import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qed_distill.analytic import (
    EvalConfig,
    attempt_stats,
    depolarizing_config,
    evaluate_sequence,
    iterate_quadratic_recurrence,
    memory_footprint,
    next_memory,
    qed_accept_lower,
    qed_error_bound,
    quadratic_parity_sequence,
    theorem_bounds,
)
from qed_distill.channels import PauliDist, depolarizing
from qed_distill.codes import CodeSpec, parse_sequence

MIXED_SEQ = "r3X,r2Y,r2X,q4.2.2"


def test_error_bound_examples():
    assert qed_error_bound(4, 2, 2, 0.0) == 0.0
    x = 0.01 / 0.99
    ref = 6 * x**2 + 4 * x**3 + x**4
    assert qed_error_bound(4, 2, 2, 0.01) == pytest.approx(ref, rel=1e-12)
    assert qed_error_bound(4, 2, 2, 0.01) == pytest.approx(6.163e-4, rel=1e-3)
    assert qed_error_bound(4, 2, 2, 0.01) <= (4 * 0.01 / 0.99) ** 2
    assert (4 * 0.01 / 0.99) ** 2 == pytest.approx(1.633e-3, rel=1e-3)
    with pytest.raises(ValueError):
        qed_error_bound(4, 2, 2, 1.0)


def test_error_bound_clamped():
    assert qed_error_bound(40, 38, 2, 0.4) == 1.0


def test_accept_examples():
    assert qed_accept_lower(4, 0.0) == 1.0
    assert qed_accept_lower(4, 0.0125) == pytest.approx(0.9509, abs=1e-4)
    assert qed_accept_lower(16, 1 / 32) == pytest.approx((31 / 32) ** 16)


@pytest.mark.parametrize("n", range(4, 42, 2))
def test_parity_bound_grid(n):
    for i in range(1, 50):
        p = i / (50 * 2 * n)
        assert qed_error_bound(n, n - 2, 2, p) <= (n * p / (1 - p)) ** 2


@pytest.mark.parametrize("n", range(4, 42, 2))
def test_single_level_overhead_bound(n):
    for i in range(1, 41):
        p = i / (40 * n)
        m = evaluate_sequence([CodeSpec.parity(n)], depolarizing_config(p))
        assert m.overhead <= (3 * n * p + 1) * n / (n - 2) * (1 + 1e-12)


def test_inequality_grid():
    for n in range(4, 41):
        for i in range(1, 100):
            x = i / (100 * n)
            lhs = (1 - x) ** (-n)
            assert lhs <= math.exp(n * x / (1 - x)) * (1 + 1e-12)
            assert lhs <= 3 * n * x + 1
    for i in range(0, 101):
        x = i / 100
        assert math.exp(x) - 1 - x <= (math.e - 2) * x * x + 1e-15


def test_empty_sequence():
    m = evaluate_sequence([], depolarizing_config(0.01))
    assert (m.overhead, m.M, m.K) == (1.0, 1, 1)
    m = evaluate_sequence([], depolarizing_config(0.01, 0.1536))
    assert m.overhead == pytest.approx(1 / (1 - 0.1536))


def test_mixed_sequence():
    seq = parse_sequence(MIXED_SEQ)
    m = evaluate_sequence(seq, depolarizing_config(0.01))
    assert m.M == 8
    assert m.overhead == pytest.approx(25, rel=0.05)
    assert [lv.M for lv in m.levels] == [3, 4, 5, 8]
    assert [lv.K for lv in m.levels] == [1, 1, 1, 2]


def test_mixed_sequence_with_injection():
    # with the injected input and the Bell rejection charged, the same sequence costs more
    seq = parse_sequence(MIXED_SEQ)
    m = evaluate_sequence(seq, EvalConfig(depolarizing(0.0125 + 1 / 30000), 0.1536))
    assert m.M == 8
    floor = 1 / (1 - 0.1536) * 3 * 2 * 2 * 2
    assert floor < m.overhead < 1.1 * floor


def test_quadratic_sequence_overhead():
    seq = quadratic_parity_sequence(2)
    assert [c.token for c in seq] == ["q4.2.2", "q16.14.2"]
    m = evaluate_sequence(seq, depolarizing_config(1 / 2000))
    assert m.overhead <= 3
    assert m.K == 28


@pytest.mark.parametrize("p", [1 / 2000, 1 / 4000, 1e-5])
def test_quadratic_overhead_bound(p):
    for level in range(1, 6):
        m = evaluate_sequence(quadratic_parity_sequence(level), depolarizing_config(p))
        assert m.overhead <= 3
        assert m.p_out <= theorem_bounds(level, p).p_bound * (1 + 1e-9)


def test_memory_examples():
    assert memory_footprint([CodeSpec.parity(4)]) == 4
    assert memory_footprint(parse_sequence(MIXED_SEQ)) == 8
    assert memory_footprint(quadratic_parity_sequence(2)) == max(16 * 2, 15 * 2 + 4) == 34
    assert next_memory(3, 1, 1) == 3


def test_theorem_bounds_examples():
    p = 1 / 2000
    assert theorem_bounds(1, p).p_bound == pytest.approx(0.272**2 / 34)
    assert theorem_bounds(1, p).p_bound == pytest.approx(2.176e-3, rel=1e-3)
    assert theorem_bounds(3, p).p_bound == pytest.approx(0.272**8 / 34)
    assert theorem_bounds(0, p).p_bound == p
    with pytest.raises(ValueError):
        theorem_bounds(1, 0.01)


@given(st.floats(1e-7, 1 / 2000))
@settings(max_examples=200, deadline=None)
def test_recurrence_below_bound(p):
    ps = iterate_quadratic_recurrence(6, p)
    for level in range(1, 7):
        assert ps[level] <= theorem_bounds(level, p).p_bound * (1 + 1e-9)


def test_attempt_examples():
    assert attempt_stats(0.5, 0.1).mean == 2
    assert attempt_stats(0.5, 2**-10).tail_quantile == pytest.approx(10)
    s = attempt_stats(0.0, 0.1)
    assert (s.mean, s.tail_quantile) == (1, 1)


@st.composite
def sequences(draw):
    classical = draw(st.lists(st.tuples(st.integers(2, 4), st.sampled_from("XYZ")), max_size=3))
    quantum = draw(st.lists(st.sampled_from([4, 6, 8, 16]), max_size=2))
    return [CodeSpec.repetition(n, b) for n, b in classical] + [CodeSpec.parity(n) for n in quantum]


@given(sequences(), st.floats(1e-4, 0.05), st.floats(1.01, 3.0))
@settings(max_examples=200, deadline=None)
def test_output_error_monotone(seq, p, scale):
    lo = evaluate_sequence(seq, depolarizing_config(p))
    hi = evaluate_sequence(seq, depolarizing_config(min(p * scale, 0.3)))
    assert lo.p_out <= hi.p_out * (1 + 1e-9) + 1e-300


@given(sequences(), st.floats(0.0, 0.1), st.floats(0.0, 0.3))
@settings(max_examples=200, deadline=None)
def test_metric_invariants(seq, p, p0):
    m = evaluate_sequence(seq, depolarizing_config(p, p0))
    K = 1
    floor = 1 / (1 - p0)
    prev_M = 1
    for lv, code in zip(m.levels, seq):
        K *= code.k
        floor *= code.n / code.k
        assert lv.K == K
        assert lv.M > prev_M
        prev_M = lv.M
        assert 0.0 <= lv.p <= 1.0
        assert lv.overhead >= floor * (1 - 1e-12)


def test_ordering_enforced():
    with pytest.raises(ValueError, match="follows quantum"):
        evaluate_sequence(parse_sequence("q4.2.2,r2X"), depolarizing_config(0.01))


def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(depolarizing(0.01), 1.0)
    with pytest.raises(ValueError):
        EvalConfig(depolarizing(0.01), 0.0, 0.0)
    with pytest.raises(TypeError):
        EvalConfig(0.01)


def test_classical_levels_use_exact_distribution():
    d = PauliDist(0.9, 0.05, 0.03, 0.02)
    from qed_distill.channels import repetition_step, total_error

    m = evaluate_sequence([CodeSpec.repetition(3, "Z")], EvalConfig(d))
    accept, out = repetition_step(d, 3, "Z")
    assert m.p_out == total_error(out)
    assert m.levels[0].p_fail == pytest.approx(1 - accept)
