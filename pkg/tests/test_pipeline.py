import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qed_distill.analytic import EvalConfig, depolarizing_config, evaluate_sequence, quadratic_parity_sequence
from qed_distill.channels import depolarizing
from qed_distill.codes import CodeSpec, PauliOp, parity_code, repetition_code
from qed_distill.pipeline import (
    GateSchedule,
    discard_fraction,
    parity_gate_types,
    parity_unencode_schedule,
    plan_pipeline,
    repetition_gate_types,
    replay,
    stage_throughput,
    staircase_layer,
    unencode_schedule,
    verify_unencoding,
)


def test_staircase_prefix():
    # first layers of the staircase for a 5-qubit block with every gate present
    sched = unencode_schedule(5, 1)
    first = [sorted(layer) for layer in sched.layers[:3]]
    assert first == [[(0, 1)], [(0, 2)], [(0, 3), (1, 2)]]


def test_depth_examples():
    assert unencode_schedule(4, 2).depth <= 8
    assert parity_unencode_schedule(6).depth == 4
    single = unencode_schedule(2, 1, x_checks=0)
    assert single.depth == 1 and single.gates() == [(0, (1, 0))]


def test_depth_bound_all_sizes():
    for n in range(2, 65):
        for k in range(1, n):
            sched = unencode_schedule(n, k)
            assert sched.depth <= 3 * n - 2 - k
            last = max(staircase_layer(i, j, n) for t, (i, j) in sched.gates())
            assert last == staircase_layer(n - 1, n - k - 1, n)


@pytest.mark.parametrize("n,k", [(4, 2), (7, 3), (12, 1), (16, 14), (9, 8)])
def test_schedule_invariants(n, k):
    sched = unencode_schedule(n, k)
    for layer in sched.layers:
        qubits = [q for g in layer for q in g]
        assert len(qubits) == len(set(qubits))
    # each control meets its targets in canonical order, cyclically from i+1
    per_control: dict[int, list[int]] = {}
    for _, (i, j) in sched.gates():
        per_control.setdefault(i, []).append(j)
    for i, targets in per_control.items():
        assert targets == sorted(targets, key=lambda j: (j - i) % n)
    assert sched.output_qubits == tuple(range(n - k, n))


def test_schedule_rejects_conflicts():
    with pytest.raises(ValueError):
        GateSchedule(3, 1, (frozenset({(0, 1), (1, 2)}),))
    with pytest.raises(ValueError):
        GateSchedule(3, 1, (frozenset({(0, 0)}),))
    with pytest.raises(ValueError):
        unencode_schedule(3, 3)


@pytest.mark.parametrize("n", range(4, 17, 2))
def test_parity_unencoding(n):
    code = parity_code(n)
    types = parity_gate_types(n)
    assert verify_unencoding(code, unencode_schedule(n, n - 2), types)
    assert verify_unencoding(code, unencode_schedule(n, n - 2, x_checks=1), types)
    fast = parity_unencode_schedule(n)
    assert fast.depth == n - 2
    assert verify_unencoding(code, fast, types)


@pytest.mark.parametrize("n", range(2, 13))
@pytest.mark.parametrize("basis", "XYZ")
def test_repetition_unencoding(n, basis):
    code = repetition_code(n, basis)
    types = repetition_gate_types(n, basis)
    assert verify_unencoding(code, unencode_schedule(n, 1), types)
    assert verify_unencoding(code, unencode_schedule(n, 1, x_checks=0), types)


def test_verifier_detects_broken_schedule():
    code = parity_code(6)
    sched = parity_unencode_schedule(6)
    broken = GateSchedule(6, 4, sched.layers[:-1])
    assert not verify_unencoding(code, broken, parity_gate_types(6))


def test_replay_is_linear():
    sched = unencode_schedule(6, 4)
    types = parity_gate_types(6)
    a = PauliOp.from_string("XYZIXZ")
    b = PauliOp.from_string("ZZXYIY")
    assert replay(a * b, sched, types) == replay(a, sched, types) * replay(b, sched, types)


def test_throughput_examples():
    assert stage_throughput(1.0, 0.0, 4, 4, 4, 4, 0.0) == 1.0
    assert stage_throughput(1.0, 0.0, 100, 4, 4, 2, 0.2) == pytest.approx(2.5)
    assert stage_throughput(1.0, 10.0, 4, 4, 4, 2, 0.0) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        stage_throughput(1.0, 10.0, 3, 4, 4, 2, 0.0)


@given(
    st.integers(2, 16), st.integers(1, 3), st.floats(0.1, 5.0), st.floats(0.0, 200.0), st.floats(0.0, 0.9)
)
def test_throughput_monotone_in_buffer(n, extra, t_in, t_dis, p_fail):
    k = max(1, n - 2)
    n_total = n * extra
    prev = math.inf
    for B in range(n, 40 * n):
        t = stage_throughput(t_in, t_dis, B, n, n_total, k, p_fail)
        assert t <= prev * (1 + 1e-12)
        prev = t


def test_discard_fraction():
    assert discard_fraction(1.0, 2.5, 4, 2, 0.2) == pytest.approx(0.0)
    assert discard_fraction(1.0, 5.0, 4, 2, 0.2) == pytest.approx(0.5)


def test_plan_injection_stage():
    seq = [CodeSpec.parity(4)]
    m = evaluate_sequence(seq, depolarizing_config(0.01))
    plan = plan_pipeline(seq, m, 1.0, 1e-6, 0.5)
    assert plan.stages[0].B == 1
    plan = plan_pipeline(seq, m, 1.0, 1e-6, 3.5)
    assert plan.stages[0].B == 4


def test_plan_single_level():
    seq = [CodeSpec.parity(4)]
    m = evaluate_sequence(seq, depolarizing_config(0.05 / 4 * 1.0))
    plan = plan_pipeline(seq, m, 1.0, 1e-9, 1e-9)
    assert plan.stages[1].B == pytest.approx(4, rel=1e-6)
    assert plan.B_all == pytest.approx(sum(s.B for s in plan.stages))
    assert all(s.T_input > 0 and s.T_distill > 0 for s in plan.stages)


def test_plan_quadratic():
    seq = quadratic_parity_sequence(2)
    m = evaluate_sequence(seq, EvalConfig(depolarizing(1 / 2000)))
    plan = plan_pipeline(seq, m, 1.0, 0.01, 0.01)
    assert plan.batch_size == 28
    assert plan.B_all == math.fsum(s.B for s in plan.stages)
    # one batch period covers every raw pair the top level consumes on average
    assert plan.batch_period == pytest.approx(m.overhead * m.K)


def test_plan_rejects_mismatch():
    m = evaluate_sequence([CodeSpec.parity(4)], depolarizing_config(0.01))
    with pytest.raises(ValueError):
        plan_pipeline([CodeSpec.parity(4), CodeSpec.parity(8)], m, 1.0, 0.1, 0.1)
    with pytest.raises(ValueError):
        plan_pipeline([CodeSpec.parity(4)], m, 0.0, 0.1, 0.1)
