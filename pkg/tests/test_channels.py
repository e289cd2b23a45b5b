import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qed_distill.channels import (
    PauliDist,
    bdsw_error_gap,
    depolarizing,
    repetition_step,
    total_error,
)
from qed_distill.codes import PauliOp, logical_effect, repetition_code, syndrome

LETTERS = "IXYZ"


@st.composite
def dists(draw, max_error=1.0):
    w = [draw(st.floats(0.0, 1.0)) for _ in range(3)]
    err = draw(st.floats(0.0, max_error))
    s = sum(w)
    if s == 0:
        return PauliDist.identity()
    x, y, z = (err * v / s for v in w)
    return PauliDist(max(0.0, 1 - x - y - z), x, y, z)


def brute_force_step(d, n, basis):
    """Enumerate all 4^n error patterns through the explicit code."""
    code = repetition_code(n, basis)
    probs = dict(zip(LETTERS, d.as_tuple()))
    out = dict.fromkeys(LETTERS, 0.0)
    for letters in itertools.product(LETTERS, repeat=n):
        e = PauliOp.from_string("".join(letters))
        if any(syndrome(code, e)):
            continue
        out[logical_effect(code, e)] += math.prod(probs[c] for c in letters)
    accept = sum(out.values())
    return accept, tuple(out[c] / accept for c in LETTERS)


def test_dist_validation():
    d = PauliDist(0.5, 0.5, 0.0, 1e-13)
    assert math.isclose(sum(d.as_tuple()), 1.0, abs_tol=1e-15)
    with pytest.raises(ValueError):
        PauliDist(0.5, 0.4, 0.0, 0.0)
    with pytest.raises(ValueError):
        PauliDist(1.1, -0.1, 0.0, 0.0)
    # drift between the two tolerances is renormalised
    d = PauliDist(0.9, 0.05, 0.05, 1e-8)
    assert abs(sum(d.as_tuple()) - 1.0) < 1e-12


def test_depolarizing_examples():
    assert depolarizing(0).as_tuple() == (1, 0, 0, 0)
    d = depolarizing(0.0125)
    assert d.p_i == pytest.approx(0.9875)
    assert d.p_x == d.p_y == d.p_z == pytest.approx(1 / 240)
    assert depolarizing(0.75).as_tuple() == pytest.approx((0.25,) * 4)
    with pytest.raises(ValueError):
        depolarizing(0.8)


def test_total_error_examples():
    assert total_error(PauliDist.identity()) == 0
    assert total_error(depolarizing(0.03)) == pytest.approx(0.03)
    assert total_error(PauliDist(0.9, 0.05, 0.03, 0.02)) == pytest.approx(0.10)


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("basis", "XYZ")
def test_identity_input(n, basis):
    accept, out = repetition_step(PauliDist.identity(), n, basis)
    assert accept == 1.0 and out.as_tuple() == (1, 0, 0, 0)


def test_step_depolarizing_example():
    accept, out = repetition_step(depolarizing(0.1), 2, "Z")
    assert accept == pytest.approx(0.875556, abs=1e-6)
    # reference values are printed to six places; the first rounds 0.9263959 up
    assert out.as_tuple() == pytest.approx((0.926397, 0.002538, 0.002538, 0.068527), abs=2e-6)


def test_step_bit_flip_example():
    accept, out = repetition_step(PauliDist(0.9, 0.1, 0, 0), 2, "Z")
    assert accept == pytest.approx(0.82)
    assert out.as_tuple() == pytest.approx((0.81 / 0.82, 0.01 / 0.82, 0, 0))


@given(dists())
@settings(max_examples=200, deadline=None)
def test_two_pair_event_table(d):
    p_i, p_x, p_y, p_z = d.as_tuple()
    accept, out = repetition_step(d, 2, "Z")
    a = (p_i + p_z) ** 2 + (p_i + p_z - 1) ** 2
    assert accept == pytest.approx(a, abs=1e-12)
    if a > 1e-9:
        assert out.p_z == pytest.approx(2 * p_i * p_z / a, abs=1e-9)
        assert out.p_x == pytest.approx((p_x**2 + p_y**2) / a, abs=1e-9)
        assert out.p_y == pytest.approx(2 * p_x * p_y / a, abs=1e-9)


@given(dists(), st.integers(2, 12), st.sampled_from("XYZ"))
@settings(max_examples=300, deadline=None)
def test_step_is_distribution(d, n, basis):
    accept, out = repetition_step(d, n, basis)
    if accept < 1e-300:
        return
    assert 0 < accept <= 1 + 1e-12
    assert sum(out.as_tuple()) == pytest.approx(1.0, abs=1e-12)
    assert all(0 <= c <= 1 for c in out.as_tuple())


@pytest.mark.parametrize(
    "basis,perm", [("X", (0, 3, 2, 1)), ("Y", (0, 1, 3, 2))]
)
@given(d=dists(), n=st.integers(2, 6))
@settings(max_examples=60, deadline=None)
def test_basis_covariance(basis, perm, d, n):
    a1, out1 = repetition_step(d, n, basis)
    a2, out2 = repetition_step(d.permuted(perm), n, "Z")
    assert a1 == pytest.approx(a2, abs=1e-12)
    assert out1.as_tuple() == pytest.approx(out2.permuted(perm).as_tuple(), abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("basis", "XYZ")
@pytest.mark.parametrize(
    "d", [depolarizing(0.1), PauliDist(0.7, 0.1, 0.05, 0.15), PauliDist(0.6, 0.0, 0.3, 0.1)]
)
def test_step_matches_enumeration(n, basis, d):
    accept, out = repetition_step(d, n, basis)
    a_ref, out_ref = brute_force_step(d, n, basis)
    assert accept == pytest.approx(a_ref, abs=1e-12)
    assert out.as_tuple() == pytest.approx(out_ref, abs=1e-12)


def test_gap_examples():
    assert bdsw_error_gap(depolarizing(0.3)) > 0
    assert bdsw_error_gap(depolarizing(0)) == 0
    d = PauliDist(0.6, 0.15, 0.15, 0.10)
    _, out = repetition_step(d, 2, "Z")
    assert bdsw_error_gap(d) == pytest.approx(out.p_i - d.p_i, abs=1e-14)
    with pytest.raises(ValueError):
        bdsw_error_gap(PauliDist(0.9, 0.0, 0.05, 0.05))
    with pytest.raises(ValueError):
        bdsw_error_gap(depolarizing(0.6))


@given(dists(max_error=0.499))
@settings(max_examples=300, deadline=None)
def test_error_reduction(d):
    p_i, p_x, p_y, p_z = d.as_tuple()
    # reorder so that Z is the least likely error
    x, y, z = sorted((p_x, p_y, p_z), reverse=True)
    d = PauliDist(p_i, x, y, z)
    if total_error(d) == 0:
        return
    gap = bdsw_error_gap(d)
    _, out = repetition_step(d, 2, "Z")
    assert gap == pytest.approx(out.p_i - d.p_i, abs=1e-12)
    assert total_error(out) <= total_error(d) + 1e-12
