import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvqkd.channel import ChannelParams, SourceParams, correlation_block, eve_cm, output_variances
from cvqkd.errors import InvalidArgument, InvalidState
from cvqkd.gaussian import (
    CorrelationBlock,
    as_cm,
    condition_on_heterodyne,
    condition_on_homodyne,
    entropy,
    g_asymptotic,
    g_function,
    is_physical,
    symplectic_form,
    symplectic_spectrum_from_blocks,
    symplectic_spectrum_generic,
    symplectic_spectrum_invariants,
    symplectic_spectrum_two_mode,
    two_mode_invariants,
    von_neumann_entropy,
)
from cvqkd.selftest import random_two_mode_family, two_mode_cm


def test_symplectic_form_single_mode():
    assert np.array_equal(symplectic_form(1), [[0, 1], [-1, 0]])


def test_symplectic_form_two_modes_is_block_diagonal():
    om = symplectic_form(2)
    assert om.shape == (4, 4)
    assert np.array_equal(om @ om, -np.eye(4))
    assert not om[:2, 2:].any()


@pytest.mark.parametrize("n", [0, -1, 1.5])
def test_symplectic_form_rejects_bad_sizes(n):
    with pytest.raises(InvalidArgument):
        symplectic_form(n)


def test_vacuum_and_thermal_spectra():
    assert np.allclose(symplectic_spectrum_generic(np.eye(2)), [1.0])
    assert np.allclose(symplectic_spectrum_generic(np.diag([5.0, 5.0, 2.0, 2.0])), [5.0, 2.0])


def test_squeezed_state_is_pure():
    r = 0.7
    v = np.diag([math.exp(2 * r), math.exp(-2 * r)])
    assert symplectic_spectrum_generic(v)[0] == pytest.approx(1.0, rel=1e-12)
    assert entropy(v) == pytest.approx(0.0, abs=1e-9)


def test_two_mode_squeezed_vacuum_spectrum():
    w = 7.0
    v = two_mode_cm(w, w, math.sqrt(w * w - 1), 1.0)
    assert np.allclose(symplectic_spectrum_generic(v), [1.0, 1.0])
    assert np.allclose(symplectic_spectrum_two_mode(w, w, math.sqrt(w * w - 1), 1.0), [1.0, 1.0])


def test_spectrum_paths_agree_on_random_family():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        a, b, c, t = random_two_mode_family(rng)
        cm = two_mode_cm(a, b, c, t)
        ref = symplectic_spectrum_generic(cm)
        assert np.allclose(symplectic_spectrum_two_mode(a, b, c, t), ref, rtol=1e-9, atol=0)
        assert np.allclose(symplectic_spectrum_from_blocks(cm), ref, rtol=1e-9, atol=0)
        assert np.allclose(symplectic_spectrum_invariants(*two_mode_invariants(cm)), ref, rtol=1e-9, atol=0)


def _random_symplectic(rng):
    # local rotations and squeezers on each mode, then a beam splitter
    def rot(th):
        return np.array([[math.cos(th), math.sin(th)], [-math.sin(th), math.cos(th)]])

    s = np.eye(4)
    for k in (0, 2):
        r = rng.uniform(-1, 1)
        local = rot(rng.uniform(0, 2 * math.pi)) @ np.diag([math.exp(r), math.exp(-r)])
        m = np.eye(4)
        m[k : k + 2, k : k + 2] = local
        s = m @ s
    tau = rng.uniform(0, 1)
    bs = np.block([[math.sqrt(tau) * np.eye(2), math.sqrt(1 - tau) * np.eye(2)],
                   [-math.sqrt(1 - tau) * np.eye(2), math.sqrt(tau) * np.eye(2)]])
    return bs @ s


def test_invariant_path_handles_qp_correlations():
    rng = np.random.default_rng(11)
    for _ in range(300):
        nu = np.sort(rng.uniform(1, 30, size=2))[::-1]
        s = _random_symplectic(rng)
        cm = s @ np.diag([nu[0], nu[0], nu[1], nu[1]]) @ s.T
        cm = 0.5 * (cm + cm.T)
        assert np.allclose(symplectic_spectrum_generic(cm), nu, rtol=1e-8)
        assert np.allclose(symplectic_spectrum_from_blocks(cm), nu, rtol=1e-8)


def test_symplectic_spectrum_is_invariant_under_symplectic_maps():
    rng = np.random.default_rng(3)
    s = _random_symplectic(rng)
    om = symplectic_form(2)
    assert np.allclose(s @ om @ s.T, om, atol=1e-12)
    cm = two_mode_cm(4.0, 9.0, 5.0, 0.8)
    assert np.allclose(symplectic_spectrum_generic(s @ cm @ s.T), symplectic_spectrum_generic(cm), rtol=1e-9)


def test_near_degenerate_spectrum_keeps_precision():
    # nu+ and nu- agree to ~1e-9; the naive discriminant loses everything
    t = 1 - 1e-11
    cm = eve_cm(SourceParams(1e3, 1.0), ChannelParams(t, 1.0))
    nu = symplectic_spectrum_from_blocks(cm)
    assert nu[-1] >= 1.0 - 1e-12
    assert np.allclose(nu, symplectic_spectrum_generic(cm), rtol=1e-9)


def test_two_mode_closed_form_rejects_invalid_family():
    with pytest.raises(InvalidState):
        symplectic_spectrum_two_mode(1.0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidArgument):
        symplectic_spectrum_two_mode(2.0, 2.0, -1.0, 0.5)
    with pytest.raises(InvalidArgument):
        symplectic_spectrum_two_mode(2.0, 2.0, 1.0, 1.5)


def test_as_cm_validation():
    with pytest.raises(InvalidArgument):
        as_cm(np.eye(3))
    with pytest.raises(InvalidArgument):
        as_cm([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(InvalidArgument):
        as_cm([[np.nan, 0.0], [0.0, 1.0]])
    with pytest.raises(InvalidState):
        as_cm(0.5 * np.eye(2), check_physical=True)
    assert not is_physical(0.5 * np.eye(2))
    assert is_physical(np.eye(4))


def _g_reference(nu):
    with mpmath.workdps(60):
        nu = mpmath.mpf(nu)
        xp, xm = (nu + 1) / 2, (nu - 1) / 2
        return float(xp * mpmath.log(xp, 2) - xm * mpmath.log(xm, 2))


def test_g_anchor_values():
    assert g_function(1.0) == 0.0
    assert g_function(3.0) == pytest.approx(2.0, abs=1e-14)


@pytest.mark.parametrize("nu", [1.0 + 1e-12, 1.0 + 1e-6, 1.001, 1.5, 2.0, 10.0, 1e4, 1e9, 1e15])
def test_g_matches_high_precision(nu):
    assert g_function(nu) == pytest.approx(_g_reference(nu), rel=1e-12, abs=1e-15)


def test_g_asymptotic_converges():
    # the gap shrinks like 1 / nu^2
    gaps = [abs(g_function(nu) - g_asymptotic(nu)) for nu in (1e3, 1e5, 1e7)]
    assert gaps[0] < 1e-6
    assert gaps[1] < 1e-3 * gaps[0]
    assert gaps[2] < 1e-6


def test_g_rejects_unphysical():
    with pytest.raises(InvalidArgument):
        g_function(0.5)
    with pytest.raises(InvalidArgument):
        g_function(float("nan"))
    with pytest.raises(InvalidState):
        von_neumann_entropy([2.0, 0.9])


def test_g_clamps_roundoff_below_one():
    assert g_function(1.0 - 1e-12) == 0.0


@given(st.floats(1.0, 1e8), st.floats(1.0, 1e8))
def test_g_is_monotone(x, y):
    lo, hi = sorted((x, y))
    assert g_function(lo) <= g_function(hi)


@given(st.floats(1.0, 1e3), st.floats(1.0, 1e3))
def test_entropy_is_additive_on_product_states(a, b):
    cm = np.diag([a, a, b, b])
    assert entropy(cm) == pytest.approx(g_function(a) + g_function(b), rel=1e-9, abs=1e-12)


def test_conditioning_without_correlation_is_identity():
    v = two_mode_cm(3.0, 2.0, 1.5, 0.7)
    zero = CorrelationBlock(0.0, 0.0)
    assert np.allclose(condition_on_homodyne(v, zero, 5.0), v)
    assert np.allclose(condition_on_heterodyne(v, zero, 5.0 * np.eye(2)), v)


def test_homodyne_conditioning_block_form():
    src, ch = SourceParams(1e3, 1.0), ChannelParams(0.6, 1.0)
    t, w, v = ch.t, ch.w, src.v
    b_v = output_variances(src, ch).b_v
    out = condition_on_homodyne(eve_cm(src, ch), correlation_block(src, ch), b_v)
    # A, B, C blocks written out by hand
    a_q = (1 - t) * v + t * w - t * (1 - t) * (v - w) ** 2 / b_v
    b_q = w - (1 - t) * (w * w - 1) / b_v
    c_q = math.sqrt(t * (w * w - 1)) + math.sqrt(t) * (1 - t) * (v - w) * math.sqrt(w * w - 1) / b_v
    assert out[0, 0] == pytest.approx(a_q, rel=1e-12)
    assert out[1, 1] == pytest.approx((1 - t) * v + t * w, rel=1e-12)
    assert out[2, 2] == pytest.approx(b_q, rel=1e-12)
    assert out[3, 3] == pytest.approx(w, rel=1e-12)
    assert out[0, 2] == pytest.approx(c_q, rel=1e-12)
    assert out[1, 3] == pytest.approx(-math.sqrt(t * (w * w - 1)), rel=1e-12)


def test_heterodyne_conditioning_closed_form():
    src, ch = SourceParams(1e3, 1.0), ChannelParams(0.7, 1.5)
    t, w, v = ch.t, ch.w, src.v
    b_v = output_variances(src, ch).b_v
    out = condition_on_heterodyne(eve_cm(src, ch), correlation_block(src, ch), b_v * np.eye(2))
    den = b_v + 1
    a = (1 - t) * v + t * w - t * (1 - t) * (v - w) ** 2 / den
    b = w - (1 - t) * (w * w - 1) / den
    c = math.sqrt(t * (w * w - 1)) * (1 + (1 - t) * (v - w) / den)
    assert np.allclose(np.diag(out), [a, a, b, b], rtol=1e-12)
    assert out[0, 2] == pytest.approx(c, rel=1e-12)
    assert out[1, 3] == pytest.approx(-c, rel=1e-12)
    assert np.allclose(symplectic_spectrum_two_mode(a, b, c, 1.0), symplectic_spectrum_generic(out), rtol=1e-9)


def test_heterodyne_kernel_matches_inverse_form():
    rng = np.random.default_rng(5)
    for _ in range(50):
        vb = np.diag(rng.uniform(1, 100, size=2))
        d = rng.normal(size=(4, 2))
        ve = np.eye(4) * 1e3
        out = condition_on_heterodyne(ve, d, vb)
        assert np.allclose(out, ve - d @ np.linalg.inv(vb + np.eye(2)) @ d.T, rtol=1e-12)


params = st.tuples(
    st.floats(0.0, 1.0), st.floats(1.0, 100.0), st.floats(1.0, 100.0), st.floats(0.0, 1e5)
)


@settings(max_examples=200)
@given(params)
def test_conditioning_never_increases_entropy(p):
    t, w, v0, vs = p
    src, ch = SourceParams(vs, v0), ChannelParams(t, w)
    ve = eve_cm(src, ch)
    d = correlation_block(src, ch)
    b_v = output_variances(src, ch).b_v
    s = entropy(ve)
    for cond in (condition_on_homodyne(ve, d, b_v), condition_on_heterodyne(ve, d, b_v * np.eye(2))):
        assert is_physical(cond)
        assert entropy(cond) <= s + 1e-7 * max(1.0, s)


def test_conditioned_states_physical_on_grid():
    for t in np.linspace(0, 1, 11):
        for w in (1.0, 1.01, 3.0, 41.66, 100.0):
            for v0 in (1.0, 5.0, 1e4):
                src, ch = SourceParams(1e3, v0), ChannelParams(t, w)
                ve, d = eve_cm(src, ch), correlation_block(src, ch)
                b_v = output_variances(src, ch).b_v
                assert is_physical(condition_on_homodyne(ve, d, b_v))
                assert is_physical(condition_on_heterodyne(ve, d, b_v * np.eye(2)))


def test_conditioning_argument_errors():
    ve = np.eye(4)
    with pytest.raises(InvalidArgument):
        condition_on_homodyne(ve, CorrelationBlock(0, 0), 0.0)
    with pytest.raises(InvalidArgument):
        condition_on_homodyne(ve, np.zeros((2, 2)), 1.0)
    with pytest.raises(InvalidArgument):
        condition_on_heterodyne(ve, CorrelationBlock(0, 0), np.eye(4))
