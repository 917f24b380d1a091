import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from ia_dof.channel import generate, make_rng, complex_normal
from ia_dof.linalg import null_complement, numerical_rank, orthonormalize, subspace_angle
from ia_dof.schemes import Scheme, ia_n2, random_scheme, tdm, zf_n1
from ia_dof.topology import Topology
from ia_dof.verify import (
    DecodabilityError,
    audit,
    evaluate,
    rate_slope,
    receiver_rate,
    sum_rate,
    two_point_slope,
)


def _rand(rng, n, d):
    return complex_normal(rng, (n, d))


def _unitary(rng, d):
    Q, _ = np.linalg.qr(_rand(rng, d, d))
    return Q


# -- subspace angle ----------------------------------------------------------


def test_angle_same_span_is_zero():
    rng = make_rng(1)
    U = _rand(rng, 6, 3)
    assert subspace_angle(U, U @ _rand(rng, 3, 3)) < 1e-12


def test_angle_orthogonal_axes():
    e = np.eye(4)
    assert subspace_angle(e[:, :1], e[:, 1:2]) == pytest.approx(np.pi / 2)


def test_angle_containment():
    rng = make_rng(2)
    W = _rand(rng, 5, 3)
    assert subspace_angle(W[:, :1], W) < 1e-12
    assert subspace_angle(W, W[:, :2] @ _rand(rng, 2, 2)) < 1e-12


def test_angle_rejects_bad_input():
    with pytest.raises(ValueError):
        subspace_angle(np.ones((3, 2)), np.eye(3)[:, :1])
    with pytest.raises(ValueError):
        subspace_angle(np.eye(3)[:, :1], np.eye(4)[:, :1])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 6), st.data())
def test_angle_matches_projection_oracle(seed, n, data):
    d = data.draw(st.integers(1, n - 1))
    rng = make_rng(seed)
    U, W = _rand(rng, n, d), _rand(rng, n, d)
    QU, QW = np.linalg.qr(U)[0], np.linalg.qr(W)[0]
    # oracle: sin of the largest angle is the 2-norm of the projector difference
    oracle = np.arcsin(min(1.0, np.linalg.norm(QU @ QU.conj().T - QW @ QW.conj().T, 2)))
    got = subspace_angle(U, W)
    assert got == pytest.approx(oracle, abs=1e-9)
    assert got == pytest.approx(scipy.linalg.subspace_angles(U, W).max(), abs=1e-9)
    assert got == pytest.approx(subspace_angle(W, U), abs=1e-12)


def test_angle_small_is_accurate():
    e = np.eye(3, dtype=complex)
    eps = 1e-10
    v = e[:, :1] + eps * e[:, 1:2]
    assert subspace_angle(e[:, :1], v) == pytest.approx(eps, rel=1e-6)


# -- linalg helpers ----------------------------------------------------------


def test_orthonormalize_keeps_nested_spans():
    rng = make_rng(3)
    V = _rand(rng, 6, 4)
    Q = orthonormalize(V)
    assert np.allclose(Q.conj().T @ Q, np.eye(4), atol=1e-12)
    for k in range(1, 5):
        assert subspace_angle(Q[:, :k], V[:, :k]) < 1e-12


def test_null_complement_and_rank():
    rng = make_rng(4)
    A = _rand(rng, 5, 2)
    Q = null_complement(A, 5)
    assert Q.shape == (5, 3)
    assert np.abs(Q.conj().T @ A).max() < 1e-12
    assert numerical_rank(np.hstack([A, A @ _rand(rng, 2, 1)])) == 2
    assert numerical_rank(np.zeros((3, 0))) == 0


# -- audit -------------------------------------------------------------------


def test_audit_ia_aligns():
    t = Topology(4, 2, 2)
    rep = audit(t, generate(t, 0, 0), ia_n2(t, generate(t, 0, 0)))
    assert rep.d_interference == [1, 1, 1, 1]
    assert rep.all_decodable and rep.max_residual < 1e-9


def test_audit_tdm_has_no_interference():
    t = Topology(4, 2, 2)
    rep = audit(t, generate(t, 0, 0), tdm(t))
    # active users 1 and 3 are clean; idle receivers 2 and 4 hear both
    assert rep.d_interference == [0, 2, 0, 2]
    assert rep.all_decodable


def test_audit_random_beamformers_fail():
    t = Topology(4, 2, 2)
    c = generate(t, 0, 0)
    s = random_scheme(t, (1, 1, 1, 1), make_rng(9))
    rep = audit(t, c, s)
    assert rep.d_interference == [2, 2, 2, 2]
    assert not any(rep.decodable)
    assert min(rep.residual) > 1e-3
    with pytest.raises(DecodabilityError):
        rate_slope(t, c, s)
    assert evaluate(t, c, s).slope is None


def test_audit_rejects_mismatched_scheme():
    t = Topology(4, 2, 2)
    c = generate(t, 0, 0)
    s = ia_n2(t, c)
    s.V.pop(4)
    with pytest.raises(ValueError):
        audit(t, c, s)
    with pytest.raises(ValueError):
        audit(t, generate(Topology(4, 1, 2), 0), ia_n2(t, c))


# -- rates and slopes --------------------------------------------------------


def test_point_to_point_slope_is_one():
    h = np.array([[0.7 - 0.2j]])
    slope = two_point_slope(lambda snr: receiver_rate(h, None, snr), 1e4, 1e6)
    assert slope == pytest.approx(1.0, abs=1e-3)


def test_receiver_rate_closed_form():
    # identity channel, d streams: log2(1 + snr/d) per stream
    for d in (1, 2, 3):
        assert receiver_rate(np.eye(4)[:, :d], None, 100.0) == pytest.approx(d * np.log2(1 + 100 / d))
    assert receiver_rate(np.zeros((3, 0)), None, 10.0) == 0.0


def test_zf_asym_slope():
    t = Topology(3, 1, 3)
    c = generate(t, 5, 0)
    assert rate_slope(t, c, zf_n1(t, "asym")) == pytest.approx(4.0, rel=0.05)


def test_rate_slope_rejects_low_snr():
    t = Topology(4, 2, 2)
    c = generate(t, 0, 0)
    with pytest.raises(ValueError):
        rate_slope(t, c, tdm(t), snr_lo=10.0)
    with pytest.raises(ValueError):
        two_point_slope(lambda s: s, 1e6, 1e4)


def test_slope_invariant_under_unitary_mixing():
    t = Topology(5, 2, 2)
    c = generate(t, 11, 0)
    s = ia_n2(t, c)
    rng = make_rng(12)
    mixed = Scheme(s.name, s.variant, s.nrs, {k: v @ _unitary(rng, v.shape[1]) for k, v in s.V.items()})
    assert rate_slope(t, c, mixed) == pytest.approx(rate_slope(t, c, s), abs=1e-6)


def test_random_slope_below_ia_slope():
    t = Topology(4, 2, 2)
    c = generate(t, 3, 0)
    s = random_scheme(t, (1, 1, 1, 1), make_rng(3))
    slope = two_point_slope(lambda snr: sum_rate(t, c, s, snr), 1e4, 1e6)
    assert slope < rate_slope(t, c, ia_n2(t, c)) - 1


def test_interference_dimension_grows_with_streams():
    # adding columns to an interferer never lowers the observed dimension
    t = Topology(5, 2, 4)
    c = generate(t, 2, 0)
    rng = make_rng(2)
    base = random_scheme(t, (1, 1, 1, 1, 1), rng)
    grown = Scheme(base.name, "", 1, {k: np.hstack([v, _rand(rng, 4, 1)]) if k == 2 else v
                                     for k, v in base.V.items()})
    for a, b in zip(audit(t, c, base).d_interference, audit(t, c, grown).d_interference):
        assert b >= a
