import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ortho2c import BasisLevel, BridgeError, RPoly, WeightSpec, build_L, complex_from_real, orthonormal_basis, real_from_complex
from ortho2c.bridge import backward_identity, real_level
from ortho2c.families import real_family
from ortho2c.sampling import sample_points

R = 1 / np.sqrt(2)


def test_L_examples():
    assert np.array_equal(build_L(0).entries, np.array([[1.0 + 0j]]))
    assert np.allclose(build_L(1).entries, R * np.array([[1, -1j], [1, 1j]]))
    assert np.allclose(build_L(2).entries, [[R, 0, -1j * R], [0, 1, 0], [R, 0, 1j * R]])


@pytest.mark.parametrize("n", range(11))
def test_L_identities(n):
    lm = build_L(n)
    assert lm.unitarity_residual() <= 1e-14
    assert lm.transpose_residual() <= 1e-14
    assert np.allclose(lm.entries @ lm.entries.T, backward_identity(n + 1), atol=1e-15)


def test_L_is_cached_and_read_only():
    assert build_L(5) is build_L(5)
    with pytest.raises(ValueError):
        build_L(5).entries[0, 0] = 0
    with pytest.raises(ValueError):
        build_L(-1)


def test_hermite_real_level_two():
    p = real_from_complex(orthonormal_basis(WeightSpec.hermite(), 2)[2])
    assert p[0].allclose(RPoly({(2, 0): 1, (0, 2): -1}))
    assert p[1].allclose(RPoly({(2, 0): 1, (0, 2): 1, (0, 0): -1}))
    # the sine-type element comes out with the opposite sign of the polar family
    assert p[2].allclose(RPoly({(1, 1): -2}))


def test_level_zero_is_constant(builtin):
    p = real_from_complex(orthonormal_basis(builtin, 0)[0])
    assert p[0].allclose(RPoly.constant(1.0))
    q = complex_from_real([RPoly.constant(1.0)], 0)
    assert np.allclose(q.coeffs, [[1.0]])


def test_orthonormal_both_directions(builtin):
    for lv in orthonormal_basis(builtin, 6):
        real = real_level(lv)
        assert np.max(np.abs(real.gram - np.eye(lv.n + 1))) < 1e-9
        back = complex_from_real(real.polys, lv.n, builtin)
        assert np.max(np.abs(back.gram - np.eye(lv.n + 1))) < 1e-9
        assert np.max(np.abs(back.coeffs - lv.coeffs)) < 1e-10


def test_Q_equals_LP_pointwise(builtin):
    pts = sample_points(builtin, 50, 9)
    for lv in orthonormal_basis(builtin, 6):
        pvals = real_level(lv)(pts.real, pts.imag)
        qvals = lv(pts)
        assert np.max(np.abs(build_L(lv.n).entries @ pvals - qvals)) < 1e-10 * max(1, np.max(np.abs(qvals)))


def test_real_values_are_real(builtin):
    pts = sample_points(builtin, 30, 2)
    for lv in orthonormal_basis(builtin, 5):
        vals = real_level(lv).coeffs @ np.array([pts**a * np.conj(pts) ** b for a, b in _exps(lv.n)])
        assert np.max(np.abs(vals.imag)) < 1e-10 * max(1, np.max(np.abs(vals)))


def _exps(n):
    return [(m - k, k) for m in range(n + 1) for k in range(m + 1)]


def test_asymmetric_level_is_rejected():
    coeffs = np.array([[0, 1, 0], [0, 0, 2]], dtype=complex)
    lv = BasisLevel(1, coeffs, np.eye(2, dtype=complex), "custom")
    with pytest.raises(BridgeError, match="conjugation symmetry violated"):
        real_from_complex(lv)


def test_polar_pair_round_trip():
    polar = real_family("hermite_real_polar", 2)
    q = complex_from_real(polar, 2, WeightSpec.hermite())
    back = real_from_complex(q)
    for a, b in zip(polar, back):
        assert a.allclose(b, atol=1e-12, rtol=1e-12)
    # the outer rows recover the pure powers zb^2/sqrt2 and z^2/sqrt2
    assert np.allclose(q.coeffs[0, 3:], [0, 0, R])
    assert np.allclose(q.coeffs[2, 3:], [R, 0, 0])


def test_complex_from_real_without_weight_has_nan_gram():
    q = complex_from_real([RPoly({(1, 0): 1}), RPoly({(0, 1): 1})], 1)
    assert np.all(np.isnan(q.gram))
    with pytest.raises(ValueError):
        complex_from_real([RPoly({(1, 0): 1})], 1)


@given(st.integers(0, 8), st.integers(0, 2**31))
def test_round_trip_random_real_level(n, seed):
    rng = np.random.default_rng(seed)
    polys = [RPoly({(a, b): float(rng.normal()) for a in range(n + 1) for b in range(n + 1 - a)}) for _ in range(n + 1)]
    back = real_from_complex(complex_from_real(polys, n))
    for a, b in zip(polys, back):
        assert a.allclose(b, atol=1e-11, rtol=1e-11)
