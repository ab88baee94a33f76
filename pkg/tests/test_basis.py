import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ortho2c import (
    BasisError,
    BasisLevel,
    CPoly,
    WeightSpec,
    determinant_oracle,
    hermitian_inv_sqrt,
    inner_product,
    monic_basis,
    orthonormal_basis,
    orthonormalize,
)
from ortho2c.basis import conjugate_mirror, inner_products
from ortho2c.polycore import graded_exponents
from ortho2c.sampling import sample_points
from ortho2c.weights import moment


def leibniz_monic(w, k, n):
    """Monic Q_{k,n} from the bordered determinant, expanded over permutations."""
    lower = list(graded_exponents(n - 1))
    size = len(lower)
    a, b = n - k, k

    def entry(r, c):
        s, t = lower[r]
        if c < size:
            p, q = lower[c]
            return moment(w, s + q, t + p)
        return moment(w, s + a, t + b)

    last = [CPoly.monomial(t, s) for s, t in lower] + [CPoly.monomial(a, b)]

    def det(mat):
        m = len(mat)
        total = 0
        for perm in itertools.permutations(range(m)):
            sign = np.linalg.det(np.eye(m)[list(perm)])
            prod = 1
            for i, j in enumerate(perm):
                prod = prod * mat[i][j]
            total += sign * prod
        return total

    acc = CPoly()
    for col in range(size + 1):
        minor = [[entry(r, c) for c in range(size + 1) if c != col] for r in range(size)]
        acc = acc + last[col].scale((-1) ** (size + col) * det(minor))
    base = det([[entry(r, c) for c in range(size)] for r in range(size)])
    return acc.scale(1 / base)


def test_hermite_monic_level_two():
    lv = monic_basis(WeightSpec.hermite(), 2)[2]
    z2, zz, zb2 = lv.polys
    assert z2.allclose(CPoly.monomial(2, 0))
    assert zz.allclose(CPoly({(1, 1): 1, (0, 0): -1}))
    assert zb2.allclose(CPoly.monomial(0, 2))
    assert np.allclose(lv.gram, np.diag([2, 1, 2]))


@pytest.mark.parametrize("lam", [0.0, 0.7, 1.5])
def test_disk_middle_entry(lam):
    q = monic_basis(WeightSpec.disk(lam), 2)[2].polys[1]
    assert q.allclose(CPoly({(1, 1): 1, (0, 0): -1 / (lam + 2)}))


def test_degree_one_is_z_zbar(builtin):
    q0, q1 = monic_basis(builtin, 1)[1].polys
    assert q0.allclose(CPoly.monomial(1, 0)) and q1.allclose(CPoly.monomial(0, 1))


def test_determinant_oracle_examples():
    h = WeightSpec.hermite()
    assert determinant_oracle(h, 1, 2).allclose(CPoly({(1, 1): 1, (0, 0): -1}))
    assert determinant_oracle(h, 0, 1).allclose(CPoly.monomial(1, 0))
    assert determinant_oracle(WeightSpec.disk(0.0), 1, 2).allclose(CPoly({(1, 1): 1, (0, 0): -0.5}))
    with pytest.raises(ValueError):
        determinant_oracle(h, 0, 7)


@pytest.mark.parametrize("w", [WeightSpec.hermite(), WeightSpec.disk(0.0), WeightSpec.deltoid("T")], ids=str)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_determinant_oracle_matches_leibniz(w, n):
    for k in range(n + 1):
        ref = leibniz_monic(w, k, n)
        assert determinant_oracle(w, k, n).allclose(ref, atol=1e-10, rtol=1e-10)
        assert CPoly.from_vector(monic_basis(w, n)[n].coeffs[k]).allclose(ref, atol=1e-10, rtol=1e-10)


def test_orthogonality_to_lower_degrees(builtin):
    levels = orthonormal_basis(builtin, 8)
    rows = np.vstack([lv.padded(8) for lv in levels])
    gram = inner_products(builtin, rows, rows)
    assert np.max(np.abs(gram - np.eye(len(gram)))) < 1e-9


def test_conjugation_symmetry(builtin):
    pts = sample_points(builtin, 50, 3)
    for lv in monic_basis(builtin, 8) + orthonormal_basis(builtin, 8):
        scale = max(1.0, np.max(np.abs(lv(pts))))
        assert lv.conjugation_residual(pts) / scale < 1e-10


def test_orthonormalize_examples():
    lv = orthonormal_basis(WeightSpec.hermite(), 2)[2]
    r2 = 1 / np.sqrt(2)
    assert lv.polys[0].allclose(CPoly.monomial(2, 0, r2))
    assert lv.polys[1].allclose(CPoly({(1, 1): 1, (0, 0): -1}))
    assert lv.polys[2].allclose(CPoly.monomial(0, 2, r2))
    assert orthonormal_basis(WeightSpec.deltoid("U"), 0)[0].polys[0].allclose(CPoly.constant(1.0))
    assert orthonormal_basis(WeightSpec.disk(0.0), 1)[1].polys[0].allclose(CPoly.monomial(1, 0, np.sqrt(2)))


def test_orthonormalize_gram_identity(builtin):
    for lv in orthonormal_basis(builtin, 6):
        assert np.max(np.abs(lv.gram - np.eye(lv.n + 1))) < 1e-9
        assert lv.normalization == "orthonormal"


def test_inv_sqrt_examples():
    assert np.allclose(hermitian_inv_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(hermitian_inv_sqrt(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]))
    h = np.array([[2, 1j], [-1j, 2]])
    s = hermitian_inv_sqrt(h)
    assert np.max(np.abs(s @ s @ h - np.eye(2))) < 1e-12


def test_inv_sqrt_rejects_indefinite():
    with pytest.raises(BasisError):
        hermitian_inv_sqrt(np.diag([1.0, -1.0]))


@given(st.integers(1, 6), st.integers(0, 2**31))
def test_inv_sqrt_property(size, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    h = a @ a.conj().T + size * np.eye(size)
    s = hermitian_inv_sqrt(h)
    assert np.max(np.abs(s - s.conj().T)) < 1e-12
    assert np.linalg.eigvalsh(s)[0] > 0
    assert np.max(np.abs(s @ s @ h - np.eye(size))) < 1e-10


def test_inv_sqrt_keeps_conjugation_symmetry(builtin):
    # H = J conj(H) J is inherited by H^{-1/2}
    for lv in monic_basis(builtin, 5):
        s = hermitian_inv_sqrt(lv.gram)
        assert np.max(np.abs(s - np.conj(s[::-1, ::-1]))) < 1e-10


def test_cholesky_would_break_symmetry():
    # the reason for H^{-1/2}: a Cholesky factor does not commute with the reversal
    a = 0.5 + 0.3j
    h = np.array([[2, a, 0.1], [np.conj(a), 3, a], [0.1, np.conj(a), 2]])
    assert np.max(np.abs(h - np.conj(h[::-1, ::-1]))) < 1e-15
    c = np.linalg.inv(np.linalg.cholesky(h))
    assert np.max(np.abs(c - np.conj(c[::-1, ::-1]))) > 1e-3
    s = hermitian_inv_sqrt(h)
    assert np.max(np.abs(s - np.conj(s[::-1, ::-1]))) < 1e-12


def test_conjugate_mirror_is_involution(builtin):
    c = monic_basis(builtin, 4)[4].coeffs
    assert np.allclose(conjugate_mirror(conjugate_mirror(c)), c)


def test_inner_product_of_polys():
    w = WeightSpec.hermite()
    q = CPoly({(1, 1): 1, (0, 0): -1})
    assert inner_product(w, q, q) == pytest.approx(1.0)
    assert inner_product(w, q, CPoly.constant(1.0)) == pytest.approx(0.0, abs=1e-14)


def test_basis_level_validates_shape():
    with pytest.raises(ValueError):
        BasisLevel(2, np.zeros((3, 5), complex), np.eye(3, dtype=complex))


def test_basis_level_is_read_only():
    lv = monic_basis(WeightSpec.hermite(), 2)[2]
    with pytest.raises(ValueError):
        lv.coeffs[0, 0] = 3


def test_orthonormalize_rejects_singular_gram():
    lv = BasisLevel(1, np.array([[0, 1, 0], [0, 1, 0]], dtype=complex), np.ones((2, 2), dtype=complex))
    with pytest.raises(BasisError):
        orthonormalize(lv)
