"""Pure numpy versions of the evaluation kernels in ``_core.pyx``."""

import numpy as np


def monomial_table(z, degree):
    """Values of every monomial ``z**(m-k) * conj(z)**k`` with ``m <= degree``.

    Columns follow the graded order: degree by degree, and within degree ``m``
    the index ``k`` runs from 0 to ``m``.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    zb = np.conj(z)
    npts = z.shape[0]
    pz = np.ones((degree + 1, npts), dtype=np.complex128)
    pzb = np.ones((degree + 1, npts), dtype=np.complex128)
    for p in range(1, degree + 1):
        pz[p] = pz[p - 1] * z
        pzb[p] = pzb[p - 1] * zb
    out = np.empty((npts, (degree + 1) * (degree + 2) // 2), dtype=np.complex128)
    col = 0
    for m in range(degree + 1):
        for k in range(m + 1):
            out[:, col] = pz[m - k] * pzb[k]
            col += 1
    return out


def eval_terms(a, b, coeff, z):
    """Evaluate ``sum_t coeff[t] * z**a[t] * conj(z)**b[t]`` at every point."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    coeff = np.asarray(coeff, dtype=np.complex128)
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    if a.size == 0:
        return np.zeros(z.shape[0], dtype=np.complex128)
    top = int(max(a.max(), b.max()))
    zb = np.conj(z)
    pz = np.ones((top + 1, z.shape[0]), dtype=np.complex128)
    pzb = np.ones((top + 1, z.shape[0]), dtype=np.complex128)
    for p in range(1, top + 1):
        pz[p] = pz[p - 1] * z
        pzb[p] = pzb[p - 1] * zb
    return np.einsum("t,tp->p", coeff, pz[a] * pzb[b])
