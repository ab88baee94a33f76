"""Unitary change of basis between real bases ``P_n`` and complex bases ``Q_n``.

``Q_n = L_n P_n`` and ``P_n = L_n^* Q_n``.  Row ``k`` of ``L_n`` is

* ``(e_k - i e_{n-k}) / sqrt(2)`` for ``k < n/2``,
* ``e_{n/2}`` for ``k = n/2``,
* ``(e_{n-k} + i e_k) / sqrt(2)`` for ``k > n/2``,

which makes ``L_n`` unitary with ``L_n L_n^t = J_{n+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _accel
from .basis import BasisLevel, inner_products
from .polycore import CPoly, RPoly, graded_size

IDENTITY_TOL = 1e-14


class BridgeError(ValueError):
    pass


def backward_identity(size: int) -> np.ndarray:
    return np.eye(size)[::-1]


@dataclass(frozen=True)
class ConversionMatrix:
    n: int
    entries: np.ndarray = field(repr=False)

    def unitarity_residual(self) -> float:
        return float(np.max(np.abs(self.entries @ self.entries.conj().T - np.eye(self.n + 1))))

    def transpose_residual(self) -> float:
        return float(np.max(np.abs(self.entries @ self.entries.T - backward_identity(self.n + 1))))


@lru_cache(maxsize=None)
def build_L(n: int) -> ConversionMatrix:
    if n < 0:
        raise ValueError("n must be non-negative")
    size = n + 1
    lmat = np.zeros((size, size), dtype=complex)
    r = 1 / np.sqrt(2)
    for k in range(size):
        if 2 * k < n:
            lmat[k, k] = r
            lmat[k, n - k] = -1j * r
        elif 2 * k == n:
            lmat[k, k] = 1.0
        else:
            lmat[k, n - k] = r
            lmat[k, k] = 1j * r
    lmat.setflags(write=False)
    out = ConversionMatrix(n, lmat)
    if out.unitarity_residual() > IDENTITY_TOL or out.transpose_residual() > IDENTITY_TOL:
        raise RuntimeError(f"L_{n} failed its identities")
    return out


@dataclass(frozen=True)
class RealLevel:
    """Real basis ``P_n`` stored through its ``(z, zb)`` coefficient rows."""

    n: int
    coeffs: np.ndarray = field(repr=False)
    gram: np.ndarray = field(repr=False)

    @property
    def polys(self) -> tuple[RPoly, ...]:
        return tuple(CPoly.from_vector(row).to_xy()[0] for row in self.coeffs)

    def __call__(self, x, y) -> np.ndarray:
        z = np.ravel(np.asarray(x, float) + 1j * np.asarray(y, float))
        table = _accel.monomial_table(z, self.n)
        return (self.coeffs @ table.T).real


def _imag_guard(rows: np.ndarray) -> None:
    # a polynomial in z, zb is real-valued iff its coefficient of z^a zb^b is conj of that of z^b zb^a
    swapped = np.empty_like(rows)
    deg = 0
    while graded_size(deg) < rows.shape[1]:
        deg += 1
    start = 0
    for m in range(deg + 1):
        block = slice(start, start + m + 1)
        swapped[:, block] = np.conj(rows[:, block][:, ::-1])
        start += m + 1
    scale = max(1.0, float(np.max(np.abs(rows)))) if rows.size else 1.0
    resid = float(np.max(np.abs(rows - swapped))) if rows.size else 0.0
    if resid > 1e-10 * scale:
        raise BridgeError(f"conjugation symmetry violated (imaginary residue {resid:.2e})")


def real_level(level: BasisLevel) -> RealLevel:
    lmat = build_L(level.n).entries
    rows = lmat.conj().T @ level.coeffs
    _imag_guard(rows)
    gram = lmat.conj().T @ level.gram @ lmat
    return RealLevel(level.n, rows, 0.5 * (gram + gram.conj().T).real)


def real_from_complex(level: BasisLevel) -> list[RPoly]:
    """``P_n = L_n^* Q_n`` written in ``(x, y)``."""
    return list(real_level(level).polys)


def complex_from_real(polys, n: int, w=None) -> BasisLevel:
    """``Q_n = L_n P_n``; the Gram matrix is filled in when a weight is given."""
    polys = list(polys)
    if len(polys) != n + 1:
        raise ValueError(f"expected {n + 1} polynomials, got {len(polys)}")
    rows = np.array([p.to_complex().to_vector(n) for p in polys], dtype=complex)
    lmat = build_L(n).entries
    coeffs = lmat @ rows
    if w is None:
        gram = np.full((n + 1, n + 1), np.nan, dtype=complex)
    else:
        gram = inner_products(w, coeffs, coeffs)
    return BasisLevel(n, coeffs, gram, "custom")
