"""Monic and orthonormal complex orthogonal bases built from moments."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import linalg

from . import _accel
from .polycore import CPoly, graded_exponents, graded_index, graded_size
from .weights import WeightSpec, gram_from_moments, moment_array, moment_matrix

PD_RTOL = 1e-12
DETERMINANT_MAX_DEGREE = 6


class BasisError(ValueError):
    pass


@dataclass(frozen=True)
class BasisLevel:
    """The column ``Q_n`` of degree-``n`` basis polynomials and its Gram matrix."""

    n: int
    coeffs: np.ndarray = field(repr=False)
    gram: np.ndarray = field(repr=False)
    normalization: str = "monic"

    def __post_init__(self):
        if self.coeffs.shape != (self.n + 1, graded_size(self.n)):
            raise ValueError(f"coefficient block has shape {self.coeffs.shape}, expected {(self.n + 1, graded_size(self.n))}")
        self.coeffs.setflags(write=False)
        self.gram.setflags(write=False)

    @property
    def polys(self) -> tuple[CPoly, ...]:
        return tuple(CPoly.from_vector(row) for row in self.coeffs)

    def __call__(self, z) -> np.ndarray:
        """Values of all ``n+1`` polynomials, shape ``(n+1, npts)``."""
        table = _accel.monomial_table(np.ravel(z), self.n)
        return self.coeffs @ table.T

    def padded(self, degree: int) -> np.ndarray:
        out = np.zeros((self.n + 1, graded_size(degree)), dtype=complex)
        out[:, : self.coeffs.shape[1]] = self.coeffs
        return out

    def conjugation_residual(self, z) -> float:
        """Max of ``|Q_k(z) - conj(Q_{n-k}(z))|`` over the points."""
        vals = self(z)
        return float(np.max(np.abs(vals - np.conj(vals[::-1]))))

    @classmethod
    def from_polys(cls, polys, gram=None, normalization="custom") -> "BasisLevel":
        polys = list(polys)
        n = len(polys) - 1
        coeffs = np.array([p.to_vector(n) for p in polys], dtype=complex)
        if gram is None:
            gram = np.full((n + 1, n + 1), np.nan, dtype=complex)
        return cls(n, coeffs, np.asarray(gram, dtype=complex), normalization)


def conjugate_mirror(coeffs: np.ndarray) -> np.ndarray:
    """Rows of ``conj(Q_{n-k})`` for a level given by rows ``Q_k``."""
    out = np.empty_like(coeffs)
    start = 0
    m = 0
    while start < coeffs.shape[1]:
        block = slice(start, start + m + 1)
        out[:, block] = np.conj(coeffs[::-1, block][:, ::-1])
        start += m + 1
        m += 1
    return out


def evaluate_levels(levels, z) -> list[np.ndarray]:
    """Evaluate a run of levels with one shared monomial table."""
    top = max(lv.n for lv in levels)
    table = _accel.monomial_table(np.ravel(z), top)
    return [lv.coeffs @ table[:, : lv.coeffs.shape[1]].T for lv in levels]


def inner_products(w: WeightSpec, rows_a: np.ndarray, rows_b: np.ndarray) -> np.ndarray:
    """Matrix of ``<f_i, g_j>`` for graded coefficient rows of equal width."""
    ncol = rows_a.shape[1]
    degree = 0
    while graded_size(degree) < ncol:
        degree += 1
    mom = moment_array(w, 2 * degree)
    gram = gram_from_moments(mom, degree)
    return rows_a @ gram @ rows_b.conj().T


def inner_product(w: WeightSpec, f: CPoly, g: CPoly) -> complex:
    degree = max(f.degree, g.degree)
    return complex(inner_products(w, f.to_vector(degree)[None, :], g.to_vector(degree)[None, :])[0, 0])


@lru_cache(maxsize=64)
def monic_basis(w: WeightSpec, n: int) -> tuple[BasisLevel, ...]:
    """Monic orthogonal levels ``0..n``.

    ``Q_{k,m}`` is ``z^(m-k) zb^k`` minus its projection onto lower-degree
    monomials, found by a Cholesky solve with the moment matrix.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    mm = moment_matrix(w, n).matrix
    try:
        chol = linalg.cholesky(mm, lower=True)
    except linalg.LinAlgError as exc:
        raise BasisError(f"linear solve failure at degree {n}: {exc}") from None
    levels = [BasisLevel(0, np.ones((1, 1), dtype=complex), mm[:1, :1].copy(), "monic")]
    for m in range(1, n + 1):
        lo = graded_size(m - 1)
        hi = graded_size(m)
        factor = chol[:lo, :lo]
        rhs = mm[:lo, lo:hi]
        try:
            sol = linalg.cho_solve((factor, True), rhs)
        except (linalg.LinAlgError, ValueError) as exc:
            raise BasisError(f"linear solve failure at degree {m}: {exc}") from None
        if not np.all(np.isfinite(sol)):
            raise BasisError(f"linear solve failure at degree {m}: non-finite correction")
        coeffs = np.zeros((m + 1, hi), dtype=complex)
        coeffs[:, :lo] = -np.conj(sol).T
        coeffs[np.arange(m + 1), lo + np.arange(m + 1)] = 1.0
        # Q_{n-k} = conj(Q_k) holds exactly; average away the rounding asymmetry
        coeffs = 0.5 * (coeffs + conjugate_mirror(coeffs))
        gram = coeffs @ mm[:hi, :hi] @ coeffs.conj().T
        gram = 0.5 * (gram + gram.conj().T)
        gram = 0.5 * (gram + np.conj(gram[::-1, ::-1]))
        levels.append(BasisLevel(m, coeffs, gram, "monic"))
    return tuple(levels)


def hermitian_inv_sqrt(h: np.ndarray) -> np.ndarray:
    """``H^{-1/2} = S diag(lambda^{-1/2}) S^*`` for Hermitian positive definite ``H``."""
    h = np.asarray(h, dtype=complex)
    h = 0.5 * (h + h.conj().T)
    evals, vecs = np.linalg.eigh(h)
    if not evals[0] > PD_RTOL * max(evals[-1], 0.0):
        raise BasisError(f"matrix is not positive definite (smallest eigenvalue {evals[0]:.3e})")
    out = (vecs * evals**-0.5) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)


def orthonormalize(level: BasisLevel) -> BasisLevel:
    """Symmetric orthonormalization ``Q' = H^{-1/2} Q``.

    Unlike a Cholesky factor, ``H^{-1/2}`` keeps ``Q'_k = conj(Q'_{n-k})``.
    """
    s = hermitian_inv_sqrt(level.gram)
    coeffs = s @ level.coeffs
    coeffs = 0.5 * (coeffs + conjugate_mirror(coeffs))
    gram = s @ level.gram @ s.conj().T
    return BasisLevel(level.n, coeffs, 0.5 * (gram + gram.conj().T), "orthonormal")


@lru_cache(maxsize=64)
def orthonormal_basis(w: WeightSpec, n: int) -> tuple[BasisLevel, ...]:
    return tuple(orthonormalize(lv) for lv in monic_basis(w, n))


def determinant_oracle(w: WeightSpec, k: int, n: int) -> CPoly:
    """Monic ``Q_{k,n}`` as a ratio of determinants of a bordered moment matrix.

    The last row of the bordered matrix holds the conjugated monomials
    ``(1, zvec^*, ..., (zvec^{n-1})^*)`` followed by ``z^(n-k) zb^k``; it is
    expanded by cofactors.  Only meant as a cross-check for small ``n``.
    """
    if n > DETERMINANT_MAX_DEGREE:
        raise ValueError(f"determinant oracle is limited to n <= {DETERMINANT_MAX_DEGREE}")
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if n == 0:
        return CPoly.constant(1.0)
    mom = moment_array(w, 2 * n)
    lower = gram_from_moments(mom, n - 1)
    size = lower.shape[0]
    a, b = n - k, k
    # column entries int zvec^p z^(n-k) zb^k w
    column = np.array([mom[s + a, t + b] for s, t in graded_exponents(n - 1)])
    bordered = np.zeros((size + 1, size + 1), dtype=complex)
    bordered[:size, :size] = lower
    bordered[:size, size] = column
    last_row = [CPoly.monomial(t, s) for s, t in graded_exponents(n - 1)] + [CPoly.monomial(a, b)]
    top = bordered[:size, :]
    acc = CPoly()
    for c, entry in enumerate(last_row):
        minor = np.delete(top, c, axis=1)
        sign = (-1) ** (size + c)
        acc = acc + entry.scale(sign * _det(minor))
    return acc.scale(1.0 / _det(lower))


def _det(a: np.ndarray) -> complex:
    return complex(np.linalg.det(a)) if a.size else 1.0


def leading_normalized(polys, n: int):
    """Scale each ``P_k`` so its ``z^(n-k) zb^k`` coefficient is 1."""
    out = []
    for k, p in enumerate(polys):
        lead = p.coeff(n - k, k)
        if lead == 0:
            raise BasisError(f"polynomial {k} has no z^{n - k} zb^{k} term")
        out.append(p.scale(1.0 / lead))
    return out


__all__ = [
    "BasisError",
    "BasisLevel",
    "conjugate_mirror",
    "determinant_oracle",
    "evaluate_levels",
    "graded_index",
    "hermitian_inv_sqrt",
    "inner_product",
    "inner_products",
    "monic_basis",
    "orthonormal_basis",
    "orthonormalize",
]
