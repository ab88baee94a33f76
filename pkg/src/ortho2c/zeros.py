"""Block Jacobi operators, common zeros of ``Q_n`` and Gaussian cubature."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .basis import orthonormal_basis
from .kernels import kernel_complex
from .polycore import CPoly, graded_exponents, graded_size
from .recurrence import RecurrenceData, extract_complex_three_term, vee
from .weights import WeightSpec, region_integral

SYMMETRY_TOL = 1e-8
ZERO_TOL = 1e-8
DEDUP_TOL = 1e-8
MAX_ZERO_TOL = 1e-10
# defective eigenvalues split by about eps**(1/k); gather them before polishing
CLUSTER_TOL = 1e-3


class ZerosError(RuntimeError):
    pass


class CubatureError(ValueError):
    pass


@dataclass(frozen=True)
class JacobiOperator:
    """Truncated block Jacobi matrix of size ``n(n+1)/2``.

    Block ``(m, m)`` is ``beta_m``, block ``(m, m+1)`` is ``alpha_m`` and
    block ``(m+1, m)`` is ``gamma_m = vee(alpha_m^*)``, for ``m < n``.
    """

    n: int
    matrix: np.ndarray = field(repr=False)

    def block(self, i: int, j: int) -> np.ndarray:
        ri = graded_size(i - 1) if i else 0
        ci = graded_size(j - 1) if j else 0
        return self.matrix[ri : ri + i + 1, ci : ci + j + 1]


def jacobi_operator(data: RecurrenceData, n: int) -> JacobiOperator:
    if data.kind != "complex":
        raise ValueError("Jacobi operator needs complex recurrence data")
    if n < 1:
        raise ValueError("n must be at least 1")
    if len(data.alpha) < n:
        raise ValueError(f"recurrence data stops at degree {len(data.alpha) - 1}; need {n - 1}")
    size = graded_size(n - 1)
    mat = np.zeros((size, size), dtype=complex)
    for m in range(n):
        r = graded_size(m - 1) if m else 0
        mat[r : r + m + 1, r : r + m + 1] = data.beta[m]
        if m + 1 < n:
            c = graded_size(m)
            mat[r : r + m + 1, c : c + m + 2] = data.alpha[m]
            mat[c : c + m + 2, r : r + m + 1] = vee(data.alpha[m].conj().T)
    mat.setflags(write=False)
    return JacobiOperator(n, mat)


def _values_and_grads(coeffs: np.ndarray, z: complex):
    """Values and ``d/dx``, ``d/dy`` of every row at one point."""
    deg = 0
    while graded_size(deg) < coeffs.shape[1]:
        deg += 1
    exps = graded_exponents(deg)
    zb = np.conj(z)
    mono = np.array([z**a * zb**b for a, b in exps])
    dz = np.array([a * z ** (a - 1) * zb**b if a else 0 for a, b in exps])
    dzb = np.array([b * z**a * zb ** (b - 1) if b else 0 for a, b in exps])
    vals = coeffs @ mono
    gz, gzb = coeffs @ dz, coeffs @ dzb
    scale = np.abs(coeffs) @ np.abs(mono)
    return vals, gz + gzb, 1j * (gz - gzb), scale


def _residual(coeffs, z) -> float:
    vals, _, _, scale = _values_and_grads(coeffs, z)
    return float(np.max(np.abs(vals) / np.maximum(scale, 1.0)))


def _polish(coeffs: np.ndarray, z: complex, steps: int = 30) -> complex:
    """Gauss-Newton on the real system ``Re Q_k = Im Q_k = 0`` in ``(x, y)``."""
    best, best_r = z, _residual(coeffs, z)
    for _ in range(steps):
        vals, gx, gy, _ = _values_and_grads(coeffs, best)
        jac = np.column_stack([np.concatenate([gx.real, gx.imag]), np.concatenate([gy.real, gy.imag])])
        rhs = -np.concatenate([vals.real, vals.imag])
        step, *_ = np.linalg.lstsq(jac, rhs, rcond=None)
        cand = best + step[0] + 1j * step[1]
        r = _residual(coeffs, cand)
        if not r < best_r:
            break
        best, best_r = cand, r
    return best


def _clusters(evals: np.ndarray, tol: float):
    order = np.argsort(evals.real)
    groups: list[list[int]] = []
    for i in order:
        for g in groups:
            if abs(evals[i] - np.mean(evals[g])) < tol:
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def _symmetric_segments(vec: np.ndarray, n: int) -> bool:
    if abs(vec[0]) < 1e-14:
        return False
    vec = vec / vec[0]
    for j in range(n):
        seg = vec[graded_size(j - 1) if j else 0 : graded_size(j)]
        if np.max(np.abs(np.conj(seg) - seg[::-1])) > SYMMETRY_TOL * max(1.0, np.max(np.abs(seg))):
            return False
    return True


def jacobi_eigen(op: JacobiOperator):
    try:
        evals, vecs = linalg.eig(op.matrix)
    except (linalg.LinAlgError, ValueError) as exc:
        raise ZerosError(f"eigen-solve failure: {exc}") from None
    if not (np.all(np.isfinite(evals)) and np.all(np.isfinite(vecs))):
        raise ZerosError("eigen-solve failure: non-finite output")
    return evals, vecs


def common_zeros(w: WeightSpec, n: int, data: RecurrenceData | None = None) -> list[complex]:
    """Common zeros of the orthonormal level ``Q_n``.

    Eigenvalues of the truncated Jacobi operator are the candidates.  A
    simple eigenvalue is kept when its eigenvector, scaled so the first entry
    is 1, has every segment ``xi_j`` with ``conj(xi_j) = J xi_j``.  Clustered
    (defective) eigenvalues are replaced by their mean.  Every candidate is
    then refined by Gauss-Newton and kept only if ``max_k |Q_{k,n}|`` is
    below ``ZERO_TOL`` relative to the size of its terms.
    """
    if n < 1:
        return []
    levels = orthonormal_basis(w, n)
    if data is None or len(data.alpha) < n:
        data = extract_complex_three_term(w, levels)
    op = jacobi_operator(data, n)
    evals, vecs = jacobi_eigen(op)
    coeffs = levels[n].coeffs
    found: list[complex] = []
    for group in _clusters(evals, CLUSTER_TOL):
        if len(group) == 1 and not _symmetric_segments(vecs[:, group[0]], n):
            continue
        cand = _polish(coeffs, complex(np.mean(evals[group])))
        if _residual(coeffs, cand) > ZERO_TOL:
            continue
        if all(abs(cand - f) > DEDUP_TOL for f in found):
            found.append(cand)
    return sorted(found, key=lambda c: (round(c.real, 12), c.imag))


def max_zero_condition(alpha_prev: np.ndarray, tol: float = MAX_ZERO_TOL) -> bool:
    """Whether ``alpha alpha^* J`` is symmetric, ``J`` matching the row count."""
    alpha_prev = np.asarray(alpha_prev)
    p = alpha_prev @ alpha_prev.conj().T
    p = p[:, ::-1]
    return bool(np.max(np.abs(p - p.T)) < tol)


@dataclass(frozen=True)
class CubatureRule:
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    exactness_degree: int
    total_mass: float

    def integrate(self, f) -> complex:
        vals = f(self.nodes) if isinstance(f, CPoly) else np.asarray([f(z) for z in self.nodes])
        return complex(np.sum(self.weights * vals))

    def to_json(self) -> dict:
        return {
            "degree": self.exactness_degree,
            "nodes": [[float(z.real), float(z.imag)] for z in self.nodes],
            "weights": [float(x) for x in self.weights],
            "mass": float(self.total_mass),
        }

    @classmethod
    def from_json(cls, record: dict) -> "CubatureRule":
        nodes = np.array([complex(re, im) for re, im in record["nodes"]])
        return cls(nodes, np.array(record["weights"], dtype=float), int(record["degree"]), float(record["mass"]))


def gaussian_cubature(w: WeightSpec, n: int) -> CubatureRule:
    """Degree ``2n-1`` rule on the common zeros of ``Q_n``.

    Weights are ``mass / K_{n-1}(nu, nu)``, the reciprocal Christoffel
    function of the normalized weight scaled by the total mass.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    levels = orthonormal_basis(w, n)
    data = extract_complex_three_term(w, levels)
    if not max_zero_condition(data.alpha[n - 1]):
        raise CubatureError("no Gaussian cubature at this degree")
    nodes = np.array(common_zeros(w, n, data))
    if nodes.size != graded_size(n - 1):
        raise CubatureError("no Gaussian cubature at this degree")
    christoffel = np.real(kernel_complex(levels, n - 1, nodes, nodes))
    weights = w.mass / christoffel
    if not np.all(weights > 0):
        raise CubatureError("no Gaussian cubature at this degree")
    return CubatureRule(nodes, weights, 2 * n - 1, float(w.mass))


def exactness_errors(rule: CubatureRule, w: WeightSpec, degree: int | None = None) -> dict:
    """``|rule(z^a zb^b) - region_integral(z^a zb^b)|`` for ``a + b <= degree``."""
    degree = rule.exactness_degree if degree is None else degree
    out = {}
    for a, b in graded_exponents(degree):
        mono = CPoly.monomial(a, b)
        out[(a, b)] = abs(rule.integrate(mono) - region_integral(w, mono))
    return out
