"""Three-term relations for complex and real bases, and their structural checks.

Complex relation, with ``Q_n`` a column of ``n+1`` polynomials::

    z Q_n = alpha_n Q_{n+1} + beta_n Q_n + gamma_{n-1} Q_{n-1}

``RecurrenceData.gamma[m]`` holds ``gamma_m`` (shape ``(m+2, m+1)``), the
coefficient of ``Q_m`` in ``z Q_{m+1}``.  Real data use the same layout with
``A_{n,i}``, ``B_{n,i}`` and ``C_{n,i}`` for multiplication by ``x`` or ``y``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .basis import BasisLevel, evaluate_levels, inner_products
from .bridge import RealLevel, backward_identity, build_L
from .polycore import graded_exponents, graded_index, graded_size
from .sampling import DEFAULT_SEED, sample_points
from .weights import WeightSpec

RESIDUAL_TOL = 1e-9
RANK_RTOL = 1e-10
N_CHECK_POINTS = 50


class RecurrenceError(ValueError):
    pass


@dataclass(frozen=True)
class RecurrenceData:
    kind: str
    alpha: tuple = field(repr=False)
    beta: tuple = field(repr=False)
    gamma: tuple = field(repr=False)
    residual: float = 0.0

    @property
    def degree(self) -> int:
        """Largest ``n`` with ``alpha_n`` available."""
        return len(self.alpha) - 1

    def to_rows(self):
        """``(n, name, row, col, re, im)`` records for every stored entry."""
        for name, mats in (("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)):
            for n, mat in enumerate(mats):
                for (r, c), v in np.ndenumerate(mat):
                    v = complex(v)
                    yield n, name, r, c, v.real, v.imag

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "name", "row", "col", "re", "im"])
        for rec in self.to_rows():
            writer.writerow([rec[0], rec[1], rec[2], rec[3], repr(rec[4]), repr(rec[5])])
        return buf.getvalue()


def vee(m: np.ndarray) -> np.ndarray:
    """``M^vee = J conj(M) J`` with backward identities of matching sizes."""
    m = np.asarray(m)
    return np.conj(m)[::-1, ::-1]


def _degree_of(width: int) -> int:
    d = 0
    while graded_size(d) < width:
        d += 1
    return d


def multiply_rows(coeffs: np.ndarray, a: int, b: int) -> np.ndarray:
    """Coefficient rows of ``z^a zb^b * p`` for each row ``p``, one degree wider."""
    deg = _degree_of(coeffs.shape[1])
    out = np.zeros((coeffs.shape[0], graded_size(deg + a + b)), dtype=complex)
    for col, (p, q) in enumerate(graded_exponents(deg)):
        out[:, graded_index(p + a, q + b)] = coeffs[:, col]
    return out


def _pad(coeffs: np.ndarray, degree: int) -> np.ndarray:
    out = np.zeros((coeffs.shape[0], graded_size(degree)), dtype=complex)
    out[:, : coeffs.shape[1]] = coeffs
    return out


def _project(w, lhs, targets, grams, degree):
    """Coefficients of ``lhs`` on each target level: ``<lhs, T^t> H^{-1}``."""
    out = []
    for rows, gram in zip(targets, grams):
        g = inner_products(w, lhs, _pad(rows, degree))
        out.append(np.linalg.solve(gram.T, g.T).T)
    return out


def _scaled_residual(lhs_vals, rhs_vals) -> float:
    scale = max(1.0, float(np.max(np.abs(lhs_vals))))
    return float(np.max(np.abs(lhs_vals - rhs_vals))) / scale


def _extract(w, coeff_levels, grams, multiplier, points, evaluator):
    top = len(coeff_levels) - 2
    if top < 0:
        raise ValueError("need at least levels 0 and 1")
    alpha, beta, gamma = [], [], []
    resid = 0.0
    values = evaluator(points)
    mult_vals = multiplier[1](points)
    for n in range(top + 1):
        lhs = multiplier[0](coeff_levels[n])
        deg = n + 1
        ids = [n + 1, n] + ([n - 1] if n >= 1 else [])
        parts = _project(w, lhs, [coeff_levels[i] for i in ids], [grams[i] for i in ids], deg)
        alpha.append(parts[0])
        beta.append(parts[1])
        if n >= 1:
            gamma.append(parts[2])
        rhs = parts[0] @ values[n + 1] + parts[1] @ values[n]
        if n >= 1:
            rhs = rhs + parts[2] @ values[n - 1]
        resid = max(resid, _scaled_residual(mult_vals * values[n], rhs))
    if resid > RESIDUAL_TOL:
        raise RecurrenceError(f"basis not orthogonal to stated tolerance (residual {resid:.2e})")
    return alpha, beta, gamma, resid


def extract_complex_three_term(w: WeightSpec, levels, seed: int = DEFAULT_SEED) -> RecurrenceData:
    """``alpha_n, beta_n`` for ``n <= N-1`` and ``gamma_m`` for ``m <= N-2`` from levels ``0..N``.

    Coefficients come from moment inner products of ``z Q_n`` with the
    neighbouring levels divided by their Gram matrices, so monic levels work
    too.  The relation is then re-checked at seeded points.
    """
    levels = list(levels)
    pts = sample_points(w, N_CHECK_POINTS, seed)
    alpha, beta, gamma, resid = _extract(
        w,
        [lv.coeffs for lv in levels],
        [lv.gram for lv in levels],
        (lambda c: multiply_rows(c, 1, 0), lambda z: z),
        pts,
        lambda z: evaluate_levels(levels, z),
    )
    return RecurrenceData("complex", tuple(alpha), tuple(beta), tuple(gamma), resid)


def extract_real_three_term(w: WeightSpec, levels, seed: int = DEFAULT_SEED) -> tuple[RecurrenceData, RecurrenceData]:
    """``A_{n,i}, B_{n,i}, C_{n,i}`` for ``x`` (axis 1) and ``y`` (axis 2)."""
    levels = list(levels)
    if not all(isinstance(lv, RealLevel) for lv in levels):
        raise TypeError("expected RealLevel inputs")
    pts = sample_points(w, N_CHECK_POINTS, seed)
    complex_levels = [BasisLevel(lv.n, lv.coeffs, lv.gram.astype(complex), "real") for lv in levels]

    def evaluator(z):
        return [v.real for v in evaluate_levels(complex_levels, z)]

    def times_x(c):
        return 0.5 * (multiply_rows(c, 1, 0) + multiply_rows(c, 0, 1))

    def times_y(c):
        return -0.5j * (multiply_rows(c, 1, 0) - multiply_rows(c, 0, 1))

    out = []
    for name, mult, coord in (("real-x", times_x, np.real), ("real-y", times_y, np.imag)):
        alpha, beta, gamma, resid = _extract(
            w,
            [lv.coeffs for lv in levels],
            [lv.gram for lv in levels],
            (mult, coord),
            pts,
            evaluator,
        )
        out.append(RecurrenceData(name, tuple(a.real for a in alpha), tuple(b.real for b in beta), tuple(g.real for g in gamma), resid))
    return out[0], out[1]


def check_gamma_alpha(data: RecurrenceData, grams=None) -> float:
    """Max residual of ``gamma_{n-1} H_{n-1} = J (alpha_{n-1} H_n)^t J``.

    ``grams[n]`` is ``H_n``; omit for orthonormal data, where the relation
    reduces to ``gamma = vee(alpha^*)``.
    """
    if data.kind != "complex":
        raise ValueError("gamma-alpha relation applies to complex data")
    resid = 0.0
    for m, g in enumerate(data.gamma):
        a = data.alpha[m]
        if grams is None:
            h_lo, h_hi = np.eye(m + 1), np.eye(m + 2)
        else:
            h_lo, h_hi = grams[m], grams[m + 1]
        lhs = g @ h_lo
        rhs = backward_identity(m + 2) @ (a @ h_hi).T @ backward_identity(m + 1)
        resid = max(resid, float(np.max(np.abs(lhs - rhs))))
    return resid


def translate_coeffs(a1, b1, a2, b2, l_n, l_next) -> tuple[np.ndarray, np.ndarray]:
    """``alpha = L_n (A_1 + i A_2) L_{n+1}^*`` and ``beta = L_n (B_1 + i B_2) L_n^*``."""
    l_n = getattr(l_n, "entries", l_n)
    l_next = getattr(l_next, "entries", l_next)
    alpha = l_n @ (np.asarray(a1) + 1j * np.asarray(a2)) @ l_next.conj().T
    beta = l_n @ (np.asarray(b1) + 1j * np.asarray(b2)) @ l_n.conj().T
    return alpha, beta


def split_alpha(alpha: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Recover ``A_{n,1}, A_{n,2}`` from ``alpha_n``, inverting :func:`translate_coeffs`."""
    l_n = build_L(n).entries
    l_next = build_L(n + 1).entries
    va = vee(alpha)
    a1 = l_n.conj().T @ ((alpha + va) / 2) @ l_next
    a2 = l_n.conj().T @ ((alpha - va) / 2j) @ l_next
    return a1, a2


def numerical_rank(m: np.ndarray, rtol: float = RANK_RTOL) -> int:
    s = np.linalg.svd(np.asarray(m), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def favard_rank_check(alpha: np.ndarray, rtol: float = RANK_RTOL) -> dict:
    """Ranks of ``alpha + vee(alpha)``, ``alpha - vee(alpha)`` and ``[alpha; vee(alpha)]``.

    Passes when they equal ``n+1``, ``n+1`` and ``n+2``.
    """
    alpha = np.asarray(alpha)
    n = alpha.shape[0] - 1
    va = vee(alpha)
    report = {
        "rank_sum": numerical_rank(alpha + va, rtol),
        "rank_diff": numerical_rank(alpha - va, rtol),
        "rank_stacked": numerical_rank(np.vstack([alpha, va]), rtol),
    }
    report["pass"] = report["rank_sum"] == n + 1 and report["rank_diff"] == n + 1 and report["rank_stacked"] == n + 2
    return report


def commuting_check(data: RecurrenceData) -> tuple[float, float, float]:
    """Residuals of the three commuting conditions over all available degrees.

    1. ``alpha_n vee(alpha_{n+1}) = vee(alpha_n) alpha_{n+1}``
    2. ``alpha_n vee(beta_{n+1}) + beta_n vee(alpha_n) = vee(beta_n) alpha_n + vee(alpha_n) beta_{n+1}``
    3. ``alpha_n alpha_n^* + beta_n beta_n^* + vee(alpha_{n-1}^*) vee(alpha_{n-1})
       = alpha_{n-1}^* alpha_{n-1} + beta_n^* beta_n + vee(alpha_n) vee(alpha_n)^*``

    The third is the diagonal block of ``J J^* = J^* J`` for the
    multiplication-by-``z`` matrix.
    """
    if data.kind != "complex":
        raise ValueError("commuting conditions apply to complex data")
    a, b = data.alpha, data.beta
    r1 = r2 = r3 = 0.0
    for n in range(len(a) - 1):
        r1 = max(r1, float(np.max(np.abs(a[n] @ vee(a[n + 1]) - vee(a[n]) @ a[n + 1]))))
        lhs = a[n] @ vee(b[n + 1]) + b[n] @ vee(a[n])
        rhs = vee(b[n]) @ a[n] + vee(a[n]) @ b[n + 1]
        r2 = max(r2, float(np.max(np.abs(lhs - rhs))))
    for n in range(len(a)):
        lhs = a[n] @ a[n].conj().T + b[n] @ b[n].conj().T
        rhs = b[n].conj().T @ b[n] + vee(a[n]) @ vee(a[n]).conj().T
        if n >= 1:
            lhs = lhs + vee(a[n - 1].conj().T) @ vee(a[n - 1])
            rhs = rhs + a[n - 1].conj().T @ a[n - 1]
        r3 = max(r3, float(np.max(np.abs(lhs - rhs))))
    return r1, r2, r3


def beta_residual(data: RecurrenceData) -> float:
    return max((float(np.max(np.abs(b))) for b in data.beta), default=0.0)
