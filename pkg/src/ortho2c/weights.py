"""Weight functions, their moments, and moment matrices.

Every built-in weight is used in normalized form: moments are those of
``w / mass`` so that ``m_{0,0} = 1``.  :func:`region_integral` integrates
against the raw weight and is the independent quadrature oracle.

Built-ins
---------
hermite
    ``exp(-|z|^2) / pi`` on the plane (mass 1).
disk
    ``(lam+1)/pi * (1-|z|^2)^lam`` on the unit disk (mass 1).
deltoid_first, deltoid_second
    ``F(x, y)^alpha`` with ``alpha = -1/2`` and ``+1/2`` on the region
    bounded by the deltoid ``F = 0``, where
    ``F = -3(x^2+y^2+1)^2 + 8(x^3 - 3xy^2) + 4``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special

from . import _accel
from .polycore import CPoly, graded_exponents, graded_size

KINDS = ("hermite", "disk", "deltoid_first", "deltoid_second", "custom")

# |d(x,y)/d(t1,t2)| = TORUS_JACOBIAN * sqrt(F) for z = (e^{it1} + e^{it2} + e^{-i(t1+t2)}) / 3
TORUS_JACOBIAN = math.sqrt(3.0) / 6.0
WEYL_ORDER = 6

PD_RTOL = 1e-12


class MomentError(ValueError):
    """Raised when moments are missing or a moment matrix is unusable."""

    def __init__(self, message, smallest_eigenvalue=None):
        super().__init__(message)
        self.smallest_eigenvalue = smallest_eigenvalue


class QuadratureError(RuntimeError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class WeightSpec:
    kind: str
    lam: float | None = None
    table: tuple = field(default=(), repr=False, compare=True)
    max_degree: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "disk":
            if self.lam is None or not self.lam > -1:
                raise ValueError("disk weight requires lam > -1")
        if self.kind == "custom":
            entries = {(k, j): v for k, j, v in self.table}
            for (k, j), v in entries.items():
                if (j, k) in entries and abs(entries[(j, k)] - np.conj(v)) > 1e-12 * max(1.0, abs(v)):
                    raise ValueError(f"custom moments violate m[k,j] = conj(m[j,k]) at {(k, j)}")
            if (0, 0) not in entries:
                raise ValueError("custom moment table needs m[0,0]")

    @classmethod
    def hermite(cls):
        return cls("hermite")

    @classmethod
    def disk(cls, lam: float):
        return cls("disk", lam=float(lam))

    @classmethod
    def deltoid(cls, family: str):
        """``family`` is ``"T"`` (alpha = -1/2) or ``"U"`` (alpha = +1/2)."""
        return cls({"T": "deltoid_first", "U": "deltoid_second"}[family.upper()])

    @classmethod
    def custom(cls, moments: dict, max_degree: int):
        table = tuple(sorted((int(k), int(j), complex(v)) for (k, j), v in moments.items()))
        return cls("custom", table=table, max_degree=int(max_degree))

    @property
    def alpha(self) -> float | None:
        return {"deltoid_first": -0.5, "deltoid_second": 0.5}.get(self.kind)

    @property
    def is_deltoid(self) -> bool:
        return self.kind.startswith("deltoid")

    @property
    def centrally_symmetric(self) -> bool:
        return self.kind in ("hermite", "disk")

    @property
    def mass(self) -> float:
        """Total mass of the raw weight."""
        if self.kind in ("hermite", "disk"):
            return 1.0
        if self.kind == "custom":
            return float(self._entries()[(0, 0)].real)
        return deltoid_mass(self.alpha)

    @property
    def label(self) -> str:
        if self.kind == "disk":
            return f"disk(lam={self.lam:g})"
        return {"deltoid_first": "deltoid-t", "deltoid_second": "deltoid-u"}.get(self.kind, self.kind)

    def _entries(self) -> dict:
        return {(k, j): v for k, j, v in self.table}

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.lam is not None:
            out["lam"] = self.lam
        if self.kind == "custom":
            out["max_degree"] = self.max_degree
            out["moments"] = [[k, j, v.real, v.imag] for k, j, v in self.table]
        return out

    @classmethod
    def from_json(cls, record: dict) -> "WeightSpec":
        kind = record["kind"]
        if kind == "custom":
            return load_custom_table(record)
        return cls(kind, lam=record.get("lam"))

    def weight_values(self, x, y):
        """Raw weight at real points, zero outside the support."""
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        r2 = x * x + y * y
        if self.kind == "hermite":
            return np.exp(-r2) / np.pi
        if self.kind == "disk":
            inside = r2 < 1
            return np.where(inside, (self.lam + 1) / np.pi * np.abs(1 - r2) ** self.lam, 0.0)
        if self.is_deltoid:
            f = deltoid_polynomial(x, y)
            inside = f > 0
            return np.where(inside, np.abs(f) ** self.alpha, 0.0)
        raise ValueError("custom weights have no pointwise values")


def load_custom_table(record: dict) -> WeightSpec:
    """Custom weight from ``{"max_degree": N, "moments": [[k, j, re, im], ...]}``.

    Only entries with ``k >= j`` are required; the rest follow by conjugation.
    """
    if isinstance(record, str):
        record = json.loads(record)
    moments = {}
    for k, j, re, im in record["moments"]:
        moments[(int(k), int(j))] = complex(re, im)
    return WeightSpec.custom(moments, record["max_degree"])


def deltoid_polynomial(x, y):
    r2 = x * x + y * y
    return -3.0 * (r2 + 1.0) ** 2 + 8.0 * (x**3 - 3.0 * x * y * y) + 4.0


def deltoid_mass(alpha: float) -> float:
    # torus integrals of F^(alpha+1/2): 4 pi^2 for alpha=-1/2, 6 * 4 pi^2 / 27 for +1/2
    c = TORUS_JACOBIAN / WEYL_ORDER
    if alpha == -0.5:
        return c * 4 * math.pi**2
    if alpha == 0.5:
        return c * 8 * math.pi**2 / 9
    raise ValueError("deltoid weights support alpha = +-1/2 only")


def _torus_grid(npts: int, alpha: float):
    t = 2 * np.pi * np.arange(npts) / npts
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    u1 = np.exp(1j * t1.ravel())
    u2 = np.exp(1j * t2.ravel())
    z = (u1 + u2 + 1 / (u1 * u2)) / 3
    if alpha == 0.5:
        wt = np.maximum(deltoid_polynomial(z.real, z.imag), 0.0)
    else:
        wt = np.ones(z.shape)
    wt = wt * (TORUS_JACOBIAN / WEYL_ORDER) * (2 * np.pi / npts) ** 2
    return z, wt


def torus_integral(alpha: float, f: CPoly) -> complex:
    """Integral of ``f * F^alpha`` over the deltoid via the torus pushforward.

    The pulled-back integrand is a trigonometric polynomial, so an
    equispaced grid that avoids aliasing integrates it exactly.
    """
    z, wt = _torus_grid(2 * f.degree + 16, alpha)
    return complex(np.sum(wt * f(z)))


@lru_cache(maxsize=16)
def _deltoid_moment_table(alpha: float, max_total: int) -> np.ndarray:
    z, wt = _torus_grid(2 * max_total + 16, alpha)
    powers = np.ones((max_total + 1, z.size), dtype=complex)
    for p in range(1, max_total + 1):
        powers[p] = powers[p - 1] * z
    m = (powers * wt) @ np.conj(powers).T
    m = 0.5 * (m + m.conj().T)
    m /= m[0, 0].real
    m.setflags(write=False)
    return m


def moment(w: WeightSpec, k: int, j: int) -> complex:
    """Normalized moment ``int z^k conj(z)^j w / mass``."""
    if k < 0 or j < 0:
        raise ValueError("moment indices must be non-negative")
    if w.kind == "hermite":
        return complex(math.factorial(k)) if k == j else 0j
    if w.kind == "disk":
        return complex(math.factorial(k) / special.poch(w.lam + 2, k)) if k == j else 0j
    if w.kind == "custom":
        entries = w._entries()
        m00 = entries[(0, 0)]
        if (k, j) in entries:
            return entries[(k, j)] / m00
        if (j, k) in entries:
            return np.conj(entries[(j, k)]) / m00
        raise MomentError(f"moment unavailable: ({k}, {j})")
    table = _deltoid_moment_table(w.alpha, _table_size(max(k, j)))
    return complex(table[k, j])


def _table_size(top: int) -> int:
    # round up so successive requests share one cached table
    return max(16, 8 * ((top + 7) // 8))


def moment_array(w: WeightSpec, max_total: int) -> np.ndarray:
    """Square array ``m[k, j]`` for ``0 <= k, j <= max_total``."""
    if w.is_deltoid:
        return np.array(_deltoid_moment_table(w.alpha, _table_size(max_total))[: max_total + 1, : max_total + 1])
    size = max_total + 1
    out = np.zeros((size, size), dtype=complex)
    if w.kind == "custom":
        for k in range(size):
            for j in range(size - k):
                out[k, j] = moment(w, k, j)
        return out
    for k in range(size):
        out[k, k] = moment(w, k, k)
    return out


@dataclass(frozen=True)
class MomentMatrix:
    n: int
    matrix: np.ndarray = field(repr=False)

    def block(self, k: int, j: int) -> np.ndarray:
        """Block ``m_{k},{j}`` of size ``(k+1) x (j+1)``."""
        rk = graded_size(k - 1) if k else 0
        rj = graded_size(j - 1) if j else 0
        return self.matrix[rk : rk + k + 1, rj : rj + j + 1]

    def symmetry_residual(self) -> float:
        """Max deviation from ``M = D conj(M) D`` with ``D = diag(J_1, ..., J_{n+1})``."""
        perm = block_reversal(self.n)
        return float(np.max(np.abs(self.matrix - np.conj(self.matrix)[np.ix_(perm, perm)])))

    def hermitian_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


def block_reversal(n: int) -> np.ndarray:
    """Index permutation realizing ``diag(J_1, ..., J_{n+1})``."""
    idx = []
    for m in range(n + 1):
        start = graded_size(m - 1) if m else 0
        idx.extend(range(start + m, start - 1, -1))
    return np.array(idx, dtype=int)


def gram_from_moments(mom: np.ndarray, degree: int) -> np.ndarray:
    """Inner products of all graded monomials up to ``degree``.

    Entry ``(p, q)`` is ``<z^a zb^b, z^c zb^e> = m[a+e, b+c]``.
    """
    ex = np.array(graded_exponents(degree))
    a, b = ex[:, 0], ex[:, 1]
    return mom[a[:, None] + b[None, :], b[:, None] + a[None, :]]


def moment_matrix(w: WeightSpec, n: int, check: bool = True) -> MomentMatrix:
    """Moment matrix ``M_n`` built from :func:`moment`.

    Raises :class:`MomentError` when the matrix is not numerically positive
    definite (smallest eigenvalue below ``1e-12`` times the largest).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if w.kind == "custom" and w.max_degree is not None and 2 * n > w.max_degree:
        raise MomentError(f"moment unavailable: degree {2 * n} exceeds table max_degree {w.max_degree}")
    mom = moment_array(w, 2 * n)
    mm = MomentMatrix(n, gram_from_moments(mom, n))
    if check:
        evals = np.linalg.eigvalsh(mm.matrix)
        if not evals[0] > PD_RTOL * evals[-1]:
            raise MomentError(
                f"moment matrix of degree {n} is not positive definite (smallest eigenvalue {evals[0]:.3e})",
                smallest_eigenvalue=float(evals[0]),
            )
        if mm.hermitian_residual() > 1e-12 * max(1.0, float(evals[-1])):
            raise MomentError(f"moment matrix of degree {n} is not Hermitian")
    return mm


# ---------------------------------------------------------------------------
# reference quadrature


def region_integral(w: WeightSpec, f: CPoly, normalized: bool = False, tol: float | None = None) -> complex:
    """Integral of ``f`` against the raw weight by direct quadrature.

    Hermite and disk use polar product Gauss rules (exact for polynomials).
    The deltoid uses an adaptive tensor rule in boundary-parameter/radial
    coordinates, graded toward the cusps; it is independent of the torus
    parametrization used for moments.
    """
    if w.kind == "hermite":
        value = _polar_gauss(f, "hermite", None)
    elif w.kind == "disk":
        value = _polar_gauss(f, "disk", w.lam)
    elif w.is_deltoid:
        value = _deltoid_region(f, w.alpha, tol if tol is not None else 1e-7)
    else:
        raise ValueError("region_integral needs a built-in weight")
    return value / w.mass if normalized else value


def _polar_gauss(f: CPoly, kind: str, lam):
    deg = f.degree
    ntheta = deg + 2
    nrad = deg // 2 + 2
    theta = 2 * np.pi * np.arange(ntheta) / ntheta
    if kind == "hermite":
        t, wt = special.roots_laguerre(nrad)
    else:
        s, ws = special.roots_jacobi(nrad, lam, 0.0)
        t = (s + 1) / 2
        wt = ws * 2.0 ** (-lam - 1) * (lam + 1)
    z = (np.sqrt(t)[:, None] * np.exp(1j * theta)[None, :]).ravel()
    vals = f(z).reshape(nrad, ntheta)
    return complex(np.sum(wt[:, None] * vals) / ntheta)


def deltoid_boundary(phi):
    return (2 * np.exp(1j * phi) + np.exp(-2j * phi)) / 3


@lru_cache(maxsize=8)
def _deltoid_rule(alpha: float, q: int, levels: int):
    """Nodes and weights for ``int g F^alpha dxdy`` over the deltoid."""
    xg, wg = np.polynomial.legendre.leggauss(q)
    xg = (xg + 1) / 2
    wg = wg / 2
    ratio = 0.2
    # geometric panels on (0, 1], refined toward 0
    edges = [ratio**lvl for lvl in range(levels + 1)] + [0.0]
    u_nodes, u_wts = [], []
    for hi, lo in zip(edges[:-1], edges[1:]):
        u_nodes.append(lo + (hi - lo) * xg)
        u_wts.append((hi - lo) * wg)
    u = np.concatenate(u_nodes)
    wu = np.concatenate(u_wts)
    third = np.pi / 3
    phis, wphis = [], []
    for c in range(3):
        cusp = 2 * np.pi * c / 3
        phis += [cusp + third * u, cusp + 2 * third - third * u]
        wphis += [third * wu, third * wu]
    phi = np.concatenate(phis)
    wphi = np.concatenate(wphis)

    b = deltoid_boundary(phi)
    db = 2j * (np.exp(1j * phi) - np.exp(-2j * phi)) / 3
    big_r = np.abs(b)
    dtheta = np.imag(db / b)
    direction = b / big_r
    cos3 = np.real(direction**3)

    s = u
    ws = wu
    r = big_r[:, None] * (1 - s[None, :] ** 2)
    # F along the ray is p(r) = -3r^4 + 8cos3 r^3 - 6r^2 + 1 = (R - r) * g(r)
    h3 = -3.0
    h2 = 8 * cos3 - 3.0 * big_r
    h1 = -6.0 + big_r * h2
    h0 = big_r * h1
    g = -(((h3 * r + h2[:, None]) * r + h1[:, None]) * r + h0[:, None])
    g = np.maximum(g, 0.0)
    gap = big_r[:, None] * s[None, :] ** 2
    # F^alpha * r dr with dr = 2 R s ds
    with np.errstate(divide="ignore", invalid="ignore"):
        fa = np.sqrt(gap * g) if alpha == 0.5 else 1.0 / np.sqrt(gap * g)
        weights = (wphi * dtheta)[:, None] * ws[None, :] * fa * r * 2 * big_r[:, None] * s[None, :]
    nodes = r * direction[:, None]
    keep = np.isfinite(weights) & (weights != 0)
    return nodes[keep], weights[keep]


def _deltoid_region(f: CPoly, alpha: float, tol: float, budget: int = 4):
    q = max(12, f.degree + 6)
    levels = 8
    prev = None
    for _ in range(budget):
        nodes, wts = _deltoid_rule(alpha, q, levels)
        table = _accel.monomial_table(nodes, f.degree)
        vec = f.to_vector(f.degree)
        value = complex(wts @ (table @ vec))
        if prev is not None:
            est = abs(value - prev)
            if est <= tol * max(1.0, abs(value)):
                return value
        prev = value
        q += 8
        levels += 3
    raise QuadratureError(
        f"deltoid quadrature did not reach {tol:g} (estimate {est:.2e})", estimate=est
    )
