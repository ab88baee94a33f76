"""Reproducing kernels, Christoffel-Darboux evaluations and the disk Gegenbauer identity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .basis import evaluate_levels
from .bridge import RealLevel, backward_identity
from .families import classical_eval

CONFLUENT_TOL = 1e-12
METHODS = ("direct_sum", "cd_complex", "cd_real_axis1", "cd_real_axis2")


class KernelError(ValueError):
    pass


@dataclass(frozen=True)
class KernelEval:
    n: int
    value: complex
    method: str

    def to_json(self, z=None, zeta=None) -> dict:
        out = {"n": self.n}
        if z is not None:
            out["z"] = [complex(z).real, complex(z).imag]
            out["zeta"] = [complex(zeta).real, complex(zeta).imag]
        v = complex(self.value)
        out["value"] = [v.real, v.imag]
        out["method"] = self.method
        return out


def _check_levels(levels, n):
    if len(levels) <= n:
        raise ValueError(f"need levels through degree {n}, got {len(levels) - 1}")


def kernel_slice(levels, m: int, z, zeta) -> np.ndarray:
    """``sum_k Q_{k,m}(z) conj(Q_{k,m}(zeta))``."""
    qz, qw = evaluate_levels([levels[m]], z)[0], evaluate_levels([levels[m]], zeta)[0]
    return np.sum(qz * np.conj(qw), axis=0)


def kernel_complex(levels, n: int, z, zeta):
    """``K_n(z, zeta) = sum_{m <= n} sum_k Q_{k,m}(z) conj(Q_{k,m}(zeta))`` for orthonormal levels.

    ``z`` and ``zeta`` broadcast together; a scalar pair gives a complex scalar.
    """
    _check_levels(levels, n)
    scalar = np.ndim(z) == 0 and np.ndim(zeta) == 0
    z, zeta = np.broadcast_arrays(np.asarray(z, complex), np.asarray(zeta, complex))
    vz = evaluate_levels(levels[: n + 1], z.ravel())
    vw = evaluate_levels(levels[: n + 1], zeta.ravel())
    out = sum(np.sum(a * np.conj(b), axis=0) for a, b in zip(vz, vw)).reshape(z.shape)
    return complex(out) if scalar else out


def _real_values(levels, x, y):
    z = np.ravel(np.asarray(x, float) + 1j * np.asarray(y, float))
    return [lv(z.real, z.imag) for lv in levels]


def kernel_real(levels, n: int, xy, uv):
    """``K_n((x,y),(u,v)) = sum_{m <= n} P_m(x,y)^t P_m(u,v)`` for orthonormal real levels."""
    _check_levels(levels, n)
    x, y = np.broadcast_arrays(*(np.asarray(c, float) for c in xy))
    u, v = np.broadcast_arrays(*(np.asarray(c, float) for c in uv))
    scalar = x.ndim == 0 and u.ndim == 0
    pa = _real_values(levels[: n + 1], x, y)
    pb = _real_values(levels[: n + 1], u, v)
    out = sum(np.sum(a * b, axis=0) for a, b in zip(pa, pb)).reshape(np.broadcast(x, u).shape)
    return float(out) if scalar else out


def cd_kernel_complex(levels, alpha_n, z, zeta, starred: bool = False):
    """Christoffel-Darboux form of ``K_n`` with ``n = len(alpha_n) - 1``.

    ``[Q_{n+1}(z)^t alpha^t J Q_n(zeta) - Q_{n+1}(zeta)^t alpha^t J Q_n(z)] / (z - zeta)``.
    With ``starred=True`` the plain transposes become conjugate transposes;
    that variant does not reproduce the kernel and is kept for comparison.
    """
    alpha_n = np.asarray(alpha_n)
    n = alpha_n.shape[0] - 1
    _check_levels(levels, n + 1)
    scalar = np.ndim(z) == 0 and np.ndim(zeta) == 0
    z, zeta = (np.ravel(a) for a in np.broadcast_arrays(np.asarray(z, complex), np.asarray(zeta, complex)))
    diff = z - zeta
    if np.any(np.abs(diff) < CONFLUENT_TOL):
        raise KernelError("confluent point; use direct sum")
    qn_z, qn1_z = evaluate_levels([levels[n], levels[n + 1]], z)
    qn_w, qn1_w = evaluate_levels([levels[n], levels[n + 1]], zeta)
    if starred:
        qn1_z, qn1_w = np.conj(qn1_z), np.conj(qn1_w)
    mid = alpha_n.T @ backward_identity(n + 1)
    num = np.einsum("ip,ij,jp->p", qn1_z, mid, qn_w) - np.einsum("ip,ij,jp->p", qn1_w, mid, qn_z)
    out = num / diff
    return complex(out[0]) if scalar else out


def cd_kernel_real(levels, a_n, xy, uv, axis: int):
    """Real Christoffel-Darboux ratio along ``axis`` (1 for ``x``, 2 for ``y``).

    ``([A P_{n+1}(x)]^t P_n(y) - P_n(x)^t [A P_{n+1}(y)]) / (x_i - y_i)``.
    """
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    a_n = np.asarray(a_n, float)
    n = a_n.shape[0] - 1
    _check_levels(levels, n + 1)
    x, y = (np.ravel(c) for c in np.broadcast_arrays(*(np.asarray(c, float) for c in xy)))
    u, v = (np.ravel(c) for c in np.broadcast_arrays(*(np.asarray(c, float) for c in uv)))
    scalar = np.ndim(xy[0]) == 0 and np.ndim(uv[0]) == 0
    diff = x - u if axis == 1 else y - v
    if np.any(np.abs(diff) < CONFLUENT_TOL):
        other = 2 if axis == 1 else 1
        raise KernelError(f"coordinate coincidence on axis {axis}; use axis {other} or the direct sum")
    pn_a, pn1_a = _real_values([levels[n], levels[n + 1]], x, y)
    pn_b, pn1_b = _real_values([levels[n], levels[n + 1]], u, v)
    num = np.sum((a_n @ pn1_a) * pn_b, axis=0) - np.sum(pn_a * (a_n @ pn1_b), axis=0)
    out = num / diff
    return float(out[0]) if scalar else out


def disk_kernel_gegenbauer(lam: float, n: int, z, zeta, nodes: int | None = None):
    """Degree-``n`` reproducing kernel slice of the disk weight via Gegenbauer polynomials.

    Uses ``mu = lam + 1/2`` and the integral of ``C_n^{mu+1/2}`` against
    ``(1-t^2)^(mu-1)`` by Gauss-Jacobi quadrature.  The constant ``c_mu`` is
    calibrated so that the quadrature weights sum to one, which makes the
    ``n = 0`` value exactly 1.
    """
    if not lam > -0.5:
        raise ValueError("Gegenbauer identity needs lam > -1/2")
    mu = lam + 0.5
    scalar = np.ndim(z) == 0 and np.ndim(zeta) == 0
    z, zeta = (np.ravel(a) for a in np.broadcast_arrays(np.asarray(z, complex), np.asarray(zeta, complex)))
    t, wt = special.roots_jacobi(nodes or n // 2 + 2, mu - 1, mu - 1)
    wt = wt / wt.sum()
    base = (z * np.conj(zeta)).real
    spread = np.sqrt(np.maximum(1 - np.abs(z) ** 2, 0.0)) * np.sqrt(np.maximum(1 - np.abs(zeta) ** 2, 0.0))
    args = base[:, None] + spread[:, None] * t[None, :]
    vals = classical_eval("gegenbauer", n, args, mu + 0.5) @ wt
    out = (n + mu + 0.5) / (mu + 0.5) * vals
    return float(out[0]) if scalar else out


def evaluate(method: str, n: int, z: complex, zeta: complex, levels=None, real_levels=None, recurrence=None) -> KernelEval:
    """Dispatch one kernel evaluation by method name.

    ``recurrence`` is the complex data for ``cd_complex`` or the ``(x, y)``
    pair for the real methods.
    """
    if method == "direct_sum":
        value = kernel_complex(levels, n, z, zeta)
    elif method == "cd_complex":
        value = cd_kernel_complex(levels, recurrence.alpha[n], z, zeta)
    elif method in ("cd_real_axis1", "cd_real_axis2"):
        axis = int(method[-1])
        data = recurrence[axis - 1]
        value = cd_kernel_real(real_levels, data.alpha[n], (z.real, z.imag), (zeta.real, zeta.imag), axis)
    else:
        raise ValueError(f"unknown kernel method {method!r}")
    return KernelEval(n, complex(value), method)


__all__ = [
    "KernelError",
    "KernelEval",
    "METHODS",
    "RealLevel",
    "cd_kernel_complex",
    "cd_kernel_real",
    "disk_kernel_gegenbauer",
    "evaluate",
    "kernel_complex",
    "kernel_real",
    "kernel_slice",
]
