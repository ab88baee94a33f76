"""Closed-form families used as oracles for the moment pipeline.

Complex families are indexed so that level ``n``, position ``k`` leads with
``z^(n-k) zb^k``:  ``hermite_complex(n-k, k)``, ``disk_complex(lam, n-k, k)``
and ``deltoid_level(kind, n)[k]``.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial

import numpy as np
from numpy.polynomial import Polynomial
from scipy import special

from .polycore import CPoly, RPoly

COMPLEX_FAMILIES = ("hermite_complex", "disk_complex", "deltoid_T", "deltoid_U")
REAL_FAMILIES = ("hermite_real_product", "hermite_real_polar", "disk_real_polar")
CLASSICAL_KINDS = ("laguerre", "jacobi", "gegenbauer", "hermite1d")


def _check_classical(kind, params):
    if kind == "laguerre":
        (alpha,) = params
        if not alpha > -1:
            raise ValueError("laguerre needs alpha > -1")
    elif kind == "jacobi":
        a, b = params
        if not (a > -1 and b > -1):
            raise ValueError("jacobi needs alpha, beta > -1")
    elif kind == "gegenbauer":
        (mu,) = params
        if not mu > -0.5 or mu == 0:
            raise ValueError("gegenbauer needs mu > -1/2, mu != 0")
    elif kind == "hermite1d":
        if params:
            raise ValueError("hermite1d takes no parameters")
    else:
        raise ValueError(f"unknown classical family {kind!r}")


def _recurrence(kind, degree, params, t):
    """Forward three-term recurrence; ``t`` may be a float, array, or Polynomial."""
    one = t * 0 + 1
    if degree == 0:
        return one
    if kind == "laguerre":
        (a,) = params
        prev, cur = one, (1 + a) - t
        for k in range(1, degree):
            prev, cur = cur, ((2 * k + 1 + a - t) * cur - (k + a) * prev) / (k + 1)
        return cur
    if kind == "jacobi":
        a, b = params
        prev, cur = one, (a + 1) + (a + b + 2) * (t - 1) / 2
        for n in range(2, degree + 1):
            c = 2 * n + a + b
            lead = 2 * n * (n + a + b) * (c - 2)
            nxt = ((c - 1) * (c * (c - 2) * t + a * a - b * b) * cur - 2 * (n + a - 1) * (n + b - 1) * c * prev) / lead
            prev, cur = cur, nxt
        return cur
    if kind == "gegenbauer":
        (mu,) = params
        prev, cur = one, 2 * mu * t
        for n in range(1, degree):
            prev, cur = cur, (2 * (n + mu) * t * cur - (n + 2 * mu - 1) * prev) / (n + 1)
        return cur
    if kind == "hermite1d":
        prev, cur = one, 2 * t
        for n in range(1, degree):
            prev, cur = cur, 2 * t * cur - 2 * n * prev
        return cur
    raise ValueError(f"unknown classical family {kind!r}")


def classical_eval(kind: str, degree: int, t, *params):
    """Evaluate a classical 1-D polynomial by its three-term recurrence.

    ``kind`` is one of ``laguerre`` (alpha), ``jacobi`` (alpha, beta),
    ``gegenbauer`` (mu) or ``hermite1d`` (physicists' normalization).
    """
    _check_classical(kind, params)
    if degree < 0:
        raise ValueError("degree must be non-negative")
    return _recurrence(kind, degree, params, np.asarray(t, dtype=float) if np.ndim(t) else float(t))


@lru_cache(maxsize=None)
def classical_poly(kind: str, degree: int, *params) -> Polynomial:
    """Coefficients of the same polynomial, by running the recurrence on ``Polynomial``."""
    _check_classical(kind, params)
    return _recurrence(kind, degree, params, Polynomial([0.0, 1.0]))


@lru_cache(maxsize=None)
def hermite_complex(k: int, j: int) -> CPoly:
    """``H_{k,j}`` from ``z H_{k,j} = H_{k+1,j} + j H_{k,j-1}`` with ``H_{0,j} = zb^j``."""
    if k < 0 or j < 0:
        raise ValueError("indices must be non-negative")
    if k == 0:
        return CPoly.monomial(0, j)
    prev = hermite_complex(k - 1, j)
    out = prev.mul_by_monomial(1, 0)
    if j > 0:
        out = out - hermite_complex(k - 1, j - 1).scale(j)
    return out


def hermite_complex_norm(k: int, j: int) -> float:
    return float(factorial(k) * factorial(j))


@lru_cache(maxsize=None)
def disk_complex(lam: float, k: int, j: int) -> CPoly:
    """Disk polynomial ``P^lam_{k,j}``, expanded from its terminating 2F1 sum."""
    if not lam > -1:
        raise ValueError("disk polynomials need lam > -1")
    lead = special.poch(lam + 1, k + j) / (special.poch(lam + 1, k) * special.poch(lam + 1, j))
    terms = {}
    coef = 1.0
    for i in range(min(k, j) + 1):
        if i > 0:
            coef *= (-k + i - 1) * (-j + i - 1) / ((-lam - k - j + i - 1) * i)
        terms[(k - i, j - i)] = lead * coef
    return CPoly(terms)


def disk_complex_norm(lam: float, k: int, j: int) -> float:
    """``h^lam_{k,j}``, the squared norm of ``P^lam_{k,j}``."""
    return float((lam + 1) / (lam + k + j + 1) * factorial(k) * factorial(j) / (special.poch(lam + 1, k) * special.poch(lam + 1, j)))


@lru_cache(maxsize=None)
def deltoid_level(kind: str, n: int) -> tuple[CPoly, ...]:
    """Level ``n`` of the deltoid Chebyshev family ``T`` or ``U``.

    ``P_k^{n+1} = 3z P_k^n - P_{k+1}^n - P_{k-1}^{n-1}`` for ``0 <= k <= n``,
    and the last entry comes from ``P_{n+1}^{n+1} = conj(P_0^{n+1})``.
    Boundary terms: for ``U`` they vanish; for ``T``, ``T_{-1}^{n-1} = T_1^n``
    and ``T_{n+1}^n = T_n^{n+1}``, which makes the ``k = n`` equation
    ``2 T_n^{n+1} = 3z T_n^n - T_{n-1}^{n-1}``.
    """
    kind = kind.upper()
    if kind not in ("T", "U"):
        raise ValueError("kind must be 'T' or 'U'")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return (CPoly.constant(1.0),)
    if n == 1:
        s = 1.0 if kind == "T" else 3.0
        return (CPoly.monomial(1, 0, s), CPoly.monomial(0, 1, s))
    cur = deltoid_level(kind, n - 1)
    prev = deltoid_level(kind, n - 2)
    m = n - 1
    out = []
    for k in range(m + 1):
        val = cur[k].mul_by_monomial(1, 0).scale(3.0)
        if kind == "T" and k == m:
            # T_{m+1}^m is the unknown itself
            val = val - prev[k - 1] if k >= 1 else val
            out.append(val.scale(0.5))
            continue
        if k + 1 <= m:
            val = val - cur[k + 1]
        if k >= 1:
            val = val - prev[k - 1]
        elif kind == "T":
            val = val - cur[1]
        out.append(val)
    out.append(out[0].conj())
    return tuple(out)


def _harmonics(top: int):
    """``Re`` and ``Im`` of ``(x+iy)^k`` for ``k <= top`` as RPoly, by rotation."""
    x = RPoly.monomial(1, 0)
    y = RPoly.monomial(0, 1)
    cos_part = [RPoly.constant(1.0)]
    sin_part = [RPoly()]
    for _ in range(top):
        c, s = cos_part[-1], sin_part[-1]
        cos_part.append(x * c - y * s)
        sin_part.append(x * s + y * c)
    return cos_part, sin_part


def _radial(poly: Polynomial) -> RPoly:
    """``p(x^2 + y^2)`` as an RPoly."""
    r2 = RPoly({(2, 0): 1.0, (0, 2): 1.0})
    out = RPoly()
    for c in poly.coef[::-1]:
        out = out * r2 + c
    return out


def real_family(name: str, n: int, lam: float | None = None) -> list[RPoly]:
    """Level ``n`` of a real basis.

    ``hermite_real_product`` gives ``H_{n-k}(x) H_k(y)``.  The polar bases
    put the cosine-type element with radial index ``j = k`` at position
    ``k <= n/2`` and the sine-type element with ``j = n-k`` at ``k > n/2``.
    """
    if name == "hermite_real_product":
        out = []
        for k in range(n + 1):
            px = classical_poly("hermite1d", n - k)
            py = classical_poly("hermite1d", k)
            out.append(RPoly({(a, b): ca * cb for a, ca in enumerate(px.coef) for b, cb in enumerate(py.coef)}))
        return out
    if name not in ("hermite_real_polar", "disk_real_polar"):
        raise ValueError(f"unknown real family {name!r}")
    if name == "disk_real_polar" and (lam is None or not lam > -1):
        raise ValueError("disk_real_polar needs lam > -1")
    cos_part, sin_part = _harmonics(n)
    out = []
    for k in range(n + 1):
        j = k if 2 * k <= n else n - k
        ang = n - 2 * j
        if name == "hermite_real_polar":
            radial = classical_poly("laguerre", j, float(ang))
        else:
            radial = classical_poly("jacobi", j, float(lam), float(ang))(Polynomial([-1.0, 2.0]))
        harmonic = cos_part[ang] if 2 * k <= n else sin_part[ang]
        out.append(_radial(radial) * harmonic)
    return out


def complex_family(name: str, n: int, lam: float | None = None) -> list[CPoly]:
    """Level ``n`` of a complex closed-form family, in the package ordering."""
    if name == "hermite_complex":
        return [hermite_complex(n - k, k) for k in range(n + 1)]
    if name == "disk_complex":
        if lam is None:
            raise ValueError("disk_complex needs lam")
        return [disk_complex(float(lam), n - k, k) for k in range(n + 1)]
    if name in ("deltoid_T", "deltoid_U"):
        return list(deltoid_level(name[-1], n))
    raise ValueError(f"unknown complex family {name!r}")


def family(name: str, n: int, lam: float | None = None):
    if name in COMPLEX_FAMILIES:
        return complex_family(name, n, lam)
    return real_family(name, n, lam)


def hermite_laguerre_value(k: int, j: int, z):
    """``H_{k,j}`` through its Laguerre form.

    ``H_{k,j} = (-1)^j j! z^(k-j) L_j^(k-j)(|z|^2)`` for ``k >= j``; the case
    ``k < j`` follows by conjugation.
    """
    if k < j:
        return np.conj(hermite_laguerre_value(j, k, z))
    z = np.asarray(z, dtype=complex)
    return (-1) ** j * factorial(j) * z ** (k - j) * classical_eval("laguerre", j, np.abs(z) ** 2, float(k - j))


FAMILY_WEIGHTS = {
    "hermite_complex": "hermite",
    "disk_complex": "disk",
    "deltoid_T": "deltoid_first",
    "deltoid_U": "deltoid_second",
    "hermite_real_product": "hermite",
    "hermite_real_polar": "hermite",
    "disk_real_polar": "disk",
}


def family_weight(name: str, lam: float | None = None):
    """The weight a family is orthogonal for."""
    from .weights import WeightSpec

    kind = FAMILY_WEIGHTS[name]
    return WeightSpec(kind, lam=float(lam)) if kind == "disk" else WeightSpec(kind)


def family_levels(name: str, n: int, lam: float | None = None) -> list:
    """Levels ``0..n`` of a family with Gram matrices from the matching weight.

    Complex families come back as ``BasisLevel``; real families as ``RealLevel``.
    """
    from .basis import BasisLevel, inner_products
    from .bridge import RealLevel

    w = family_weight(name, lam)
    out = []
    for m in range(n + 1):
        polys = family(name, m, lam)
        if name in COMPLEX_FAMILIES:
            rows = np.array([p.to_vector(m) for p in polys], dtype=complex)
        else:
            rows = np.array([p.to_complex().to_vector(m) for p in polys], dtype=complex)
        gram = inner_products(w, rows, rows)
        gram = 0.5 * (gram + gram.conj().T)
        if name in COMPLEX_FAMILIES:
            out.append(BasisLevel(m, rows, gram, "family"))
        else:
            out.append(RealLevel(m, rows, gram.real.copy()))
    return out
