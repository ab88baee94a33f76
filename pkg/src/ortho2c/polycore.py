"""Sparse polynomials in (z, conj z) and in (x, y).

Monomials of total degree ``m`` are ordered ``z**m, z**(m-1)*zb, ..., zb**m``;
the graded index of ``z**a * zb**b`` is ``(a+b)(a+b+1)/2 + b``.  The same
ordering, with ``x`` in place of ``z`` and ``y`` in place of ``zb``, is used
for real polynomials.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from . import _accel

CLEAN_RTOL = 1e-14


def graded_size(degree: int) -> int:
    """Number of monomials of total degree at most ``degree``."""
    return (degree + 1) * (degree + 2) // 2


def graded_index(a: int, b: int) -> int:
    m = a + b
    return m * (m + 1) // 2 + b


@lru_cache(maxsize=None)
def graded_exponents(degree: int) -> tuple[tuple[int, int], ...]:
    return tuple((m - k, k) for m in range(degree + 1) for k in range(m + 1))


def _clean(terms: Mapping, dtype) -> dict:
    if not terms:
        return {}
    big = max(abs(c) for c in terms.values())
    if big == 0:
        return {}
    cut = CLEAN_RTOL * big
    return {k: dtype(c) for k, c in terms.items() if abs(c) >= cut and c != 0}


class _Poly:
    _dtype: type = complex
    kind = ""

    __slots__ = ("_terms", "degree")

    def __init__(self, terms: Mapping[tuple[int, int], complex] | None = None):
        cleaned = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent in {(a, b)}")
            cleaned[(int(a), int(b))] = cleaned.get((int(a), int(b)), 0) + c
        cleaned = _clean(cleaned, self._dtype)
        object.__setattr__(self, "_terms", MappingProxyType(cleaned))
        object.__setattr__(self, "degree", max((a + b for a, b in cleaned), default=0))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def terms(self) -> Mapping[tuple[int, int], complex]:
        return self._terms

    @classmethod
    def constant(cls, c=1.0):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c=1.0):
        return cls({(a, b): c})

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, a: int, b: int):
        return self._terms.get((a, b), self._dtype(0))

    def _new(self, terms):
        return type(self)(terms)

    def _check_kind(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def __add__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            other = self.constant(other)
        self._check_kind(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        return self._new({k: s * c for k, c in self._terms.items()})

    def mul_by_monomial(self, a: int, b: int):
        return self._new({(p + a, q + b): c for (p, q), c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, _Poly):
            self._check_kind(other)
            out: dict = {}
            for (p, q), c in self._terms.items():
                for (r, s), d in other._terms.items():
                    key = (p + r, q + s)
                    out[key] = out.get(key, 0) + c * d
            return self._new(out)
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self._terms.items())))

    def allclose(self, other, atol=1e-12, rtol=0.0) -> bool:
        self._check_kind(other)
        keys = set(self._terms) | set(other._terms)
        scale = max([abs(c) for c in self._terms.values()] + [abs(c) for c in other._terms.values()] + [0.0])
        return all(abs(self.coeff(*k) - other.coeff(*k)) <= atol + rtol * scale for k in keys)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][1]))

    def to_vector(self, degree: int | None = None) -> np.ndarray:
        """Dense coefficient vector in graded order up to ``degree``."""
        degree = self.degree if degree is None else degree
        if self.degree > degree and not self.is_zero():
            raise ValueError(f"polynomial of degree {self.degree} does not fit in degree {degree}")
        v = np.zeros(graded_size(degree), dtype=self._dtype)
        for (a, b), c in self._terms.items():
            v[graded_index(a, b)] = c
        return v

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec)
        n = vec.shape[0]
        degree = 0
        while graded_size(degree) < n:
            degree += 1
        if graded_size(degree) != n:
            raise ValueError(f"length {n} is not a graded size")
        return cls({e: c for e, c in zip(graded_exponents(degree), vec.tolist()) if c != 0})

    def to_json(self) -> dict:
        rows = []
        for (a, b), c in self.sorted_terms():
            c = complex(c)
            rows.append([a, b, c.real, c.imag])
        return {"kind": self.kind, "degree": self.degree, "terms": rows}

    def __repr__(self):
        if self.is_zero():
            return f"{type(self).__name__}(0)"
        return f"{type(self).__name__}({self.pretty()})"


class CPoly(_Poly):
    """Polynomial in ``z`` and ``zb = conj(z)`` with complex coefficients."""

    _dtype = complex
    kind = "cpoly"
    __slots__ = ()

    def __call__(self, z):
        """Evaluate at a scalar or array of complex points."""
        scalar = np.ndim(z) == 0
        zz = np.asarray(z, dtype=np.complex128)
        if self.is_zero():
            out = np.zeros(zz.shape, dtype=np.complex128)
        else:
            keys = list(self._terms)
            a = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
            b = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
            c = np.fromiter(self._terms.values(), dtype=np.complex128, count=len(keys))
            out = _accel.eval_terms(a, b, c, zz.ravel()).reshape(zz.shape)
        return complex(out) if scalar else out

    def conj(self) -> "CPoly":
        """Polynomial whose value is ``conj(self(z))``."""
        return CPoly({(b, a): np.conj(c) for (a, b), c in self._terms.items()})

    def to_xy(self) -> tuple["RPoly", "RPoly"]:
        """Real and imaginary parts after substituting ``z = x + iy``."""
        acc: dict = {}
        for (a, b), c in self._terms.items():
            for key, d in _xy_expansion(a, b).items():
                acc[key] = acc.get(key, 0) + c * d
        re = RPoly({k: v.real for k, v in acc.items()})
        im = RPoly({k: v.imag for k, v in acc.items()})
        return re, im

    def pretty(self) -> str:
        parts = []
        for (a, b), c in self.sorted_terms():
            mono = "*".join(s for s in (_pow("z", a), _pow("zb", b)) if s) or "1"
            parts.append(f"({c:.6g})*{mono}")
        return " + ".join(parts)


class RPoly(_Poly):
    """Polynomial in real ``x`` and ``y`` with real coefficients."""

    _dtype = float
    kind = "rpoly"
    __slots__ = ()

    def __init__(self, terms=None):
        terms = terms or {}
        for c in terms.values():
            if isinstance(c, complex) or np.iscomplexobj(c):
                if c.imag != 0:
                    raise ValueError("RPoly coefficients must be real")
        super().__init__({k: float(np.real(c)) for k, c in terms.items()})

    def __call__(self, x, y):
        """Evaluate at real points; ``x`` and ``y`` broadcast together."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        out = np.zeros(x.shape)
        for (i, j), c in self._terms.items():
            out = out + c * x**i * y**j
        return float(out) if out.ndim == 0 else out

    def to_complex(self) -> CPoly:
        """Rewrite in ``z``/``zb`` using ``x = (z+zb)/2`` and ``y = (z-zb)/(2i)``."""
        acc: dict = {}
        for (i, j), c in self._terms.items():
            for key, d in _zc_expansion(i, j).items():
                acc[key] = acc.get(key, 0) + c * d
        return CPoly(acc)

    def pretty(self) -> str:
        parts = []
        for (i, j), c in self.sorted_terms():
            mono = "*".join(s for s in (_pow("x", i), _pow("y", j)) if s) or "1"
            parts.append(f"({c:.6g})*{mono}")
        return " + ".join(parts)


def _pow(sym, p):
    if p == 0:
        return ""
    return sym if p == 1 else f"{sym}^{p}"


@lru_cache(maxsize=None)
def _xy_expansion(a: int, b: int) -> dict:
    # (x + iy)^a (x - iy)^b
    out: dict = {}
    for s in range(a + 1):
        cs = comb(a, s) * (1j) ** s
        for t in range(b + 1):
            ct = comb(b, t) * (-1j) ** t
            key = (a - s + b - t, s + t)
            out[key] = out.get(key, 0) + cs * ct
    return out


@lru_cache(maxsize=None)
def _zc_expansion(i: int, j: int) -> dict:
    # ((z + zb)/2)^i ((z - zb)/(2i))^j
    out: dict = {}
    scale = 0.5**i * (1 / 2j) ** j
    for s in range(i + 1):
        for t in range(j + 1):
            key = (i - s + j - t, s + t)
            out[key] = out.get(key, 0) + scale * comb(i, s) * comb(j, t) * (-1) ** t
    return out


def poly_from_json(record: dict) -> CPoly | RPoly:
    kind = record.get("kind")
    if kind == "cpoly":
        poly = CPoly({(int(a), int(b)): complex(re, im) for a, b, re, im in record["terms"]})
    elif kind == "rpoly":
        poly = RPoly({(int(a), int(b)): float(re) for a, b, re, _im in record["terms"]})
    else:
        raise ValueError(f"unknown polynomial kind {kind!r}")
    if poly.degree != record.get("degree", poly.degree):
        raise ValueError("degree field does not match terms")
    return poly


def cpoly_eval(p: CPoly, z):
    return p(z)


def complex_to_xy(p: CPoly) -> tuple[RPoly, RPoly]:
    return p.to_xy()


def conj_poly(p: CPoly) -> CPoly:
    return p.conj()


def xy_to_complex(re: RPoly, im: RPoly | None = None) -> CPoly:
    """Inverse of :func:`complex_to_xy`: recombine ``re + i*im`` in ``z, zb``."""
    out = re.to_complex()
    if im is not None:
        out = out + im.to_complex().scale(1j)
    return out


def stack_vectors(polys: Iterable[_Poly], degree: int) -> np.ndarray:
    """Coefficient matrix with one row per polynomial, graded columns."""
    rows = [p.to_vector(degree) for p in polys]
    return np.array(rows, dtype=complex).reshape(len(rows), graded_size(degree))


def eval_rows(coeffs: np.ndarray, z) -> np.ndarray:
    """Evaluate every row of a graded coefficient matrix at the points ``z``.

    Returns an array of shape ``(rows, npts)``.
    """
    coeffs = np.atleast_2d(coeffs)
    n = coeffs.shape[1]
    degree = 0
    while graded_size(degree) < n:
        degree += 1
    table = _accel.monomial_table(np.ravel(z), degree)
    return coeffs @ table.T
