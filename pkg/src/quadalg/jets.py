"""Truncated multivariate Taylor expansions (jets) with exact arithmetic.

A jet holds every partial-derivative coefficient of a function germ up to a
fixed total degree. Jets are closed under +, *, /, sqrt and partial
differentiation, which lets differential operators act exactly on polynomial
test functions: the constant term of the final jet is the exact value at the
expansion point as long as the total derivative order consumed stays at or
below the jet degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from . import _jet_kernels as kernels
from .errors import SingularPoint


def _multi_indices(n_vars: int, degree: int) -> np.ndarray:
    """All exponent tuples with total degree <= degree, sorted by (degree, lex)."""
    rows = []
    for d in range(degree + 1):
        level = []
        for combo in combinations_with_replacement(range(n_vars), d):
            e = [0] * n_vars
            for v in combo:
                e[v] += 1
            level.append(tuple(e))
        rows.extend(sorted(level))
    return np.array(rows, dtype=np.int16)


class JetSpace:
    """Index tables for jets in n_vars variables truncated at total degree."""

    def __init__(self, n_vars: int, degree: int):
        if n_vars < 1 or degree < 1:
            raise ValueError("need n_vars >= 1 and degree >= 1")
        self.n_vars = n_vars
        self.degree = degree
        self.exps = _multi_indices(n_vars, degree)
        self.n_terms = self.exps.shape[0]
        assert self.n_terms == comb(n_vars + degree, degree)
        self.term_degree = self.exps.sum(axis=1).astype(np.int64)
        self._pos = {tuple(int(x) for x in row): i for i, row in enumerate(self.exps)}
        self._build_mul_table()
        self._build_div_table()
        self._build_deriv_tables()

    def index_of(self, exponents) -> int:
        return self._pos[tuple(int(x) for x in exponents)]

    def _build_mul_table(self):
        i_all, j_all, k_all = [], [], []
        by_degree = {}
        for idx in range(self.n_terms):
            by_degree.setdefault(int(self.term_degree[idx]), []).append(idx)
        for i in range(self.n_terms):
            di = int(self.term_degree[i])
            ei = self.exps[i]
            for dj in range(self.degree - di + 1):
                for j in by_degree[dj]:
                    k = self._pos[tuple(int(x) for x in (ei + self.exps[j]))]
                    i_all.append(i)
                    j_all.append(j)
                    k_all.append(k)
        self.mul_i = np.array(i_all, dtype=np.int64)
        self.mul_j = np.array(j_all, dtype=np.int64)
        self.mul_k = np.array(k_all, dtype=np.int64)

    def _build_div_table(self):
        keep = self.mul_i > 0
        i, j, k = self.mul_i[keep], self.mul_j[keep], self.mul_k[keep]
        order = np.argsort(k, kind="stable")
        self.div_i, self.div_j, self.div_k = i[order], j[order], k[order]
        kd = self.term_degree[self.div_k]
        self.div_level_starts = np.searchsorted(kd, np.arange(self.degree + 2))
        self.term_level_starts = np.searchsorted(self.term_degree, np.arange(self.degree + 2))

    def _build_deriv_tables(self):
        self.deriv_dst = []
        self.deriv_src = []
        self.deriv_coef = []
        for v in range(self.n_vars):
            dst, src, coef = [], [], []
            for idx in range(self.n_terms):
                if int(self.term_degree[idx]) >= self.degree:
                    continue
                e = self.exps[idx].copy()
                e[v] += 1
                dst.append(idx)
                src.append(self._pos[tuple(int(x) for x in e)])
                coef.append(float(e[v]))
            self.deriv_dst.append(np.array(dst, dtype=np.int64))
            self.deriv_src.append(np.array(src, dtype=np.int64))
            self.deriv_coef.append(np.array(coef, dtype=np.float64))

    # -- jet constructors -------------------------------------------------
    def zero(self) -> "Jet":
        return Jet(self, np.zeros(self.n_terms, dtype=np.complex128))

    def constant(self, value: complex) -> "Jet":
        c = np.zeros(self.n_terms, dtype=np.complex128)
        c[0] = value
        return Jet(self, c)

    def coordinate(self, v: int, point) -> "Jet":
        """Germ of the coordinate function x_v about the given point."""
        c = np.zeros(self.n_terms, dtype=np.complex128)
        c[0] = point[v]
        unit = [0] * self.n_vars
        unit[v] = 1
        c[self.index_of(unit)] = 1.0
        return Jet(self, c)

    def mul_coeffs(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return kernels.jet_mul(a, b, self.mul_i, self.mul_j, self.mul_k, self.n_terms)

    def div_coeffs(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if b[0] == 0:
            raise SingularPoint("division by a jet with zero constant term")
        return kernels.jet_div(a, b, self.div_i, self.div_j, self.div_k,
                               self.div_level_starts, self.term_level_starts, self.n_terms)

    def deriv_coeffs(self, a: np.ndarray, v: int) -> np.ndarray:
        out = np.zeros(self.n_terms, dtype=np.complex128)
        out[self.deriv_dst[v]] = self.deriv_coef[v] * a[self.deriv_src[v]]
        return out


@lru_cache(maxsize=None)
def jet_space(n_vars: int, degree: int) -> JetSpace:
    return JetSpace(n_vars, degree)


@dataclass(frozen=True)
class Jet:
    space: JetSpace
    coeffs: np.ndarray

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0])

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.coeffs + other.coeffs)
        return Jet(self.space, _shift_const(self.coeffs, other))

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, -self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.space.mul_coeffs(self.coeffs, other.coeffs))
        return Jet(self.space, self.coeffs * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.space.div_coeffs(self.coeffs, other.coeffs))
        return Jet(self.space, self.coeffs / complex(other))

    def __rtruediv__(self, other):
        return self.space.constant(complex(other)) / self

    def __pow__(self, n: int):
        if n < 0:
            return 1.0 / (self ** (-n))
        out = self.space.constant(1.0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def deriv(self, v: int) -> "Jet":
        return Jet(self.space, self.space.deriv_coeffs(self.coeffs, v))

    def sqrt(self) -> "Jet":
        """Principal square root; needs a nonzero constant term."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise SingularPoint("sqrt of a jet with zero constant term")
        w = self / c0 - 1.0
        acc = self.space.constant(_binom_half(self.space.degree))
        for k in range(self.space.degree - 1, -1, -1):
            acc = acc * w + _binom_half(k)
        return acc * np.sqrt(complex(c0))


def _shift_const(coeffs: np.ndarray, value) -> np.ndarray:
    out = coeffs.copy()
    out[0] += complex(value)
    return out


@lru_cache(maxsize=None)
def _binom_half(k: int) -> float:
    """Binomial coefficient C(1/2, k)."""
    out = 1.0
    for i in range(k):
        out *= (0.5 - i) / (i + 1)
    return out


def jet_seed_polynomial(poly: dict, point, space: JetSpace) -> Jet:
    """Exact Taylor expansion about point of a sparse polynomial.

    poly maps exponent tuples to coefficients; its degree must not exceed the
    space degree, otherwise the expansion would be silently truncated.
    """
    coords = [space.coordinate(v, point) for v in range(space.n_vars)]
    out = space.zero()
    for expo, coef in poly.items():
        if sum(expo) > space.degree:
            raise ValueError("polynomial degree exceeds jet degree")
        term = space.constant(coef)
        for v, e in enumerate(expo):
            if e:
                term = term * coords[v] ** int(e)
        out = out + term
    return out


def random_polynomial(rng: np.random.Generator, n_vars: int, degree: int = 3) -> dict:
    """Dense random polynomial with coefficients uniform in [-1, 1]."""
    out = {}
    for row in _multi_indices(n_vars, degree):
        out[tuple(int(x) for x in row)] = rng.uniform(-1.0, 1.0)
    return out
