"""Independent spectral oracle: finite-difference eigenproblems for the
separated parabolic channels and the 4D radial oscillator blocks.

Discretizations are flux-form symmetric second-order schemes; eigenvalues come
from LAPACK's symmetric tridiagonal solvers and are Richardson-extrapolated
over grid halvings. These spectra adjudicate the printed closed forms, so no
printed formula is used anywhere in this module's numerics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .errors import GridTooCoarse, NoRoot, PochhammerZero


def kummer(n: int, b: float, x) -> float:
    """Terminating confluent hypergeometric series F(-n, b, x).

    Sum over k = 0..n of (-n)_k / (b)_k x^k / k!; raises if a Pochhammer
    denominator vanishes before the series terminates.
    """
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    x = np.asarray(x, dtype=float)
    total = np.ones_like(x)
    term = np.ones_like(x)
    for k in range(n):
        denom = b + k
        if denom == 0:
            raise PochhammerZero(f"(b)_k vanishes at k={k + 1} for b={b}")
        term = term * ((-n + k) / denom) * x / (k + 1)
        total = total + term
    if total.ndim == 0:
        return float(total)
    return total


@dataclass(frozen=True)
class ParabolicChannelSpec:
    """One separated parabolic channel: operator d/dx(x d/dx) - s/(4x) + alpha/4 + (beta/4) x."""

    s: float
    alpha: float
    beta: float
    sign: int = +1  # +1: eigenvalue v/2; -1: eigenvalue -v/2

    def __post_init__(self):
        if self.beta >= 0:
            raise ValueError("bound channels need beta < 0")
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")


@dataclass(frozen=True)
class RadialOscillatorSpec:
    """Radial reduction of one 4-variable oscillator block."""

    dim: int = 4
    angular: float = 0.0
    lam: float = 0.0
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.dim != 4:
            raise ValueError("only the 4-variable block is supported")
        if self.omega <= 0 or self.hbar <= 0:
            raise ValueError("omega and hbar must be positive")


@dataclass(frozen=True)
class EigenResult:
    index: int
    eigenvalue: float
    grid_size: int
    extrapolated: float
    error_estimate: float


def _parabolic_levels(spec: ParabolicChannelSpec, n_levels: int, n_grid: int,
                      cutoff: float) -> np.ndarray:
    """Top eigenvalues (descending) of the discretized channel operator, times 2.

    Flux form of d/dx (x d/dx) on the midpoint grid x_i = (i + 1/2) h; the cell
    face at x = 0 carries zero weight, which is the natural boundary for the
    x-weighted operator, and the cutoff end is Dirichlet.
    """
    h = cutoff / n_grid
    x = (np.arange(n_grid) + 0.5) * h
    faces_left = x - 0.5 * h
    faces_right = x + 0.5 * h
    diag = -(faces_left + faces_right) / h**2
    sx = np.full(n_grid, spec.s)
    if spec.s != 0.0:
        # indicial boundary weight: cell-average of s/(4x) against the x^(sqrt(s))
        # profile instead of the midpoint value, refining the singular cell
        m = np.sqrt(abs(spec.s))
        if m > 0:
            sx[0] = spec.s * (m + 1) / (2 * m)
    diag = diag - sx / (4 * x) + spec.alpha / 4 + (spec.beta / 4) * x
    off = faces_right[:-1] / h**2
    lo = n_grid - n_levels
    vals = eigh_tridiagonal(diag, off, select="i", select_range=(lo, n_grid - 1),
                            eigvals_only=True)
    return 2.0 * vals[::-1]


def parabolic_eigensolve(spec: ParabolicChannelSpec, n_levels: int,
                         n_grid: int = 1024, cutoff: Optional[float] = None,
                         target: float = 1e-7, max_grid: int = 4096) -> list[EigenResult]:
    """Lowest n_levels quantized v values of the channel, Richardson-extrapolated.

    The grid is refined (halving h) until the extrapolated error estimate drops
    below target; exceeding max_grid raises GridTooCoarse.
    """
    if cutoff is None:
        cutoff = 40.0 / np.sqrt(-spec.beta)
    sizes = []
    n = n_grid
    while n <= max_grid:
        sizes.append(n)
        n *= 2
    if len(sizes) < 3:
        raise ValueError("need at least three grid sizes between n_grid and max_grid")
    levels = np.array([_parabolic_levels(spec, n_levels, n, cutoff) for n in sizes])
    out = []
    for idx in range(n_levels):
        seq = levels[:, idx]
        extrap = (4 * seq[1:] - seq[:-1]) / 3.0
        err = abs(extrap[-1] - extrap[-2])
        if err > target:
            raise GridTooCoarse(
                f"level {idx}: error estimate {err:.3e} above target {target:.1e}")
        out.append(EigenResult(index=idx, eigenvalue=float(seq[-1]),
                               grid_size=sizes[-1], extrapolated=float(extrap[-1]),
                               error_estimate=float(err)))
    return out


def parabolic_closed_form_residual(spec: ParabolicChannelSpec, n: int,
                                   exponent: str = "sqrt", n_grid: int = 2048,
                                   cutoff: Optional[float] = None) -> float:
    """Residual of the closed-form channel solution in the discrete operator.

    exponent="sqrt" uses x^(sqrt(s)/2) with Kummer parameter sqrt(s)+1 (what the
    indicial equation forces); exponent="printed" uses x^(s/2) with parameter
    s+1. The convention whose residual vanishes under refinement is the one the
    oracle supports. Residual is RMS over interior cells, amplitude-normalized.
    """
    if cutoff is None:
        cutoff = 40.0 / np.sqrt(-spec.beta)
    kappa = np.sqrt(-spec.beta)
    m = np.sqrt(abs(spec.s)) if exponent == "sqrt" else spec.s
    h = cutoff / n_grid
    x = (np.arange(n_grid) + 0.5) * h
    t = kappa * x
    f = t ** (m / 2) * np.exp(-t / 2) * kummer(n, m + 1, t)
    v = spec.alpha / 2 - 2 * kappa * (n + (m + 1) / 2)
    faces_left = x - 0.5 * h
    faces_right = x + 0.5 * h
    lhs = np.zeros_like(f)
    lhs[1:-1] = (faces_right[1:-1] * (f[2:] - f[1:-1])
                 - faces_left[1:-1] * (f[1:-1] - f[:-2])) / h**2
    lhs = lhs - spec.s / (4 * x) * f + (spec.alpha / 4 + spec.beta / 4 * x) * f
    interior = slice(8, n_grid // 2)
    resid = lhs[interior] - (v / 2) * f[interior]
    return float(np.sqrt(np.mean(resid**2)) / max(np.abs(f).max(), 1e-300))


def solve_parabolic_pair(s1: float, s2: float, alpha: float, n1: int, n2: int,
                         n_grid: int = 1024, target: float = 1e-7,
                         widen_attempts: int = 6):
    """Bound-state energy from the paired channels, by bisection on beta.

    Channel 1 carries +v/2 and channel 2 carries -v/2; the matching condition
    is v(n1; beta) + v'(n2; beta) = 0. Returns (beta*, v*, eps*, err_estimate,
    eps values per grid) with eps = hbar^2 beta / 2 evaluated at hbar = 1 by the
    caller's convention.
    """
    if n1 < 0 or n2 < 0:
        raise ValueError("n1 and n2 must be nonnegative")
    if alpha <= 0:
        raise ValueError("alpha must be positive")

    def mismatch(beta: float, n: int) -> float:
        c1 = ParabolicChannelSpec(s=s1, alpha=alpha, beta=beta, sign=+1)
        c2 = ParabolicChannelSpec(s=s2, alpha=alpha, beta=beta, sign=-1)
        v1 = _parabolic_levels(c1, n1 + 1, n, 40.0 / np.sqrt(-beta))[n1]
        v2 = _parabolic_levels(c2, n2 + 1, n, 40.0 / np.sqrt(-beta))[n2]
        return v1 + v2

    lo = -(alpha / 2) ** 2
    hi = -(alpha / (2 * (n1 + n2 + s1 + s2 + 10))) ** 2
    betas = []
    sizes = (n_grid, 2 * n_grid, 4 * n_grid)
    for n in sizes:
        a, b = lo, hi
        root = None
        for _ in range(widen_attempts):
            grid = -np.geomspace(-a, -b, 41)
            vals = [mismatch(bb, n) for bb in grid]
            bracket = None
            for (b0, g0), (b1, g1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
                if np.isfinite(g0) and np.isfinite(g1) and g0 * g1 <= 0:
                    bracket = (b0, b1)
                    break
            if bracket is not None:
                root = brentq(lambda bb: mismatch(bb, n), *bracket, xtol=1e-13, rtol=1e-14)
                break
            a, b = a * 4, b / 4
        if root is None:
            raise NoRoot(lo, hi, "no sign change after widening the beta bracket")
        betas.append(root)
    extrap = [(4 * b2 - b1) / 3.0 for b1, b2 in zip(betas, betas[1:])]
    err = abs(extrap[-1] - extrap[-2]) if len(extrap) >= 2 else np.inf
    beta_star = extrap[-1]
    if err > target:
        raise GridTooCoarse(f"pair solve error estimate {err:.3e} above {target:.1e}")
    c1 = ParabolicChannelSpec(s=s1, alpha=alpha, beta=beta_star, sign=+1)
    v_star = _parabolic_levels(c1, n1 + 1, sizes[-1], 40.0 / np.sqrt(-beta_star))[n1]
    eps = beta_star / 2.0
    return beta_star, float(v_star), float(eps), float(err), [b / 2.0 for b in betas]


def _radial_levels(spec: RadialOscillatorSpec, n_levels: int, n_grid: int,
                   cutoff: float) -> np.ndarray:
    """Lowest eigenvalues of the 4D radial block in flux form with weight r^3."""
    h = cutoff / n_grid
    r = (np.arange(n_grid) + 0.5) * h
    faces = np.arange(n_grid + 1) * h
    w = r**3
    a = faces**3  # face weights; a[0] = 0 handles the origin naturally
    hb2 = spec.hbar**2 / 2
    diag = hb2 * (a[:-1] + a[1:]) / (h**2 * w)
    pot = (spec.angular * spec.hbar**2 / (2 * r**2) + spec.lam / r**2
           + spec.omega**2 * r**2 / 2)
    diag = diag + pot
    off = -hb2 * a[1:-1] / (h**2 * np.sqrt(w[:-1] * w[1:]))
    vals = eigh_tridiagonal(diag, off, select="i", select_range=(0, n_levels - 1),
                            eigvals_only=True)
    return vals


def radial_oscillator_eigensolve(spec: RadialOscillatorSpec, n: int,
                                 n_grid: int = 1024, cutoff: Optional[float] = None,
                                 target: float = 1e-6, max_grid: int = 4096) -> EigenResult:
    """n-th eigenvalue of the radial block, Richardson-extrapolated."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if cutoff is None:
        # generous tail so domain truncation sits far below the h^2 error
        width = np.sqrt(spec.hbar / spec.omega)
        cutoff = width * (np.sqrt(4.0 * n + 10.0) + 6.0)
    sizes = []
    g = n_grid
    while g <= max_grid:
        sizes.append(g)
        g *= 2
    if len(sizes) < 3:
        raise ValueError("need at least three grid sizes")
    seq = np.array([_radial_levels(spec, n + 1, s, cutoff)[n] for s in sizes])
    extrap = (4 * seq[1:] - seq[:-1]) / 3.0
    err = abs(extrap[-1] - extrap[-2])
    if err > target:
        raise GridTooCoarse(f"radial level {n}: error {err:.3e} above {target:.1e}")
    return EigenResult(index=n, eigenvalue=float(seq[-1]), grid_size=sizes[-1],
                       extrapolated=float(extrap[-1]), error_estimate=float(err))
