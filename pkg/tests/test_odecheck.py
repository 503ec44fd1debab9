import numpy as np
import pytest
from scipy.special import comb, eval_genlaguerre

from quadalg import odecheck as ode
from quadalg.errors import GridTooCoarse, PochhammerZero


# -- Kummer series -------------------------------------------------------------

def test_kummer_spot_values():
    assert ode.kummer(0, 2.0, 1.7) == pytest.approx(1.0)
    assert ode.kummer(1, 2.0, 1.0) == pytest.approx(0.5)
    assert ode.kummer(2, 3.0, 1.0) == pytest.approx(5.0 / 12.0)


def test_kummer_against_laguerre_oracle():
    # independent oracle: F(-n, b, x) = L_n^(b-1)(x) / C(n+b-1, n)
    rng = np.random.default_rng(0)
    for n in range(11):
        for b in (1.0, 2.0, 3.5, 6.0):
            x = rng.uniform(0, 8)
            expected = eval_genlaguerre(n, b - 1, x) / comb(n + b - 1, n)
            assert ode.kummer(n, b, x) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_kummer_series_recurrence_exact():
    # terminating-series term recurrence: t_{k+1} = t_k (k-n) x / ((b+k)(k+1));
    # rebuilding the sum from it reproduces kummer exactly for n <= 10
    rng = np.random.default_rng(1)
    for n in range(11):
        b = rng.uniform(0.5, 5.0)
        x = rng.uniform(0.0, 6.0)
        term, total = 1.0, 1.0
        for k in range(n):
            term = term * (k - n) * x / ((b + k) * (k + 1))
            total += term
        # exact up to floating-point reassociation of the alternating sum
        assert ode.kummer(n, b, x) == pytest.approx(total, rel=1e-10, abs=1e-10)


def test_kummer_pochhammer_zero():
    with pytest.raises(PochhammerZero):
        ode.kummer(3, -1.0, 0.5)


def test_kummer_rejects_negative_n():
    with pytest.raises(ValueError):
        ode.kummer(-1, 2.0, 1.0)


# -- radial oscillator oracle ----------------------------------------------------

def test_radial_isotropic_ladder():
    spec = ode.RadialOscillatorSpec()
    values = [ode.radial_oscillator_eigensolve(spec, n).extrapolated for n in range(3)]
    assert values == pytest.approx([2.0, 4.0, 6.0], abs=1e-6)


def test_radial_spacing_is_two_omega_hbar():
    spec = ode.RadialOscillatorSpec(omega=1.5, hbar=1.0)
    vals = [ode.radial_oscillator_eigensolve(spec, n).extrapolated for n in range(3)]
    assert np.diff(vals) == pytest.approx([3.0, 3.0], abs=1e-6)


def test_radial_singular_block_matches_indicial_formula():
    # with a 1/r^2 strength the block ladder is 2*omega*hbar*(n + (1+m)/2) with
    # m = sqrt(1 + 2*lam); the closed form adjudicated by this oracle
    lam = 0.3
    m = np.sqrt(1 + 2 * lam)
    spec = ode.RadialOscillatorSpec(lam=lam)
    for n in range(2):
        got = ode.radial_oscillator_eigensolve(spec, n, target=1e-5).extrapolated
        assert got == pytest.approx(2.0 * (n + (1 + m) / 2), abs=2e-5)


def test_radial_error_estimate_decreases_with_refinement():
    spec = ode.RadialOscillatorSpec()
    errs = []
    for base in (256, 512, 1024):
        r = ode.radial_oscillator_eigensolve(spec, 0, n_grid=base, max_grid=4 * base,
                                             target=1.0)
        errs.append(r.error_estimate)
    assert errs[0] > errs[1] > errs[2]
    assert errs[0] / errs[2] > 4.0


def test_radial_grid_too_coarse():
    spec = ode.RadialOscillatorSpec()
    with pytest.raises(GridTooCoarse):
        ode.radial_oscillator_eigensolve(spec, 0, n_grid=64, max_grid=256, target=1e-12)


# -- parabolic channel oracle ------------------------------------------------------

def test_parabolic_levels_arithmetic_progression():
    spec = ode.ParabolicChannelSpec(s=0.0, alpha=0.0, beta=-1.0)
    levels = ode.parabolic_eigensolve(spec, 4)
    vs = np.array([l.extrapolated for l in levels])
    # self-convergence oracle: quantized v follow an n-indexed progression
    assert np.ptp(np.diff(vs)) < 1e-6
    assert np.diff(vs)[0] == pytest.approx(-2.0, abs=1e-6)


def test_parabolic_cutoff_insensitivity():
    # doubling the domain at matched step leaves bound-state eigenvalues
    # unchanged to well below the target: exponential localization
    spec = ode.ParabolicChannelSpec(s=0.0, alpha=2.0, beta=-1.0)
    a = ode.parabolic_eigensolve(spec, 1, cutoff=40.0, n_grid=1024)[0].extrapolated
    b = ode.parabolic_eigensolve(spec, 1, cutoff=80.0, n_grid=2048,
                                 max_grid=8192)[0].extrapolated
    assert abs(a - b) < 1e-9


def test_parabolic_closed_form_exponent_adjudication():
    # the indicial square-root exponent is the convention the operator supports:
    # its residual decays ~h^2 under refinement, the printed exponent stalls
    spec = ode.ParabolicChannelSpec(s=4.0, alpha=2.0, beta=-1.0)
    r_sqrt = [ode.parabolic_closed_form_residual(spec, 1, "sqrt", n) for n in (1024, 2048, 4096)]
    r_printed = [ode.parabolic_closed_form_residual(spec, 1, "printed", n) for n in (1024, 2048, 4096)]
    assert r_sqrt[0] > r_sqrt[1] > r_sqrt[2]
    assert r_sqrt[0] / r_sqrt[2] > 8.0
    assert r_printed[2] > 1e-2


def test_pair_solver_matches_closed_form_at_zero_s():
    beta, v, eps, err, _ = ode.solve_parabolic_pair(0.0, 0.0, 2.0, 0, 0)
    assert err < 1e-6
    assert eps == pytest.approx(-0.5, abs=1e-6)


def test_pair_solver_swap_symmetry():
    # relabeling the two channels (s1, n1) <-> (s2, n2) mirrors the same
    # discretized problem, so the solved energies coincide almost exactly even
    # where the s > 0 channel converges slowly
    a = ode.solve_parabolic_pair(0.0, 2.0, 2.0, 1, 0, n_grid=512, target=1e-3)[2]
    b = ode.solve_parabolic_pair(2.0, 0.0, 2.0, 0, 1, n_grid=512, target=1e-3)[2]
    assert a == pytest.approx(b, abs=1e-9)


def test_pair_solver_monotone_in_n1():
    es = [ode.solve_parabolic_pair(0.0, 0.0, 2.0, n1, 0, n_grid=512)[2]
          for n1 in range(3)]
    assert es[0] < es[1] < es[2] < 0


def test_pair_solver_input_validation():
    with pytest.raises(ValueError):
        ode.solve_parabolic_pair(0.0, 0.0, -1.0, 0, 0)
    with pytest.raises(ValueError):
        ode.solve_parabolic_pair(0.0, 0.0, 2.0, -1, 0)


def test_channel_spec_validation():
    with pytest.raises(ValueError):
        ode.ParabolicChannelSpec(s=0.0, alpha=1.0, beta=0.5)
    with pytest.raises(ValueError):
        ode.RadialOscillatorSpec(omega=-1.0)
