import math

import numpy as np
import pytest
from scipy.integrate import quad

from radspec.frobenius import ReducedProblem, polynomial_solution
from radspec.spectrum import (
    DomainTooSmall,
    MonotonicityViolation,
    NotConverged,
    SolverConfig,
    curve_scan,
    expectation_r,
    hft_check,
    solve_spectrum,
)

ROOT_83 = math.sqrt(8.0 / 3.0)


# --- config validation -------------------------------------------------------

def test_config_rejects_bad_fields():
    with pytest.raises(ValueError):
        SolverConfig(r_max=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(grid_points=50)
    with pytest.raises(ValueError):
        SolverConfig(levels=0)
    with pytest.raises(ValueError):
        SolverConfig(convergence_tol=0.0)


def test_config_default_domain_grows_with_coupling():
    cfg = SolverConfig()
    assert cfg.domain(0.0) == 12.0
    assert cfg.domain(-8.0) == 16.0
    assert SolverConfig(r_max=30.0).domain(100.0) == 30.0


# --- oscillator limit --------------------------------------------------------

def test_oscillator_spectrum_l0():
    states = solve_spectrum(ReducedProblem(0, 0.0), SolverConfig(levels=3))
    assert [st.W for st in states] == pytest.approx([2.0, 6.0, 10.0], abs=1e-7)


@pytest.mark.parametrize("l", [-3, -2, -1, 0, 1, 2, 3])
def test_oscillator_spectrum_all_l(l):
    # exact 2-D oscillator ladder W = 2(2j + |l| + 1)
    states = solve_spectrum(ReducedProblem(l, 0.0), SolverConfig(levels=4))
    for j, st in enumerate(states):
        assert st.W == pytest.approx(2 * (2 * j + abs(l) + 1), abs=1e-7)


def test_ground_state_at_first_truncation_root():
    states = solve_spectrum(ReducedProblem(0, ROOT_83), SolverConfig(levels=1))
    assert states[0].W == pytest.approx(10.0 / 3.0, abs=1e-6)


def test_branches_strictly_ordered():
    states = solve_spectrum(ReducedProblem(1, 2.5), SolverConfig(levels=4))
    Ws = [st.W for st in states]
    assert all(a < b for a, b in zip(Ws, Ws[1:]))
    assert [st.j for st in states] == [0, 1, 2, 3]


def test_eigenfunction_normalized_under_radial_measure():
    states = solve_spectrum(ReducedProblem(0, 1.0), SolverConfig(levels=2))
    for st in states:
        integral = np.sum(st.F ** 2 * st.r) * st.step
        assert integral == pytest.approx(1.0, abs=1e-10)


def test_domain_too_small_is_rejected():
    with pytest.raises(DomainTooSmall):
        solve_spectrum(ReducedProblem(0, 0.0), SolverConfig(r_max=4.0, levels=1))


def test_unreachable_tolerance_raises():
    cfg = SolverConfig(grid_points=100, levels=1, convergence_tol=1e-14)
    with pytest.raises(NotConverged):
        solve_spectrum(ReducedProblem(0, 0.0), cfg)


def test_convergence_order_at_least_two():
    """Extrapolated eigenvalues against the exact oscillator value."""
    errs = []
    for n in (125, 250, 500):
        cfg = SolverConfig(grid_points=n, levels=1, convergence_tol=1.0)
        errs.append(abs(solve_spectrum(ReducedProblem(0, 0.0), cfg)[0].W - 2.0))
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert min(orders) >= 2.0


# --- expectation value -------------------------------------------------------

def test_expectation_gaussian_ground_state():
    st = solve_spectrum(ReducedProblem(0, 0.0), SolverConfig(levels=1))[0]
    assert expectation_r(st) == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-6)


def test_expectation_first_excited_against_quadrature_oracle():
    # closed-form state F ~ (1 - r^2) e^{-r^2/2}; oracle is adaptive quadrature
    norm = quad(lambda r: (1 - r * r) ** 2 * math.exp(-r * r) * r, 0, 20)[0]
    num = quad(lambda r: r * (1 - r * r) ** 2 * math.exp(-r * r) * r, 0, 20)[0]
    oracle = num / norm
    assert oracle == pytest.approx(7 * math.sqrt(math.pi) / 8, rel=1e-12)
    st = solve_spectrum(ReducedProblem(0, 0.0), SolverConfig(levels=2))[1]
    assert expectation_r(st) == pytest.approx(oracle, abs=1e-6)


def test_expectation_positive_everywhere():
    for l, nu in ((0, 0.0), (2, 3.0), (1, -1.5)):
        for st in solve_spectrum(ReducedProblem(l, nu), SolverConfig(levels=3)):
            assert expectation_r(st) > 0


# --- Hellmann-Feynman --------------------------------------------------------

def test_hft_gaussian_ground_state():
    res = hft_check(ReducedProblem(0, 0.0), 0)
    assert res.dW_dnu == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-4)
    assert res.r_expectation == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-6)
    assert res.discrepancy <= 1e-4


def test_hft_slope_positive_at_strong_coupling():
    res = hft_check(ReducedProblem(0, 5.0), 0)
    assert res.dW_dnu > 0


def test_hft_excited_branch_self_consistent():
    res = hft_check(ReducedProblem(2, 1.0), 1)
    cfg = SolverConfig()
    assert res.discrepancy <= max(1e-4, 10 * cfg.convergence_tol / 1e-4)


def test_hft_rejects_bad_delta():
    with pytest.raises(ValueError):
        hft_check(ReducedProblem(0, 0.0), 0, delta=0.0)


# --- curve scan --------------------------------------------------------------

def test_curve_scan_intercepts():
    curves = curve_scan(0, 3, [0.0])
    assert [c.samples[0][1] for c in curves] == pytest.approx([2.0, 6.0, 10.0],
                                                              abs=1e-7)


def test_curve_scan_monotone_in_nu():
    curve = curve_scan(0, 1, [0.0, 1.0, 2.0])[0]
    Ws = [W for _, W in curve.samples]
    assert Ws[0] < Ws[1] < Ws[2]


def test_curve_scan_l_sign_symmetric():
    grid = [0.0, 0.7, 1.9]
    plus = curve_scan(1, 2, grid)
    minus = curve_scan(-1, 2, grid)
    for cp, cm in zip(plus, minus):
        assert [W for _, W in cp.samples] == pytest.approx(
            [W for _, W in cm.samples], rel=1e-12)


def test_curve_scan_rejects_unsorted_grid():
    with pytest.raises(ValueError):
        curve_scan(0, 1, [1.0, 0.5])
    with pytest.raises(ValueError):
        curve_scan(0, 0, [0.0, 1.0])


def test_curve_scan_keeps_eigenfunctions_on_request():
    grid = [0.0, 0.5]
    bare = curve_scan(0, 1, grid)[0]
    rich = curve_scan(0, 1, grid, keep_eigenfunctions=True)[0]
    assert bare.states is None
    assert rich.states is not None and len(rich.states) == 2


def test_monotonicity_guard_is_exercised_by_valid_scan():
    # a correct solver never trips it; the guard exists for solver faults
    try:
        curve_scan(2, 2, list(np.linspace(0.0, 4.0, 5)))
    except MonotonicityViolation as exc:  # pragma: no cover
        pytest.fail(f"spurious monotonicity violation: {exc}")
