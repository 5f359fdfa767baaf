import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.optimize import minimize_scalar

from conftest import B_2D, B_3D
from invpow.ansatz import (
    AnsatzParams,
    check_matching_system,
    constraint_C,
    energy_formula,
    ground_energy,
    log_ansatz_derivatives,
    normalization_constant,
    normalization_integral,
    peak_radius,
    radial_wavefunction,
    select_B,
    solve,
    solve_ansatz,
    solve_B,
)
from invpow.errors import (
    ConstraintUnsatisfied,
    DomainError,
    NoRootFound,
    SingularityError,
)
from invpow.potential import Channel, Potential, centrifugal_coefficient, evaluate_potential
from invpow.special import integrate_adaptive

CH3 = Channel(3, 0)
CH2 = Channel(2, 0)


def test_constraint_ref_values():
    assert constraint_C(4.0, 5.87, -2.0, CH3) == pytest.approx(2.0, abs=2e-4)
    assert constraint_C(4.0, 5.65, -2.0, CH2) == pytest.approx(2.0, abs=5e-4)


def test_constraint_trivial_limit():
    assert abs(constraint_C(1.0, 0.0, -1e-12, CH3)) < 1e-11


def test_constraint_singular_and_domain():
    with pytest.raises(SingularityError):
        constraint_C(4.0, -4.0, -2.0, CH3)
    with pytest.raises(DomainError):
        constraint_C(4.0, -5.0, -2.0, CH3)
    with pytest.raises(DomainError):
        constraint_C(0.0, 1.0, -2.0, CH3)


def test_solve_B_ref_cases():
    (b3,) = solve_B(4.0, 2.0, -2.0, CH3)
    (b2,) = solve_B(4.0, 2.0, -2.0, CH2)
    assert b3 == pytest.approx(B_3D, abs=1e-11)
    assert b2 == pytest.approx(B_2D, abs=1e-11)
    assert abs(b3 - 5.870) <= 0.005
    assert abs(b2 - 5.651) <= 0.005


def test_solve_B_against_dense_scan():
    # oracle: sign changes of f on a 10^6-point grid, refined by linear interpolation
    A, C, D = 1.0, 0.0, -1e-9
    B = np.linspace(-2.0 + 1e-7, 5.0, 1_000_001)
    f = B * B / 4 + B / 2 + 2 * D / (B + 2) - C
    idx = np.flatnonzero(np.signbit(f[:-1]) != np.signbit(f[1:]))
    oracle = [B[i] - f[i] * (B[i + 1] - B[i]) / (f[i + 1] - f[i]) for i in idx]
    roots = solve_B(A, C, D, CH3, hi=5.0)
    assert len(roots) == len(oracle)
    np.testing.assert_allclose(roots, oracle, atol=1e-6)
    assert any(abs(r) < 1e-6 for r in roots)


def test_solve_B_multiple_roots_and_selection():
    # f has a minimum; a C just above it gives two roots left of the minimum region
    roots = solve_B(1.0, -0.2, -0.05, CH3, hi=10.0)
    assert roots == sorted(roots)
    for r in roots:
        assert constraint_C(1.0, r, -0.05, CH3) == pytest.approx(-0.2, abs=1e-11)
    assert select_B([-1.5, 0.3, 2.0]) == 0.3
    assert select_B([-1.5, -0.3]) == -0.3


def test_solve_B_no_root():
    with pytest.raises(NoRootFound):
        solve_B(4.0, 2.0, -2.0, CH3, lo=6.0, hi=10.0)


def test_solve_ansatz_ref_params(ref3d, ref2d):
    p3 = solve_ansatz(*ref3d)
    assert (p3.a, p3.b, p3.c) == pytest.approx((-2.0, -0.405268, 2.46750), abs=5e-6)
    p2 = solve_ansatz(*ref2d)
    assert (p2.a, p2.b, p2.c) == pytest.approx((-2.0, -0.414493, 2.41258), abs=5e-6)


def test_solve_ansatz_rejects_unsatisfied_constraint():
    with pytest.raises(ConstraintUnsatisfied) as info:
        solve_ansatz(Potential(4.0, 5.87, 2.5, -2.0), CH3)
    assert info.value.residual == pytest.approx(constraint_C(4, 5.87, -2, CH3) - 2.5)


def test_ground_energy_ref(ref3d, ref2d):
    assert ground_energy(*ref3d) == pytest.approx(-0.164242035822595200590, rel=1e-12)
    assert ground_energy(*ref2d) == pytest.approx(-0.171804861320032145140, rel=1e-12)
    assert round(ground_energy(*ref3d), 3) == -0.164
    assert round(ground_energy(*ref2d), 3) == -0.172


def test_energy_vanishes_with_D():
    assert -1e-18 < energy_formula(Potential(4.0, 1.0, 0.0, -1e-9)) < 0


def test_log_derivatives_values():
    params = AnsatzParams(-2.0, -0.405268, 2.46750)
    g, g1, g2 = log_ansatz_derivatives(params, 1.0)
    assert g == pytest.approx(-2.405268, abs=1e-12)
    assert g1 == pytest.approx(4.062232, abs=1e-12)
    assert g2 == pytest.approx(-6.467500, abs=1e-12)
    _, g1_far, _ = log_ansatz_derivatives(AnsatzParams(-1.0, -1.0, 0.0), 1e9)
    assert g1_far == pytest.approx(-1.0, abs=1e-9)


@given(
    a=st.floats(-5, -0.1), b=st.floats(-3, -0.01), c=st.floats(0, 6), r=st.floats(0.2, 20)
)
def test_log_derivatives_finite_differences(a, b, c, r):
    params = AnsatzParams(a, b, c)
    h = 1e-6 * r

    def g(x):
        return log_ansatz_derivatives(params, x)[0]

    _, g1, g2 = log_ansatz_derivatives(params, r)
    fd1 = (g(r + h) - g(r - h)) / (2 * h)
    assert fd1 == pytest.approx(g1, abs=1e-6 * max(1.0, abs(g1)))
    h2 = 1e-4 * r
    fd2 = (g(r + h2) - 2 * g(r) + g(r - h2)) / h2**2
    assert fd2 == pytest.approx(g2, abs=1e-4 * max(1.0, abs(g2)))


def test_radial_wavefunction(sol3d):
    assert radial_wavefunction(sol3d, 1.0) == pytest.approx(0.090241320613345762568, rel=1e-12)
    assert radial_wavefunction(sol3d, 1e-3) == 0.0
    assert radial_wavefunction(sol3d, 0.1) < 1e-8
    assert radial_wavefunction(sol3d, 6.812) / radial_wavefunction(sol3d, 1.0) > 1
    assert radial_wavefunction(sol3d, 1.0, normalized=True) == pytest.approx(
        sol3d.normalization * radial_wavefunction(sol3d, 1.0)
    )
    with pytest.raises(DomainError):
        radial_wavefunction(sol3d, 0.0)


def golden_peak(params):
    res = minimize_scalar(
        lambda r: -log_ansatz_derivatives(params, r)[0],
        bracket=(0.5, 5.0, 100.0),
        method="golden",
        tol=1e-12,
    )
    return res.x


def test_peak_radius(sol3d, sol2d):
    r3 = peak_radius(sol3d.params)
    r2 = peak_radius(sol2d.params)
    assert r3 == pytest.approx(6.81293394609359991, rel=1e-12)
    assert r2 == pytest.approx(6.55649400897224666, rel=1e-12)
    assert r3 == pytest.approx(golden_peak(sol3d.params), abs=1e-5)
    assert r2 == pytest.approx(golden_peak(sol2d.params), abs=1e-5)
    assert abs(r3 - 6.812) <= 0.01
    assert peak_radius(AnsatzParams(-1.0, -1.0, 0.0 + 1e-300)) == pytest.approx(1.0)


def test_peak_radius_preconditions():
    with pytest.raises(DomainError):
        peak_radius(AnsatzParams(1.0, -1.0, 1.0))


def test_normalization(sol3d, sol2d):
    assert sol3d.normalization == pytest.approx(0.0702804319489084646667, rel=1e-11)
    assert sol2d.normalization == pytest.approx(0.0843365967733314366782, rel=1e-11)
    for sol in (sol3d, sol2d):
        a, b, c = sol.params.a, sol.params.b, sol.params.c
        N = sol.normalization
        q = integrate_adaptive(lambda r: (N * r**c * math.exp(a / r + b * r)) ** 2, 0.0, math.inf)
        assert q.value == pytest.approx(1.0, abs=1e-6)


def test_literal_unsquared_normalization_is_wrong(sol3d):
    # the printed expression N = 1/I has no square root; it normalizes to 1/I, not 1
    I = normalization_integral(sol3d.params)
    literal = 1.0 / I
    a, b, c = sol3d.params.a, sol3d.params.b, sol3d.params.c
    q = integrate_adaptive(lambda r: (literal * r**c * math.exp(a / r + b * r)) ** 2, 0.0, math.inf)
    assert q.value == pytest.approx(literal**2 * I, rel=1e-8)
    assert abs(q.value - 1.0) > 0.9
    assert normalization_constant(sol3d.params) == pytest.approx(I**-0.5)


def test_matching_system(ref3d):
    p, ch = ref3d
    params = solve_ansatz(p, ch)
    assert np.max(np.abs(check_matching_system(params, p, ch))) < 1e-10
    bumped = AnsatzParams(params.a, params.b + 0.1, params.c)
    res = check_matching_system(bumped, p, ch)
    assert abs(res[1]) > 0.07  # |0.2 b + 0.01| with b = -0.405
    assert res[1] == pytest.approx((params.b + 0.1) ** 2 - params.b**2, rel=1e-12)
    shifted = Potential(p.A, p.B, p.C + 1.0, p.D)
    assert check_matching_system(params, shifted, ch)[4] == pytest.approx(-1.0, abs=1e-12)


family = dict(
    A=st.floats(0.5, 10.0),
    D=st.floats(-5.0, -0.1),
    dim=st.sampled_from([2, 3]),
    ang=st.integers(0, 2),
)


@given(**family, offset=st.floats(0.1, 30.0))
@settings(max_examples=60, deadline=None)
def test_round_trip_constraint_solve_B(A, D, dim, ang, offset):
    ch = Channel(dim, ang)
    B = -2 * math.sqrt(A) + offset
    assume(B < 50)
    C = constraint_C(A, B, D, ch)
    roots = solve_B(A, C, D, ch, hi=60.0)
    assert min(abs(r - B) for r in roots) <= 1e-9


@given(**family, C=st.floats(-1.0, 5.0))
@settings(max_examples=60, deadline=None)
def test_energy_and_ode_identity(A, D, dim, ang, C):
    ch = Channel(dim, ang)
    B = select_B(solve_B(A, C, D, ch))
    p = Potential(A, B, C, D)
    params = solve_ansatz(p, ch)
    E = ground_energy(p, ch)
    assert E == pytest.approx(-params.b**2, rel=1e-12)
    r = np.geomspace(1e-2, 1e2, 400)
    g, g1, g2 = log_ansatz_derivatives(params, r)
    V = evaluate_potential(p, r)
    veff = V + centrifugal_coefficient(ch) / r**2
    resid = g2 + g1**2 - (veff - E)
    assert np.max(np.abs(resid)) <= 1e-9 * np.max(np.abs(V))


@given(**family, C=st.floats(-1.0, 5.0))
@settings(max_examples=40, deadline=None)
def test_positivity_unimodality(A, D, dim, ang, C):
    ch = Channel(dim, ang)
    p = Potential(A, select_B(solve_B(A, C, D, ch)), C, D)
    params = solve_ansatz(p, ch)
    rp = peak_radius(params)
    r = np.geomspace(rp * 1e-2, rp * 1e2, 2001)
    _, g1, _ = log_ansatz_derivatives(params, r)
    changes = np.flatnonzero(np.signbit(g1[:-1]) != np.signbit(g1[1:]))
    assert len(changes) == 1
    assert r[changes[0]] * (1 - 1e-12) <= rp <= r[changes[0] + 1] * (1 + 1e-12)
    assert g1[0] > 0 > g1[-1]


def test_solve_bundles_everything(ref3d):
    sol = solve(*ref3d)
    assert sol.energy == pytest.approx(-sol.params.b ** 2, rel=1e-12)
    assert abs(constraint_C(sol.potential.A, sol.potential.B, sol.potential.D, sol.channel) - 2.0) <= 1e-9
