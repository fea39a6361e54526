"""Acceptance suite: the package's exit criteria.

Each test checks one criterion at its pinned tolerance and prints a
pass/fail line (run with `pytest tests/test_acceptance.py -v -s` to see
the lines as they stream).  Expected values are closed-form or frozen from
the independent oracles in the unit-test modules.
"""

import cmath
import math
import time

import numpy as np
import pytest

from starkdecay.collision import CollisionConfig, convergence_study, mc_unravel
from starkdecay.ito_algebra import (
    CHANNELS,
    ItoElement,
    coefficient_functions,
    emitter_generator,
    ito_exp,
    multiply,
)
from starkdecay.lindblad import (
    VACUUM,
    closed_form_evolution,
    density_matrix,
    derive_master_equation,
    lindblad_model,
    numerical_evolution,
    suppression_factor,
    validate_density_matrix,
)
from starkdecay.operators import excited_projector
from starkdecay.physical_params import ResonanceSpec, map_one_quantum, map_two_quantum

from test_physical_params import one_quantum_toy, two_quantum_toy


def report(name: str, detail: str) -> None:
    print(f"[PASS] {name}: {detail}")


def test_ito_table_conformance():
    start = time.perf_counter()
    table = {
        ("dlam", "dlam"): "dlam",
        ("dlam", "dbdag"): "dbdag",
        ("db", "dlam"): "db",
        ("db", "dbdag"): "dt",
    }
    ident = np.eye(2)
    for left in CHANNELS:
        for right in CHANNELS:
            prod = multiply(ItoElement.basis(left), ItoElement.basis(right))
            for channel in CHANNELS:
                coeff = getattr(prod, f"c_{channel}")
                if table.get((left, right)) == channel:
                    np.testing.assert_array_equal(coeff, ident)
                else:
                    np.testing.assert_array_equal(coeff, 0.0 * ident)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(
        "ito-table-conformance",
        f"all 16 ordered products exact (coefficients 0/1) in {elapsed:.3f}s",
    )


def test_exponential_expansion():
    start = time.perf_counter()
    rng = np.random.default_rng(20240601)
    worst = 0.0
    for _ in range(200):
        chi = rng.uniform(-2.0, 2.0)
        eta = rng.uniform(-4 * math.pi, 4 * math.pi)
        closed = coefficient_functions(chi, eta)
        series = ito_exp(emitter_generator(chi, eta), tol=1e-15)
        worst = max(worst, closed.max_norm_distance(series))
    assert worst <= 1e-12

    for chi in (0.5, 1.0, 2.0):
        for eta in (0.0, 1e-11):
            series = ito_exp(emitter_generator(chi, eta), tol=1e-15)
            target = -0.5 * chi * chi * excited_projector()
            assert np.max(np.abs(series.drift - target)) <= 1e-10
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    report(
        "exponential-expansion",
        f"200 random (chi,eta): series vs closed form <= {worst:.2e} "
        f"(budget 1e-12); eta->0 drift = -chi^2/2 P_e within 1e-10; {elapsed:.2f}s",
    )


def test_master_equation_normal_form():
    worst_g = worst_d = worst_j = 0.0
    for chi in np.linspace(0.1, 2.0, 20):
        for eta in np.linspace(0.0, 4 * math.pi, 20):
            model = derive_master_equation(
                coefficient_functions(chi, eta), VACUUM, params=(chi, eta)
            )
            if eta == 0.0:
                gamma_lit, delta_lit, jump_lit = chi**2, 0.0, chi / math.sqrt(2.0)
            else:
                gamma_lit = 2 * chi**2 * (1 - math.cos(eta)) / eta**2
                delta_lit = chi**2 * (eta - math.sin(eta)) / eta**2
                jump_lit = chi * math.sqrt(1 - math.cos(eta)) / eta
            worst_g = max(worst_g, abs(model.gamma - gamma_lit))
            worst_d = max(worst_d, abs(model.delta - delta_lit))
            worst_j = max(worst_j, abs(abs(model.jump[0, 1]) - abs(jump_lit)))
            assert model.jump[1, 0] == 0 and model.jump[0, 0] == 0
    assert worst_g <= 1e-12 and worst_d <= 1e-12 and worst_j <= 1e-12

    # eta -> 0 limit resolves the linear-vs-quadratic denominator question:
    # gamma(chi, 0) = chi^2 (the quadratic form), not divergent.
    for chi in (0.5, 1.0, 2.0):
        m0 = derive_master_equation(coefficient_functions(chi, 0.0), VACUUM)
        assert m0.gamma == pytest.approx(chi**2, abs=1e-13)
    report(
        "master-equation-normal-form",
        "20x20 grid: gamma/delta/L within "
        f"{max(worst_g, worst_d, worst_j):.2e} of closed forms (budget 1e-12); "
        "gamma(chi,0)=chi^2",
    )


def test_suppression_bound_and_freezing():
    etas = np.linspace(-4 * math.pi, 4 * math.pi, 10_000)
    s = suppression_factor(etas)
    assert np.all(s >= 0.0) and np.all(s <= 1.0)
    assert np.all(s[np.abs(etas) > 1e-9] < 1.0)
    assert suppression_factor(0.0) == 1.0
    assert suppression_factor(2 * math.pi) <= 1e-15
    assert abs(suppression_factor(math.pi) - 4 / math.pi**2) <= 1e-12

    frozen = lindblad_model(1.0, 2 * math.pi)
    rho0 = density_matrix(1.0)
    worst = max(
        abs(closed_form_evolution(frozen, rho0, tau)[1, 1].real - 1.0)
        for tau in np.linspace(0.0, 100.0, 201)
    )
    assert worst <= 1e-15
    report(
        "suppression-bound",
        "S in [0,1] on 1e4 samples, S(0)=1, "
        f"S(2pi)={suppression_factor(2 * math.pi):.1e}, S(pi)=4/pi^2; "
        f"frozen rho_ee deviation {worst:.1e} for tau<=100",
    )


def test_collision_oracle_equivalence():
    start = time.perf_counter()
    rho0 = density_matrix(0.6, math.sqrt(0.24))
    summary = []
    for eta in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi):
        study = convergence_study(
            CollisionConfig(chi=1.0, eta=eta, dtau=1e-2, n_slices=100),
            rho0,
            halvings=4,
        )
        combined = study.combined()
        assert 0.8 <= study.fitted_order <= 1.2, f"eta={eta}: order {study.fitted_order}"
        assert combined[-1] <= 2e-3, f"eta={eta}: final error {combined[-1]:.2e}"
        summary.append(f"eta={eta:.3f}: p={study.fitted_order:.2f} err={combined[-1]:.1e}")
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    report(
        "collision-oracle-equivalence",
        "; ".join(summary) + f"; {elapsed:.1f}s",
    )


def test_monte_carlo_unraveling():
    model = lindblad_model(1.0, 0.0)
    assert model.gamma == pytest.approx(1.0, abs=1e-14)
    n_traj = 10_000
    res = mc_unravel(model, density_matrix(1.0), n_traj, 1e-2, 100, seed=20240601)
    p = math.exp(-1.0)
    sigma = math.sqrt(p * (1 - p) / n_traj)
    dev = abs(res.states[-1][1, 1].real - p)
    assert dev <= 4 * sigma

    frozen = lindblad_model(1.0, 2 * math.pi)
    res_frozen = mc_unravel(frozen, density_matrix(1.0), 2000, 1e-2, 100, seed=7)
    assert res_frozen.total_jumps == 0
    assert np.all(np.abs(res_frozen.states[:, 1, 1].real - 1.0) <= 1e-12)

    again = mc_unravel(model, density_matrix(1.0), 200, 1e-2, 100, seed=99)
    again2 = mc_unravel(model, density_matrix(1.0), 200, 1e-2, 100, seed=99)
    assert np.array_equal(again.states, again2.states)
    report(
        "monte-carlo-unraveling",
        f"1e4 trajectories: |mean - e^-1| = {dev:.2e} <= 4 sigma = {4 * sigma:.2e}; "
        "frozen model: 0 jumps; bit-reproducible under fixed seed",
    )


def test_rk4_convergence_and_trace():
    model = lindblad_model(1.0, 1.0)
    rho0 = density_matrix(0.6, 0.3)
    ref = closed_form_evolution(model, rho0, 1.0)
    steps_list = [10, 20, 40, 80]
    errors = [
        np.max(np.abs(numerical_evolution(model, rho0, 1.0, s)[-1] - ref))
        for s in steps_list
    ]
    slope, _ = np.polyfit(np.log(1.0 / np.array(steps_list)), np.log(errors), 1)
    assert 3.7 <= slope <= 4.3

    rng = np.random.default_rng(20240601)
    worst_trace = 0.0
    for _ in range(100):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = a @ a.conj().T
        rho = rho / np.trace(rho).real
        model_i = lindblad_model(rng.uniform(0, 2), rng.uniform(0, 4 * math.pi))
        series = numerical_evolution(model_i, rho, 1.0, 100)
        worst_trace = max(
            worst_trace, max(abs(np.trace(r).real - 1.0) for r in series)
        )
        for r in series:
            validate_density_matrix(r)
    assert worst_trace <= 1e-10
    report(
        "rk4-vs-closed-form",
        f"fitted order {slope:.2f} in [3.7, 4.3]; trace drift <= {worst_trace:.1e} "
        "over 100 random states (budget 1e-10)",
    )


def test_parameter_mapping():
    system, spec = one_quantum_toy()
    out1 = map_one_quantum(spec, system)
    assert out1.chi == pytest.approx(1.0, abs=1e-15)
    assert out1.eta == pytest.approx(2.0, abs=1e-13)

    system2, spec2, _ = two_quantum_toy()
    out2 = map_two_quantum(spec2, system2)
    assert out2.chi == pytest.approx(0.1, rel=1e-12)
    assert out2.eta == pytest.approx(10.0, rel=1e-12)

    system3, spec3, _ = two_quantum_toy(delta_omega_c=10.0, chi_target=1.0)
    out3 = map_two_quantum(spec3, system3)
    assert out3.eta == pytest.approx(1.0, rel=1e-12)

    alpha, beta = 2.9, 0.41
    scaled_system = type(system)(
        freqs=tuple(beta * f for f in system.freqs),
        dipoles=math.sqrt(alpha * beta) * np.asarray(system.dipoles),
        hbar=alpha * system.hbar,
    )
    scaled_spec = ResonanceSpec(
        kind="one-quantum",
        omega21=beta * spec.omega21,
        omega_r=beta * spec.omega_r,
        coupling=math.sqrt(alpha / beta) * spec.coupling,
    )
    rescaled = map_one_quantum(scaled_spec, scaled_system)
    assert rescaled.chi == pytest.approx(out1.chi, rel=1e-12)
    assert rescaled.eta == pytest.approx(out1.eta, rel=1e-12)
    report(
        "parameter-mapping",
        "one-quantum toy (chi,eta)=(1,2); two-quantum toys eta=10 and eta=1; "
        "unit-system rescale invariant to 1e-12 relative",
    )
