"""Repeated-interaction (collision) oracle and quantum-jump unraveling.

Brute-force check of the reduced dynamics that never touches the increment
algebra: per time slice of length dtau the emitter interacts unitarily with
a fresh vacuum ancilla through

    U = exp(-i (chi sqrt(dtau) R+ (x) a + chi sqrt(dtau) R- (x) adag
              + eta S (x) adag a)),

with S = gauge_generator().  The annihilation channels carry sqrt(dtau)
while the number channel is dimensionless - the unique scaling whose vacuum
moments reproduce the increment table.  Tracing out the ancilla after every
collision converges to the closed-form master equation with first-order
global error in dtau.

`mc_unravel` is a second, statistically independent oracle: quantum-jump
trajectories of the master equation itself, using the rate-normalized jump
operator sqrt(gamma) R- (equal to sqrt(2) times the stored model.jump).
Survival probabilities and the no-jump propagator are exact per slice, so
the trajectory average of rho_ee is unbiased at slice boundaries and the
only error is binomial noise O(1/sqrt(n_traj)).

A collision run is sequential in tau (each slice depends on the last);
trajectories and parameter points are independent, the functions pure, and
results combine by deterministic ordered reduction, so concurrent sweeps
are safe and schedule-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lindblad import (
    LindbladModel,
    closed_form_evolution,
    lindblad_model,
    validate_density_matrix,
)
from .operators import gauge_generator, max_norm, r_minus, r_plus

__all__ = [
    "CollisionConfig",
    "ConvergenceStudy",
    "JumpProbabilityError",
    "McResult",
    "SimulationError",
    "convergence_study",
    "mc_unravel",
    "run_collisions",
    "step_unitary",
]


class SimulationError(RuntimeError):
    """State invariant violated during a collision run."""

    def __init__(self, slice_index: int, message: str):
        self.slice_index = slice_index
        super().__init__(f"slice {slice_index}: {message}")


class JumpProbabilityError(ValueError):
    """Per-slice jump probability too large for the unraveling."""


@dataclass(frozen=True)
class CollisionConfig:
    """Slicing of the repeated-interaction simulation.

    dtau * n_slices is the total simulated time; fock_cutoff is the ancilla
    truncation (1 = two-level ancilla, enough for vacuum input to first
    order).  rng_seed is carried for manifests and used only by mc_unravel.
    """

    chi: float
    eta: float
    dtau: float
    n_slices: int
    fock_cutoff: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if self.dtau <= 0:
            raise ValueError(f"dtau must be positive, got {self.dtau}")
        if self.n_slices < 1:
            raise ValueError(f"n_slices must be >= 1, got {self.n_slices}")
        if self.fock_cutoff < 1:
            raise ValueError(f"fock_cutoff must be >= 1, got {self.fock_cutoff}")

    @property
    def tau_end(self) -> float:
        return self.dtau * self.n_slices


def _ancilla_ops(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated annihilation operator and number operator on C^(cutoff+1)."""
    n = cutoff + 1
    a = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        a[k - 1, k] = math.sqrt(k)
    return a, a.conj().T @ a


def step_unitary(cfg: CollisionConfig) -> np.ndarray:
    """One-collision unitary on the joint space (system (x) ancilla).

    The generator is Hermitian, so the exponential is taken by
    eigendecomposition; unitary to machine precision.
    """
    a, num = _ancilla_ops(cfg.fock_cutoff)
    root_dt = math.sqrt(cfg.dtau)
    k = cfg.chi * root_dt * (np.kron(r_plus(), a) + np.kron(r_minus(), a.conj().T))
    k = k + cfg.eta * np.kron(gauge_generator(), num)
    evals, vecs = np.linalg.eigh(k)
    return (vecs * np.exp(-1j * evals)) @ vecs.conj().T


def _trace_out_ancilla(joint: np.ndarray, cutoff: int) -> np.ndarray:
    n = cutoff + 1
    return np.einsum("aibi->ab", joint.reshape(2, n, 2, n))


def run_collisions(cfg: CollisionConfig, rho0: np.ndarray) -> np.ndarray:
    """Iterate embed -> collide -> partial trace; returns (n_slices+1, 2, 2)
    system states including tau = 0.

    Each slice map must preserve the trace to 1e-8 (SimulationError with
    the slice index otherwise); positivity is floored at -1e-10.
    """
    rho = validate_density_matrix(rho0).astype(complex)
    u = step_unitary(cfg)
    u_dag = u.conj().T
    vac = np.zeros((cfg.fock_cutoff + 1, cfg.fock_cutoff + 1), dtype=complex)
    vac[0, 0] = 1.0

    out = np.empty((cfg.n_slices + 1, 2, 2), dtype=complex)
    out[0] = rho
    for k in range(cfg.n_slices):
        joint = u @ np.kron(rho, vac) @ u_dag
        rho = _trace_out_ancilla(joint, cfg.fock_cutoff)
        trace_err = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
        if trace_err > 1e-8:
            raise SimulationError(k + 1, f"trace drifted by {trace_err:.3e}")
        lo = min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))
        if lo < -1e-10:
            raise SimulationError(k + 1, f"eigenvalue {lo:.3e} below floor")
        out[k + 1] = rho
    return out


def _max_errors_vs_closed(
    states: np.ndarray, model: LindbladModel, rho0: np.ndarray, dtau: float
) -> tuple[float, float]:
    """Max-over-tau absolute error of rho_ee and of arg rho_eg."""
    err_pop = 0.0
    err_arg = 0.0
    track_phase = abs(rho0[1, 0]) > 1e-12
    for k, rho in enumerate(states):
        ref = closed_form_evolution(model, rho0, k * dtau)
        err_pop = max(err_pop, abs(rho[1, 1].real - ref[1, 1].real))
        if track_phase:
            err_arg = max(err_arg, abs(np.angle(rho[1, 0] * np.conj(ref[1, 0]))))
    return err_pop, err_arg


@dataclass(frozen=True)
class ConvergenceStudy:
    """Error table of collision runs against the closed form.

    fitted_order is the log-log slope of the combined max error vs dtau
    (nan when every error sits at machine zero); monotone flags whether the
    combined errors decrease at every halving.
    """

    dtaus: tuple[float, ...]
    errors_rho_ee: tuple[float, ...]
    errors_arg_coherence: tuple[float, ...]
    fitted_order: float
    monotone: bool

    def combined(self) -> tuple[float, ...]:
        return tuple(
            max(p, a) for p, a in zip(self.errors_rho_ee, self.errors_arg_coherence)
        )


def convergence_study(
    cfg_base: CollisionConfig, rho0: np.ndarray, halvings: int
) -> ConvergenceStudy:
    """Run collisions at dtau, dtau/2, ..., dtau/2^halvings over the same
    total time and tabulate errors against the closed form."""
    if halvings < 2:
        raise ValueError(f"halvings must be >= 2, got {halvings}")
    model = lindblad_model(cfg_base.chi, cfg_base.eta)
    dtaus = []
    errs_pop = []
    errs_arg = []
    for k in range(halvings + 1):
        cfg = CollisionConfig(
            chi=cfg_base.chi,
            eta=cfg_base.eta,
            dtau=cfg_base.dtau / 2**k,
            n_slices=cfg_base.n_slices * 2**k,
            fock_cutoff=cfg_base.fock_cutoff,
            rng_seed=cfg_base.rng_seed,
        )
        states = run_collisions(cfg, rho0)
        e_pop, e_arg = _max_errors_vs_closed(states, model, rho0, cfg.dtau)
        dtaus.append(cfg.dtau)
        errs_pop.append(e_pop)
        errs_arg.append(e_arg)

    combined = [max(p, a) for p, a in zip(errs_pop, errs_arg)]
    if max(combined) < 1e-14:
        order = float("nan")
    else:
        slope, _ = np.polyfit(np.log(dtaus), np.log(np.maximum(combined, 1e-300)), 1)
        order = float(slope)
    monotone = all(b < a for a, b in zip(combined, combined[1:]))
    return ConvergenceStudy(
        dtaus=tuple(dtaus),
        errors_rho_ee=tuple(errs_pop),
        errors_arg_coherence=tuple(errs_arg),
        fitted_order=order,
        monotone=monotone,
    )


@dataclass(frozen=True)
class McResult:
    """Trajectory-averaged states (n_slices+1, 2, 2) and jump statistics."""

    states: np.ndarray
    jumps_per_trajectory: np.ndarray

    @property
    def total_jumps(self) -> int:
        return int(self.jumps_per_trajectory.sum())


def mc_unravel(
    model: LindbladModel,
    rho0: np.ndarray,
    n_traj: int,
    dtau: float,
    n_slices: int,
    seed: int,
) -> McResult:
    """Quantum-jump unraveling of the master equation for a pure rho0.

    No-jump evolution multiplies the excited amplitude by
    exp((+i delta - gamma/2) dtau) (exact propagator of the non-Hermitian
    drift); the per-slice jump probability is the exact survival deficit,
    and a jump projects onto the ground state (the rate-normalized jump
    operator sqrt(gamma) R- has a single dark target).  Trajectory t draws
    its own stream seeded by (seed, t), so runs are bit-reproducible and
    trajectories independent.
    """
    if n_traj < 1:
        raise ValueError(f"n_traj must be >= 1, got {n_traj}")
    if n_slices < 1:
        raise ValueError(f"n_slices must be >= 1, got {n_slices}")
    if dtau <= 0:
        raise ValueError(f"dtau must be positive, got {dtau}")
    p_slice_max = 1.0 - math.exp(-model.gamma * dtau)
    if p_slice_max > 0.1:
        raise JumpProbabilityError(
            f"worst-case jump probability per slice {p_slice_max:.3f} > 0.1; "
            "decrease dtau"
        )
    rho0 = validate_density_matrix(rho0)
    evals, evecs = np.linalg.eigh(rho0)
    if evals[-1] < 1.0 - 1e-10:
        raise ValueError("rho0 must be pure for the jump unraveling")
    psi0 = evecs[:, -1]

    uniforms = np.empty((n_traj, n_slices))
    for t in range(n_traj):
        uniforms[t] = np.random.default_rng([seed, t]).random(n_slices)

    amp_e = np.exp((1j * model.delta - 0.5 * model.gamma) * dtau)
    # 1 - e^{-gamma dtau}: exactly zero at gamma = 0, so a frozen model can
    # never register a spurious jump from round-off.
    decay_frac = -math.expm1(-model.gamma * dtau)
    psi = np.tile(psi0, (n_traj, 1)).astype(complex)
    jumps = np.zeros(n_traj, dtype=np.int64)

    out = np.empty((n_slices + 1, 2, 2), dtype=complex)
    out[0] = np.einsum("ti,tj->ij", psi, psi.conj()) / n_traj
    for k in range(n_slices):
        p_jump = (psi[:, 1].real**2 + psi[:, 1].imag**2) * decay_frac
        jump_now = uniforms[:, k] < p_jump
        jumps += jump_now
        psi[:, 1] *= amp_e
        psi /= np.sqrt(1.0 - p_jump)[:, None]
        psi[jump_now] = [1.0, 0.0]
        out[k + 1] = np.einsum("ti,tj->ij", psi, psi.conj()) / n_traj
    return McResult(states=out, jumps_per_trajectory=jumps)
