"""Reduced dynamics of the two-level emitter in the vacuum.

Taking vacuum expectations of dU rho dU' (only the dt drift terms and the
dBdag-left/dB-right cross term survive; see `VacuumState`) turns the
QSDE coefficients into the master equation

    d rho / d tau = drift rho + rho drift'  + loss rho loss'
                  = -i[H, rho] + gamma (R- rho R+ - 1/2 {P_e, rho}),

with H = -delta * P_e, P_e the excited projector, and

    gamma = 2 chi^2 (1 - cos eta)/eta^2      (population decay rate)
    delta = chi^2 (eta - sin eta)/eta^2      (coherence phase velocity).

The stored jump operator is L = chi sqrt(1 - cos eta)/eta * R-, normalized
so gamma = 2 ||L||^2 (the dissipator reads 2 L rho L' - {L'L, rho}); the
level shift of |e> is -delta, reported separately and never folded into the
bare transition frequency.  Matrix elements evolve in closed form:

    rho_ee(tau) = rho_ee(0) exp(-gamma tau)
    rho_eg(tau) = rho_eg(0) exp(-gamma tau / 2) exp(+i delta tau).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import decay_kernel, jump_kernel, shift_kernel
from .operators import (
    excited_projector,
    hermitian_eigenvalues_2x2,
    max_norm,
    r_minus,
)
from .ito_algebra import QsdeCoefficients, coefficient_functions

__all__ = [
    "DensityMatrixError",
    "IntegrationError",
    "LindbladModel",
    "StructuralError",
    "VACUUM",
    "VacuumState",
    "closed_form_evolution",
    "decay_rate",
    "density_matrix",
    "derive_master_equation",
    "lindblad_model",
    "lindblad_rhs",
    "numerical_evolution",
    "stark_shift",
    "suppression_factor",
    "validate_density_matrix",
]

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-12
_STRUCTURE_TOL = 1e-10


class DensityMatrixError(ValueError):
    """State violates hermiticity, unit trace, or positivity."""


class StructuralError(ValueError):
    """QSDE coefficients do not have the emitter operator pattern."""


class IntegrationError(RuntimeError):
    """State invariant violated mid-integration."""

    def __init__(self, step: int, message: str):
        self.step = step
        super().__init__(f"step {step}: {message}")


class VacuumState:
    """Marker for the zero-photon-density field state.

    Encodes the expectation rules used when reducing dU rho dU': the
    increments dB, dBdag, dLam and the pair dBdag*dB all average to zero,
    while dB*dBdag averages to dt.  Carries no data.
    """

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "VacuumState()"


VACUUM = VacuumState()


def decay_rate(chi: float, eta: float):
    """gamma(chi, eta) = 2 chi^2 (1 - cos eta)/eta^2; chi^2 at eta = 0."""
    return chi * chi * decay_kernel(eta)


def stark_shift(chi: float, eta: float):
    """delta(chi, eta) = chi^2 (eta - sin eta)/eta^2; 0 at eta = 0."""
    return chi * chi * shift_kernel(eta)


def suppression_factor(eta):
    """S(eta) = gamma(chi, eta)/gamma(chi, 0) = 2(1 - cos eta)/eta^2.

    Independent of chi; equals sinc(eta/2)^2, so 0 <= S <= 1 with S = 1
    only at eta = 0 and zeros at eta = 2 pi k.
    """
    return decay_kernel(eta)


@dataclass(frozen=True)
class LindbladModel:
    """Reduced-dynamics parameters: decay rate, coherence phase velocity,
    and the jump operator (gamma = 2 * sigma_max(jump)^2).

    chi/eta are the generator parameters when known (None if the model was
    derived from raw coefficients that do not determine them uniquely).
    """

    gamma: float
    delta: float
    jump: np.ndarray
    chi: float | None = None
    eta: float | None = None

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        j = np.asarray(self.jump, dtype=complex).copy()
        j.flags.writeable = False
        object.__setattr__(self, "jump", j)
        sigma = float(np.linalg.norm(self.jump, 2))
        if abs(self.gamma - 2.0 * sigma * sigma) > 1e-10 * max(1.0, self.gamma):
            raise ValueError(
                f"jump normalization broken: gamma={self.gamma} but "
                f"2*sigma_max^2={2 * sigma * sigma}"
            )


def lindblad_model(chi: float, eta: float) -> LindbladModel:
    """Model for given generator parameters, via the closed-form
    coefficients and `derive_master_equation`."""
    return derive_master_equation(
        coefficient_functions(chi, eta), VACUUM, params=(chi, eta)
    )


def derive_master_equation(
    coeffs: QsdeCoefficients,
    vac: VacuumState,
    params: tuple[float, float] | None = None,
) -> LindbladModel:
    """Reduce dU rho dU' over the vacuum and match the normal form.

    Requires the emitter operator pattern (drift on |e><e|, gain on R+,
    loss on R-, diagonal gauge); raises StructuralError naming the first
    offending channel.  The surviving terms give

        gamma = -2 Re drift_ee,   delta = Im drift_ee,
        jump  = |loss_ge| / sqrt(2) * R-,

    and the no-leak condition |loss_ge|^2 = -2 Re drift_ee is checked.
    When params=(chi, eta) is supplied the extracted rates are
    cross-checked against the closed-form rate formulas and stored.
    """
    if not isinstance(vac, VacuumState):
        raise TypeError("vac must be a VacuumState")
    if coeffs.dim != 2:
        raise StructuralError(f"expected a two-level system, got dim {coeffs.dim}")

    scale = max(1.0, max_norm(coeffs.drift), max_norm(coeffs.loss))
    tol = _STRUCTURE_TOL * scale

    drift_resid = coeffs.drift.copy()
    drift_resid[1, 1] = 0.0
    if max_norm(drift_resid) > tol:
        raise StructuralError("drift channel is not proportional to |e><e|")
    gain_resid = coeffs.gain.copy()
    gain_resid[1, 0] = 0.0
    if max_norm(gain_resid) > tol:
        raise StructuralError("gain channel is not proportional to R+")
    loss_resid = coeffs.loss.copy()
    loss_resid[0, 1] = 0.0
    if max_norm(loss_resid) > tol:
        raise StructuralError("loss channel is not proportional to R-")
    if abs(coeffs.gauge[0, 1]) > tol or abs(coeffs.gauge[1, 0]) > tol:
        raise StructuralError("gauge channel is not diagonal")

    drift_ee = complex(coeffs.drift[1, 1])
    loss_scalar = complex(coeffs.loss[0, 1])
    gamma = -2.0 * drift_ee.real
    delta = drift_ee.imag
    if abs(abs(loss_scalar) ** 2 - gamma) > tol:
        raise StructuralError(
            "no-leak condition violated: |loss|^2 != -2 Re drift "
            f"({abs(loss_scalar) ** 2:.3e} vs {gamma:.3e})"
        )
    gamma = max(gamma, 0.0)
    jump = (abs(loss_scalar) / np.sqrt(2.0)) * r_minus()

    chi = eta = None
    if params is not None:
        chi, eta = float(params[0]), float(params[1])
        gamma_cf = float(decay_rate(chi, eta))
        delta_cf = float(stark_shift(chi, eta))
        if abs(gamma - gamma_cf) > 1e-11 * max(1.0, gamma_cf) or abs(
            delta - delta_cf
        ) > 1e-11 * max(1.0, abs(delta_cf)):
            raise StructuralError(
                f"coefficients inconsistent with (chi={chi}, eta={eta}): "
                f"gamma {gamma} vs {gamma_cf}, delta {delta} vs {delta_cf}"
            )
    return LindbladModel(gamma=gamma, delta=delta, jump=jump, chi=chi, eta=eta)


def validate_density_matrix(rho: np.ndarray, *, floor: float = EIGENVALUE_FLOOR) -> np.ndarray:
    """Check hermiticity/trace/positivity; returns the array unchanged."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DensityMatrixError(f"expected a 2x2 matrix, got shape {rho.shape}")
    if max_norm(rho - rho.conj().T) > HERMITICITY_TOL:
        raise DensityMatrixError("state is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL or abs(np.trace(rho).imag) > TRACE_TOL:
        raise DensityMatrixError(f"trace is {np.trace(rho)}, expected 1")
    lo, _ = hermitian_eigenvalues_2x2(rho)
    if lo < floor:
        raise DensityMatrixError(f"negative eigenvalue {lo:.3e}")
    return rho


def density_matrix(p_excited: float, coherence_eg: complex = 0.0) -> np.ndarray:
    """State with excited population p and rho_eg = <e|rho|g> = coherence."""
    rho = np.array(
        [
            [1.0 - p_excited, np.conj(coherence_eg)],
            [coherence_eg, p_excited],
        ],
        dtype=complex,
    )
    return validate_density_matrix(rho)


def closed_form_evolution(model: LindbladModel, rho0: np.ndarray, tau: float) -> np.ndarray:
    """Exact matrix elements at time tau >= 0 (see module docstring)."""
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    rho0 = validate_density_matrix(rho0)
    p_e = rho0[1, 1].real * np.exp(-model.gamma * tau)
    coh = rho0[1, 0] * np.exp(-0.5 * model.gamma * tau) * np.exp(1j * model.delta * tau)
    out = np.array([[1.0 - p_e, np.conj(coh)], [coh, p_e]], dtype=complex)
    return out


def lindblad_rhs(model: LindbladModel, rho: np.ndarray) -> np.ndarray:
    """Right-hand side -i[H, rho] + gamma (R- rho R+ - 1/2 {P_e, rho})
    with H = -delta * P_e.  Exactly traceless."""
    p_e = rho[1, 1]
    coh = rho[1, 0]
    d_pe = -model.gamma * p_e
    d_coh = (-0.5 * model.gamma + 1j * model.delta) * coh
    return np.array([[-d_pe, np.conj(d_coh)], [d_coh, d_pe]], dtype=complex)


def numerical_evolution(
    model: LindbladModel, rho0: np.ndarray, tau_end: float, steps: int
) -> np.ndarray:
    """Fixed-step RK4 trajectory; returns (steps+1, 2, 2) including tau=0.

    Trace is monitored every step (drift beyond 1e-8 raises
    IntegrationError with the step index) and eigenvalues must stay above
    the -1e-12 floor; the run errors rather than renormalizing.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if tau_end < 0:
        raise ValueError(f"tau_end must be nonnegative, got {tau_end}")
    rho0 = validate_density_matrix(rho0)
    if tau_end == 0.0:
        return np.array([rho0])

    h = tau_end / steps
    out = np.empty((steps + 1, 2, 2), dtype=complex)
    out[0] = rho0
    rho = rho0.astype(complex)
    for k in range(steps):
        k1 = lindblad_rhs(model, rho)
        k2 = lindblad_rhs(model, rho + 0.5 * h * k1)
        k3 = lindblad_rhs(model, rho + 0.5 * h * k2)
        k4 = lindblad_rhs(model, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        trace_err = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
        if trace_err > 1e-8:
            raise IntegrationError(k + 1, f"trace drifted by {trace_err:.3e}")
        lo, _ = hermitian_eigenvalues_2x2(rho)
        if lo < EIGENVALUE_FLOOR:
            raise IntegrationError(k + 1, f"eigenvalue {lo:.3e} below floor")
        out[k + 1] = rho
    return out
