"""Scalar kernels of the gauge-dressed decay model, with removable
singularities at eta = 0.

Every closed-form coefficient of the model reduces to a handful of scalar
functions of the gauge parameter eta.  The naive expressions
(1 - cos eta)/eta^2 and (eta - sin eta)/eta^2 lose up to eight digits to
cancellation for small eta, so cancellation-free identities are used where
they exist (half-angle products, sinc forms) and a factored Taylor series
where they do not.  All kernels are accurate to better than 1e-13 relative
error on the whole real line and accept scalars or numpy arrays.
"""

from __future__ import annotations

import numpy as np

# Switch point for the (eta - sin eta)/eta^2 series.  At |eta| = 0.5 the
# direct difference still carries ~5e-15 relative error while the degree-10
# series truncates below 2e-15; both sides stay inside the 1e-12 contract.
_SERIES_CUTOFF = 0.5


def sinc_u(x):
    """Unnormalized sinc: sin(x)/x, exactly 1 at x = 0."""
    return np.sinc(np.asarray(x) / np.pi)


def shift_kernel(eta):
    """(eta - sin eta)/eta^2, the phase-velocity kernel of the coherence.

    Odd in eta; behaves as eta/6 near zero.
    """
    eta = np.asarray(eta, dtype=float)
    e2 = eta * eta
    # (eta - sin eta)/eta^2 = (eta/6)(1 - eta^2/20 + eta^4/840 - ...)
    series = (eta / 6.0) * (
        1.0
        - e2 / 20.0
        + e2 * e2 / 840.0
        - e2 * e2 * e2 / 60480.0
        + e2 * e2 * e2 * e2 / 6652800.0
        - e2 * e2 * e2 * e2 * e2 / 1037836800.0
    )
    small = np.abs(eta) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, eta)
    direct = (eta - np.sin(eta)) / (safe * safe)
    return np.where(small, series, direct)


def decay_kernel(eta):
    """2(1 - cos eta)/eta^2 = sinc(eta/2)^2.

    The suppression profile of the decay rate: 1 at eta = 0, first zero at
    eta = 2*pi.  Exact product form, no cancellation anywhere.
    """
    s = sinc_u(np.asarray(eta, dtype=float) / 2.0)
    return s * s


def drift_kernel(eta):
    """(exp(-i*eta) - 1 + i*eta)/eta^2, the time-channel scalar.

    Real part (cos eta - 1)/eta^2 = -decay_kernel/2; imaginary part
    +shift_kernel.  Limit -1/2 at eta = 0.
    """
    return -0.5 * decay_kernel(eta) + 1j * shift_kernel(eta)


def transition_kernel(eta):
    """(exp(-i*eta) - 1)/eta via the exact half-angle product
    -i * exp(-i*eta/2) * sinc(eta/2).  Limit -i at eta = 0.
    """
    eta = np.asarray(eta, dtype=float)
    return -1j * np.exp(-0.5j * eta) * sinc_u(eta / 2.0)


def gauge_phase_ground(eta):
    """exp(-i*eta) - 1 as the stable product -2i sin(eta/2) exp(-i*eta/2).

    The excited-state gauge phase is the complex conjugate (real eta).
    """
    eta = np.asarray(eta, dtype=float)
    return -2j * np.sin(eta / 2.0) * np.exp(-0.5j * eta)


def jump_kernel(eta):
    """sqrt(1 - cos eta)/|eta| = sqrt(decay_kernel/2), the jump-operator
    scalar.  Nonnegative by convention (the overall phase of a jump
    operator is immaterial); 1/sqrt(2) at eta = 0.
    """
    return np.sqrt(decay_kernel(eta) / 2.0)
