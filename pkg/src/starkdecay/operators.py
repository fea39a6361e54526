"""Dense system operators for the two-level emitter.

Basis convention used throughout the package: index 0 is the ground state
|g>, index 1 the excited state |e>.  Operators are plain complex numpy
arrays.  The su(2) triple satisfies

    [r3, r_pm] = +/- r_pm,      [r_plus, r_minus] = 2 r3,

and r_plus @ r_minus is the excited-state projector.
"""

from __future__ import annotations

import numpy as np

GROUND = 0
EXCITED = 1


def identity(dim: int = 2) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def zero(dim: int = 2) -> np.ndarray:
    return np.zeros((dim, dim), dtype=complex)


def r3() -> np.ndarray:
    """Half the population inversion: diag(-1/2, +1/2)."""
    return np.array([[-0.5, 0.0], [0.0, 0.5]], dtype=complex)


def r_plus() -> np.ndarray:
    """Raising operator |e><g|."""
    return np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)


def r_minus() -> np.ndarray:
    """Lowering operator |g><e|."""
    return np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


def ground_projector() -> np.ndarray:
    return np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)


def excited_projector() -> np.ndarray:
    return np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


def gauge_generator() -> np.ndarray:
    """Generator of the gauge (number-process) channel: diag(+1, -1).

    Normalized so one gauge quantum imprints the phase exp(-i*eta) on the
    ground amplitude and exp(+i*eta) on the excited one.  Under this
    normalization the decay rate is gamma = 2 chi^2 (1 - cos eta)/eta^2,
    which first vanishes at eta = 2*pi.
    """
    return np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def ground_ket() -> np.ndarray:
    return np.array([1.0, 0.0], dtype=complex)


def excited_ket() -> np.ndarray:
    return np.array([0.0, 1.0], dtype=complex)


def max_norm(a: np.ndarray) -> float:
    """Largest absolute entry; the comparison norm used package-wide."""
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def dag(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermitian_eigenvalues_2x2(rho: np.ndarray) -> tuple[float, float]:
    """Eigenvalues (ascending) of a 2x2 Hermitian matrix, closed form."""
    a = rho[0, 0].real
    c = rho[1, 1].real
    b = rho[0, 1]
    half_gap = np.hypot(0.5 * (a - c), abs(b))
    mid = 0.5 * (a + c)
    return mid - half_gap, mid + half_gap
