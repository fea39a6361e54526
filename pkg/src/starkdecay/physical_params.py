"""Dimensionless couplings (chi, eta) from physical emitter data.

Level indices are 1-based in this module (level 1 = ground, level 2 =
excited of the radiating pair), matching the key names of the emitter
configuration files.  All quantities must be given in one self-consistent
unit system; the outputs chi and eta are dimensionless and invariant under
consistent rescaling.

The second-order level-shift sums over intermediate states are

    pi_k(nu)       = sum_{j != k} |d_kj|^2/hbar (1/(w_kj + nu) + 1/(w_kj - nu))
    pi_composite   = 1/2 (pi_2(w) + pi_2(w') - pi_1(w) - pi_1(w'))
    pi_two_photon  = sum_j d_2j d_j1 / hbar (1/(w_j2 + w) + 1/(w_j1 - w)).

One-quantum resonance (allowed transition, field tuned near w21):

    chi = coupling * |d_12| / hbar
    eta = chi^2 (pi_2(w21) - pi_1(w21)) / (2 |d_12|^2 / (hbar w21)),

where the level-shift sums exclude the radiating pair itself (its
1/(w21 - nu) pole at nu = w21 is the direct transition channel, not a
virtual intermediate).  The gauge coupling is significant when
|pi_2 - pi_1| / (2 |d_12|^2/(hbar w21)) is large (threshold configurable).

Two-quantum (Raman) resonance (forbidden transition, broadband field plus
a cavity mode of width delta_omega_c):

    chi = g * coupling * pi_two_photon(omega_r) / hbar
    eta = chi * (pi_2(omega_r) - pi_1(omega_r)) * omega_r
              / (pi_two_photon(omega_r) * delta_omega_c),

with g defaulting to coupling * delta_omega_c.  Because the cavity is
narrow, eta is typically of order unity or larger.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ForbiddenTransitionError",
    "LevelSystem",
    "OneQuantumMapping",
    "ResonanceSpec",
    "ResonantDenominatorError",
    "TwoQuantumMapping",
    "map_one_quantum",
    "map_two_quantum",
    "pi_composite",
    "pi_k",
    "pi_two_photon",
]


class ResonantDenominatorError(ValueError):
    """A level-shift sum hit a near-resonant intermediate denominator."""


class ForbiddenTransitionError(ValueError):
    """The requested channel's matrix element vanishes."""


@dataclass(frozen=True)
class LevelSystem:
    """Emitter levels: absolute frequencies (energy/hbar), the Hermitian
    dipole matrix d_kj (zero diagonal), and hbar, all in one unit system.

    Transition frequencies are w_kj = freqs[k] - freqs[j]; any pair with a
    nonzero dipole element must be nondegenerate.
    """

    freqs: tuple[float, ...]
    dipoles: np.ndarray
    hbar: float
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        freqs = tuple(float(f) for f in self.freqs)
        object.__setattr__(self, "freqs", freqs)
        d = np.asarray(self.dipoles, dtype=complex).copy()
        n = len(freqs)
        if d.shape != (n, n):
            raise ValueError(f"dipole matrix shape {d.shape} != ({n}, {n})")
        if not np.all(np.isfinite(freqs)):
            raise ValueError("level frequencies must be finite")
        if np.max(np.abs(d - d.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(d))):
            raise ValueError("dipole matrix must be Hermitian")
        if np.max(np.abs(np.diag(d))) > 0.0:
            raise ValueError("diagonal dipole elements must be zero")
        for k in range(n):
            for j in range(k + 1, n):
                if d[k, j] != 0 and freqs[k] == freqs[j]:
                    raise ValueError(
                        f"levels {k + 1} and {j + 1} are degenerate but dipole-coupled"
                    )
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels length must match the number of levels")
        d.flags.writeable = False
        object.__setattr__(self, "dipoles", d)

    @property
    def n_levels(self) -> int:
        return len(self.freqs)

    def omega(self, k: int, j: int) -> float:
        """Transition frequency w_kj = freq_k - freq_j (1-based indices)."""
        return self.freqs[k - 1] - self.freqs[j - 1]

    def dipole(self, k: int, j: int) -> complex:
        return complex(self.dipoles[k - 1, j - 1])


@dataclass(frozen=True)
class ResonanceSpec:
    """Resonance scenario and field data.

    kind is 'one-quantum' or 'two-quantum'.  omega21 is the radiating
    transition frequency, omega_r the field central frequency, coupling the
    flat field-coupling constant.  Two-quantum runs additionally need the
    cavity frequency omega_c and spectral width delta_omega_c; g defaults
    to coupling * delta_omega_c.  The closeness thresholds are sanity
    configuration, not physics.
    """

    kind: str
    omega21: float
    omega_r: float
    coupling: float
    omega_c: float | None = None
    delta_omega_c: float | None = None
    g: float | None = None
    resonance_tolerance: float = 0.1
    bandwidth_ratio_max: float = 0.1

    def __post_init__(self):
        if self.kind not in ("one-quantum", "two-quantum"):
            raise ValueError(f"unknown resonance kind {self.kind!r}")
        if self.omega21 <= 0:
            raise ValueError("omega21 must be positive")
        if self.omega_r <= 0:
            raise ValueError("omega_r must be positive")
        detuning = self.omega_r - self.omega21
        if self.kind == "two-quantum":
            if self.omega_c is None or self.delta_omega_c is None:
                raise ValueError("two-quantum resonance needs omega_c and delta_omega_c")
            if self.delta_omega_c <= 0:
                raise ValueError("delta_omega_c must be positive")
            detuning = self.omega_r - self.omega_c - self.omega21
            if self.delta_omega_c / self.omega_r > self.bandwidth_ratio_max:
                raise ValueError(
                    f"cavity width ratio {self.delta_omega_c / self.omega_r:.3g} exceeds "
                    f"{self.bandwidth_ratio_max} (narrow-band assumption)"
                )
        if abs(detuning) / self.omega21 > self.resonance_tolerance:
            raise ValueError(
                f"off resonance: |detuning|/omega21 = {abs(detuning) / self.omega21:.3g} "
                f"exceeds {self.resonance_tolerance}"
            )

    @property
    def g_effective(self) -> float:
        if self.g is not None:
            return self.g
        return self.coupling * self.delta_omega_c


def pi_k(
    system: LevelSystem,
    k: int,
    nu: float,
    *,
    resonance_guard: float | None = None,
    exclude: tuple[int, ...] = (),
) -> float:
    """Level-shift sum pi_k(nu) over intermediate levels j != k.

    Terms with zero dipole contribute nothing and are skipped before the
    denominator guard.  A contributing denominator within resonance_guard
    (default 1e-6 * |nu|) of zero raises ResonantDenominatorError naming
    the level pair; perturbation theory is invalid there.  Levels listed in
    exclude are skipped entirely.
    """
    if not 1 <= k <= system.n_levels:
        raise ValueError(f"level index {k} out of range 1..{system.n_levels}")
    guard = 1e-6 * abs(nu) if resonance_guard is None else resonance_guard
    total = 0.0
    for j in range(1, system.n_levels + 1):
        if j == k or j in exclude:
            continue
        d = system.dipole(k, j)
        if d == 0:
            continue
        w = system.omega(k, j)
        for denom in (w + nu, w - nu):
            if abs(denom) <= guard:
                raise ResonantDenominatorError(
                    f"denominator w_{k}{j} -+ nu = {denom:.3e} within guard "
                    f"{guard:.3e} for levels ({k}, {j})"
                )
        total += (abs(d) ** 2 / system.hbar) * (1.0 / (w + nu) + 1.0 / (w - nu))
    return total


def pi_composite(
    system: LevelSystem,
    omega: float,
    omega_prime: float,
    *,
    resonance_guard: float | None = None,
    exclude: tuple[int, ...] = (),
) -> float:
    """1/2 (pi_2(w) + pi_2(w') - pi_1(w) - pi_1(w'))."""
    kw = {"resonance_guard": resonance_guard, "exclude": exclude}
    return 0.5 * (
        pi_k(system, 2, omega, **kw)
        + pi_k(system, 2, omega_prime, **kw)
        - pi_k(system, 1, omega, **kw)
        - pi_k(system, 1, omega_prime, **kw)
    )


def pi_two_photon(
    system: LevelSystem, omega: float, *, resonance_guard: float | None = None
) -> complex:
    """Two-photon matrix element sum between levels 2 and 1 at frequency
    omega: sum_j (d_2j d_j1 / hbar)(1/(w_j2 + omega) + 1/(w_j1 - omega)).

    Diagonal dipoles vanish, so j = 1, 2 self-exclude.
    """
    guard = 1e-6 * abs(omega) if resonance_guard is None else resonance_guard
    total = 0.0 + 0.0j
    for j in range(1, system.n_levels + 1):
        amp = system.dipole(2, j) * system.dipole(j, 1)
        if amp == 0:
            continue
        w_j2 = system.omega(j, 2)
        w_j1 = system.omega(j, 1)
        for denom in (w_j2 + omega, w_j1 - omega):
            if abs(denom) <= guard:
                raise ResonantDenominatorError(
                    f"two-photon denominator {denom:.3e} within guard "
                    f"{guard:.3e} for intermediate level {j}"
                )
        total += (amp / system.hbar) * (1.0 / (w_j2 + omega) + 1.0 / (w_j1 - omega))
    return total


@dataclass(frozen=True)
class OneQuantumMapping:
    chi: float
    eta: float
    significance: float
    stark_significant: bool


@dataclass(frozen=True)
class TwoQuantumMapping:
    chi: float
    eta: float
    eta_chi_ratio: float
    strong_stark: bool


def map_one_quantum(
    spec: ResonanceSpec,
    system: LevelSystem,
    *,
    significance_threshold: float = 10.0,
) -> OneQuantumMapping:
    """One-quantum mapping (see module docstring).

    The radiating pair is excluded from the level-shift sums; the phase of
    d_12 is a basis gauge and is dropped via |d_12|.
    """
    if spec.kind != "one-quantum":
        raise ValueError(f"spec kind is {spec.kind!r}, expected 'one-quantum'")
    d12 = abs(system.dipole(1, 2))
    if d12 == 0:
        raise ForbiddenTransitionError(
            "d_12 = 0: the one-quantum channel is absent"
        )
    chi = spec.coupling * d12 / system.hbar
    nu = spec.omega21
    shift_diff = pi_k(system, 2, nu, exclude=(1,)) - pi_k(system, 1, nu, exclude=(2,))
    denom = 2.0 * d12 * d12 / (system.hbar * spec.omega21)
    eta = chi * chi * shift_diff / denom
    significance = abs(shift_diff) / denom
    return OneQuantumMapping(
        chi=chi,
        eta=eta,
        significance=significance,
        stark_significant=significance > significance_threshold,
    )


def map_two_quantum(spec: ResonanceSpec, system: LevelSystem) -> TwoQuantumMapping:
    """Two-quantum (Raman) mapping (see module docstring)."""
    if spec.kind != "two-quantum":
        raise ValueError(f"spec kind is {spec.kind!r}, expected 'two-quantum'")
    p21 = pi_two_photon(system, spec.omega_r)
    if p21 == 0:
        raise ForbiddenTransitionError(
            "pi_two_photon(omega_r) = 0: the two-photon channel is absent"
        )
    if abs(p21.imag) > 1e-9 * max(abs(p21.real), 1e-300):
        raise ValueError(
            "two-photon sum has a nonvanishing imaginary part "
            f"({p21:.3e}); choose a dipole phase gauge that makes it real"
        )
    p21_real = p21.real
    chi = spec.g_effective * spec.coupling * p21_real / system.hbar
    shift_diff = pi_k(system, 2, spec.omega_r) - pi_k(system, 1, spec.omega_r)
    eta = chi * shift_diff * spec.omega_r / (p21_real * spec.delta_omega_c)
    ratio = eta / chi if chi != 0 else float("nan")
    return TwoQuantumMapping(
        chi=chi,
        eta=eta,
        eta_chi_ratio=ratio,
        strong_stark=abs(eta) >= 1.0,
    )
