"""Flat key-value run configuration files.

Grammar (documented in the README): one `key = value` pair per line,
dotted lowercase keys, `#` comments and blank lines ignored, and the first
pair must be the versioned schema header, e.g.

    schema = emitter-config/1

Supported schemas: emitter-config/1 (level system + resonance data for
map-params), simulate-config/1, sweep-config/1.  A JSON run manifest may
be passed wherever a config file is accepted; its embedded resolved
configuration is reused, which is how a finished run is reproduced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .physical_params import LevelSystem, ResonanceSpec

__all__ = [
    "ConfigError",
    "SimulateSettings",
    "SweepSettings",
    "load_emitter_config",
    "load_simulate_config",
    "load_sweep_config",
    "parse_key_values",
    "read_config_mapping",
]


class ConfigError(ValueError):
    """Malformed configuration: bad syntax, schema, or missing key."""


def parse_key_values(text: str, path: str = "<config>") -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.split("#", 1)[0].strip()
        if not key or not value:
            raise ConfigError(f"{path}:{lineno}: empty key or value")
        if key in pairs:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def read_config_mapping(path: str | Path, expected_schema: str) -> dict[str, str]:
    """Read a config file (or a run manifest) and check its schema."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            manifest = json.loads(text)
            pairs = {str(k): str(v) for k, v in manifest["config"].items()}
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ConfigError(f"{path}: not a valid run manifest: {exc}") from exc
    else:
        pairs = parse_key_values(text, str(path))
    schema = pairs.get("schema")
    if schema is None:
        raise ConfigError(f"{path}: missing key 'schema' (versioned header line)")
    if schema != expected_schema:
        raise ConfigError(
            f"{path}: schema {schema!r} is not supported; expected {expected_schema!r}"
        )
    return pairs


class _Reader:
    """Typed access over a flat mapping that tracks consumed keys."""

    def __init__(self, pairs: dict[str, str], path: str):
        self.pairs = pairs
        self.path = path
        self.used: set[str] = {"schema"}

    def _raw(self, key: str, default=None, required: bool = False):
        if key in self.pairs:
            self.used.add(key)
            return self.pairs[key]
        if required:
            raise ConfigError(f"{self.path}: missing key {key!r}")
        return default

    def get_float(self, key: str, default: float | None = None) -> float:
        raw = self._raw(key, required=default is None)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"{self.path}: key {key!r}: not a number: {raw!r}") from exc

    def get_int(self, key: str, default: int | None = None) -> int:
        raw = self._raw(key, required=default is None)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"{self.path}: key {key!r}: not an integer: {raw!r}") from exc

    def get_bool(self, key: str, default: bool) -> bool:
        raw = self._raw(key)
        if raw is None:
            return default
        low = raw.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"{self.path}: key {key!r}: not a boolean: {raw!r}")

    def get_str(self, key: str, default: str | None = None) -> str:
        return self._raw(key, default=default, required=default is None)

    def reject_unused(self) -> None:
        unknown = sorted(set(self.pairs) - self.used)
        if unknown:
            raise ConfigError(f"{self.path}: unknown key(s): {', '.join(unknown)}")


def load_emitter_config(path: str | Path) -> tuple[LevelSystem, ResonanceSpec]:
    """Parse an emitter-config/1 file into (LevelSystem, ResonanceSpec)."""
    pairs = read_config_mapping(path, "emitter-config/1")
    r = _Reader(pairs, str(path))

    indices = set()
    for key in pairs:
        parts = key.split(".")
        if parts[0] == "levels" and len(parts) == 3:
            try:
                indices.add(int(parts[1]))
            except ValueError as exc:
                raise ConfigError(f"{path}: bad level index in {key!r}") from exc
    if not indices:
        raise ConfigError(f"{path}: missing key 'levels.1.freq'")
    n = max(indices)
    if indices != set(range(1, n + 1)):
        raise ConfigError(f"{path}: level indices must be contiguous 1..{n}")

    freqs = []
    labels = []
    for i in range(1, n + 1):
        freqs.append(r.get_float(f"levels.{i}.freq"))
        labels.append(r.get_str(f"levels.{i}.label", default=f"level-{i}"))

    dipoles = np.zeros((n, n), dtype=complex)
    seen: set[tuple[int, int]] = set()
    for key in sorted(pairs):
        parts = key.split(".")
        if parts[0] != "dipole":
            continue
        if len(parts) != 4 or parts[3] not in ("re", "im"):
            raise ConfigError(f"{path}: bad dipole key {key!r}; use dipole.J.K.re/.im")
        j, k = int(parts[1]), int(parts[2])
        if not (1 <= j <= n and 1 <= k <= n) or j == k:
            raise ConfigError(f"{path}: dipole indices out of range in {key!r}")
        value = r.get_float(key)
        if (k, j) in seen and (j, k) not in seen:
            raise ConfigError(
                f"{path}: dipole ({j},{k}) conflicts with its conjugate entry; "
                "specify each pair once"
            )
        seen.add((j, k))
        component = value if parts[3] == "re" else 1j * value
        dipoles[j - 1, k - 1] += component
        dipoles[k - 1, j - 1] += np.conj(component)

    hbar = r.get_float("hbar")
    kind = r.get_str("resonance.kind")
    spec_kwargs = dict(
        kind=kind,
        omega21=r.get_float("resonance.omega21"),
        omega_r=r.get_float("resonance.omega_r"),
        coupling=r.get_float("resonance.coupling"),
        resonance_tolerance=r.get_float("resonance.tolerance", default=0.1),
    )
    if kind == "two-quantum":
        spec_kwargs.update(
            omega_c=r.get_float("resonance.omega_c"),
            delta_omega_c=r.get_float("resonance.delta_omega_c"),
            bandwidth_ratio_max=r.get_float("resonance.bandwidth_ratio_max", default=0.1),
        )
        g = r.get_float("resonance.g", default=float("nan"))
        if not np.isnan(g):
            spec_kwargs["g"] = g
    r.reject_unused()

    try:
        system = LevelSystem(
            freqs=tuple(freqs), dipoles=dipoles, hbar=hbar, labels=tuple(labels)
        )
        spec = ResonanceSpec(**spec_kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return system, spec


@dataclass(frozen=True)
class SimulateSettings:
    chi: float
    eta: float
    tau_end: float
    steps: int
    p_excited: float
    coherence: complex
    collision_enabled: bool
    collision_substeps: int
    fock_cutoff: int
    mc_enabled: bool
    mc_n_traj: int
    mc_substeps: int
    tol_rk4: float
    tol_collision: float
    tol_mc_sigmas: float
    convergence_halvings: int
    convergence_dtau: float
    seed: int

    def resolved(self) -> dict[str, str]:
        """Flat, fully-defaulted key-value view for the run manifest."""
        return {
            "schema": "simulate-config/1",
            "chi": repr(self.chi),
            "eta": repr(self.eta),
            "tau_end": repr(self.tau_end),
            "steps": str(self.steps),
            "rho0.p_excited": repr(self.p_excited),
            "rho0.coherence.re": repr(self.coherence.real),
            "rho0.coherence.im": repr(self.coherence.imag),
            "collision.enabled": str(self.collision_enabled).lower(),
            "collision.substeps": str(self.collision_substeps),
            "collision.fock_cutoff": str(self.fock_cutoff),
            "mc.enabled": str(self.mc_enabled).lower(),
            "mc.n_traj": str(self.mc_n_traj),
            "mc.substeps": str(self.mc_substeps),
            "tol.rk4": repr(self.tol_rk4),
            "tol.collision": repr(self.tol_collision),
            "tol.mc_sigmas": repr(self.tol_mc_sigmas),
            "convergence.halvings": str(self.convergence_halvings),
            "convergence.dtau": repr(self.convergence_dtau),
            "seed": str(self.seed),
        }


def load_simulate_config(path: str | Path) -> SimulateSettings:
    pairs = read_config_mapping(path, "simulate-config/1")
    r = _Reader(pairs, str(path))
    tau_end = r.get_float("tau_end")
    steps = r.get_int("steps", default=200)
    grid_dt = tau_end / steps if steps else 0.0
    settings = SimulateSettings(
        chi=r.get_float("chi"),
        eta=r.get_float("eta"),
        tau_end=tau_end,
        steps=steps,
        p_excited=r.get_float("rho0.p_excited", default=1.0),
        coherence=complex(
            r.get_float("rho0.coherence.re", default=0.0),
            r.get_float("rho0.coherence.im", default=0.0),
        ),
        collision_enabled=r.get_bool("collision.enabled", default=True),
        collision_substeps=r.get_int("collision.substeps", default=1),
        fock_cutoff=r.get_int("collision.fock_cutoff", default=1),
        mc_enabled=r.get_bool("mc.enabled", default=False),
        mc_n_traj=r.get_int("mc.n_traj", default=2000),
        mc_substeps=r.get_int("mc.substeps", default=1),
        tol_rk4=r.get_float("tol.rk4", default=1e-6),
        tol_collision=r.get_float("tol.collision", default=10.0 * grid_dt),
        tol_mc_sigmas=r.get_float("tol.mc_sigmas", default=5.0),
        convergence_halvings=r.get_int("convergence.halvings", default=0),
        convergence_dtau=r.get_float("convergence.dtau", default=1e-2),
        seed=r.get_int("seed", default=0),
    )
    r.reject_unused()
    if settings.steps < 1:
        raise ConfigError(f"{path}: steps must be >= 1")
    if settings.tau_end <= 0:
        raise ConfigError(f"{path}: tau_end must be positive")
    if settings.collision_substeps < 1 or settings.mc_substeps < 1:
        raise ConfigError(f"{path}: substeps must be >= 1")
    return settings


@dataclass(frozen=True)
class SweepSettings:
    chi: float
    eta_start: float
    eta_stop: float
    eta_count: int
    seed: int

    def resolved(self) -> dict[str, str]:
        return {
            "schema": "sweep-config/1",
            "chi": repr(self.chi),
            "eta.start": repr(self.eta_start),
            "eta.stop": repr(self.eta_stop),
            "eta.count": str(self.eta_count),
            "seed": str(self.seed),
        }


def load_sweep_config(path: str | Path) -> SweepSettings:
    pairs = read_config_mapping(path, "sweep-config/1")
    r = _Reader(pairs, str(path))
    settings = SweepSettings(
        chi=r.get_float("chi"),
        eta_start=r.get_float("eta.start"),
        eta_stop=r.get_float("eta.stop"),
        eta_count=r.get_int("eta.count", default=101),
        seed=r.get_int("seed", default=0),
    )
    r.reject_unused()
    if settings.eta_count < 2:
        raise ConfigError(f"{path}: eta.count must be >= 2")
    if not settings.eta_stop > settings.eta_start:
        raise ConfigError(f"{path}: eta.stop must exceed eta.start (monotone grid)")
    return settings
