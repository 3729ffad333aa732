"""Experiment drivers behind the command-line runner.

Each driver takes a fully-resolved :class:`RunConfig` and returns an
:class:`ExperimentResult` holding derived constants and the tables to be
written; no file I/O happens here.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Callable

import numpy as np
from numpy.typing import NDArray

from .analytic import (
    HarmonicSpec,
    SquareWellSpec,
    chiral_components,
    harmonic_collide_params,
    hermite_state,
    solve_well_wavenumber,
    well_collide_params,
    well_eigenstate,
    well_spinor,
)
from .engine import (
    many_body_step,
    one_body_amplitudes,
    one_body_state,
    sector_populations,
)
from .errors import ConfigError
from .evolution import (
    CollideParams,
    continuum_energy,
    evolve,
    grid_dispersion,
    m_grid,
    observables,
    p_grid,
    step,
)
from .gates import (
    GateSpec,
    aswap_gate,
    chiral_collide_gate,
    chiral_collide_gate_ladder,
    chiral_generator,
    conservative_gate,
    gate_generator,
    jw_ladder,
    rotate_qubit,
    sqrt_aswap_gate,
    sqrt_swap_gate,
    swap_gate,
)
from .numerics import SpinorField, l2_norm, unitarity_defect
from .path_kernel import PathProblem, count_paths, enumerate_kernel, kernel_matrix

__all__ = [
    "EXPERIMENTS",
    "RunConfig",
    "ExperimentResult",
    "modulus_l2_error",
    "run_experiment",
    "dispersion_rows",
    "gate_algebra_report",
]

EXPERIMENTS = ("free", "square_well", "harmonic", "kernel", "gates_selftest", "many_body")

TIMESERIES_COLUMNS = ("t", "site", "density", "flux0", "re_up", "im_up", "re_down", "im_down")

_DEFAULTS: dict[str, dict[str, Any]] = {
    "free": dict(grid_points=256, steps=1000, record_every=100, mass=0.3, gamma=1.2),
    "square_well": dict(
        grid_points=256, steps=200, record_every=10, mass=0.5, barrier_mass=5.0, well_length=128.0
    ),
    "harmonic": dict(grid_points=1024, steps=20000, record_every=100, mass=0.5, level=0),
    "kernel": dict(steps=9, magnetization=3, mass=0.3),
    "gates_selftest": dict(),
    "many_body": dict(grid_points=8, steps=100, record_every=10, mass=0.3, gamma=1.5),
}


@dataclass(frozen=True)
class RunConfig:
    """Configuration of one CLI run.

    Unset physical parameters (``None``) are filled with per-experiment
    defaults by :meth:`resolved`.
    """

    experiment: str = "free"
    grid_points: int | None = None
    steps: int | None = None
    record_every: int | None = None
    mass: float | None = None
    barrier_mass: float | None = None
    well_length: float | None = None
    kappa: float | None = None
    level: int | None = None
    magnetization: int | None = None
    gamma: float | None = None
    gamma_profile: str = "local"
    closure: str = "rest_energy"
    output_path: str = "qlg-out"
    seed: int = 0

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def resolved(self) -> RunConfig:
        """Fill defaults and validate; raises :class:`ConfigError`."""
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        updates = {k: v for k, v in _DEFAULTS[self.experiment].items() if getattr(self, k) is None}
        cfg = replace(self, **updates)
        if cfg.experiment == "harmonic" and cfg.kappa is None:
            cfg = replace(cfg, kappa=0.01 / cfg.grid_points**2)
        if cfg.record_every is None and cfg.steps is not None:
            cfg = replace(cfg, record_every=cfg.steps or 1)
        cfg._validate()
        return cfg

    def _validate(self) -> None:
        if self.experiment == "gates_selftest":
            return
        if self.steps is None or self.steps < 0:
            raise ConfigError("steps must be a nonnegative integer")
        if self.record_every is not None and self.record_every < 1:
            raise ConfigError("record_every must be >= 1")
        if self.grid_points is not None and self.grid_points < 2:
            raise ConfigError("grid must have at least 2 points")
        if self.mass is not None and self.mass < 0:
            raise ConfigError("mass must be >= 0")
        if self.gamma_profile not in ("local", "unity"):
            raise ConfigError("gamma_profile must be 'local' or 'unity'")
        if self.closure not in ("rest_energy", "relativistic"):
            raise ConfigError("closure must be 'rest_energy' or 'relativistic'")
        if self.experiment == "many_body" and not 2 <= self.grid_points <= 8:
            raise ConfigError("many_body supports 2..8 sites (Q = 2L <= 16)")
        if self.experiment == "kernel" and self.steps < 1:
            raise ConfigError("kernel needs steps >= 1")

    def echo(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class ExperimentResult:
    """Derived constants plus tables destined for CSV/JSON files."""

    derived: dict[str, Any] = field(default_factory=dict)
    timeseries: list[tuple[int, NDArray[np.complex128]]] = field(default_factory=list)
    errors: list[tuple[int, float]] | None = None
    tables: dict[str, tuple[tuple[str, ...], list[tuple[Any, ...]]]] = field(default_factory=dict)
    reports: dict[str, Any] = field(default_factory=dict)
    snapshot: tuple[Any, int, int] | None = None
    ok: bool = True


def modulus_l2_error(field_: SpinorField | NDArray[np.complex128], reference: NDArray[np.float64]) -> float:
    """L2 distance between ``sqrt(psi^dagger psi)`` and a reference modulus.

    Both profiles are normalized to unit L2 norm first, so the result is
    insensitive to global phase and overall scale.
    """
    arr = field_.sites if isinstance(field_, SpinorField) else np.asarray(field_)
    mod = np.sqrt(np.sum(np.abs(arr) ** 2, axis=1))
    ref = np.asarray(reference, dtype=float)
    return float(np.linalg.norm(mod / np.linalg.norm(mod) - ref / np.linalg.norm(ref)))


def _profile_hash(*arrays: NDArray[np.float64]) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a, dtype="<f8").tobytes())
    return h.hexdigest()


def _run_free(cfg: RunConfig) -> ExperimentResult:
    rng = np.random.default_rng(cfg.seed)
    n = cfg.grid_points
    field_ = SpinorField(rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))).normalized()
    params = CollideParams(mass=cfg.mass, gamma=cfg.gamma)
    eps, xi = params.angles(1)
    res = ExperimentResult(derived={"epsilon": float(eps[0]), "xi": float(xi[0])})
    drift = 0.0
    for t, f in evolve(field_, params, cfg.steps, record_every=cfg.record_every):
        drift = max(drift, abs(l2_norm(f) - 1.0))
        res.timeseries.append((t, f.sites))
    res.derived["max_norm_drift"] = drift
    return res


def _run_square_well(cfg: RunConfig) -> ExperimentResult:
    spec = SquareWellSpec(
        well_length=cfg.well_length,
        inner_mass=cfg.mass,
        barrier_mass=cfg.barrier_mass,
        grid_points=cfg.grid_points,
        closure=cfg.closure,  # type: ignore[arg-type]
    )
    k = solve_well_wavenumber(spec)
    field_ = well_eigenstate(spec, k)
    params = well_collide_params(spec, k)
    mass, gamma = params.profiles(cfg.grid_points)
    eps, _ = params.angles(cfg.grid_points)
    reference = np.sqrt(observables(field_).density)
    inside = mass == cfg.mass
    psi0 = well_spinor(spec, k, np.array([0.0, spec.well_length]))
    left, right = chiral_components(psi0)
    res = ExperimentResult(
        derived={
            "k": k,
            "energy": math.hypot(k, cfg.mass),
            "gamma_inner": float(gamma[inside][0]),
            "epsilon_inner": float(eps[inside][0]),
            "epsilon_barrier": float(eps[~inside][0]),
            "left_wall_site": spec.left_wall,
            "gamma_profile_sha256": _profile_hash(mass, gamma),
            "wall_residual_left": float(abs(left[0] + 1j * right[0]) / abs(right[0])),
            "wall_residual_right": float(abs(left[1] - 1j * right[1]) / abs(right[1])),
        },
        errors=[],
    )
    rho0 = observables(field_).density
    dev = barrier = 0.0
    for t, f in evolve(field_, params, cfg.steps, frame="rotating", record_every=cfg.record_every):
        rho = observables(f).density
        dev = max(dev, float(np.linalg.norm(rho - rho0) / np.linalg.norm(rho0)))
        barrier = max(barrier, float(rho[~inside].max() / rho.max()))
        res.timeseries.append((t, f.sites))
        res.errors.append((t, modulus_l2_error(f, reference)))
    res.derived["max_density_deviation"] = dev
    res.derived["max_barrier_to_peak"] = barrier
    return res


def _run_harmonic(cfg: RunConfig) -> ExperimentResult:
    spec = HarmonicSpec(cfg.mass, cfg.kappa, cfg.grid_points, cfg.level)
    field_ = hermite_state(spec)
    params = harmonic_collide_params(spec, cfg.gamma_profile)  # type: ignore[arg-type]
    mass, gamma = params.profiles(cfg.grid_points)
    reference = np.abs(field_.up)
    res = ExperimentResult(
        derived={
            "b": spec.b,
            "varsigma": spec.varsigma,
            "gamma_max": float(gamma.max()),
            "mass_edge": float(mass[0]),
            "gamma_profile_sha256": _profile_hash(mass, gamma),
        },
        errors=[],
    )
    for t, f in evolve(field_, params, cfg.steps, frame="rotating", record_every=cfg.record_every):
        res.timeseries.append((t, f.sites))
        res.errors.append((t, modulus_l2_error(f, reference)))
    later = [e for t, e in res.errors if t > 0]
    if later:
        res.derived["min_l2_error"] = min(later)
        res.derived["final_l2_error"] = later[-1]
    return res


def _run_kernel(cfg: RunConfig) -> ExperimentResult:
    mag = cfg.magnetization if cfg.magnetization is not None else cfg.steps % 2
    prob = PathProblem(cfg.steps, mag, cfg.mass)
    km = kernel_matrix(prob)
    rows = []
    worst = 0.0
    for i, s0 in enumerate((1, -1)):
        for j, sn in enumerate((1, -1)):
            e = enumerate_kernel(prob, s0, sn)
            worst = max(worst, abs(e - km[i, j]))
            rows.append((s0, sn, e.real, e.imag, km[i, j].real, km[i, j].imag))
    res = ExperimentResult(
        derived={
            "path_count": count_paths(prob),
            "epsilon": prob.epsilon,
            "max_enumeration_transfer_diff": worst,
            "modes": 2 * prob.n_steps + 1,
        }
    )
    res.tables["kernel.csv"] = (("s0", "sN", "re_enum", "im_enum", "re_transfer", "im_transfer"), rows)
    return res


def _run_many_body(cfg: RunConfig) -> ExperimentResult:
    n = cfg.grid_points
    rng = np.random.default_rng(cfg.seed)
    field_ = SpinorField(rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))).normalized()
    params = CollideParams(mass=cfg.mass, gamma=cfg.gamma, form="tau")
    state = one_body_state(field_)
    lattice = field_.sites
    res = ExperimentResult(derived={"epsilon": cfg.mass, "qubits": 2 * n}, errors=[])
    res.timeseries.append((0, one_body_amplitudes(state)))
    res.errors.append((0, 0.0))
    worst = 0.0
    for t in range(1, cfg.steps + 1):
        state = many_body_step(state, n, params)
        lattice = step(lattice, params)
        amps = one_body_amplitudes(state)
        worst = max(worst, float(np.max(np.abs(amps - lattice))))
        if t % cfg.record_every == 0 or t == cfg.steps:
            res.timeseries.append((t, amps))
            res.errors.append((t, float(np.linalg.norm(amps - lattice))))
    res.derived["max_amplitude_deviation"] = worst
    res.derived["final_norm"] = state.norm
    res.derived["final_sector_populations"] = [float(p) for p in sector_populations(state)]
    res.snapshot = (state, n, cfg.steps)
    return res


def gate_algebra_report(seed: int = 0) -> dict[str, float]:
    """Residuals of the gate-algebra identities (all should be tiny)."""
    rng = np.random.default_rng(seed)
    out: dict[str, float] = {}
    worst = 0.0
    for q in (2, 3, 4, 6):
        ops = [jw_ladder(i, q) for i in range(1, q + 1)]
        eye = np.eye(1 << q)
        for i, (ai, adi) in enumerate(ops):
            for j, (aj, adj) in enumerate(ops):
                worst = max(
                    worst,
                    np.max(np.abs(ai @ adj + adj @ ai - (i == j) * eye)),
                    np.max(np.abs(ai @ aj + aj @ ai)),
                    np.max(np.abs(adi @ adj + adj @ adi)),
                )
    out["anticommutators_q_le_6"] = float(worst)
    xi = float(rng.uniform(0, 2 * np.pi))
    c, s = np.exp(-1j * xi), np.exp(1j * xi)
    displayed = {
        "swap": (swap_gate(xi, 1), [[1, 0, 0, 0], [0, 0, c, 0], [0, s, 0, 0], [0, 0, 0, -1]]),
        "sqrt_swap": (
            sqrt_swap_gate(xi),
            [[1, 0, 0, 0], [0, (1 + 1j) / 2, (1 - 1j) / 2 * c, 0], [0, (1 - 1j) / 2 * s, (1 + 1j) / 2, 0], [0, 0, 0, 1]],
        ),
        "aswap": (aswap_gate(xi, 1), [[1, 0, 0, 0], [0, 0, -c, 0], [0, s, 0, 0], [0, 0, 0, 1j]]),
        "sqrt_aswap": (
            sqrt_aswap_gate(xi),
            [[1, 0, 0, 0], [0, 2**-0.5, -(2**-0.5) * c, 0], [0, 2**-0.5 * s, 2**-0.5, 0], [0, 0, 0, 1]],
        ),
    }
    for name, (got, want) in displayed.items():
        out[f"{name}_vs_displayed"] = float(np.max(np.abs(got - np.asarray(want))))
    inv = 0.0
    for family in ("idempotent", "tri_idempotent"):
        z = 1j * rng.uniform(-np.pi, np.pi)
        spec = GateSpec(z, xi=float(rng.uniform(0, 6)), family=family)
        g = conservative_gate(spec)
        g_inv = conservative_gate(replace(spec, z=-z))
        inv = max(inv, float(np.max(np.abs(g @ g_inv - np.eye(4)))), unitarity_defect(g))
    out["upsilon_inverse_and_unitarity"] = inv
    h = gate_generator(GateSpec(1j, xi=0.4, family="tri_idempotent"))
    out["tri_idempotent_h3_minus_h"] = float(np.max(np.abs(h @ h @ h - h)))
    eps = float(rng.uniform(0, 1))
    params = CollideParams(mass=eps, gamma=float(rng.uniform(1, 3)), form="tau")
    out["chiral_gate_ladder_vs_direct"] = float(
        np.max(np.abs(chiral_collide_gate(params) - chiral_collide_gate_ladder(params)))
    )
    nmat = chiral_generator(params)
    out["chiral_generator_n3_minus_n"] = float(np.max(np.abs(nmat @ nmat @ nmat - nmat)))
    rod = 0.0
    for _ in range(100):
        q = rng.normal(size=3)
        axis = rng.normal(size=3)
        angle = float(rng.uniform(-np.pi, np.pi))
        q /= np.linalg.norm(q)
        axis /= np.linalg.norm(axis)
        a = rotate_qubit(q, axis, angle, "similarity")
        b = rotate_qubit(q, axis, angle, "rodrigues")
        rod = max(rod, float(np.max(np.abs(a - b))))
    out["rotation_similarity_vs_rodrigues"] = rod
    return out


def _run_gates_selftest(cfg: RunConfig) -> ExperimentResult:
    report = gate_algebra_report(cfg.seed)
    res = ExperimentResult(reports={"selftest.json": report})
    res.ok = all(v < 1e-12 for v in report.values())
    res.derived["all_passed"] = res.ok
    return res


_DRIVERS: dict[str, Callable[[RunConfig], ExperimentResult]] = {
    "free": _run_free,
    "square_well": _run_square_well,
    "harmonic": _run_harmonic,
    "kernel": _run_kernel,
    "gates_selftest": _run_gates_selftest,
    "many_body": _run_many_body,
}


def run_experiment(cfg: RunConfig) -> ExperimentResult:
    """Resolve ``cfg`` and run its experiment."""
    cfg = cfg.resolved()
    return _DRIVERS[cfg.experiment](cfg)


def dispersion_rows(m: float, ell: float = 1.0, tau: float = 1.0, samples: int = 257) -> list[tuple[float, ...]]:
    """Rows ``(k, p_grid, m_grid, E_grid, E_continuum)`` for ``k`` in ``[0, pi/ell]``.

    With an odd number of samples the middle row lies exactly at
    ``ell k = pi/2``.
    """
    if samples < 2:
        raise ConfigError("samples must be >= 2")
    k = np.arange(samples) * (math.pi / ell) / (samples - 1)
    cols = (k, p_grid(k, ell, tau), m_grid(k, m, ell), grid_dispersion(k, m, ell, tau), continuum_energy(k, m))
    return [tuple(float(c[i]) for c in cols) for i in range(samples)]
