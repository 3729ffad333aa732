"""Closed-form bound states used as references for the lattice evolution.

* A Dirac particle in a square well whose walls are mass steps
  (bag-type boundary conditions): transcendental wavenumber equation and
  the region-II spinor.
* The Dirac particle in a parabolic mass profile, which in the
  nonrelativistic limit is a Schrödinger harmonic oscillator: Hermite
  function states and the position-dependent mass / Lorentz factor
  profiles fed to the stepper.

Both models place states in the rotating (Dirac) frame, upper component
first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import brentq

from .errors import DomainError, NoRoot
from .evolution import CollideParams
from .numerics import SpinorField

__all__ = [
    "Closure",
    "SquareWellSpec",
    "HarmonicSpec",
    "p_ratio",
    "well_residual",
    "solve_well_wavenumber",
    "well_coefficients",
    "well_spinor",
    "chiral_components",
    "well_eigenstate",
    "well_profiles",
    "well_collide_params",
    "hermite_polynomial",
    "hermite_state",
    "harmonic_profiles",
    "harmonic_collide_params",
]

Closure = Literal["rest_energy", "relativistic"]


@dataclass(frozen=True)
class SquareWellSpec:
    """Square well of width ``well_length`` bounded by mass barriers.

    Attributes:
        well_length: Width ``L`` of the low-mass region.
        inner_mass: Mass ``m`` inside the well.
        barrier_mass: Mass ``M > m`` outside the well.
        grid_points: Lattice size used when sampling the state.
        ell: Grid spacing used when sampling the state.
        closure: Energy closure of ``P = k/(E + m)``: ``"rest_energy"``
            replaces ``E + m`` by ``2m``; ``"relativistic"`` uses
            ``E = sqrt(k^2 + m^2)``.
    """

    well_length: float
    inner_mass: float
    barrier_mass: float | None = None
    grid_points: int = 256
    ell: float = 1.0
    closure: Closure = "rest_energy"

    def __post_init__(self) -> None:
        if not self.well_length > 0:
            raise DomainError("well_length must be positive")
        if not self.inner_mass > 0:
            raise DomainError("inner_mass must be positive")
        if self.barrier_mass is not None and not self.barrier_mass > self.inner_mass:
            raise DomainError("barrier_mass must exceed inner_mass")
        if self.closure not in ("rest_energy", "relativistic"):
            raise ValueError(f"unknown closure {self.closure!r}")
        if self.ell <= 0:
            raise DomainError("ell must be positive")

    @property
    def well_sites(self) -> int:
        """Number of lattice spacings spanned by the well."""
        return int(round(self.well_length / self.ell))

    @property
    def left_wall(self) -> int:
        """Site index of the left wall; the well is centered on the lattice."""
        return (self.grid_points - self.well_sites) // 2


@dataclass(frozen=True)
class HarmonicSpec:
    """Parabolic mass profile ``m(z) = m + (kappa/2)(z - L/2)^2``.

    Attributes:
        base_mass: Mass ``m`` at the center.
        stiffness: Curvature ``kappa``.
        grid_points: Lattice size ``L``.
        level: Oscillator level ``n``.
        ell: Grid spacing.
    """

    base_mass: float
    stiffness: float
    grid_points: int
    level: int = 0
    ell: float = 1.0

    def __post_init__(self) -> None:
        if not (self.base_mass > 0 and self.stiffness > 0):
            raise DomainError("base_mass and stiffness must be positive")
        if self.level < 0:
            raise ValueError("level must be >= 0")
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")

    @property
    def b(self) -> float:
        """Gaussian exponent ``sqrt(m kappa / 4)``."""
        return math.sqrt(self.base_mass * self.stiffness / 4.0)

    @property
    def varsigma(self) -> float:
        """Hermite argument scale ``(m kappa)^(1/4)``."""
        return (self.base_mass * self.stiffness) ** 0.25

    def offsets(self) -> NDArray[np.float64]:
        """Site positions relative to the center ``L/2``."""
        z = np.arange(self.grid_points) * self.ell
        return z - 0.5 * self.grid_points * self.ell


def p_ratio(k: ArrayLike, m: float, closure: Closure = "rest_energy") -> NDArray[np.float64]:
    """``P = k/(E + m)`` under the chosen energy closure."""
    k = np.asarray(k, dtype=float)
    if closure == "rest_energy":
        return k / (2.0 * m)
    if closure == "relativistic":
        return k / (np.hypot(k, m) + m)
    raise ValueError(f"unknown closure {closure!r}")


def well_residual(k: ArrayLike, spec: SquareWellSpec) -> NDArray[np.float64]:
    """``cot(k L / 2) - P(k)``; zero at a bound-state wavenumber."""
    k = np.asarray(k, dtype=float)
    return 1.0 / np.tan(0.5 * k * spec.well_length) - p_ratio(k, spec.inner_mass, spec.closure)


def solve_well_wavenumber(spec: SquareWellSpec) -> float:
    """Smallest positive root of ``cot(k L/2) = P(k)``.

    The interval ``(0, 2 pi / L]`` is scanned in steps of ``pi/(50 L)`` to
    bracket the first sign change (the cotangent is continuous there), which
    is then refined with Brent's method to ``1e-14``.

    Raises:
        NoRoot: If no sign change is found.
    """
    length = spec.well_length
    dk = math.pi / (50.0 * length)
    upper = 2.0 * math.pi / length
    grid = np.arange(1, int(round(upper / dk)) + 1) * dk
    grid = grid[grid < upper]  # exclude the pole at kL/2 = pi
    vals = well_residual(grid, spec)
    sign_change = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if sign_change.size == 0:
        raise NoRoot("no crossing of cot(kL/2) and P in (0, 2 pi/L)")
    i = int(sign_change[0])
    f = lambda k: float(well_residual(k, spec))  # noqa: E731
    k = brentq(f, grid[i], grid[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    if abs(f(k)) > 1e-10:
        raise NoRoot(f"root refinement did not converge (residual {f(k):.3e})")
    return float(k)


def well_coefficients(spec: SquareWellSpec, k: float) -> tuple[complex, complex, float]:
    """Return ``(B, C, P)`` with ``B = 1`` and ``C = B (iP - 1)/(iP + 1)``."""
    p = float(p_ratio(k, spec.inner_mass, spec.closure))
    b = 1.0 + 0j
    c = b * (1j * p - 1.0) / (1j * p + 1.0)
    return b, c, p


def well_spinor(spec: SquareWellSpec, k: float, z: ArrayLike) -> NDArray[np.complex128]:
    """Region-II spinor at positions ``z`` measured from the left wall (unnormalized).

    ``psi(z) = (B e^{ikz} + C e^{-ikz}, P (B e^{ikz} - C e^{-ikz}))``.
    """
    b, c, p = well_coefficients(spec, k)
    z = np.asarray(z, dtype=float)
    fwd = b * np.exp(1j * k * z)
    bwd = c * np.exp(-1j * k * z)
    return np.stack([fwd + bwd, p * (fwd - bwd)], axis=-1)


def chiral_components(psi: ArrayLike) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Split a Dirac-frame spinor into ``(psi_L, psi_R) = ((u + d), (u - d))/sqrt 2``.

    These are the two components of ``R psi``; at the walls they obey
    ``psi_L(0) = -i psi_R(0)`` and ``psi_L(L) = +i psi_R(L)``.
    """
    psi = np.asarray(psi, dtype=complex)
    u, d = psi[..., 0], psi[..., 1]
    return (u + d) / math.sqrt(2.0), (u - d) / math.sqrt(2.0)


def well_eigenstate(spec: SquareWellSpec, k: float) -> SpinorField:
    """Normalized lattice sampling of the well's bound state.

    Sites from the left wall through the right wall (inclusive) carry the
    region-II spinor; all barrier sites are zero.
    """
    n = spec.grid_points
    left = spec.left_wall
    if left < 1 or left + spec.well_sites >= n:
        raise DomainError("well does not fit inside the lattice with a barrier on both sides")
    sites = np.zeros((n, 2), dtype=complex)
    idx = np.arange(left, left + spec.well_sites + 1)
    sites[idx] = well_spinor(spec, k, (idx - left) * spec.ell)
    return SpinorField(sites, ell=spec.ell).normalized()


def well_profiles(spec: SquareWellSpec, k: float) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Per-site mass and Lorentz factor for evolving the well eigenstate.

    The well (walls included) has the inner mass and ``gamma = E/m`` with
    ``E = sqrt(k^2 + m^2)``; barrier sites carry the barrier mass with
    ``gamma = 1``.
    """
    if spec.barrier_mass is None:
        raise DomainError("barrier_mass is required to build profiles")
    n = spec.grid_points
    left = spec.left_wall
    inside = np.zeros(n, dtype=bool)
    inside[left : left + spec.well_sites + 1] = True
    m = spec.inner_mass
    mass = np.where(inside, m, spec.barrier_mass)
    gamma = np.where(inside, math.hypot(k, m) / m, 1.0)
    return mass, gamma


def well_collide_params(spec: SquareWellSpec, k: float) -> CollideParams:
    """:class:`CollideParams` (gamma form) for the well experiment."""
    mass, gamma = well_profiles(spec, k)
    return CollideParams(mass=mass, gamma=gamma, ell=spec.ell, tau=spec.ell)


def hermite_polynomial(n: int, x: ArrayLike) -> NDArray[np.float64]:
    """Physicists' Hermite polynomial by ``H_{j+1} = 2x H_j - 2j H_{j-1}``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev
    h = 2.0 * x
    for j in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * j * h_prev
    return h


def hermite_state(spec: HarmonicSpec) -> SpinorField:
    """Normalized oscillator level ``n`` in the upper component.

    ``phi(z) = H_n(varsigma x) exp(-b x^2)`` with ``x = z - L/2``; the lower
    component vanishes.

    Raises:
        ValueError: For ``n > 10``, where the recurrence is not validated.
    """
    if spec.level > 10:
        raise ValueError("hermite_state supports levels n <= 10")
    x = spec.offsets()
    phi = hermite_polynomial(spec.level, spec.varsigma * x) * np.exp(-spec.b * x * x)
    sites = np.zeros((spec.grid_points, 2), dtype=complex)
    sites[:, 0] = phi
    return SpinorField(sites, ell=spec.ell).normalized()


def harmonic_profiles(spec: HarmonicSpec) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Site-sampled mass ``m(z)`` and Lorentz factor ``gamma(z)``.

    ``m(z) = m + (kappa/2) x^2`` and ``gamma = sqrt(|k|^2 + m(z)^2)/m(z)``
    with the generally complex wavenumber
    ``k(z) = 2b sqrt(-2x^2 + sqrt(4x^4 - m(z)^2 x^2 / b^2))`` evaluated in
    complex arithmetic (principal square roots).
    """
    x = spec.offsets()
    mass = spec.base_mass + 0.5 * spec.stiffness * x * x
    b = spec.b
    x2 = x.astype(complex) ** 2
    inner = np.sqrt(4.0 * x2 * x2 - (mass * mass) * x2 / (b * b))
    k = 2.0 * b * np.sqrt(-2.0 * x2 + inner)
    gamma = np.sqrt(np.abs(k) ** 2 + mass * mass) / mass
    return mass, gamma


def harmonic_collide_params(
    spec: HarmonicSpec, gamma_profile: Literal["local", "unity"] = "local"
) -> CollideParams:
    """:class:`CollideParams` (gamma form) for the oscillator experiment.

    Args:
        spec: Oscillator specification.
        gamma_profile: ``"local"`` feeds :func:`harmonic_profiles`'
            ``gamma(z)``; ``"unity"`` uses ``gamma = 1`` everywhere so the
            local rest energy is exactly ``m(z)`` (and ``xi = 0``).
    """
    mass, gamma = harmonic_profiles(spec)
    if gamma_profile == "unity":
        gamma = np.ones_like(mass)
    elif gamma_profile != "local":
        raise ValueError(f"unknown gamma_profile {gamma_profile!r}")
    return CollideParams(mass=mass, gamma=gamma, ell=spec.ell, tau=spec.ell)
