"""The quantum lattice gas time stepper for the 1+1 dimensional Dirac equation.

One time step is a site-local *collide* unitary followed by a *stream* shift
that moves the spin-up amplitudes one site towards ``+z`` and the spin-down
amplitudes one site towards ``-z`` (periodic wrap).  With this stream
direction the effective Hamiltonian in the chiral frame is
``h = sigma_z p + m sigma_x`` (i.e. ``alpha = +sigma_z``); in the rotating
(Dirac) frame ``psi = R eta`` it becomes ``h = sigma_x p + m sigma_z`` so the
upper component carries positive energy in the nonrelativistic limit.

Two parameterizations of the collide angle are supported:

* ``form="gamma"`` (default): ``eps = sin(gamma m ell) / gamma`` with the
  Lorentz factor ``gamma = E/m`` of the state being simulated.
* ``form="tau"``: ``eps = m tau`` directly.

Both use the off-diagonal phase ``xi = m ell sqrt(gamma^2 - 1)`` evaluated
with the local site's mass and Lorentz factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError
from .numerics import ROTATING_FRAME, SpinorField, l2_norm

__all__ = [
    "CollideParams",
    "Observables",
    "collide_matrix",
    "build_collide",
    "collide_stack",
    "stream",
    "step",
    "step_rotating",
    "evolve",
    "observables",
    "lattice_boltzmann_step",
    "grid_dispersion",
    "continuum_energy",
    "p_grid",
    "m_grid",
    "momentum_step_operator",
    "step_eigenphase",
    "solve_grid_length",
]

CollideForm = Literal["gamma", "tau"]
StepOrder = Literal["collide_stream", "stream_collide"]
Frame = Literal["chiral", "rotating"]

_DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class CollideParams:
    """Everything needed to build the collide operator at every site.

    ``mass`` and ``gamma`` may be scalars (uniform) or 1D arrays of length
    ``L``; they are broadcast against the lattice size on use.

    Attributes:
        mass: Rest mass ``m >= 0`` per site (natural units).
        gamma: Lorentz factor ``gamma >= 1`` per site.  Ignored where the
            mass vanishes.
        ell: Grid length.
        tau: Grid time.
        form: ``"gamma"`` or ``"tau"``, selecting how the mixing amplitude
            ``eps`` is computed (see module docstring).
    """

    mass: float | NDArray[np.float64] = 0.0
    gamma: float | NDArray[np.float64] = 1.0
    ell: float = 1.0
    tau: float = 1.0
    form: CollideForm = "gamma"

    def __post_init__(self) -> None:
        if self.form not in ("gamma", "tau"):
            raise ValueError(f"unknown collide form {self.form!r}")
        if not (self.ell > 0 and self.tau > 0):
            raise DomainError("ell and tau must be positive")
        m = np.asarray(self.mass, dtype=float)
        g = np.asarray(self.gamma, dtype=float)
        if m.ndim > 1 or g.ndim > 1:
            raise ValueError("mass and gamma must be scalars or 1D arrays")
        if not np.all(np.isfinite(m)) or np.any(m < 0):
            raise DomainError("mass must be finite and nonnegative")
        if np.any(np.isnan(g)):
            raise DomainError("gamma contains NaN")
        massive = np.broadcast_to(m > 0, np.broadcast_shapes(m.shape, g.shape))
        gb = np.broadcast_to(g, massive.shape)
        if np.any(gb[massive] < 1.0 - _DOMAIN_TOL):
            raise DomainError("gamma must be >= 1 wherever mass > 0")
        if self.form == "tau" and np.any(m * self.tau > 1.0 + _DOMAIN_TOL):
            raise DomainError("tau form requires m*tau <= 1")

    def profiles(self, n_sites: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Return ``(mass, gamma)`` broadcast to ``n_sites`` sites."""
        m = np.asarray(self.mass, dtype=float)
        g = np.asarray(self.gamma, dtype=float)
        for name, arr in (("mass", m), ("gamma", g)):
            if arr.ndim == 1 and arr.shape[0] != n_sites:
                raise ValueError(f"{name} profile has {arr.shape[0]} sites, expected {n_sites}")
        return np.broadcast_to(m, (n_sites,)).copy(), np.broadcast_to(g, (n_sites,)).copy()

    def angles(self, n_sites: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Return the per-site mixing amplitude ``eps`` and phase ``xi``."""
        m, g = self.profiles(n_sites)
        massive = m > 0
        eps = np.zeros(n_sites)
        xi = np.zeros(n_sites)
        gm, mm = g[massive], m[massive]
        if self.form == "gamma":
            eps[massive] = np.sin(gm * mm * self.ell) / gm
        else:
            eps[massive] = np.minimum(mm * self.tau, 1.0)
        xi[massive] = mm * self.ell * np.sqrt(np.maximum(gm * gm - 1.0, 0.0))
        return eps, xi


@dataclass(frozen=True)
class Observables:
    """Per-site density ``psi^dagger psi`` and scalar density ``|up|^2 - |down|^2``."""

    density: NDArray[np.float64]
    flux0: NDArray[np.float64]
    norm: float


def collide_matrix(eps: ArrayLike, xi: ArrayLike) -> NDArray[np.complex128]:
    """Collide unitary(ies) from mixing amplitude ``eps`` and phase ``xi``.

    Returns ``[[sqrt(1-eps^2), -i e^{-i xi} eps], [-i e^{i xi} eps,
    sqrt(1-eps^2)]]``; vectorized over matching leading shapes.

    Raises:
        DomainError: If ``|eps| > 1``.
    """
    eps = np.asarray(eps, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if np.any(np.abs(eps) > 1.0 + _DOMAIN_TOL):
        raise DomainError("|eps| must not exceed 1")
    diag = np.sqrt(np.clip(1.0 - eps * eps, 0.0, None))
    shape = np.broadcast_shapes(eps.shape, xi.shape)
    out = np.empty(shape + (2, 2), dtype=complex)
    out[..., 0, 0] = diag
    out[..., 1, 1] = diag
    out[..., 0, 1] = -1j * np.exp(-1j * xi) * eps
    out[..., 1, 0] = -1j * np.exp(1j * xi) * eps
    return out


def collide_stack(params: CollideParams, n_sites: int) -> NDArray[np.complex128]:
    """Per-site collide matrices, shape ``(n_sites, 2, 2)``."""
    eps, xi = params.angles(n_sites)
    return collide_matrix(eps, xi)


def build_collide(params: CollideParams, site: int = 0) -> NDArray[np.complex128]:
    """Collide unitary at one site.

    In the default ``gamma`` form this is

    ``(1/gamma) [[sqrt(gamma^2 - s^2), -i e^{-i xi} s], [-i e^{i xi} s,
    sqrt(gamma^2 - s^2)]]`` with ``s = sin(gamma m ell)`` and
    ``xi = m ell sqrt(gamma^2 - 1)``.

    Args:
        params: Collide parameters.
        site: Site index; only meaningful for position-dependent profiles.

    Raises:
        DomainError: If the parameters are outside their domain.
    """
    m = np.atleast_1d(np.asarray(params.mass, dtype=float))
    g = np.atleast_1d(np.asarray(params.gamma, dtype=float))
    n = max(m.shape[0], g.shape[0])
    if not -n <= site < n:
        raise IndexError(f"site {site} out of range for {n} sites")
    single = CollideParams(
        mass=float(m[site % m.shape[0]]),
        gamma=float(g[site % g.shape[0]]),
        ell=params.ell,
        tau=params.tau,
        form=params.form,
    )
    return collide_stack(single, 1)[0]


def _as_array(field: SpinorField | ArrayLike) -> NDArray[np.complex128]:
    if isinstance(field, SpinorField):
        return field.sites
    return np.asarray(field, dtype=complex)


def _wrap(template: SpinorField | ArrayLike, arr: NDArray[np.complex128]):
    if isinstance(template, SpinorField):
        return template.with_sites(arr)
    return arr


def _stream_array(arr: NDArray[np.complex128], direction: int = 1) -> NDArray[np.complex128]:
    out = np.empty_like(arr)
    out[:, 0] = np.roll(arr[:, 0], direction)
    out[:, 1] = np.roll(arr[:, 1], -direction)
    return out


def _collide_array(arr: NDArray[np.complex128], stack: NDArray[np.complex128]) -> NDArray[np.complex128]:
    out = np.empty_like(arr)
    u, d = arr[:, 0], arr[:, 1]
    out[:, 0] = stack[:, 0, 0] * u + stack[:, 0, 1] * d
    out[:, 1] = stack[:, 1, 0] * u + stack[:, 1, 1] * d
    return out


def stream(field: SpinorField | ArrayLike) -> SpinorField | NDArray[np.complex128]:
    """Shift spin-up amplitudes one site to ``+z`` and spin-down to ``-z``.

    Accepts a :class:`SpinorField` or a raw ``(L, 2)`` array and returns the
    same kind.
    """
    return _wrap(field, _stream_array(_as_array(field)))


def step(
    field: SpinorField | ArrayLike,
    params: CollideParams,
    order: StepOrder = "collide_stream",
) -> SpinorField | NDArray[np.complex128]:
    """One lattice gas step in the chiral frame: collide, then stream.

    Args:
        field: Current field.
        params: Collide parameters for every site.
        order: ``"collide_stream"`` (default) or the experimental
            ``"stream_collide"``.
    """
    arr = _as_array(field)
    stack = collide_stack(params, arr.shape[0])
    if order == "collide_stream":
        out = _stream_array(_collide_array(arr, stack))
    elif order == "stream_collide":
        out = _collide_array(_stream_array(arr), stack)
    else:
        raise ValueError(f"unknown order {order!r}")
    return _wrap(field, out)


def _rotate_array(arr: NDArray[np.complex128]) -> NDArray[np.complex128]:
    return arr @ ROTATING_FRAME.T


def step_rotating(
    field: SpinorField | ArrayLike, params: CollideParams
) -> SpinorField | NDArray[np.complex128]:
    """One step on a field stored in the rotating (Dirac) frame.

    Computes ``R stream(collide(R psi))`` with ``R = (sigma_x + sigma_z)/sqrt 2``.
    """
    arr = _as_array(field)
    stack = collide_stack(params, arr.shape[0])
    out = _rotate_array(_stream_array(_collide_array(_rotate_array(arr), stack)))
    return _wrap(field, out)


def evolve(
    field: SpinorField,
    params: CollideParams,
    steps: int,
    *,
    frame: Frame = "chiral",
    record_every: int = 1,
    order: StepOrder = "collide_stream",
) -> Iterator[tuple[int, SpinorField]]:
    """Evolve ``field`` and yield ``(t, field)`` at recorded steps.

    The initial state (``t = 0``) is always yielded, then every
    ``record_every`` steps, and the final step is always included.  The
    collide matrices are built once, so this is the fast path for long runs.
    """
    if steps < 0 or record_every < 1:
        raise ValueError("steps must be >= 0 and record_every >= 1")
    if frame not in ("chiral", "rotating"):
        raise ValueError(f"unknown frame {frame!r}")
    arr = field.sites.copy()
    stack = collide_stack(params, arr.shape[0])
    if frame == "rotating":
        # R applied before collide is folded into the per-site matrices.
        stack = stack @ ROTATING_FRAME
    advance: Callable[[NDArray[np.complex128]], NDArray[np.complex128]]
    if order == "collide_stream":
        advance = lambda a: _stream_array(_collide_array(a, stack))  # noqa: E731
    elif order == "stream_collide":
        if frame == "rotating":
            raise ValueError("stream_collide order is only available in the chiral frame")
        advance = lambda a: _collide_array(_stream_array(a), stack)  # noqa: E731
    else:
        raise ValueError(f"unknown order {order!r}")
    yield 0, field
    for t in range(1, steps + 1):
        arr = advance(arr)
        if frame == "rotating":
            arr = _rotate_array(arr)
        if t % record_every == 0 or t == steps:
            yield t, field.with_sites(arr)


def observables(field: SpinorField | ArrayLike) -> Observables:
    """Density, scalar density ``flux0`` and norm of a field."""
    arr = _as_array(field)
    up2 = np.abs(arr[:, 0]) ** 2
    down2 = np.abs(arr[:, 1]) ** 2
    return Observables(density=up2 + down2, flux0=up2 - down2, norm=l2_norm(arr))


def lattice_boltzmann_step(
    f_up: ArrayLike, f_down: ArrayLike, m: float, tau: float = 1.0
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Classical relativistic lattice Boltzmann step.

    Relaxes ``f_up`` and ``f_down`` towards each other with rate
    ``(m tau)^2`` and then streams them in the same directions as
    :func:`stream`.  The total ``sum(f_up + f_down)`` is conserved.

    Raises:
        DomainError: If ``m tau`` is outside ``[0, 1]``.
    """
    eps = m * tau
    if not 0.0 <= eps <= 1.0:
        raise DomainError("lattice Boltzmann step requires 0 <= m*tau <= 1")
    fu = np.asarray(f_up, dtype=float)
    fd = np.asarray(f_down, dtype=float)
    rate = eps * eps
    post_up = fu + rate * (fd - fu)
    post_down = fd + rate * (fu - fd)
    return np.roll(post_up, 1), np.roll(post_down, -1)


def p_grid(k: ArrayLike, ell: float = 1.0, tau: float = 1.0) -> NDArray[np.float64]:
    """Grid momentum ``sin(ell k)/tau``."""
    return np.sin(ell * np.asarray(k, dtype=float)) / tau


def m_grid(k: ArrayLike, m: float, ell: float = 1.0) -> NDArray[np.float64]:
    """Grid mass ``m cos(ell k)``."""
    return m * np.cos(ell * np.asarray(k, dtype=float))


def grid_dispersion(k: ArrayLike, m: float, ell: float = 1.0, tau: float = 1.0) -> NDArray[np.float64]:
    """Grid-level energy ``E = sqrt(sin^2(ell k)/tau^2 + m^2 cos^2(ell k))``.

    The mass term enters squared, as dimensional consistency and the plane
    wave derivation require.  For ``cos(ell k) >= 0`` the step's eigenphase
    is exactly ``arcsin(E tau)``; see :func:`step_eigenphase`.
    """
    return np.hypot(p_grid(k, ell, tau), m_grid(k, m, ell))


def continuum_energy(k: ArrayLike, m: float) -> NDArray[np.float64]:
    """Continuum relativistic energy ``sqrt(k^2 + m^2)``."""
    return np.hypot(np.asarray(k, dtype=float), m)


def momentum_step_operator(
    k: float, m: float, ell: float = 1.0, tau: float = 1.0, xi: float = 0.0
) -> NDArray[np.complex128]:
    """2x2 operator of one chiral-frame step acting on plane waves ``e^{i k z}``.

    Uses the ``tau`` form ``eps = m tau``; the product is
    ``diag(e^{-i k ell}, e^{i k ell}) @ U_C``.
    """
    shift = np.diag([np.exp(-1j * k * ell), np.exp(1j * k * ell)])
    return shift @ collide_matrix(m * tau, xi)


def step_eigenphase(k: ArrayLike, m: float, ell: float = 1.0, tau: float = 1.0) -> NDArray[np.float64]:
    """Positive eigenphase ``phi`` of :func:`momentum_step_operator`.

    The eigenvalues are ``exp(-/+ i phi)`` with
    ``cos(phi) = sqrt(1 - (m tau)^2) cos(ell k)``.  Equivalently
    ``sin(phi) = E tau`` with ``E`` from :func:`grid_dispersion`, so
    ``phi = arcsin(E tau)`` on the branch ``cos(ell k) >= 0``.  Note that
    ``phi`` equals ``E tau`` only to third order in ``tau``.
    """
    eps = m * tau
    if not 0.0 <= eps <= 1.0:
        raise DomainError("requires 0 <= m*tau <= 1")
    c = np.sqrt(1.0 - eps * eps) * np.cos(ell * np.asarray(k, dtype=float))
    return np.arccos(np.clip(c, -1.0, 1.0))


def solve_grid_length(energy: ArrayLike, tau: float = 1.0) -> NDArray[np.float64]:
    """Solve ``E tau = sin(E ell)`` for the grid length ``ell`` (principal branch).

    With this ``ell`` the step eigenvalue ``exp(-i arcsin(E tau))`` equals
    ``exp(-i E ell)`` exactly.

    Raises:
        DomainError: Unless ``0 < E tau <= 1``.
    """
    e = np.asarray(energy, dtype=float)
    et = e * tau
    if np.any(et <= 0) or np.any(et > 1.0):
        raise DomainError("solve_grid_length requires 0 < E*tau <= 1")
    return np.arcsin(et) / e
