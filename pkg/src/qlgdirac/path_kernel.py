"""Checkerboard path summation for the lattice Dirac propagator.

A path of ``N`` light-speed steps is a sign sequence ``s_0 .. s_{N-1}``
(``+1`` = step to the right) with fixed net displacement
``M = sum_i s_i``.  Each consecutive pair ``(s_i, s_{i+1})``, including the
pair formed with the terminal spin ``s_N``, contributes the non-bend
amplitude ``sqrt(1 - (m tau)^2)`` when the signs agree and the bend
amplitude ``i m tau`` when they differ.  The kernel entry ``K[s0, sN]`` is
the sum of these products over all admissible paths.

Two independent evaluations are provided:

* :func:`enumerate_kernel` — brute force over all sign sequences (the
  oracle).
* :func:`transfer_kernel` — an Ising-like transfer matrix per Fourier mode,
  with the magnetization constraint imposed by a discrete Kronecker delta.

The Kronecker delta uses ``K = 2N + 1`` modes ``theta_n = 2 pi n / K``,
``n = -N .. N``.  Because ``M - sum_i s_i`` is even and bounded by ``2N`` in
magnitude, this resolves the constraint exactly; a ``2N``-point sum at
``theta = 2 pi n / N`` would alias whenever ``M - sum s`` is a nonzero
multiple of ``N``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from .errors import BudgetExceeded, DomainError, InvalidParity
from .evolution import grid_dispersion

__all__ = [
    "ENUMERATION_CAP",
    "PathProblem",
    "TransferMatrix",
    "count_paths",
    "iter_paths",
    "bend_histogram",
    "enumerate_kernel",
    "transfer_matrix",
    "transfer_kernel",
    "kernel_matrix",
    "mode_angles",
    "transfer_generator_phase",
]

#: Largest ``N`` accepted by brute-force enumeration.
ENUMERATION_CAP = 24

Spin = Literal[1, -1]


def _spin_index(s: int) -> int:
    if s == 1:
        return 0
    if s == -1:
        return 1
    raise ValueError(f"spin must be +1 or -1, got {s!r}")


@dataclass(frozen=True)
class PathProblem:
    """Endpoints and mass of a checkerboard path sum.

    Attributes:
        n_steps: Number of time steps ``N >= 1``.
        magnetization: Net displacement ``M`` with ``|M| <= N``.
        mass: Rest mass ``m >= 0``.
        tau: Grid time; ``m * tau`` must not exceed 1.
    """

    n_steps: int
    magnetization: int
    mass: float = 0.0
    tau: float = 1.0

    def __post_init__(self) -> None:
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")
        if abs(self.magnetization) > self.n_steps:
            raise ValueError("|magnetization| must not exceed n_steps")
        if (self.n_steps - self.magnetization) % 2:
            raise InvalidParity(f"N - M = {self.n_steps - self.magnetization} is odd")
        if self.mass < 0 or self.tau <= 0:
            raise DomainError("mass must be >= 0 and tau > 0")
        if self.mass * self.tau > 1.0:
            raise DomainError("m*tau must not exceed 1")

    @property
    def epsilon(self) -> float:
        """Bend amplitude magnitude ``m tau``."""
        return self.mass * self.tau

    @property
    def n_left(self) -> int:
        """Number of left steps ``P = (N - M)/2``."""
        return (self.n_steps - self.magnetization) // 2

    @property
    def n_right(self) -> int:
        """Number of right steps ``Q = (N + M)/2``."""
        return (self.n_steps + self.magnetization) // 2


@dataclass(frozen=True)
class TransferMatrix:
    """Transfer matrix of one Fourier mode, factored as stream times collide.

    ``matrix = stream @ collide`` with ``stream = diag(e^{-i theta},
    e^{i theta})`` and ``collide = [[c, i eps e^{i theta}], [i eps
    e^{-i theta}, c]]``; the product has entries ``w(s, s')
    e^{-i theta (s + s')/2}``.

    Attributes:
        mode_index: Fourier index ``n``.
        theta: Mode angle.
        stream: Diagonal stream factor.
        collide: Collide factor.
        mu: Coupling ``-1/2 log sqrt(1 - eps^2)``.
        nu: Coupling ``-1/2 log(i eps)`` on the principal branch, so that
            ``exp(-2 nu) = i eps``.
    """

    mode_index: int
    theta: float
    stream: NDArray[np.complex128]
    collide: NDArray[np.complex128]
    mu: complex
    nu: complex

    @property
    def matrix(self) -> NDArray[np.complex128]:
        return self.stream @ self.collide

    def from_couplings(self) -> NDArray[np.complex128]:
        """Rebuild the matrix from ``mu`` and ``nu`` (``exp(-2 mu)``, ``exp(-2 nu)``)."""
        a = cmath.exp(-2 * self.mu)
        b = cmath.exp(-2 * self.nu)
        t = self.theta
        return np.array(
            [[a * cmath.exp(-1j * t), b], [b, a * cmath.exp(1j * t)]], dtype=complex
        )


def count_paths(prob: PathProblem) -> int:
    """Number of sign sequences with ``N`` steps and displacement ``M``: ``C(N, P)``."""
    return math.comb(prob.n_steps, prob.n_left)


def iter_paths(n_steps: int, magnetization: int):
    """Yield all sign sequences of length ``N`` summing to ``M`` in lexicographic order.

    ``-1`` sorts before ``+1``.  The search prunes any prefix from which the
    target magnetization is no longer reachable.
    """
    if (n_steps - magnetization) % 2:
        raise InvalidParity(f"N - M = {n_steps - magnetization} is odd")
    if n_steps > ENUMERATION_CAP:
        raise BudgetExceeded(f"enumeration capped at N = {ENUMERATION_CAP}")
    prefix: list[int] = []

    def walk(remaining: int, target: int):
        if abs(target) > remaining:
            return
        if remaining == 0:
            yield tuple(prefix)
            return
        for s in (-1, 1):
            prefix.append(s)
            yield from walk(remaining - 1, target - s)
            prefix.pop()

    yield from walk(n_steps, magnetization)


@lru_cache(maxsize=4096)
def bend_histogram(n_steps: int, magnetization: int, s0: int, s_final: int) -> tuple[int, ...]:
    """Count admissible paths by bend number.

    Returns ``hist`` with ``hist[R]`` the number of sign sequences
    ``s_0..s_{N-1}`` (first spin fixed to ``s0``, summing to ``M``) having
    ``R`` sign changes among the pairs ``(s_i, s_{i+1})``, ``i = 0..N-1``,
    with ``s_N = s_final``.

    Raises:
        BudgetExceeded: If ``n_steps`` exceeds :data:`ENUMERATION_CAP`.
    """
    if n_steps > ENUMERATION_CAP:
        raise BudgetExceeded(f"enumeration capped at N = {ENUMERATION_CAP}")
    _spin_index(s0)
    _spin_index(s_final)
    hist = [0] * (n_steps + 1)
    n_left = (n_steps - magnetization) // 2
    if (n_steps - magnetization) % 2 or not 0 <= n_left <= n_steps:
        return tuple(hist)
    # Positions of the left steps, enumerated in lexicographic order, with
    # the first spin pinned.  Vectorized over chunks of combinations.
    positions = range(n_steps)
    chunk: list[tuple[int, ...]] = []

    def flush() -> None:
        if not chunk:
            return
        signs = np.ones((len(chunk), n_steps + 1), dtype=np.int8)
        if n_left:
            idx = np.asarray(chunk, dtype=np.intp)
            rows = np.repeat(np.arange(len(chunk)), n_left)
            signs[rows, idx.ravel()] = -1
        signs[:, n_steps] = s_final
        keep = signs[:, 0] == s0
        bends = np.count_nonzero(np.diff(signs[keep], axis=1), axis=1)
        counts = np.bincount(bends, minlength=n_steps + 1)
        for r, c in enumerate(counts):
            hist[r] += int(c)
        chunk.clear()

    for combo in combinations(positions, n_left):
        chunk.append(combo)
        if len(chunk) >= 65536:
            flush()
    flush()
    return tuple(hist)


def _weights(eps: float, n_steps: int, *, unitary: bool = True) -> NDArray[np.complex128]:
    r = np.arange(n_steps + 1)
    non_bend = math.sqrt(1.0 - eps * eps) if unitary else 1.0
    return (non_bend ** (n_steps - r)) * ((1j * eps) ** r)


def enumerate_kernel(
    prob: PathProblem,
    s0: Spin | None,
    sN: Spin,
    *,
    unitary: bool = True,
) -> complex:
    """Kernel entry by brute-force path enumeration.

    Args:
        prob: Path problem.
        s0: Initial spin, or ``None`` to sum over both initial spins.
        sN: Terminal spin.
        unitary: If ``False``, omit the non-bend factor (comparison mode
            with the original non-unitary checkerboard weights).

    Raises:
        BudgetExceeded: If ``N`` exceeds :data:`ENUMERATION_CAP`.
    """
    if prob.n_steps > ENUMERATION_CAP:
        raise BudgetExceeded(f"enumeration capped at N = {ENUMERATION_CAP}")
    starts = (1, -1) if s0 is None else (s0,)
    w = _weights(prob.epsilon, prob.n_steps, unitary=unitary)
    total = 0j
    for s in starts:
        hist = np.asarray(bend_histogram(prob.n_steps, prob.magnetization, s, sN), dtype=float)
        total += complex(np.dot(hist, w))
    return total


def mode_angles(n_steps: int) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
    """Mode indices ``n = -N..N`` and angles ``2 pi n / (2N + 1)``."""
    n = np.arange(-n_steps, n_steps + 1)
    return n, 2.0 * np.pi * n / (2 * n_steps + 1)


def transfer_matrix(prob: PathProblem, n: int) -> TransferMatrix:
    """Transfer matrix of mode ``n`` (angle ``2 pi n / (2N + 1)``)."""
    eps = prob.epsilon
    theta = 2.0 * math.pi * n / (2 * prob.n_steps + 1)
    c = math.sqrt(1.0 - eps * eps)
    stream = np.diag([cmath.exp(-1j * theta), cmath.exp(1j * theta)])
    collide = np.array(
        [[c, 1j * eps * cmath.exp(1j * theta)], [1j * eps * cmath.exp(-1j * theta), c]],
        dtype=complex,
    )
    mu = -0.5 * cmath.log(c) if c > 0 else complex(math.inf)
    nu = -0.5 * cmath.log(1j * eps) if eps > 0 else complex(math.inf)
    return TransferMatrix(n, theta, stream, collide, mu, nu)


def _mode_stack(prob: PathProblem) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    _, theta = mode_angles(prob.n_steps)
    eps = prob.epsilon
    c = math.sqrt(1.0 - eps * eps)
    u = np.empty(theta.shape + (2, 2), dtype=complex)
    u[:, 0, 0] = c * np.exp(-1j * theta)
    u[:, 1, 1] = c * np.exp(1j * theta)
    u[:, 0, 1] = 1j * eps
    u[:, 1, 0] = 1j * eps
    return theta, np.linalg.matrix_power(u, prob.n_steps)


def kernel_matrix(prob: PathProblem) -> NDArray[np.complex128]:
    """All four kernel entries by the transfer-matrix route.

    Returns a 2x2 array indexed ``[s0, sN]`` with spin ``+1 -> 0`` and
    ``-1 -> 1``.
    """
    theta, z = _mode_stack(prob)
    spins = np.array([1, -1])
    out = np.empty((2, 2), dtype=complex)
    mag_phase = np.exp(1j * theta * prob.magnetization)
    for i, s0 in enumerate(spins):
        for j, sn in enumerate(spins):
            boundary = np.exp(-0.5j * theta * (s0 - sn))
            # Modes are summed in ascending n for a deterministic result.
            out[i, j] = np.sum(mag_phase * boundary * z[:, i, j]) / theta.shape[0]
    return out


def transfer_kernel(prob: PathProblem, s0: Spin | None, sN: Spin) -> complex:
    """Kernel entry via the N-fold transfer-matrix product.

    Args:
        prob: Path problem.
        s0: Initial spin, or ``None`` to sum over both.
        sN: Terminal spin.
    """
    k = kernel_matrix(prob)
    j = _spin_index(sN)
    if s0 is None:
        return complex(k[0, j] + k[1, j])
    return complex(k[_spin_index(s0), j])


def transfer_generator_phase(prob: PathProblem, n: int) -> tuple[complex, complex]:
    """Eigenvalues ``exp(-/+ i phi)`` of mode ``n``'s transfer matrix.

    ``phi = arccos(+-sqrt(1 - (E tau)^2))`` with ``E`` the grid energy at
    ``k = theta_n / ell`` (``ell = tau``); the sign follows ``cos(theta_n)``.
    Evaluated as ``arcsin(E tau)`` (or ``pi - arcsin(E tau)``) for accuracy.

    Raises:
        DomainError: If ``E tau > 1``.
    """
    tau = prob.tau
    theta = 2.0 * math.pi * n / (2 * prob.n_steps + 1)
    energy = float(grid_dispersion(theta / tau, prob.mass, ell=tau, tau=tau))
    et = energy * tau
    if et > 1.0 + 1e-12:
        raise DomainError(f"E*tau = {et} exceeds 1")
    half = math.asin(min(et, 1.0))
    phi = half if math.cos(theta) >= 0.0 else math.pi - half
    return cmath.exp(-1j * phi), cmath.exp(1j * phi)
