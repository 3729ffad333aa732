"""Qubit representations, Jordan-Wigner ladder operators and conservative gates.

Dense matrices here use the Kronecker convention with qubit 1 as the
leftmost (most significant) tensor factor, so that for two qubits
``a_1 = a (x) 1`` and ``a_2 = sigma_3 (x) a``.  The single-mode
annihilation operator is ``a = [[0, 1], [0, 0]]`` acting on ``(|0>, |1>)``.

Two-qubit gates act on the basis ``|00>, |01>, |10>, |11>`` and conserve the
number of excitations: they are block diagonal over ``{|00>}``,
``span(|01>, |10>)`` and ``{|11>}``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import reduce
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import BadAxis, ConstraintViolated, DomainError
from .evolution import CollideParams, collide_matrix
from .numerics import SIGMA_X, SIGMA_Y, SIGMA_Z, mat_exp_involution

__all__ = [
    "MAX_DENSE_QUBITS",
    "QubitState",
    "GateSpec",
    "qubit_representations",
    "rotate_qubit",
    "jw_ladder",
    "number_operator",
    "gate_generator",
    "conservative_gate",
    "swap_gate",
    "sqrt_swap_gate",
    "aswap_gate",
    "sqrt_aswap_gate",
    "chiral_generator",
    "chiral_collide_gate",
    "chiral_collide_gate_ladder",
]

#: Largest qubit count for which dense ``2^Q x 2^Q`` operators are built.
MAX_DENSE_QUBITS = 12

_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]])
_SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]])
_ID = np.eye(2)
_PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class QubitState:
    """Pure qubit parameterized by Euler angles.

    Attributes:
        theta: Polar angle in ``[0, pi]``.
        phi: Azimuth in ``[0, 2 pi)``.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError("theta must lie in [0, pi]")


def qubit_representations(
    q: QubitState,
) -> tuple[NDArray[np.complex128], NDArray[np.float64], NDArray[np.complex128]]:
    """Hilbert vector, Bloch vector and the matrix ``M_q = q . sigma``.

    Returns:
        ``(psi, bloch, m_q)`` where ``psi = (cos(theta/2),
        e^{i phi} sin(theta/2))``, ``bloch`` is the unit vector
        ``(sin theta cos phi, sin theta sin phi, cos theta)`` and
        ``m_q = bloch . sigma`` (Hermitian, traceless, squares to 1).
    """
    th, ph = q.theta, q.phi
    psi = np.array([math.cos(th / 2), cmath.exp(1j * ph) * math.sin(th / 2)])
    bloch = np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
    m_q = sum(c * s for c, s in zip(bloch, _PAULI))
    return psi, bloch, m_q


def rotate_qubit(
    q: ArrayLike,
    axis: ArrayLike,
    angle: float,
    method: Literal["similarity", "rodrigues"] = "similarity",
) -> NDArray[np.float64]:
    """Rotate a Bloch vector by ``angle`` about a unit ``axis``.

    ``"similarity"`` conjugates ``q . sigma`` by ``exp(-i angle n . sigma / 2)``
    and reads the vector back off the Pauli components; ``"rodrigues"``
    applies ``cos a q + (1 - cos a) n (n . q) + sin a n x q``.  The two
    agree to rounding.

    Raises:
        BadAxis: If ``|axis|`` differs from 1 by more than ``1e-12``.
    """
    q = np.asarray(q, dtype=float)
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise BadAxis("axis must be a unit 3-vector")
    if method == "rodrigues":
        c, s = math.cos(angle), math.sin(angle)
        return c * q + (1.0 - c) * n * np.dot(n, q) + s * np.cross(n, q)
    if method != "similarity":
        raise ValueError(f"unknown method {method!r}")
    n_sigma = sum(c * p for c, p in zip(n, _PAULI))
    u = mat_exp_involution(n_sigma, angle / 2.0)
    rotated = u @ sum(c * p for c, p in zip(q, _PAULI)) @ np.conj(u).T
    return np.array([0.5 * np.trace(rotated @ p).real for p in _PAULI])


def jw_ladder(i: int, n_qubits: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Jordan-Wigner annihilation and creation operators of qubit ``i``.

    ``a_i = sigma_3^{(x)(i-1)} (x) a (x) 1^{(x)(Q-i)}`` and ``a_i^dagger``
    is its transpose.

    Args:
        i: Qubit number, 1-based.
        n_qubits: Total number of qubits ``Q``.

    Raises:
        ValueError: If ``i`` is out of range or ``Q`` exceeds
            :data:`MAX_DENSE_QUBITS`.
    """
    if not 1 <= i <= n_qubits:
        raise ValueError(f"qubit index {i} outside 1..{n_qubits}")
    if n_qubits > MAX_DENSE_QUBITS:
        raise ValueError(f"dense ladder operators limited to Q <= {MAX_DENSE_QUBITS}")
    factors = [_SIGMA3] * (i - 1) + [_LOWER] + [_ID] * (n_qubits - i)
    a = reduce(np.kron, factors)
    return a, a.T.copy()


def number_operator(i: int, n_qubits: int) -> NDArray[np.float64]:
    """``n_i = a_i^dagger a_i``."""
    a, ad = jw_ladder(i, n_qubits)
    return ad @ a


#: Discriminants below this are rounding noise of a saturated coupling.
_ROUNDING = 8 * np.finfo(float).eps


@dataclass(frozen=True)
class GateSpec:
    """Parameters of a conservative two-qubit gate ``exp(z H)``.

    Attributes:
        z: Gate parameter (purely imaginary for a unitary gate).
        xi: Phase used for the default coupling.
        delta: ``|11>`` entry of the generator, 0 or 1.
        B: Off-diagonal coupling; defaults to ``-e^{-i xi}/2`` for the
            idempotent family and ``i e^{-i xi}`` for the tri-idempotent one.
        family: ``"idempotent"`` (``H^2 = H``) or ``"tri_idempotent"``
            (``H^3 = H``).
        branch: Sign choice (+1 or -1) of the square root fixing ``A``.
    """

    z: complex
    xi: float = 0.0
    delta: float = 0.0
    B: complex | None = None
    family: Literal["idempotent", "tri_idempotent"] = "idempotent"
    branch: int = 1

    def __post_init__(self) -> None:
        if self.delta not in (0, 1):
            raise ConstraintViolated("delta must be 0 or 1")
        if self.family not in ("idempotent", "tri_idempotent"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")

    @property
    def coupling(self) -> complex:
        if self.B is not None:
            return complex(self.B)
        phase = cmath.exp(-1j * self.xi)
        return -0.5 * phase if self.family == "idempotent" else 1j * phase


def gate_generator(spec: GateSpec, tol: float = 1e-12) -> NDArray[np.complex128]:
    """Hermitian generator ``H`` of the gate family.

    Idempotent: ``A = (1 +- sqrt(1 - 4|B|^2))/2``, ``D = 1 - A``.
    Tri-idempotent: ``A = +-sqrt(1 - |B|^2)``, ``D = -A``.

    Raises:
        ConstraintViolated: If ``|B|`` is too large for a real ``A`` or the
            family identity fails beyond ``tol``.
    """
    b = spec.coupling
    # The default couplings have modulus exactly 1/2 or 1; |e^{-i xi}|^2 is
    # only 1 to rounding, and sqrt would amplify that to ~1e-8 in A.
    if spec.B is None:
        b2 = 0.25 if spec.family == "idempotent" else 1.0
    else:
        b2 = abs(b) ** 2
    if spec.family == "idempotent":
        disc = 1.0 - 4.0 * b2
        if disc < -tol:
            raise ConstraintViolated("idempotent family requires |B| <= 1/2")
        disc = 0.0 if disc < _ROUNDING else disc
        a = 0.5 * (1.0 + spec.branch * math.sqrt(disc))
        d = 1.0 - a
    else:
        disc = 1.0 - b2
        if disc < -tol:
            raise ConstraintViolated("tri-idempotent family requires |B| <= 1")
        disc = 0.0 if disc < _ROUNDING else disc
        a = spec.branch * math.sqrt(disc)
        d = -a
    h = np.array(
        [[0, 0, 0, 0], [0, a, b, 0], [0, np.conj(b), d, 0], [0, 0, 0, spec.delta]],
        dtype=complex,
    )
    h2 = h @ h
    if spec.family == "idempotent":
        defect = float(np.max(np.abs(h2 - h)))
    else:
        defect = float(np.max(np.abs(h2 @ h - h)))
        if np.max(np.abs(h2 - h)) < tol:
            raise ConstraintViolated("tri-idempotent generator is idempotent")
    if defect > tol:
        raise ConstraintViolated(f"family identity fails by {defect:.3e}")
    return h


def conservative_gate(spec: GateSpec) -> NDArray[np.complex128]:
    """``Upsilon(z) = exp(z H)`` in closed form.

    Idempotent: ``1 + (e^z - 1) H``.  Tri-idempotent:
    ``1 + sinh(z) H + (cosh(z) - 1) H^2``.
    """
    h = gate_generator(spec)
    z = complex(spec.z)
    eye = np.eye(4, dtype=complex)
    if spec.family == "idempotent":
        return eye + (cmath.exp(z) - 1.0) * h
    return eye + cmath.sinh(z) * h + (cmath.cosh(z) - 1.0) * (h @ h)


def swap_gate(xi: float = 0.0, delta: int = 0) -> NDArray[np.complex128]:
    """Idempotent family at ``z = i pi``: SWAP with phases and ``|11>`` entry ``1 - 2 delta``."""
    return conservative_gate(GateSpec(1j * math.pi, xi, delta))


def sqrt_swap_gate(xi: float = 0.0, delta: int = 0) -> NDArray[np.complex128]:
    """Idempotent family at ``z = i pi/2``: the entangling square-root-of-SWAP."""
    return conservative_gate(GateSpec(0.5j * math.pi, xi, delta))


def aswap_gate(xi: float = 0.0, delta: int = 0) -> NDArray[np.complex128]:
    """Tri-idempotent family at ``z = i pi/2`` with ``B = i e^{-i xi}``."""
    return conservative_gate(GateSpec(0.5j * math.pi, xi, delta, family="tri_idempotent"))


def sqrt_aswap_gate(xi: float = 0.0, delta: int = 0) -> NDArray[np.complex128]:
    """Tri-idempotent family at ``z = i pi/4`` with ``B = i e^{-i xi}``."""
    return conservative_gate(GateSpec(0.25j * math.pi, xi, delta, family="tri_idempotent"))


def _site_angles(params: CollideParams, site: int) -> tuple[float, float]:
    m = np.atleast_1d(np.asarray(params.mass, dtype=float))
    g = np.atleast_1d(np.asarray(params.gamma, dtype=float))
    single = CollideParams(
        mass=float(m[site % m.shape[0]]),
        gamma=float(g[site % g.shape[0]]),
        ell=params.ell,
        tau=params.tau,
        form=params.form,
    )
    eps, xi = single.angles(1)
    return float(eps[0]), float(xi[0])


def chiral_generator(params: CollideParams, site: int = 0) -> NDArray[np.complex128]:
    """Tri-idempotent generator ``N`` of the chiral collide gate.

    ``N = B a_up^dagger a_down + B* a_down^dagger a_up + n_up n_down`` with
    ``B = e^{-i xi}``, in the local basis described in
    :func:`chiral_collide_gate`.
    """
    _, xi = _site_angles(params, site)
    a_dn, ad_dn = jw_ladder(1, 2)
    a_up, ad_up = jw_ladder(2, 2)
    b = cmath.exp(-1j * xi)
    return b * ad_up @ a_dn + np.conj(b) * ad_dn @ a_up + (ad_up @ a_up) @ (ad_dn @ a_dn)


def chiral_collide_gate(params: CollideParams, site: int = 0) -> NDArray[np.complex128]:
    """Two-qubit collide gate of one site, built directly.

    Local basis index ``2 n_down + n_up`` (the spin-down qubit is the more
    significant factor), i.e. ``|00>``, ``|up>``, ``|down>``, ``|up down>``.
    The central block equals the one-body collide matrix; the doubly
    occupied entry is ``e^z = sqrt(1 - eps^2) - i eps``.
    """
    eps, xi = _site_angles(params, site)
    g = np.zeros((4, 4), dtype=complex)
    g[0, 0] = 1.0
    g[1:3, 1:3] = collide_matrix(eps, xi)
    g[3, 3] = math.sqrt(max(0.0, 1.0 - eps * eps)) - 1j * eps
    return g


def chiral_collide_gate_ladder(params: CollideParams, site: int = 0) -> NDArray[np.complex128]:
    """The same gate assembled from Jordan-Wigner ladder operators.

    ``Upsilon = 1 - n_u - n_d + n_u n_d + sinh z (B a_u^dag a_d + B* a_d^dag a_u)
    + cosh z (n_u + n_d - 2 n_u n_d) + e^z n_u n_d`` with
    ``cosh z = sqrt(1 - eps^2)``, ``sinh z = -i eps`` and ``B = e^{-i xi}``.
    """
    eps, xi = _site_angles(params, site)
    a_dn, ad_dn = jw_ladder(1, 2)
    a_up, ad_up = jw_ladder(2, 2)
    n_up, n_dn = ad_up @ a_up, ad_dn @ a_dn
    both = n_up @ n_dn
    cosh_z = math.sqrt(max(0.0, 1.0 - eps * eps))
    sinh_z = -1j * eps
    b = cmath.exp(-1j * xi)
    eye = np.eye(4)
    return (
        eye
        - n_up
        - n_dn
        + both
        + sinh_z * (b * ad_up @ a_dn + np.conj(b) * ad_dn @ a_up)
        + cosh_z * (n_up + n_dn - 2 * both)
        + (cosh_z + sinh_z) * both
    )
