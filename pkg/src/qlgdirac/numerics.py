"""Small dense complex linear algebra and the periodic spinor field container.

Everything here works in double precision. Matrices are plain ``numpy``
arrays; the helpers only add the checks the rest of the package relies on
(unitarity, involution) so that tolerances are stated in one place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError, NotInvolution

__all__ = [
    "UNITARY_TOL",
    "IDENTITY2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "ROTATING_FRAME",
    "SpinorField",
    "l2_norm",
    "mat_mul",
    "mat_adjoint",
    "mat_exp_involution",
    "unitarity_defect",
    "is_unitary",
]

#: Max-norm tolerance used for every unitarity claim in the package.
UNITARY_TOL = 1e-12

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

#: Hermitian unitary involution ``(sigma_x + sigma_z)/sqrt(2)`` mapping the
#: chiral representation to the Dirac representation and back.
ROTATING_FRAME = (SIGMA_X + SIGMA_Z) / np.sqrt(2.0)


@dataclass(frozen=True)
class SpinorField:
    """Two-component complex amplitudes on a periodic 1D lattice.

    Attributes:
        sites: Array of shape ``(L, 2)``; column 0 is the spin-up (right
            moving) amplitude, column 1 the spin-down (left moving) one.
        ell: Grid length.
        tau: Grid time.
    """

    sites: NDArray[np.complex128]
    ell: float = 1.0
    tau: float = 1.0

    def __post_init__(self) -> None:
        arr = np.array(self.sites, dtype=np.complex128, copy=True)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f"sites must have shape (L, 2), got {arr.shape}")
        if arr.shape[0] < 2:
            raise ValueError("a lattice needs at least 2 sites")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sites contain NaN or Inf")
        if not (self.ell > 0 and self.tau > 0):
            raise DomainError("ell and tau must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, "sites", arr)

    @classmethod
    def from_components(
        cls, up: ArrayLike, down: ArrayLike, ell: float = 1.0, tau: float = 1.0
    ) -> SpinorField:
        """Build a field from separate up/down amplitude arrays."""
        return cls(np.stack([np.asarray(up), np.asarray(down)], axis=1), ell, tau)

    @classmethod
    def zeros(cls, n_sites: int, ell: float = 1.0, tau: float = 1.0) -> SpinorField:
        return cls(np.zeros((n_sites, 2), dtype=complex), ell, tau)

    @property
    def n_sites(self) -> int:
        return self.sites.shape[0]

    @property
    def up(self) -> NDArray[np.complex128]:
        return self.sites[:, 0]

    @property
    def down(self) -> NDArray[np.complex128]:
        return self.sites[:, 1]

    def with_sites(self, sites: ArrayLike) -> SpinorField:
        """Return a field on the same grid with new amplitudes."""
        return SpinorField(np.asarray(sites), self.ell, self.tau)

    def normalized(self) -> SpinorField:
        """Return the field scaled to unit L2 norm.

        Raises:
            ValueError: If the field is identically zero.
        """
        nrm = l2_norm(self)
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero field")
        return self.with_sites(self.sites / nrm)


def l2_norm(field: SpinorField | ArrayLike) -> float:
    """Euclidean norm ``sqrt(sum_l |up_l|^2 + |down_l|^2)`` of a spinor field."""
    arr = field.sites if isinstance(field, SpinorField) else np.asarray(field)
    if arr.size == 0:
        raise ValueError("field is empty")
    return float(np.sqrt(np.sum(arr.real**2 + arr.imag**2)))


def mat_mul(*mats: ArrayLike) -> NDArray[np.complex128]:
    """Left-to-right product of square matrices."""
    if not mats:
        raise ValueError("mat_mul needs at least one matrix")
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = out @ np.asarray(m, dtype=complex)
    return out


def mat_adjoint(a: ArrayLike) -> NDArray[np.complex128]:
    """Conjugate transpose."""
    return np.conj(np.asarray(a, dtype=complex)).T


def mat_exp_involution(a: ArrayLike, angle: float, tol: float = 1e-12) -> NDArray[np.complex128]:
    """Evaluate ``exp(-i * angle * A)`` for an involution ``A`` (``A @ A == 1``).

    Uses the Euler identity ``cos(angle) 1 - i sin(angle) A``, which is exact
    for involutions and avoids a general matrix exponential.

    Args:
        a: Square matrix with ``A^2 = 1``.
        angle: Rotation angle.
        tol: Max-norm tolerance on ``A^2 - 1``.

    Raises:
        NotInvolution: If ``A^2`` differs from the identity by more than ``tol``.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotInvolution(f"expected a square matrix, got shape {a.shape}")
    eye = np.eye(a.shape[0], dtype=complex)
    defect = float(np.max(np.abs(a @ a - eye)))
    if defect > tol:
        raise NotInvolution(f"A^2 differs from identity by {defect:.3e}")
    return np.cos(angle) * eye - 1j * np.sin(angle) * a


def unitarity_defect(u: ArrayLike) -> float:
    """Return ``max |U U^dagger - 1|`` (works on stacks of matrices too)."""
    u = np.asarray(u, dtype=complex)
    eye = np.eye(u.shape[-1])
    prod = u @ np.conj(np.swapaxes(u, -1, -2))
    return float(np.max(np.abs(prod - eye)))


def is_unitary(u: ArrayLike, tol: float = UNITARY_TOL) -> bool:
    return unitarity_defect(u) < tol
