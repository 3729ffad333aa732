"""Dense state-vector engine for the many-body lattice gas circuit.

Qubit numbering: qubit ``2l + a + 1`` (1-based) holds site ``l``, spin ``a``
(0 = up, 1 = down).  Qubit 1 is bit 0 of the state-vector index
(little-endian), so the basis ket with qubits ``alpha_1 < alpha_2 < ...``
excited sits at index ``sum_j 2^(alpha_j - 1)``.

A step applies the site-local chiral collide gate, then shifts all spin-up
modes one site to the right and all spin-down modes one site to the left
with chains of fermionic swaps (periodic wrap).  Gates are applied by index
arithmetic on the ``2^Q`` vector; no ``2^Q x 2^Q`` matrix is formed.

Snapshot file layout (all little-endian, 24-byte header)::

    offset  size  type     field
    0       4     bytes    magic b"QLGS"
    4       2     uint16   format version (1)
    6       2     uint16   reserved (0)
    8       4     uint32   Q, number of qubits
    12      4     uint32   L, number of lattice sites (Q = 2L)
    16      8     uint64   step index
    24      16*2^Q float64 amplitudes as (real, imag) pairs, index order
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from os import PathLike
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError
from .evolution import CollideParams
from .gates import chiral_collide_gate
from .numerics import SpinorField

__all__ = [
    "MAX_QUBITS",
    "SNAPSHOT_MAGIC",
    "SNAPSHOT_VERSION",
    "StateVector",
    "qubit_index",
    "apply_adjacent_gate",
    "fermionic_swap",
    "stream_up",
    "stream_down",
    "many_body_step",
    "sector_project",
    "sector_populations",
    "one_body_state",
    "one_body_amplitudes",
    "slater_state",
    "write_snapshot",
    "read_snapshot",
]

MAX_QUBITS = 16
SNAPSHOT_MAGIC = b"QLGS"
SNAPSHOT_VERSION = 1
_HEADER = struct.Struct("<4sHHIIQ")


@dataclass
class StateVector:
    """Amplitudes of ``Q`` qubits, length ``2^Q``."""

    amplitudes: NDArray[np.complex128]
    q: int

    def __post_init__(self) -> None:
        if not 1 <= self.q <= MAX_QUBITS:
            raise DomainError(f"Q must lie in 1..{MAX_QUBITS}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.q,):
            raise ValueError(f"expected {1 << self.q} amplitudes, got {amps.shape}")
        self.amplitudes = amps

    @classmethod
    def basis(cls, q: int, index: int = 0) -> StateVector:
        amps = np.zeros(1 << q, dtype=complex)
        amps[index] = 1.0
        return cls(amps, q)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def number_expectation(self) -> float:
        """Expectation value of the total particle number."""
        counts = _popcounts(self.q)
        return float(np.dot(counts, np.abs(self.amplitudes) ** 2))


def qubit_index(site: int, spin: int) -> int:
    """1-based qubit number of ``(site, spin)``."""
    if spin not in (0, 1):
        raise ValueError("spin must be 0 (up) or 1 (down)")
    return 2 * site + spin + 1


@lru_cache(maxsize=None)
def _popcounts(q: int) -> NDArray[np.int64]:
    idx = np.arange(1 << q, dtype=np.int64)
    counts = np.zeros(1 << q, dtype=np.int64)
    for b in range(q):
        counts += (idx >> b) & 1
    counts.setflags(write=False)
    return counts


def apply_adjacent_gate(amps: NDArray[np.complex128], q: int, gate: ArrayLike, low_bit: int) -> NDArray[np.complex128]:
    """Apply a 4x4 gate to bits ``(low_bit, low_bit + 1)``.

    The local index is ``2 * bit(low_bit + 1) + bit(low_bit)``.  Adjacent
    modes need no Jordan-Wigner sign.
    """
    if not 0 <= low_bit < q - 1:
        raise ValueError("low_bit out of range")
    view = amps.reshape(1 << (q - low_bit - 2), 4, 1 << low_bit)
    out = np.einsum("ij,ajb->aib", np.asarray(gate, dtype=complex), view)
    return out.reshape(-1)


@lru_cache(maxsize=256)
def _swap_table(q: int, i: int, j: int) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
    if i > j:
        i, j = j, i
    idx = np.arange(1 << q, dtype=np.int64)
    bi = (idx >> i) & 1
    bj = (idx >> j) & 1
    differ = bi != bj
    perm = np.where(differ, idx ^ ((1 << i) | (1 << j)), idx)
    between = ((1 << j) - 1) & ~((1 << (i + 1)) - 1)
    parity = np.zeros_like(idx)
    masked = idx & between
    for b in range(i + 1, j):
        parity ^= (masked >> b) & 1
    sign = np.ones(1 << q)
    sign[differ & (parity == 1)] = -1.0
    sign[(bi == 1) & (bj == 1)] = -1.0
    perm.setflags(write=False)
    sign.setflags(write=False)
    return perm, sign


def fermionic_swap(amps: NDArray[np.complex128], q: int, i: int, j: int) -> NDArray[np.complex128]:
    """Exchange fermionic modes on bits ``i`` and ``j``.

    Moving one particle across the modes strictly between ``i`` and ``j``
    picks up the Jordan-Wigner parity of those modes; exchanging two
    particles gives ``-1``.
    """
    if i == j or not (0 <= i < q and 0 <= j < q):
        raise ValueError("need two distinct bits in range")
    perm, sign = _swap_table(q, i, j)
    return sign * amps[perm]


def stream_up(amps: NDArray[np.complex128], n_sites: int) -> NDArray[np.complex128]:
    """Shift every spin-up mode one site to the right (periodic)."""
    q = 2 * n_sites
    for s in range(n_sites - 2, -1, -1):
        amps = fermionic_swap(amps, q, 2 * s, 2 * s + 2)
    return amps


def stream_down(amps: NDArray[np.complex128], n_sites: int) -> NDArray[np.complex128]:
    """Shift every spin-down mode one site to the left (periodic)."""
    q = 2 * n_sites
    for s in range(n_sites - 1):
        amps = fermionic_swap(amps, q, 2 * s + 1, 2 * s + 3)
    return amps


def many_body_step(state: StateVector, n_sites: int, params: CollideParams) -> StateVector:
    """One circuit step: collide gate on each site, then both swap chains."""
    q = 2 * n_sites
    if state.q != q:
        raise ValueError(f"state has {state.q} qubits, lattice needs {q}")
    amps = state.amplitudes
    for site in range(n_sites):
        amps = apply_adjacent_gate(amps, q, chiral_collide_gate(params, site), 2 * site)
    amps = stream_down(stream_up(amps, n_sites), n_sites)
    return StateVector(amps, q)


def sector_project(state: StateVector, bodies: int) -> dict[tuple[int, ...], complex]:
    """Amplitudes of the ``bodies``-particle sector keyed by ascending 1-based qubits."""
    if bodies < 0 or bodies > state.q:
        raise ValueError("bodies out of range")
    out: dict[tuple[int, ...], complex] = {}
    for combo in combinations(range(state.q), bodies):
        index = sum(1 << b for b in combo)
        out[tuple(b + 1 for b in combo)] = complex(state.amplitudes[index])
    return out


def sector_populations(state: StateVector) -> NDArray[np.float64]:
    """Probability in each particle-number sector ``0..Q``."""
    return np.bincount(_popcounts(state.q), weights=np.abs(state.amplitudes) ** 2, minlength=state.q + 1)


def one_body_state(field: SpinorField | ArrayLike) -> StateVector:
    """Embed a one-body spinor field into the one-particle sector."""
    arr = field.sites if isinstance(field, SpinorField) else np.asarray(field, dtype=complex)
    n_sites = arr.shape[0]
    q = 2 * n_sites
    amps = np.zeros(1 << q, dtype=complex)
    bits = 2 * np.arange(n_sites)
    amps[1 << bits] = arr[:, 0]
    amps[1 << (bits + 1)] = arr[:, 1]
    return StateVector(amps, q)


def one_body_amplitudes(state: StateVector) -> NDArray[np.complex128]:
    """Inverse of :func:`one_body_state`: the ``(L, 2)`` one-particle amplitudes."""
    n_sites = state.q // 2
    bits = 2 * np.arange(n_sites)
    return np.stack([state.amplitudes[1 << bits], state.amplitudes[1 << (bits + 1)]], axis=1)


def slater_state(orbitals: Sequence[ArrayLike]) -> StateVector:
    """Antisymmetrized product of one-body orbitals (each an ``(L, 2)`` array).

    The amplitude of the ket with ascending modes ``j_1 < ... < j_n`` is the
    determinant ``det[phi_a(j_b)]``.  The result is normalized.
    """
    orbs = [np.asarray(o, dtype=complex).reshape(-1) for o in orbitals]
    n_modes = orbs[0].shape[0]
    if any(o.shape[0] != n_modes for o in orbs):
        raise ValueError("orbitals must share the lattice")
    mat = np.stack(orbs)
    amps = np.zeros(1 << n_modes, dtype=complex)
    for combo in combinations(range(n_modes), len(orbs)):
        amps[sum(1 << b for b in combo)] = np.linalg.det(mat[:, combo])
    nrm = np.linalg.norm(amps)
    if nrm == 0:
        raise ValueError("orbitals are linearly dependent")
    return StateVector(amps / nrm, n_modes)


def write_snapshot(path: str | PathLike[str], state: StateVector, n_sites: int, step: int) -> None:
    """Write a snapshot in the documented binary layout."""
    if state.q != 2 * n_sites:
        raise ValueError("Q must equal 2L")
    header = _HEADER.pack(SNAPSHOT_MAGIC, SNAPSHOT_VERSION, 0, state.q, n_sites, step)
    body = np.ascontiguousarray(state.amplitudes, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(body)


def read_snapshot(path: str | PathLike[str]) -> tuple[StateVector, int, int]:
    """Read a snapshot; returns ``(state, L, step)``."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise ValueError("truncated snapshot header")
    magic, version, _, q, n_sites, step = _HEADER.unpack_from(raw)
    if magic != SNAPSHOT_MAGIC or version != SNAPSHOT_VERSION:
        raise ValueError("not a version-1 snapshot file")
    expected = _HEADER.size + 16 * (1 << q)
    if len(raw) != expected:
        raise ValueError(f"snapshot size {len(raw)} != expected {expected}")
    amps = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).astype(np.complex128)
    return StateVector(amps, q), n_sites, step
