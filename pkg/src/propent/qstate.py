"""Dense polarization-qubit state algebra.

Amplitude index ``i`` encodes the bit string ``i1 ... in`` with qubit 0 as the
most significant bit; bit 0 is ``|H>`` and bit 1 is ``|V>``.  Every other
module in the package uses this order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ZERO_NORM = 1e-14
PSD_CLAMP = 1e-10


class ZeroStateError(ValueError):
    """Raised when a state has (numerically) vanishing norm."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Complex amplitude vector over ``n`` polarization qubits.

    The vector is stored as given; call :func:`normalize` to get a unit vector.
    """

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        size = amps.size
        if size < 2 or size & (size - 1):
            raise ValueError(f"amplitude vector length must be 2**n with n >= 1, got {size}")
        object.__setattr__(self, "amps", _frozen(amps))

    @property
    def n(self) -> int:
        return self.amps.size.bit_length() - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to ``(2,) * n``; axis ``j`` is qubit ``j``."""
        return self.amps.reshape((2,) * self.n)

    def amplitude(self, bits: str) -> complex:
        """Amplitude of a basis string such as ``"HVH"`` or ``"010"``."""
        return complex(self.amps[_bits_to_index(bits, self.n)])

    def __repr__(self):
        return f"PureState(n={self.n}, amps={np.array2string(self.amps, precision=4)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace matrix over ``log2(dim)`` qubits."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        dim = m.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ValueError(f"density matrix dimension must be 2**m, got {dim}")
        if np.abs(m - m.conj().T).max() > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > 1e-12:
            raise ValueError(f"density matrix trace is {np.trace(m).real}, expected 1")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.dim.bit_length() - 1

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues with round-off negatives clamped to zero.

        Raises ``ValueError`` if any eigenvalue is below ``-PSD_CLAMP``.
        """
        w = np.linalg.eigvalsh(self.matrix)
        if w[0] < -PSD_CLAMP:
            raise ValueError(f"density matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
        return np.clip(w, 0.0, None)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


HADAMARD = _frozen(np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2))
PHASE = _frozen(np.array([[1, 0], [0, 1j]], dtype=np.complex128))
PHASE_DAGGER = _frozen(np.array([[1, 0], [0, -1j]], dtype=np.complex128))
IDENTITY = _frozen(np.eye(2, dtype=np.complex128))

_LABELS = {"H": 0, "V": 1, "0": 0, "1": 1, "h": 0, "v": 1, "x": 0, "y": 1}


def _bits_to_index(bits: str, n: int | None = None) -> int:
    if n is not None and len(bits) != n:
        raise ValueError(f"expected {n} labels, got {bits!r}")
    idx = 0
    for ch in bits:
        try:
            idx = (idx << 1) | _LABELS[ch]
        except KeyError:
            raise ValueError(f"unknown polarization label {ch!r}") from None
    return idx


def basis_state(bits: str) -> PureState:
    """Computational basis state from a label string, e.g. ``basis_state("HHV")``.

    ``x``/``y`` are accepted as aliases of ``H``/``V`` (atomic dipole labels).
    """
    amps = np.zeros(2 ** len(bits), dtype=np.complex128)
    amps[_bits_to_index(bits)] = 1.0
    return PureState(amps)


def superposition(terms: dict[str, complex]) -> PureState:
    """Unnormalized superposition ``sum c |bits>`` from a ``{bits: c}`` mapping."""
    n = {len(k) for k in terms}
    if len(n) != 1:
        raise ValueError("all basis labels must have the same length")
    amps = np.zeros(2 ** n.pop(), dtype=np.complex128)
    for bits, c in terms.items():
        amps[_bits_to_index(bits)] += c
    return PureState(amps)


def single_qubit(h: complex, v: complex) -> PureState:
    return PureState([h, v])


def w_state(n: int) -> PureState:
    """Equal superposition of all strings with a single ``V``."""
    amps = np.zeros(2**n, dtype=np.complex128)
    for q in range(n):
        amps[1 << (n - 1 - q)] = 1.0
    return PureState(amps / np.sqrt(n))


def tensor_product(factors: Sequence[PureState]) -> PureState:
    """Kronecker product of the factors; factor 0 becomes the most significant qubit."""
    if len(factors) == 0:
        raise ValueError("tensor_product needs at least one factor")
    amps = np.ones(1, dtype=np.complex128)
    for f in factors:
        if f.norm == 0:
            raise ZeroStateError("tensor factor has zero norm")
        amps = np.kron(amps, f.amps)
    return PureState(amps)


def normalize(state: PureState) -> tuple[PureState, float]:
    """Return ``(unit state, original norm)``.

    Raises
    ------
    ZeroStateError
        If the norm is below ``ZERO_NORM``.
    """
    w = state.norm
    if w < ZERO_NORM:
        raise ZeroStateError(f"state norm {w:.3e} is below {ZERO_NORM:g}")
    return PureState(state.amps / w), w


def _check_qubit(state: PureState, qubit: int):
    if not 0 <= qubit < state.n:
        raise IndexError(f"qubit index {qubit} out of range for n={state.n}")


def apply_gate(state: PureState, gate: np.ndarray, qubit: int) -> PureState:
    """Apply a 2x2 ``gate`` to one qubit (0-based, 0 = most significant)."""
    _check_qubit(state, qubit)
    gate = np.asarray(gate, dtype=np.complex128)
    psi = np.tensordot(gate, state.tensor(), axes=([1], [qubit]))
    psi = np.moveaxis(psi, 0, qubit)
    return PureState(psi.reshape(-1))


def apply_gate_all(state: PureState, gate: np.ndarray) -> PureState:
    """Apply ``gate`` to every qubit, i.e. ``gate^{(x) n}``."""
    for q in range(state.n):
        state = apply_gate(state, gate, q)
    return state


def apply_local(state: PureState, gates: Sequence[np.ndarray]) -> PureState:
    """Apply one 2x2 gate per qubit (``gates[j]`` acts on qubit ``j``)."""
    if len(gates) != state.n:
        raise ValueError(f"need {state.n} gates, got {len(gates)}")
    for q, g in enumerate(gates):
        state = apply_gate(state, g, q)
    return state


def inner(a: PureState, b: PureState) -> complex:
    """``<a|b>``."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n} qubits")
    return complex(np.vdot(a.amps, b.amps))


def fidelity_upto_phase(a: PureState, b: PureState) -> float:
    """``|<a|b>|**2`` for normalized inputs; insensitive to global phases."""
    return min(1.0, abs(inner(a, b)) ** 2)


def partial_trace(state: PureState, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on the qubits in ``keep`` (0-based).

    The kept qubits appear in ascending order in the result.  The input is
    normalized first, so the result always has unit trace.
    """
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    n = state.n
    if keep[0] < 0 or keep[-1] >= n:
        raise IndexError(f"keep indices {keep} out of range for n={n}")
    unit, _ = normalize(state)
    rest = [q for q in range(n) if q not in keep]
    psi = np.transpose(unit.tensor(), keep + rest).reshape(2 ** len(keep), -1)
    rho = psi @ psi.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)
