"""Post-selected coincidence states.

An n-photon coincidence (one photon per detector) can happen through any of the
n! assignments of emitters to detectors.  The detected amplitude sums all of
them coherently.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .entanglement import TwoPhotonAmplitudes, PinholePair
from .qstate import PureState, ZeroStateError, normalize, ZERO_NORM
from .scene import Scene, transfer_blocks

DEFAULT_MAX_N = 10


@dataclass(frozen=True)
class DetectedState:
    """Normalized coincidence state; qubit ``j`` is detector ``j`` (H = e_theta, V = e_phi).

    ``weight`` is the norm of the coincidence amplitude before normalization,
    in units where each detector's strongest transfer block has unit norm.
    Weights are comparable between initial states on the same scene.
    """

    state: PureState
    weight: float


def _check_size(n: int, max_n: int):
    if n > max_n:
        raise ValueError(f"n={n} exceeds the permutation cap {max_n}; pass max_n to raise it")
    if n > DEFAULT_MAX_N:
        warnings.warn(f"n={n}: coincidence sum runs over {math.factorial(n)} assignments", RuntimeWarning, stacklevel=3)


def coincidence_amplitudes(blocks: np.ndarray, initial: np.ndarray) -> np.ndarray:
    """Sum over all emitter-to-detector assignments, contracted with the initial amplitudes.

    Parameters
    ----------
    blocks : ndarray, shape (n, n, 2, 2)
        ``blocks[l, j]`` maps emitter ``l``'s (x, y) amplitude to detector ``j``'s (H, V).
    initial : ndarray, shape (2**n,)
        Amplitudes ``D`` of the emitters' initial polarization state.

    Returns
    -------
    ndarray, shape (2**n,)
        Unnormalized detected amplitudes ``C``.

    Notes
    -----
    Detectors are filled in order.  After ``k`` detectors the partial sums are
    keyed by the set of emitters already used, so each assignment prefix is
    shared (``n 2**(n-1)`` contractions instead of ``n!``).  Tensor axes are the
    ``k`` detector outputs followed by the unused emitters in ascending order.
    """
    n = blocks.shape[0]
    layer = {0: np.asarray(initial, dtype=np.complex128).reshape((2,) * n)}
    for j in range(n):
        nxt: dict[int, np.ndarray] = {}
        for used in sorted(layer):
            x = layer[used]
            pos = j
            for l in range(n):
                if used >> l & 1:
                    continue
                y = np.tensordot(blocks[l, j], x, axes=([1], [pos]))
                y = np.moveaxis(y, 0, j)
                key = used | (1 << l)
                if key in nxt:
                    nxt[key] = nxt[key] + y
                else:
                    nxt[key] = y
                pos += 1
        layer = nxt
    (c,) = layer.values()
    return c.reshape(-1)


def detected_state(scene: Scene, initial: PureState, *, max_n: int = DEFAULT_MAX_N) -> DetectedState:
    """Polarization state registered by the detectors, post-selected on one photon each.

    The initial state's qubit ``l`` is emitter ``l``'s dipole orientation
    (H = x, V = y).  Raises :class:`ZeroStateError` when the coincidence
    amplitude vanishes.
    """
    n = scene.n
    if initial.n != n:
        raise ValueError(f"initial state has {initial.n} qubits but the scene has {n} emitters")
    _check_size(n, max_n)
    blocks = transfer_blocks(scene)
    # per-detector rescaling only changes the global factor
    scale = np.linalg.norm(blocks, ord=2, axis=(2, 3)).max(axis=0)
    blocks = blocks / scale[None, :, None, None]
    c = coincidence_amplitudes(blocks, initial.amps)
    w = float(np.linalg.norm(c))
    if w < ZERO_NORM:
        raise ZeroStateError(f"coincidence amplitude vanishes (norm {w:.3e})")
    return DetectedState(PureState(c / w), w)


def symmetrized_amplitudes(initial: PureState) -> np.ndarray:
    """Unnormalized ``C_i = sum over all n! subscript permutations of D``.

    Permuting the subscripts of a string with ``m`` V's visits every string
    of the same weight exactly ``m! (n-m)!`` times.
    """
    n = initial.n
    weights = np.array([bin(i).count("1") for i in range(2**n)])
    sums = np.zeros(n + 1, dtype=np.complex128)
    for m in range(n + 1):
        sums[m] = math.fsum(initial.amps[weights == m].real) + 1j * math.fsum(initial.amps[weights == m].imag)
        sums[m] *= math.factorial(m) * math.factorial(n - m)
    return sums[weights]


def farfield_symmetrize(initial: PureState) -> PureState:
    """Far-field detected state of an overhead array: the permutation-symmetrized input, normalized."""
    if initial.n < 2:
        raise ValueError("need at least two photons")
    return normalize(PureState(symmetrized_amplitudes(initial)))[0]


def farfield_two_photon_state(amps: TwoPhotonAmplitudes, phi: float) -> PureState:
    """Two-photon far-field state: each ``|pq>`` becomes ``e^{-i phi}|pq> + e^{i phi}|qp>``.

    Raises :class:`ZeroStateError` if the two paths cancel.
    """
    em, ep = complex(math.cos(phi), -math.sin(phi)), complex(math.cos(phi), math.sin(phi))
    a, b, g, d = amps.alpha, amps.beta, amps.gamma, amps.delta
    out = PureState([a * (em + ep), b * em + g * ep, g * em + b * ep, d * (em + ep)])
    return normalize(out)[0]


def pinhole_farfield_state(pair: PinholePair, phi: float) -> PureState:
    """``e^{-i phi}(a,b) (x) (c,d) + e^{i phi}(c,d) (x) (a,b)``, normalized."""
    return farfield_two_photon_state(pair.amplitudes(), phi)


class BeamSplitterConvention(enum.Enum):
    """Phase convention of the balanced beam splitter.

    ``PAPER`` gives H photons reflection phase ``+i`` and V photons ``-i``.
    ``SYMMETRIC`` uses ``[[1, i], [i, 1]]/sqrt(2)`` for both polarizations.
    """

    PAPER = "paper"
    SYMMETRIC = "symmetric"


_S = 1 / math.sqrt(2)
_BS_SYMMETRIC = np.array([[1, 1j], [1j, 1]]) * _S
# H photons see +i reflection, V photons -i; reproduces
# |1H,1V> -> (|1H,0> + i|0,1H>)(-i|1V,0> + |0,1V>)/2 exactly.
_BS_PAPER = {0: np.array([[1, 1j], [1j, 1]]) * _S, 1: np.array([[1, -1j], [-1j, 1]]) * _S}


def _port_unitaries(convention: BeamSplitterConvention):
    if convention is BeamSplitterConvention.SYMMETRIC:
        return {0: _BS_SYMMETRIC, 1: _BS_SYMMETRIC}
    return _BS_PAPER


def beamsplitter_postselect(amps: TwoPhotonAmplitudes,
                            convention: BeamSplitterConvention = BeamSplitterConvention.PAPER
                            ) -> tuple[PureState | None, float]:
    """Balanced beam splitter followed by post-selection on one photon per output port.

    Input ``|p_A, q_B>`` has a ``p``-polarized photon in port A and a
    ``q``-polarized photon in port B.  Returns ``(state, weight)``; ``state``
    is the normalized conditional state (qubit 0 = port A, qubit 1 = port B)
    or ``None`` when no coincidence is possible.  ``weight`` is the norm of the
    coincidence-sector amplitude.
    """
    u = _port_unitaries(BeamSplitterConvention(convention))
    inp = np.array([amps.alpha, amps.beta, amps.gamma, amps.delta], dtype=np.complex128)
    out = np.zeros(4, dtype=np.complex128)
    for idx, amp in enumerate(inp):
        if amp == 0:
            continue
        p, q = idx >> 1, idx & 1
        # creation operators a_p^dag (port A) and b_q^dag (port B) after the splitter;
        # keep the terms with one photon in each output port
        out[2 * p + q] += amp * u[p][0, 0] * u[q][1, 1]
        out[2 * q + p] += amp * u[p][1, 0] * u[q][0, 1]
    w = float(np.linalg.norm(out))
    if w < ZERO_NORM:
        return None, w
    return PureState(out / w), w
