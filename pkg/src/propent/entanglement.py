"""Concurrence and three-tangle."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qstate import PureState, DensityMatrix, normalize, partial_trace

_SIGMA_YY = np.array(
    [[0, 0, 0, -1],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [-1, 0, 0, 0]], dtype=np.complex128)

DEGENERATE_DENOMINATOR = 1e-14
TANGLE_CROSSCHECK_TOL = 1e-8


class DegenerateError(ArithmeticError):
    """The far-field state vanishes identically (total destructive interference)."""


@dataclass(frozen=True)
class TwoPhotonAmplitudes:
    """``alpha|HH> + beta|HV> + gamma|VH> + delta|VV>``."""

    alpha: complex = 0
    beta: complex = 0
    gamma: complex = 0
    delta: complex = 0

    @classmethod
    def from_state(cls, state: PureState) -> "TwoPhotonAmplitudes":
        if state.n != 2:
            raise ValueError(f"expected a two-qubit state, got n={state.n}")
        return cls(*(complex(a) for a in state.amps))

    def as_state(self) -> PureState:
        return PureState([self.alpha, self.beta, self.gamma, self.delta])

    def normalized(self) -> "TwoPhotonAmplitudes":
        return TwoPhotonAmplitudes.from_state(normalize(self.as_state())[0])


@dataclass(frozen=True)
class PinholePair:
    """Photon 1 in ``a|H> + b|V>``, photon 2 in ``c|H> + d|V>``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def amplitudes(self) -> TwoPhotonAmplitudes:
        """Joint amplitudes of the product state."""
        a, b, c, d = self.a, self.b, self.c, self.d
        return TwoPhotonAmplitudes(a * c, a * d, b * c, b * d)


@dataclass(frozen=True)
class TangleReport:
    tau: float
    c_1_23: float
    c_12: float
    c_13: float


def concurrence_pure(state: PureState) -> float:
    """``2|alpha delta - beta gamma|`` of a two-qubit pure state (normalized first)."""
    if state.n != 2:
        raise ValueError(f"concurrence_pure needs n=2, got n={state.n}")
    a, b, c, d = normalize(state)[0].amps
    return min(1.0, 2 * abs(a * d - b * c))


def _wootters_lambdas(rho: np.ndarray) -> np.ndarray:
    # Singular values of X^T (sy x sy) X with rho = X X^H equal the square roots
    # of the eigenvalues of rho * rho_tilde, without squaring round-off.
    w, v = np.linalg.eigh(rho)
    if w[0] < -1e-10:
        raise ValueError(f"density matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    x = v * np.sqrt(w)
    lam = np.linalg.svd(x.T @ _SIGMA_YY @ x, compute_uv=False)
    return np.sort(lam)[::-1]


def concurrence_mixed(rho: DensityMatrix | np.ndarray) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)`` of a two-qubit density matrix."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)
    if m.shape != (4, 4):
        raise ValueError(f"concurrence_mixed needs a 4x4 matrix, got {m.shape}")
    lam = _wootters_lambdas(m)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def concurrence_farfield(amps: TwoPhotonAmplitudes, phi: float) -> float:
    """Closed-form concurrence of a general two-photon state after far-field propagation.

    Parameters
    ----------
    amps : TwoPhotonAmplitudes
        Normalized initial amplitudes.
    phi : float
        Half the path-length phase difference between the two detection
        processes (see :func:`propent.scene.farfield_phase`).

    Raises
    ------
    DegenerateError
        If the denominator vanishes, i.e. both paths cancel completely.
    """
    al, be, ga, de = amps.alpha, amps.beta, amps.gamma, amps.delta
    c2 = math.cos(2 * phi)
    num = abs(be**2 + ga**2 + 2 * be * ga * c2 - 4 * al * de * math.cos(phi) ** 2)
    den = 1 + c2 * (1 - abs(be) ** 2 - abs(ga) ** 2 + 2 * (be * ga.conjugate()).real)
    if abs(den) < DEGENERATE_DENOMINATOR:
        raise DegenerateError("far-field two-photon state vanishes")
    return num / den


def concurrence_pinhole(pair: PinholePair, phi: float, *, as_printed: bool = False) -> float:
    """Closed-form far-field concurrence for two photons in a product state.

    Numerator ``|(ad - cb)**2|``.  The denominator is
    ``2 cos^2(phi)(|ac|^2 + |bd|^2) + |ad|^2 + |cb|^2 + 2 cos(2 phi) Re[a d b* c*]``,
    which is the norm of the propagated product state.  ``as_printed=True``
    uses the variant with ``2|abcd| cos(phi)`` as the cross term instead; it
    only agrees with the propagated state when ``abcd == 0``.
    """
    a, b, c, d = (complex(x) for x in (pair.a, pair.b, pair.c, pair.d))
    num = abs((a * d - c * b) ** 2)
    cos2 = math.cos(phi) ** 2
    den = 2 * cos2 * (abs(a * c) ** 2 + abs(b * d) ** 2) + abs(a * d) ** 2 + abs(c * b) ** 2
    if as_printed:
        den += 2 * abs(a * b * c * d) * math.cos(phi)
    else:
        den += 2 * math.cos(2 * phi) * (a * d * (b * c).conjugate()).real
    if abs(den) < DEGENERATE_DENOMINATOR:
        raise DegenerateError("far-field two-photon state vanishes")
    return num / den


def hyperdeterminant_tangle(state: PureState) -> float:
    """Three-tangle as ``4|d1 - 2 d2 + 4 d3|`` (Cayley hyperdeterminant)."""
    if state.n != 3:
        raise ValueError(f"three-tangle needs n=3, got n={state.n}")
    a = normalize(state)[0].amps
    a000, a001, a010, a011, a100, a101, a110, a111 = a
    d1 = (a000**2 * a111**2 + a001**2 * a110**2
          + a010**2 * a101**2 + a100**2 * a011**2)
    d2 = (a000 * a111 * a011 * a100 + a000 * a111 * a101 * a010
          + a000 * a111 * a110 * a001 + a011 * a100 * a101 * a010
          + a011 * a100 * a110 * a001 + a101 * a010 * a110 * a001)
    d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100
    return float(4 * abs(d1 - 2 * d2 + 4 * d3))


def three_tangle(state: PureState) -> TangleReport:
    """Three-tangle from reduced states: ``C_1(23)^2 - C_12^2 - C_13^2``.

    ``C_1(23)^2 = 4 det(rho_1)``; the pairwise terms use :func:`concurrence_mixed`.
    The result is checked against :func:`hyperdeterminant_tangle`.
    """
    if state.n != 3:
        raise ValueError(f"three-tangle needs n=3, got n={state.n}")
    rho1 = partial_trace(state, [0]).matrix
    det1 = (rho1[0, 0] * rho1[1, 1] - abs(rho1[0, 1]) ** 2).real
    c_1_23_sq = max(0.0, 4 * det1)
    c12 = concurrence_mixed(partial_trace(state, [0, 1]))
    c13 = concurrence_mixed(partial_trace(state, [0, 2]))
    tau = float(c_1_23_sq - c12**2 - c13**2)
    check = hyperdeterminant_tangle(state)
    if abs(tau - check) > TANGLE_CROSSCHECK_TOL:
        raise ArithmeticError(f"three-tangle mismatch: reduced-state {tau:.12g} vs hyperdeterminant {check:.12g}")
    return TangleReport(tau=tau, c_1_23=math.sqrt(float(c_1_23_sq)), c_12=c12, c_13=c13)
