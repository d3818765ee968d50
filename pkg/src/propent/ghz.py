"""GHZ-state synthesis from a separable state, and the cotangent identities behind it.

The separable state whose l-th photon is polarized at ``l * 180/n`` degrees
from the horizontal symmetrizes, in the far field, into a state that is
locally equivalent to ``(|H...H> - |V...V>)/sqrt(2)``.  The decoding unitary
is ``(Hadamard * Sdagger)`` on every photon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .postselect import symmetrized_amplitudes
from .qstate import (HADAMARD, PHASE_DAGGER, PureState, apply_gate_all, single_qubit,
                     tensor_product, fidelity_upto_phase, normalize)

MAX_N = 20
MAX_VIETE_DEGREE = 25


def magic_product_state(n: int) -> PureState:
    """``(x)_{l=1..n} (sin(l pi/n)|H> + cos(l pi/n)|V>)``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    factors = []
    for l in range(1, n + 1):
        x = l * math.pi / n
        factors.append(single_qubit(math.sin(x), math.cos(x)))
    return tensor_product(factors)


def ghz_target(n: int) -> PureState:
    """``(|H>^n - |V>^n)/sqrt(2)``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = 1 / math.sqrt(2)
    amps[-1] = -1 / math.sqrt(2)
    return PureState(amps)


def decode_ghz(state: PureState) -> PureState:
    """Apply ``S^dagger`` then ``H`` to every qubit."""
    return apply_gate_all(apply_gate_all(state, PHASE_DAGGER), HADAMARD)


def ghz_fidelity(n: int) -> float:
    """Fidelity (up to phase) of the decoded far-field state of ``magic_product_state(n)`` with GHZ_n."""
    chi = normalize(PureState(symmetrized_amplitudes(magic_product_state(n))))[0]
    return fidelity_upto_phase(decode_ghz(chi), ghz_target(n))


def target_weight_amplitude(n: int, m: int) -> int:
    """Symmetric amplitude pattern ``B_{n,m}``: 0 for even ``m``, ``(-1)**((m-1)/2)`` for odd."""
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    return 0 if m % 2 == 0 else (-1) ** ((m - 1) // 2)


@dataclass(frozen=True)
class GhzTargetSpec:
    n: int
    b_amps: dict[int, int]
    c_over_c1: dict[int, int]


def ghz_target_spec(n: int) -> GhzTargetSpec:
    b = {m: target_weight_amplitude(n, m) for m in range(n + 1)}
    ratios = {m: b[m] for m in range(1, n + 1) if m % 2}
    return GhzTargetSpec(n, b, ratios)


@dataclass
class ConditionReport:
    """Outcome of checking the weight-class amplitudes of the symmetrized magic state.

    ``amplitudes[m]`` is the (unnormalized) amplitude of any string with ``m`` V's.
    """

    n: int
    amplitudes: dict[int, complex]
    even_max_rel: float
    odd_ratio_max_dev: float
    tol_a: float = 1e-12
    tol_b: float = 1e-10
    ratios: dict[int, complex] = field(default_factory=dict)

    @property
    def condition_a(self) -> bool:
        return self.even_max_rel <= self.tol_a

    @property
    def condition_b(self) -> bool:
        return self.odd_ratio_max_dev <= self.tol_b

    @property
    def holds(self) -> bool:
        return self.condition_a and self.condition_b


def verify_conditions(n: int, *, max_n: int = MAX_N) -> ConditionReport:
    """Check (a) even-weight amplitudes vanish and (b) odd-weight ratios to weight 1 are ``(-1)**((m-1)/2)``.

    Condition (a) is measured relative to the largest amplitude.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > max_n:
        raise ValueError(f"n={n} exceeds cap {max_n}")
    c = symmetrized_amplitudes(magic_product_state(n))
    by_m = {m: complex(c[(1 << m) - 1]) for m in range(n + 1)}
    scale = max(abs(v) for v in by_m.values())
    even = max(abs(by_m[m]) for m in range(0, n + 1, 2)) / scale
    ratios = {m: by_m[m] / by_m[1] for m in range(1, n + 1, 2)}
    dev = max(abs(r - target_weight_amplitude(n, m)) for m, r in ratios.items())
    return ConditionReport(n, by_m, even, dev, ratios=ratios)


def _pair_count(n: int) -> int:
    # photon pairs (l, n-l) with 1 <= l < n/2
    return (n - 1) // 2


def amplitude_closed_form(n: int, m: int) -> float:
    """Closed-form weight-class amplitude of the symmetrized magic state for odd ``m``.

    ``-(-1)**m' m! (n-m)! sum_{|S|=m'} prod_{i in S} cos^2(i pi/n) prod_{k not in S} sin^2(k pi/n)``
    with ``m' = (m-1)/2`` and ``i, k`` over ``1..floor((n-1)/2)``.  The leading
    minus sign is ``cos(pi)`` from the last photon, which is always V.
    """
    if m % 2 == 0 or not 1 <= m <= n:
        raise ValueError("m must be odd with 1 <= m <= n")
    p = _pair_count(n)
    mp = (m - 1) // 2
    if mp > p:
        return 0.0
    x = np.arange(1, p + 1) * math.pi / n
    cos2, sin2 = np.cos(x) ** 2, np.sin(x) ** 2
    # coefficient of y^mp in prod (sin2 + cos2 y)
    poly = np.array([1.0])
    for s2, c2 in zip(sin2, cos2):
        poly = np.convolve(poly, [s2, c2])
    return -((-1) ** mp) * math.factorial(m) * math.factorial(n - m) * float(poly[mp])


def elementary_symmetric(values, k: int) -> float:
    """``e_k`` of ``values`` via the coefficients of ``prod (1 + v x)``; ``e_0 = 1``."""
    vals = sorted((float(v) for v in values), key=abs, reverse=True)
    if k < 0 or k > len(vals):
        return 0.0
    e = np.zeros(len(vals) + 1)
    e[0] = 1.0
    for i, v in enumerate(vals, start=1):
        e[1:i + 1] = e[1:i + 1] + v * e[0:i]
    return float(e[k])


def identity_rhs(n: int, m: int) -> Fraction:
    """``(n-1)! / (m! (n-m)!)`` in exact arithmetic."""
    return Fraction(math.factorial(n - 1), math.factorial(m) * math.factorial(n - m))


def cotangent_identity(n: int, m: int) -> tuple[float, float]:
    """Both sides of ``e_{m'}(cot^2(i pi/n), i = 1..p) = (n-1)!/(m!(n-m)!)``.

    ``m' = (m-1)/2`` and ``p = floor((n-1)/2)``, i.e. ``(n-1)/2`` for odd ``n``
    and ``n/2 - 1`` for even ``n``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if m % 2 == 0 or m < 1:
        raise ValueError("m must be a positive odd integer")
    p = _pair_count(n)
    mp = (m - 1) // 2
    if mp > p or m > n:
        raise ValueError(f"m={m} too large for n={n}")
    roots = [1 / math.tan(i * math.pi / n) ** 2 for i in range(1, p + 1)]
    return elementary_symmetric(roots, mp), float(identity_rhs(n, m))


@dataclass(frozen=True)
class VietePolynomial:
    """``Q(t) = sum_k (-1)^k C(n, 2k+1) t^(p-k)`` with roots ``cot^2(r pi/n)``, ``r = 1..p``.

    ``n`` is ``2p+1`` or ``2p+2``.  ``coeffs[k]`` multiplies ``t^(p-k)``.
    """

    p: int
    n: int
    coeffs: tuple[int, ...]
    roots: tuple[float, ...]

    def __call__(self, t):
        return np.polyval(np.array(self.coeffs, dtype=float), t)

    def root_residuals(self, dps: int = 60) -> list[float]:
        """``|Q(t_r)|`` with roots and evaluation in ``dps``-digit arithmetic.

        In double precision the residual at the largest root is dominated by
        the rounding of ``t_r`` itself times ``|Q'(t_r)|``.
        """
        with mpmath.workdps(dps):
            out = []
            for r in range(1, self.p + 1):
                t = mpmath.cot(r * mpmath.pi / self.n) ** 2
                q = mpmath.mpf(0)
                for c in self.coeffs:
                    q = q * t + c
                out.append(float(abs(q)))
        return out

    def float_residuals(self) -> np.ndarray:
        """``|Q(t_r)| / sum_k |c_k| t_r^(p-k)`` in double precision."""
        t = np.array(self.roots)
        scale = np.polyval(np.abs(np.array(self.coeffs, dtype=float)), t)
        return np.abs(self(t)) / scale

    def elementary_symmetric_from_coeffs(self, j: int) -> Fraction:
        """``e_j`` of the roots from the coefficients: ``(-1)^j c_j / c_0``."""
        return Fraction((-1) ** j * self.coeffs[j], self.coeffs[0])


def viete_polynomial(p: int, *, n: int | None = None) -> VietePolynomial:
    if p < 1:
        raise ValueError("degree must be at least 1")
    if p > MAX_VIETE_DEGREE:
        raise ValueError(f"degree {p} > {MAX_VIETE_DEGREE}: coefficients no longer exact in double precision")
    if n is None:
        n = 2 * p + 1
    if n not in (2 * p + 1, 2 * p + 2):
        raise ValueError(f"n must be 2p+1 or 2p+2, got n={n} for p={p}")
    coeffs = tuple((-1) ** k * math.comb(n, 2 * k + 1) for k in range(p + 1))
    roots = tuple(1 / math.tan(r * math.pi / n) ** 2 for r in range(1, p + 1))
    return VietePolynomial(p, n, coeffs, roots)


@dataclass(frozen=True)
class CoincidenceSpec:
    """n-fold coincidence probability for ``n`` emitters into ``4 pi``.

    Each detector covers ``omega / n`` of the total solid angle ``omega``.
    """

    n: int
    eta_q: float
    omega: float
    eta: float
    p_n: float
    stirling: float

    @property
    def stirling_ratio(self) -> float:
        return self.stirling / self.p_n


def coincidence_probability(n: int, eta_q: float, omega: float) -> CoincidenceSpec:
    """``P_n = n! eta^n`` with ``eta = eta_q omega / (4 pi n)``, plus the large-``n`` form."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 < eta_q <= 1:
        raise ValueError("eta_q must lie in (0, 1]")
    if not 0 < omega <= 4 * math.pi * (1 + 1e-12):
        raise ValueError("omega must lie in (0, 4 pi]")
    eta = eta_q * omega / (4 * math.pi * n)
    p_n = math.factorial(n) * eta**n
    stirling = math.sqrt(2 * math.pi * n) * (eta_q * omega / (4 * math.pi * math.e)) ** n
    return CoincidenceSpec(n, eta_q, omega, eta, p_n, stirling)
