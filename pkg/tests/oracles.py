"""Slow reference implementations used only by the tests.

Nothing here calls into the package's propagation or symmetrization code.
"""
import itertools
import math

import numpy as np


def random_state_amps(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


def random_unitary(rng, dim=2):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def bits_of(index, n):
    return [(index >> (n - 1 - q)) & 1 for q in range(n)]


def index_of(bits):
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


def permutation_symmetrize(amps, n):
    """``C_i = sum over all n! subscript permutations of D``, enumerated literally."""
    out = np.zeros(2**n, dtype=complex)
    for i in range(2**n):
        bits = bits_of(i, n)
        for perm in itertools.permutations(range(n)):
            out[i] += amps[index_of([bits[p] for p in perm])]
    return out


def reduced_density(amps, n, keep):
    """Partial trace by explicit summation over the traced-out bits."""
    keep = list(keep)
    rest = [q for q in range(n) if q not in keep]
    dk = 2 ** len(keep)
    rho = np.zeros((dk, dk), dtype=complex)
    for i in range(2**n):
        bi = bits_of(i, n)
        for j in range(2**n):
            bj = bits_of(j, n)
            if any(bi[q] != bj[q] for q in rest):
                continue
            a = index_of([bi[q] for q in keep])
            b = index_of([bj[q] for q in keep])
            rho[a, b] += amps[i] * np.conj(amps[j])
    return rho


def wootters_by_eigenvalues(rho):
    """Concurrence from the eigenvalues of rho (sy x sy) rho* (sy x sy)."""
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    r = rho @ yy @ rho.conj() @ yy
    ev = np.sort(np.abs(np.linalg.eigvals(r)))[::-1]
    lam = np.sqrt(ev)
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def _spherical_basis(direction):
    x, y, z = direction
    theta = math.atan2(math.hypot(x, y), z)
    phi = math.atan2(y, x)
    e_theta = np.array([math.cos(phi) * math.cos(theta), math.sin(phi) * math.cos(theta), -math.sin(theta)])
    e_phi = np.array([-math.sin(phi), math.cos(phi), 0.0])
    return e_theta, e_phi


def field_amplitude(emitter, detector, dipole_axis, pol, model):
    """Field of a unit x- or y-dipole at ``emitter`` projected on the detector polarization.

    ``dipole_axis`` 0 = x, 1 = y; ``pol`` 0 = e_theta, 1 = e_phi.  Units with k = 1.
    """
    R = float(np.linalg.norm(np.asarray(detector) - np.asarray(emitter)))
    phase = np.exp(1j * R)
    if model == "pinhole":
        return phase / R if dipole_axis == pol else 0.0
    s = np.zeros(3)
    s[dipole_axis] = 1.0
    e = _spherical_basis(detector)[pol]
    return float(e @ s) * (1 / R + 1 / R**3 - 1j / R**2) * phase


def detected_amplitudes_bruteforce(emitters, detectors, amps, model):
    """Enumerate every assignment and every operator string explicitly (unnormalized)."""
    n = len(emitters)
    out = np.zeros(2**n, dtype=complex)
    for i in range(2**n):
        out_bits = bits_of(i, n)
        total = 0j
        for a in range(2**n):
            if amps[a] == 0:
                continue
            in_bits = bits_of(a, n)
            for sigma in itertools.permutations(range(n)):
                # detector j receives the photon of emitter sigma[j]
                term = amps[a]
                for j in range(n):
                    l = sigma[j]
                    term *= field_amplitude(emitters[l], detectors[j], in_bits[l], out_bits[j], model)
                total += term
        out[i] = total
    return out
