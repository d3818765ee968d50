"""Emitter/detector geometry and the dipole propagation kernel.

Lengths are carried in units of ``1/k`` by default (``k = 1``), so ``kd``,
``kr`` and ``kz`` can be passed straight in as coordinates.  The overall
field prefactor and the common decay envelope multiply every coincidence
amplitude equally and are dropped; post-selection normalization removes them.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

MIN_DISTANCE = 1e-9
FAR_FIELD_THRESHOLD = 1e-3


class EmitterModel(enum.Enum):
    PINHOLE = "pinhole"
    DIPOLE = "dipole"


@dataclass(frozen=True, eq=False)
class Scene:
    """Emitters and detectors in 3D.

    Detector polarization bases are the spherical unit vectors ``e_theta``
    (logical H) and ``e_phi`` (logical V) of the detector direction as seen
    from the coordinate origin.
    """

    emitters: np.ndarray
    detectors: np.ndarray
    model: EmitterModel = EmitterModel.DIPOLE
    k: float = 1.0

    def __post_init__(self):
        em = np.array(self.emitters, dtype=float).reshape(-1, 3)
        de = np.array(self.detectors, dtype=float).reshape(-1, 3)
        if len(em) != len(de):
            raise ValueError(f"{len(em)} emitters but {len(de)} detectors; post-selection needs one detector per photon")
        if len(em) == 0:
            raise ValueError("scene has no emitters")
        if not self.k > 0:
            raise ValueError("wavenumber must be positive")
        for a in (em, de):
            a.setflags(write=False)
        object.__setattr__(self, "emitters", em)
        object.__setattr__(self, "detectors", de)
        object.__setattr__(self, "model", EmitterModel(self.model))
        r = self.distances()
        if r.min() * self.k < MIN_DISTANCE:
            raise ValueError("a detector coincides with an emitter")

    @property
    def n(self) -> int:
        return len(self.emitters)

    def distances(self) -> np.ndarray:
        """``R[l, j]`` = distance from emitter ``l`` to detector ``j``."""
        diff = self.detectors[None, :, :] - self.emitters[:, None, :]
        return np.sqrt(np.einsum("ljk,ljk->lj", diff, diff))

    def detector_angles(self) -> np.ndarray:
        """``(theta_j, phi_j)`` rows: polar angle from +z and azimuth, seen from the origin."""
        x, y, z = self.detectors.T
        theta = np.arctan2(np.hypot(x, y), z)
        phi = np.arctan2(y, x)
        return np.column_stack([theta, phi])


def build_two_source_scene(kd: float, kr: float, theta: float,
                           model: EmitterModel = EmitterModel.DIPOLE) -> Scene:
    """Two emitters on the x axis and two detectors mirrored about the z axis.

    Emitter 1 sits at ``(+d/2, 0, 0)``, emitter 2 at ``(-d/2, 0, 0)``;
    detector 3 at ``r (sin theta, 0, cos theta)`` and detector 4 at
    ``r (-sin theta, 0, cos theta)``.  ``theta`` is in radians.
    """
    if not kd > 0 or not kr > 0:
        raise ValueError("kd and kr must be positive")
    s, c = math.sin(theta), math.cos(theta)
    emitters = [[kd / 2, 0, 0], [-kd / 2, 0, 0]]
    detectors = [[kr * s, 0, kr * c], [-kr * s, 0, kr * c]]
    return Scene(emitters, detectors, model)


def build_array_scene(n: int, kd: float, kz: float,
                      model: EmitterModel = EmitterModel.DIPOLE) -> Scene:
    """Linear emitter array at ``(l d, 0, 0)`` with a detector at height ``z`` above each."""
    if n < 2:
        raise ValueError("array scene needs n >= 2")
    if not kd > 0 or not kz > 0:
        raise ValueError("kd and kz must be positive")
    xs = np.arange(n) * kd
    emitters = np.column_stack([xs, np.zeros(n), np.zeros(n)])
    detectors = np.column_stack([xs, np.zeros(n), np.full(n, float(kz))])
    return Scene(emitters, detectors, model)


def far_field_ratio(n: int, kd: float, kz: float) -> float:
    """``n^2 d^2 / (2 z^2)``; the array is in the far field when this is << 1."""
    return n * n * kd * kd / (2 * kz * kz)


def is_far_field(n: int, kd: float, kz: float, threshold: float = FAR_FIELD_THRESHOLD) -> bool:
    return far_field_ratio(n, kd, kz) < threshold


def radial_factor(kR: float) -> complex:
    """``exp(i kR) (1/kR + 1/kR^3 - i/kR^2)``: far, induction and static dipole terms."""
    if not kR > 0:
        raise ValueError("kR must be positive")
    inv = 1.0 / kR
    return complex(math.cos(kR), math.sin(kR)) * complex(inv + inv**3, -inv * inv)


def pinhole_factor(kR: float) -> complex:
    """Scalar spherical wave ``exp(i kR) / kR``."""
    if not kR > 0:
        raise ValueError("kR must be positive")
    return complex(math.cos(kR), math.sin(kR)) / kR


def angular_matrix(theta: float, phi: float) -> np.ndarray:
    """Projection of x/y dipole components onto ``(e_theta, e_phi)``.

    Rows are detector polarizations (theta, phi), columns dipole components (x, y).
    """
    ct = math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    return np.array([[cp * ct, sp * ct],
                     [-sp, cp]], dtype=np.complex128)


def transfer_block(scene: Scene, emitter: int, detector: int) -> np.ndarray:
    """2x2 map from emitter ``emitter``'s (x, y) components to detector (theta, phi) polarization."""
    kR = scene.k * scene.distances()[emitter, detector]
    if scene.model is EmitterModel.PINHOLE:
        return pinhole_factor(kR) * np.eye(2, dtype=np.complex128)
    theta, phi = scene.detector_angles()[detector]
    return radial_factor(kR) * angular_matrix(theta, phi)


def transfer_blocks(scene: Scene) -> np.ndarray:
    """All transfer blocks, shape ``(n_emitters, n_detectors, 2, 2)``."""
    n = scene.n
    kR = scene.k * scene.distances()
    out = np.empty((n, n, 2, 2), dtype=np.complex128)
    if scene.model is EmitterModel.PINHOLE:
        for l in range(n):
            for j in range(n):
                out[l, j] = pinhole_factor(kR[l, j]) * np.eye(2)
        return out
    angles = scene.detector_angles()
    ang = [angular_matrix(*angles[j]) for j in range(n)]
    for l in range(n):
        for j in range(n):
            out[l, j] = radial_factor(kR[l, j]) * ang[j]
    return out


def _distance_gap(src: np.ndarray, det_a: np.ndarray, det_b: np.ndarray) -> float:
    # |det_a - src| - |det_b - src| without cancellation between two large distances.
    ra = np.linalg.norm(det_a - src)
    rb = np.linalg.norm(det_b - src)
    sq_gap = (det_a @ det_a - det_b @ det_b) - 2 * src @ (det_a - det_b)
    return float(sq_gap / (ra + rb))


def farfield_phase(scene: Scene) -> float:
    """``k (R14 + R23 - R13 - R24) / 2`` for a scene with emitters 1, 2 and detectors 3, 4."""
    if scene.n != 2:
        raise ValueError(f"farfield_phase needs exactly two emitters and two detectors, got {scene.n}")
    e1, e2 = scene.emitters
    d3, d4 = scene.detectors
    return 0.5 * scene.k * (_distance_gap(e1, d4, d3) + _distance_gap(e2, d3, d4))


@dataclass(frozen=True, eq=False)
class SuperradiantModel:
    """Dipole-dipole coupling between emitters.

    ``matrix[i, j] = exp(i k d_ij) / (k d_ij)`` off the diagonal.  Each
    eigenvalue ``alpha_p + i beta_p`` gives a collective mode with frequency
    shift ``gamma alpha_p / 2`` and decay rate ``gamma (1 + beta_p) / 2``.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    gamma: float = 1.0

    @property
    def frequency_shifts(self) -> np.ndarray:
        return self.gamma * self.eigenvalues.real / 2

    @property
    def decay_rates(self) -> np.ndarray:
        return self.gamma * (1 + self.eigenvalues.imag) / 2

    @property
    def max_coupling(self) -> float:
        """Largest ``|alpha_p + i beta_p|``; small values mean the collective shifts can be ignored."""
        return float(np.abs(self.eigenvalues).max())


def interaction_matrix(positions: np.ndarray, k: float = 1.0) -> np.ndarray:
    pos = np.asarray(positions, dtype=float).reshape(-1, 3)
    n = len(pos)
    m = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            if i != j:
                kd = k * np.linalg.norm(pos[i] - pos[j])
                if kd <= 0:
                    raise ValueError("emitters must be at distinct positions")
                m[i, j] = np.exp(1j * kd) / kd
    return m


def superradiant_model(positions: np.ndarray, k: float = 1.0, gamma: float = 1.0) -> SuperradiantModel:
    """Eigen-decomposition of the coupling matrix for arbitrary emitter positions.

    The matrix is complex symmetric, so eigenvectors are not orthogonal in general.
    """
    m = interaction_matrix(positions, k)
    w, v = np.linalg.eig(m)
    order = np.lexsort((w.imag, w.real))
    return SuperradiantModel(m, w[order], v[:, order], gamma)


def superradiant_eigs(kd: float, gamma: float = 1.0) -> SuperradiantModel:
    """Two atoms a distance ``d`` apart: eigenvalues ``-g, +g`` with ``g = exp(i kd)/kd``.

    Eigenvectors are ``(1, -1)/sqrt(2)`` and ``(1, 1)/sqrt(2)``.
    """
    if not kd > 0:
        raise ValueError("kd must be positive")
    g = complex(math.cos(kd), math.sin(kd)) / kd
    m = np.array([[0, g], [g, 0]], dtype=np.complex128)
    s = 1 / math.sqrt(2)
    vecs = np.array([[s, s], [-s, s]], dtype=np.complex128)
    return SuperradiantModel(m, np.array([-g, g]), vecs, gamma)
