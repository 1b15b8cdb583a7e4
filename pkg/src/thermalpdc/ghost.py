"""Fourth-order correlation maps, ghost imaging and ghost diffraction.

The detection-plane intensity correlation of the Test and Reference arms
reduces, for the pairwise-correlated source, to the squared modulus of a
single sum over transverse momentum:

    G2(x_R, x_T) = | sum_q  h_R(x_R, -q) h_T(x_T, q) C_q |^2

where C_q = cosh|kappa| sinh|kappa| (1 + mu_t + mu_r) is the per-mode
correlation amplitude and h_R, h_T are the Fourier-transformed impulse
responses of the two arms.  Transverse coordinates are one dimensional; the
two-dimensional case is the tensor product of identical kernels.

Geometry: the object sits a distance d1 from the source in the Test arm;
the Reference arm propagates d2 to a lens of focal length f_r and then d3
to the scanning detector.  With f_r != d3 (imaging branch) and the
back-propagating thin-lens condition 1/(d1+d2) + 1/d3 = 1/f_r, the
bucket-integrated correlation reproduces the object intensity inverted and
magnified by M = d3/(d1+d2); with f_r = d3 (Fourier branch) and a
collection lens in the Test arm the correlation at x_T = 0 samples the
squared object spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .gaussian import ModeParams
from .fock import (
    DisentangledCoefficients,
    cross_amplitude,
    evolve_thermal_pair,
    moments,
)
from .objects import SampledObject

# Geometry classification, relative to 1/d3: below DELTA_TOL the lens-detector
# spacing is treated as exactly focal (Fourier branch); between DELTA_TOL and
# ILL_CONDITIONED_TOL the imaging kernel blows up and the geometry is refused.
DELTA_TOL = 1e-9
ILL_CONDITIONED_TOL = 1e-6

# Fourier-branch momentum selection: a detector pixel contributes only when
# its mapped momentum falls within this fraction of a grid step.
SNAP_FRACTION = 1e-6

_PROFILE_SYMMETRY_RTOL = 1e-12


class GeometryError(ValueError):
    """Raised when a requested reconstruction does not fit the geometry."""


class CollectionOptics(Enum):
    """Test-arm collection scheme: detector on the object plane, or on the
    Fourier plane of a collection lens behind the object."""

    OBJECT_PLANE = "object-plane"
    FOURIER_LENS = "fourier-lens"


@dataclass(frozen=True)
class GhostGeometry:
    """Distances, focal lengths and collection variant of the two arms.

    All lengths in meters.  f_t is only used by the Fourier-lens collection
    variant.  The thin-lens residual 1/(d1+d2) + 1/d3 - 1/f_r is stored for
    diagnostics, not forced to zero: a nonzero value defocuses the ghost
    image but is not an error.
    """

    wavelength: float
    d1: float
    d2: float
    d3: float
    f_r: float
    f_t: Optional[float] = None
    variant: CollectionOptics = CollectionOptics.OBJECT_PLANE

    def __post_init__(self):
        for name in ("wavelength", "d1", "d2", "d3", "f_r"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.f_t is not None and self.f_t <= 0:
            raise ValueError("f_t must be > 0")

    @property
    def magnification(self) -> float:
        return self.d3 / (self.d1 + self.d2)

    @property
    def thin_lens_residual(self) -> float:
        return 1.0 / (self.d1 + self.d2) + 1.0 / self.d3 - 1.0 / self.f_r

    @property
    def detune(self) -> float:
        """1/d3 - 1/f_r, the quantity separating the two branches."""
        return 1.0 / self.d3 - 1.0 / self.f_r

    @property
    def branch(self) -> str:
        rel = abs(self.detune) * self.d3
        if rel <= DELTA_TOL:
            return "fourier"
        if rel < ILL_CONDITIONED_TOL:
            raise GeometryError(
                f"ill-conditioned geometry: |1/d3 - 1/f_r| = {abs(self.detune):.3e} "
                "is too close to the focal configuration"
            )
        return "imaging"

    @property
    def lens_term(self) -> float:
        """1 / (1/d3 - 1/f_r); imaging branch only."""
        if self.branch != "imaging":
            raise GeometryError("lens term is defined on the imaging branch only")
        return 1.0 / self.detune


@dataclass(frozen=True)
class MomentumGrid:
    """Symmetric uniform grid of 2 n_half + 1 transverse momenta m * dq."""

    n_half: int
    dq: float

    def __post_init__(self):
        if self.n_half < 1:
            raise ValueError("n_half must be >= 1")
        if self.dq <= 0:
            raise ValueError("dq must be > 0")

    @property
    def values(self) -> np.ndarray:
        return np.arange(-self.n_half, self.n_half + 1) * self.dq

    @classmethod
    def spanning(cls, q_support: float, n_half: int = 512, factor: float = 8.0) -> "MomentumGrid":
        """Grid whose half window covers `factor` times a spectral support."""
        return cls(n_half, factor * q_support / n_half)


class GainProfile:
    """Per-momentum source parameters; subclasses define mode_params(q)."""

    def mode_params(self, q: float) -> ModeParams:
        raise NotImplementedError

    def correlation_amplitudes(self, q: np.ndarray) -> np.ndarray:
        return np.array([correlation_amplitude(float(qi), self) for qi in q])


@dataclass(frozen=True)
class ConstantProfile(GainProfile):
    """Same parameters for every momentum (flat phase matching)."""

    params: ModeParams

    def mode_params(self, q: float) -> ModeParams:
        return self.params

    def correlation_amplitudes(self, q: np.ndarray) -> np.ndarray:
        return np.full(len(q), correlation_amplitude(0.0, self))


@dataclass(frozen=True)
class SincProfile(GainProfile):
    """Phase-matched gain |kappa(q)| = kappa0 |sinc(bandwidth q^2)|.

    Models the quadratic dependence of the longitudinal momentum mismatch
    on q; the first zero sits at q = sqrt(pi / bandwidth).
    """

    kappa0: float
    bandwidth: float
    mu_t: float = 0.0
    mu_r: float = 0.0
    phase: float = 0.0

    def mode_params(self, q: float) -> ModeParams:
        arg = self.bandwidth * q * q
        s = 1.0 if arg == 0 else math.sin(arg) / arg
        return ModeParams(self.mu_t, self.mu_r, self.kappa0 * abs(s), self.phase)


@dataclass(frozen=True)
class CallableProfile(GainProfile):
    """Arbitrary mapping q -> ModeParams; must be even in q to be usable."""

    fn: object

    def mode_params(self, q: float) -> ModeParams:
        return self.fn(q)


def correlation_amplitude(q: float, profile: GainProfile) -> float:
    """Per-mode pairwise correlation amplitude u v (1 + mu_t + mu_r)."""
    p = profile.mode_params(q)
    return p.u * p.v * (1.0 + p.mu_t + p.mu_r)


@dataclass(frozen=True)
class G2Map:
    """Sampled fourth-order correlation over detector coordinates.

    values[i, j] = G2(x_r[i], x_t[j]) >= 0.
    """

    x_r: np.ndarray
    x_t: np.ndarray
    values: np.ndarray

    def bucket_reduce(self) -> np.ndarray:
        """Integrate over the Test coordinate (Riemann sum over the grid).

        The bucket detector is modeled as covering the whole x_t grid; an
        object wider than the grid would bias the reduction.
        """
        dx = float(self.x_t[1] - self.x_t[0])
        return self.values.sum(axis=1) * dx


@dataclass(frozen=True)
class GhostImage:
    """Reduced reconstruction over the Reference coordinate."""

    x_r: np.ndarray
    raw: np.ndarray
    normalized: np.ndarray
    g2: G2Map


@dataclass(frozen=True)
class DiffractionPattern:
    """Object-spectrum reconstruction on the Fourier branch at x_T = 0."""

    x_r: np.ndarray
    q: np.ndarray
    raw: np.ndarray
    normalized: np.ndarray


def transfer_test_arm(geometry: GhostGeometry, obj: SampledObject, q, x_t) -> np.ndarray:
    """Fourier-transformed Test-arm response h_T(x_T, q), shape (nq, nxt).

    Object-plane variant: free propagation over d1 to the object, detector
    on the object plane:

        h_T(x_T, q) = exp(-i lam d1 q^2 / 4 pi) exp(+i q x_T) t(x_T)

    Fourier-lens variant: a collection lens maps the detector coordinate to
    a spectral offset, sampling the object transform:

        h_T(x_T, q) = exp(-i lam d1 q^2 / 4 pi) ttilde(q - 2 pi x_T/(lam f_t))

    with ttilde the sampled Riemann transform of the object.  Positions
    outside the object grid transmit nothing in the object-plane variant.
    """
    q = np.atleast_1d(np.asarray(q, dtype=float))
    x_t = np.atleast_1d(np.asarray(x_t, dtype=float))
    quad = np.exp(-1j * geometry.wavelength * geometry.d1 / (4.0 * math.pi) * q ** 2)
    if geometry.variant is CollectionOptics.OBJECT_PLANE:
        t_vals = obj.amplitude(x_t)
        return quad[:, None] * np.exp(1j * np.outer(q, x_t)) * t_vals[None, :]
    if geometry.f_t is None:
        raise GeometryError("Fourier-lens collection requires f_t")
    scale = 2.0 * math.pi / (geometry.wavelength * geometry.f_t)
    # ttilde(q_m - scale x_p) factorizes over the object samples, so build it
    # as two phase matrices around the sampled transmission.
    left = np.exp(1j * np.outer(q, obj.x)) * (obj.t * obj.dx)[None, :]
    right = np.exp(-1j * scale * np.outer(obj.x, x_t))
    return quad[:, None] * (left @ right)


def transfer_reference_arm(geometry: GhostGeometry, q, x_r) -> np.ndarray:
    """Fourier-transformed Reference-arm response h_R(x_R, -q), (nxr, nq).

    Imaging branch (f_r != d3), with D = 1/(1/d3 - 1/f_r):

        h_R(x_R, -q) = exp(-i (lam/4 pi)(d2 + D) q^2) exp(-i q x_R D / d3)

    Fourier branch (f_r = d3): the lens turns the response into a momentum
    selector; a detector pixel only picks up q = -2 pi x_R/(lam d3), realized
    here as exact grid selection within SNAP_FRACTION of a step.
    """
    q = np.atleast_1d(np.asarray(q, dtype=float))
    x_r = np.atleast_1d(np.asarray(x_r, dtype=float))
    lam = geometry.wavelength
    if geometry.branch == "imaging":
        dd = geometry.lens_term
        quad = np.exp(-1j * lam / (4.0 * math.pi) * (geometry.d2 + dd) * q ** 2)
        return quad[None, :] * np.exp(-1j * np.outer(x_r, q) * (dd / geometry.d3))
    quad = np.exp(-1j * lam * geometry.d2 / (4.0 * math.pi) * q ** 2)
    dq = float(np.min(np.diff(q))) if q.size > 1 else 1.0
    target = -2.0 * math.pi * x_r / (lam * geometry.d3)
    hit = np.abs(target[:, None] - q[None, :]) <= SNAP_FRACTION * dq
    return np.where(hit, quad[None, :], 0.0)


def _check_profile_symmetry(c_q: np.ndarray) -> None:
    scale = max(float(np.abs(c_q).max()), 1.0)
    if np.abs(c_q - c_q[::-1]).max() > _PROFILE_SYMMETRY_RTOL * scale:
        raise ValueError("profile must be even in q: C(q) != C(-q)")


def g2_map(
    geometry: GhostGeometry,
    obj: SampledObject,
    profile: GainProfile,
    qgrid: MomentumGrid,
    x_r,
    x_t,
    engine: str = "direct",
) -> G2Map:
    """Fourth-order correlation over an (x_R, x_T) detector grid.

    engine="direct" evaluates the momentum sum by dense matrix product;
    engine="fft" evaluates it by a fast transform and requires the x_r grid
    to be commensurate with the momentum grid (adjacent pixels one lattice
    step apart).  Both engines agree to within rounding.
    """
    x_r = np.atleast_1d(np.asarray(x_r, dtype=float))
    x_t = np.atleast_1d(np.asarray(x_t, dtype=float))
    q = qgrid.values
    c_q = profile.correlation_amplitudes(q)
    _check_profile_symmetry(c_q)
    ht = transfer_test_arm(geometry, obj, q, x_t)
    if engine == "direct":
        hr = transfer_reference_arm(geometry, q, x_r)
        s = (hr * c_q[None, :]) @ ht
    elif engine == "fft":
        if geometry.branch == "fourier":
            raise ValueError("fft engine applies to the imaging branch only")
        s = _fft_image_sum(geometry, qgrid, c_q, ht, x_r)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return G2Map(x_r, x_t, np.abs(s) ** 2)


def _fft_image_sum(geometry, qgrid, c_q, ht, x_r):
    """Momentum sum on the imaging branch via an FFT over a common lattice.

    Writing r_j = dq (D/d3) x_r[j] / (2 pi), the sum at pixel j is the
    K-point discrete transform of the weighted integrand evaluated at index
    round(r_j K); this requires every r_j to sit on a lattice of spacing
    1/K with K at least the number of momentum samples.
    """
    q = qgrid.values
    dd = geometry.lens_term
    lam = geometry.wavelength
    quad = np.exp(-1j * lam / (4.0 * math.pi) * (geometry.d2 + dd) * q ** 2)
    a = (c_q * quad)[:, None] * ht  # (nq, nxt)
    r = qgrid.dq * (dd / geometry.d3) * x_r / (2.0 * math.pi)
    if x_r.size < 2:
        raise ValueError("fft engine needs at least two x_r samples")
    dr = np.diff(r)
    if np.abs(dr - dr[0]).max() > 1e-9 * abs(dr[0]):
        raise ValueError("x_r grid must be uniform for the fft engine")
    k_count = 1.0 / abs(dr[0])
    big_k = int(round(k_count))
    if abs(k_count - big_k) > 1e-6:
        raise ValueError("x_r grid is not commensurate with the momentum grid")
    if big_k < q.size:
        raise ValueError(
            f"lattice size {big_k} smaller than the momentum grid ({q.size}); "
            "momentum indices would alias"
        )
    k_idx = r * big_k
    k_round = np.round(k_idx)
    if np.abs(k_idx - k_round).max() > 1e-6:
        raise ValueError("x_r grid is not aligned with the transform lattice")
    m = np.arange(-qgrid.n_half, qgrid.n_half + 1)
    padded = np.zeros((big_k, a.shape[1]), dtype=complex)
    padded[m % big_k, :] = a
    transformed = np.fft.fft(padded, axis=0)
    return transformed[k_round.astype(int) % big_k, :]


def matched_image_grids(geometry: GhostGeometry, qgrid: MomentumGrid):
    """Detector grids commensurate with the momentum grid.

    Returns (x_r, x_t): the Test grid has one sample per momentum over a
    full transform period (dx = 2 pi / (count * dq)) and the Reference grid
    is the Test lattice scaled by the pixel mapping of the imaging kernel,
    which under the thin-lens condition is the magnification.  On these
    grids the bucket-reduced object-plane reconstruction and the
    Fourier-lens slice agree to rounding, and the fft engine applies.
    """
    count = 2 * qgrid.n_half + 1
    dx = 2.0 * math.pi / (count * qgrid.dq)
    lattice = np.arange(-qgrid.n_half, qgrid.n_half + 1) * dx
    scale = -geometry.d3 / geometry.lens_term  # = magnification at thin lens
    return scale * lattice, lattice


def ghost_image(
    geometry: GhostGeometry,
    obj: SampledObject,
    profile: GainProfile,
    qgrid: MomentumGrid,
    x_r,
    x_t,
    engine: str = "direct",
) -> GhostImage:
    """Reconstruct the object intensity from the correlation map.

    Requires the imaging branch.  When the thin-lens condition holds the
    reconstruction approaches |t(-x_R / M)|^2 with M the magnification; a
    nonzero residual defocuses the image but is reported, not rejected.

    Object-plane variant: integrates the map over the Test coordinate
    (bucket detection).  Fourier-lens variant: every Test slice already
    carries the image, so the slice nearest x_T = 0 is returned without
    bucket integration.
    """
    if geometry.branch != "imaging":
        raise GeometryError(
            "focal geometry (f_r = d3) reconstructs a spectrum, not an image; "
            "use ghost_diffraction"
        )
    g2 = g2_map(geometry, obj, profile, qgrid, x_r, x_t, engine=engine)
    if geometry.variant is CollectionOptics.OBJECT_PLANE:
        raw = g2.bucket_reduce()
    else:
        raw = g2.values[:, int(np.argmin(np.abs(g2.x_t)))].copy()
    peak = float(raw.max())
    normalized = raw / peak if peak > 0 else raw.copy()
    return GhostImage(g2.x_r, raw, normalized, g2)


def ghost_diffraction(
    geometry: GhostGeometry,
    obj: SampledObject,
    profile: GainProfile,
    qgrid: MomentumGrid,
) -> DiffractionPattern:
    """Reconstruct the squared object spectrum on the Fourier branch.

    Requires f_r = d3 and the Fourier-lens collection variant; the detector
    pixels are placed exactly on the momenta selected by the focal
    Reference arm, x_R = -q lam d3 / (2 pi), and the Test plane is sampled
    at x_T = 0.  The pattern is |ttilde(-2 pi x_R / (lam d3))|^2 times the
    squared correlation amplitude.
    """
    if geometry.branch != "fourier":
        raise GeometryError(
            "non-focal geometry (f_r != d3) reconstructs an image, not a "
            "spectrum; use ghost_image"
        )
    if geometry.variant is not CollectionOptics.FOURIER_LENS:
        raise GeometryError(
            "object-plane collection gives no meaningful diffraction pattern; "
            "use the Fourier-lens collection variant"
        )
    q = qgrid.values
    c_q = profile.correlation_amplitudes(q)
    _check_profile_symmetry(c_q)
    ht = transfer_test_arm(geometry, obj, q, np.array([0.0]))[:, 0]
    raw = np.abs(c_q * ht) ** 2
    x_r = -q * geometry.wavelength * geometry.d3 / (2.0 * math.pi)
    order = np.argsort(x_r)
    x_r, q, raw = x_r[order], q[order], raw[order]
    peak = float(raw.max())
    normalized = raw / peak if peak > 0 else raw.copy()
    return DiffractionPattern(x_r, q, raw, normalized)


@dataclass(frozen=True)
class FactorizationCheck:
    """One momentum pair of the Gaussian moment-factorization validation."""

    params: ModeParams
    cutoff: int
    trace_deficit: float
    fourth_moment: float
    factorized: float
    moment_error: float
    cross_value: complex
    cross_expected: complex
    cross_error: float
    tolerance: float
    passed: bool


def validate_factorization(
    profile: GainProfile,
    q_values,
    cutoff: int = 40,
    tolerance_floor: float = 1e-8,
) -> list[FactorizationCheck]:
    """Check the moment factorization behind the correlation map.

    For each sampled momentum the exact Fock evolution must satisfy

        <n_T n_R> = <n_T> <n_R> + |<b_T b_R>|^2

    and the anomalous moment must equal exp(i phase) times the correlation
    amplitude.  Errors are compared against 10x the trace deficit plus a
    floating-point floor.
    """
    checks = []
    for q in q_values:
        p = profile.mode_params(float(q))
        coeffs = DisentangledCoefficients.from_mode_params(p)
        state = evolve_thermal_pair(p.mu_t, p.mu_r, coeffs, cutoff, max_trace_deficit=1e-3)
        mom = moments(state)
        fourth = mom.cross + mom.mean_t * mom.mean_r
        cross = cross_amplitude(state)
        factorized = mom.mean_t * mom.mean_r + abs(cross) ** 2
        scale = max(abs(fourth), 1.0)
        moment_error = abs(fourth - factorized) / scale
        expected = correlation_amplitude(float(q), profile) * np.exp(1j * p.phase)
        cross_error = abs(cross - expected) / max(abs(expected), 1.0)
        tol = 10.0 * state.trace_deficit + tolerance_floor
        checks.append(
            FactorizationCheck(
                p,
                cutoff,
                state.trace_deficit,
                float(fourth),
                float(factorized),
                float(moment_error),
                complex(cross),
                complex(expected),
                float(cross_error),
                float(tol),
                bool(moment_error <= tol and cross_error <= tol),
            )
        )
    return checks
