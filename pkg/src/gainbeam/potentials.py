"""Complex optical potentials with closed-form derivatives.

A potential here is a smooth, z-independent map x -> V_R(x) + i V_I(x).
The real part confines or deflects the beam; the imaginary part models
gain (V_I > 0) and loss (V_I < 0). Propagators see a potential through
two views only:

* ``sample(q)`` -- value and first two derivatives of both parts at a
  single point, consumed by the Gaussian parameter dynamics;
* ``value(x)``  -- complex values on a whole grid, consumed by the
  split-operator solver.

Derivatives returned by ``sample`` are hand-derived closed forms, not
finite differences: they sit inside a Runge-Kutta right-hand side that is
evaluated millions of times and must be smooth to machine precision.
Finite differences appear only in ``IndexProfilePotential`` as a fallback
for user-supplied refractive-index profiles without derivative data.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "PhysicalConstants",
    "DEFAULT_CONSTANTS",
    "hbar_from_wavelength",
    "PotentialSample",
    "Potential",
    "PtTanhGaussian",
    "QuadraticLinear",
    "FreeSpace",
    "HermitianVariant",
    "IndexProfilePotential",
    "hermitian_variant",
    "potential_from_index",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """Constants of the paraxial equation, in rescaled units by default.

    ``hbar`` plays the role of the reduced wavelength (lambda / 2 pi) and
    ``n_zero`` is the reference refractive index of the substrate.
    """

    hbar: float = 1.0
    n_zero: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar must be positive and finite, got {self.hbar}")
        if not (math.isfinite(self.n_zero) and self.n_zero > 0):
            raise ValueError(f"n_zero must be positive and finite, got {self.n_zero}")


DEFAULT_CONSTANTS = PhysicalConstants()


def hbar_from_wavelength(wavelength: float) -> float:
    """Effective hbar for a given vacuum wavelength (lambda / 2 pi)."""
    if not wavelength > 0:
        raise ValueError("wavelength must be positive")
    return wavelength / (2.0 * math.pi)


@dataclass(frozen=True)
class PotentialSample:
    """Value and first two derivatives of both potential parts at one point."""

    v_real: float
    v_imag: float
    dv_real: float
    dv_imag: float
    d2v_real: float
    d2v_imag: float


class Potential:
    """Base class for smooth complex potentials of one transverse coordinate.

    Instances are immutable after construction and may be shared freely
    between concurrent propagations.
    """

    def sample(self, q: float) -> PotentialSample:
        raise NotImplementedError

    def value(self, x):
        """Complex V on an array of positions. Default: pointwise ``sample``."""
        xs = np.asarray(x, dtype=float)
        out = np.empty(xs.shape, dtype=complex)
        flat = out.reshape(-1)
        for i, xi in enumerate(xs.reshape(-1)):
            s = self.sample(float(xi))
            flat[i] = complex(s.v_real, s.v_imag)
        return out

    def describe(self) -> dict:
        """Plain-data description used in manifests and trajectory metadata."""
        return {"kind": type(self).__name__}


@dataclass(frozen=True)
class PtTanhGaussian(Potential):
    """Gaussian well of depth eta^2 with an odd tanh gain-loss profile.

        V(x) = -(1 - i (gamma/eta) tanh(x/eta)) * eta^2 * exp(-omega^2 x^2 / (2 eta^2))

    The real part is an even well whose curvature at the origin is exactly
    omega^2 for every eta, so the bottom of the well is harmonic with
    frequency ``omega``. The imaginary part is odd (loss for x < 0, gain
    for x > 0 when gamma > 0), which makes the potential PT-symmetric.
    Larger ``eta`` widens and deepens the well, pushing the dynamics
    further into the regime where a local quadratic expansion is accurate.
    """

    gamma: float
    omega: float
    eta: float

    def __post_init__(self):
        for name in ("gamma", "omega", "eta"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.eta) and self.eta > 0):
            raise ValueError(f"eta must be positive and finite, got {self.eta}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")
        if not math.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite, got {self.gamma}")

    def sample(self, q: float) -> PotentialSample:
        eta = self.eta
        w2 = self.omega * self.omega
        # envelope g = eta^2 exp(-omega^2 x^2 / (2 eta^2)) and derivatives
        e = math.exp(-w2 * q * q / (2.0 * eta * eta))
        g = eta * eta * e
        dg = -w2 * q * e
        d2g = (-w2 + w2 * w2 * q * q / (eta * eta)) * e
        # odd factor t = tanh(x/eta) and derivatives
        t = math.tanh(q / eta)
        sech2 = 1.0 - t * t
        dt = sech2 / eta
        d2t = -2.0 * t * sech2 / (eta * eta)
        c = self.gamma / eta
        return PotentialSample(
            v_real=-g,
            v_imag=c * t * g,
            dv_real=-dg,
            dv_imag=c * (dt * g + t * dg),
            d2v_real=-d2g,
            d2v_imag=c * (d2t * g + 2.0 * dt * dg + t * d2g),
        )

    def value(self, x):
        xs = np.asarray(x, dtype=float)
        g = self.eta**2 * np.exp(-(self.omega**2) * xs**2 / (2.0 * self.eta**2))
        t = np.tanh(xs / self.eta)
        return -g + 1j * (self.gamma / self.eta) * t * g

    def describe(self) -> dict:
        return {
            "kind": "pt_tanh_gaussian",
            "gamma": self.gamma,
            "omega": self.omega,
            "eta": self.eta,
        }


@dataclass(frozen=True)
class QuadraticLinear(Potential):
    """Harmonic well with a linear imaginary slope.

        V(x) = omega^2 x^2 / 2 + i gamma x

    This is the local quadratic expansion of any PT-symmetric well around
    its center and the one case where the Gaussian parameter dynamics is
    exact. Closed-form solutions live in :mod:`gainbeam.closed_forms`.
    """

    omega: float
    gamma: float

    def __post_init__(self):
        for name in ("omega", "gamma"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")
        if not math.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite, got {self.gamma}")

    def sample(self, q: float) -> PotentialSample:
        w2 = self.omega * self.omega
        return PotentialSample(
            v_real=0.5 * w2 * q * q,
            v_imag=self.gamma * q,
            dv_real=w2 * q,
            dv_imag=self.gamma,
            d2v_real=w2,
            d2v_imag=0.0,
        )

    def value(self, x):
        xs = np.asarray(x, dtype=float)
        return 0.5 * self.omega**2 * xs**2 + 1j * self.gamma * xs

    def describe(self) -> dict:
        return {"kind": "quadratic_linear", "omega": self.omega, "gamma": self.gamma}


@dataclass(frozen=True)
class FreeSpace(Potential):
    """V identically zero; free spreading of the beam."""

    def sample(self, q: float) -> PotentialSample:
        return PotentialSample(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def value(self, x):
        return np.zeros(np.asarray(x, dtype=float).shape, dtype=complex)

    def describe(self) -> dict:
        return {"kind": "free_space"}


@dataclass(frozen=True)
class HermitianVariant(Potential):
    """Same real part as the wrapped potential, imaginary part identically zero."""

    base: Potential

    def sample(self, q: float) -> PotentialSample:
        s = self.base.sample(q)
        return PotentialSample(s.v_real, 0.0, s.dv_real, 0.0, s.d2v_real, 0.0)

    def value(self, x):
        return np.asarray(self.base.value(x)).real.astype(complex)

    def describe(self) -> dict:
        d = dict(self.base.describe())
        d["hermitian"] = True
        return d


def hermitian_variant(potential: Potential) -> Potential:
    """Drop gain and loss: keep V_R, zero V_I. Idempotent."""
    if isinstance(potential, HermitianVariant):
        return potential
    return HermitianVariant(potential)


@dataclass(frozen=True)
class IndexProfilePotential(Potential):
    """Effective potential derived from a (complex) refractive-index profile.

        V(x) = (n0^2 - n(x)^2) / (2 n0)

    Derivatives of V come from user-supplied profile derivatives when
    given, else from central finite differences with step
    1e-6 * max(1, |x|). Prefer analytic derivatives for production runs.
    """

    n_profile: Callable[[float], complex]
    constants: PhysicalConstants = DEFAULT_CONSTANTS
    dn: Callable[[float], complex] | None = None
    d2n: Callable[[float], complex] | None = None

    def _v(self, x: float) -> complex:
        n = complex(self.n_profile(x))
        if not (math.isfinite(n.real) and math.isfinite(n.imag)):
            raise ValueError(f"refractive index profile is non-finite at x={x!r}")
        n0 = self.constants.n_zero
        return (n0 * n0 - n * n) / (2.0 * n0)

    def sample(self, q: float) -> PotentialSample:
        v = self._v(q)
        if self.dn is not None and self.d2n is not None:
            n0 = self.constants.n_zero
            n = complex(self.n_profile(q))
            d1 = complex(self.dn(q))
            d2 = complex(self.d2n(q))
            dv = -n * d1 / n0
            d2v = -(d1 * d1 + n * d2) / n0
        else:
            h = 1e-6 * max(1.0, abs(q))
            vp = self._v(q + h)
            vm = self._v(q - h)
            dv = (vp - vm) / (2.0 * h)
            d2v = (vp - 2.0 * v + vm) / (h * h)
        out = PotentialSample(v.real, v.imag, dv.real, dv.imag, d2v.real, d2v.imag)
        for f in (out.v_real, out.v_imag, out.dv_real, out.dv_imag, out.d2v_real, out.d2v_imag):
            if not math.isfinite(f):
                raise ValueError(f"index-profile potential is non-finite near x={q!r}")
        return out

    def value(self, x):
        xs = np.asarray(x, dtype=float)
        try:
            n = np.asarray(self.n_profile(xs), dtype=complex)
            if n.shape != xs.shape:
                raise TypeError
        except TypeError:
            n = np.array([complex(self.n_profile(float(xi))) for xi in xs.reshape(-1)],
                         dtype=complex).reshape(xs.shape)
        if not np.all(np.isfinite(n.real) & np.isfinite(n.imag)):
            raise ValueError("refractive index profile is non-finite on the grid")
        n0 = self.constants.n_zero
        return (n0 * n0 - n * n) / (2.0 * n0)

    def describe(self) -> dict:
        return {"kind": "index_profile", "n_zero": self.constants.n_zero}


def potential_from_index(
    n_profile: Callable[[float], complex],
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    dn: Callable[[float], complex] | None = None,
    d2n: Callable[[float], complex] | None = None,
) -> IndexProfilePotential:
    """Build the effective potential V = (n0^2 - n^2) / (2 n0) from an index profile."""
    return IndexProfilePotential(n_profile, constants, dn, d2n)
