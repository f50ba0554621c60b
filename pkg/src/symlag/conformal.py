"""Green's function invariants of the annulus A = {r1 < |z| < 1}.

The Green's function is built from the product

    P(z) = (1 - z) * prod_{n >= 1} (1 - rho**n z)(1 - rho**n / z),   rho = r1**2,

whose modulus picks up a fixed factor under z -> rho z; the images of the
pole in both circles then cancel on the boundary up to a multiple of
log|z|, which the correction term removes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .potential import DomainError

MAX_R1 = 0.95
TWO_PI = 2.0 * math.pi


class ConvergenceError(RuntimeError):
    """A series or quadrature did not reach the requested tolerance."""


@dataclass(frozen=True)
class AnnulusConfig:
    r1: float
    a_point: complex
    r0: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "a_point", complex(self.a_point))
        if not 0.0 < self.r1 < 1.0:
            raise DomainError(f"inner radius must lie in (0, 1), got {self.r1}")
        if not self.r1 < abs(self.a_point) < 1.0:
            raise DomainError(f"|a| = {abs(self.a_point)} is not inside ({self.r1}, 1)")
        if self.r0 is not None and not self.r1 < self.r0 < 1.0:
            raise DomainError(f"r0 = {self.r0} is not inside ({self.r1}, 1)")

    def to_json(self) -> dict:
        return {"r1": self.r1, "a_point": {"re": self.a_point.real, "im": self.a_point.imag},
                "r0": self.r0}


def harmonic_measures(cfg: AnnulusConfig, z) -> tuple[float, float]:
    r = abs(complex(z))
    if not cfg.r1 - 1e-15 <= r <= 1.0 + 1e-15:
        raise DomainError(f"|z| = {r} is outside the closed annulus")
    w0 = math.log(r) / math.log(cfg.r1)
    return w0, 1.0 - w0


def beta_from_point(cfg: AnnulusConfig) -> float:
    return TWO_PI * harmonic_measures(cfg, cfg.a_point)[1]


def slit_radius(cfg: AnnulusConfig) -> tuple[float, float]:
    beta = beta_from_point(cfg)
    c = (TWO_PI - beta) * math.log(cfg.r1) / TWO_PI
    if not math.log(cfg.r1) < c < 0.0:
        raise AssertionError(f"c = {c} outside (log r1, 0)")
    return c, math.exp(c)


def _terms_needed(r1: float, tol: float) -> int:
    if r1 > MAX_R1:
        raise DomainError(f"r1 = {r1} exceeds {MAX_R1}; the product converges too slowly")
    rho = r1 * r1
    # every factor has |x| <= rho**(n-1); |log|1-x|| <= |x|/(1-|x|)
    n = 2
    while 4.0 * rho ** (n - 1) / ((1.0 - rho) * (1.0 - rho ** (n - 1))) >= tol / 10.0:
        n += 1
        if n > 100000:
            raise ConvergenceError("product truncation did not converge")
    return n


def _log_abs_P(zeta: np.ndarray, rho: float, N: int) -> np.ndarray:
    out = np.log(np.abs(1.0 - zeta))
    pw = rho ** np.arange(1, N + 1)
    z = zeta[..., None]
    out += np.log(np.abs(1.0 - pw * z)).sum(axis=-1)
    out += np.log(np.abs(1.0 - pw / z)).sum(axis=-1)
    return out


def _greens(z: np.ndarray, a: complex, r1: float, N: int) -> np.ndarray:
    rho = r1 * r1
    la = math.log(abs(a))
    return (-_log_abs_P(z / a, rho, N) + _log_abs_P(z * np.conj(a), rho, N)
            + (la / math.log(r1)) * np.log(np.abs(z)) - la)


def greens_eval(cfg: AnnulusConfig, z, tol: float = 1e-12, a=None):
    """G(z, a) with G = 0 on both circles and G + log|z - a| harmonic.

    ``z`` may be a scalar or an array; ``a`` defaults to ``cfg.a_point``.
    """
    a = cfg.a_point if a is None else complex(a)
    N = _terms_needed(cfg.r1, tol)
    zz = np.asarray(z, dtype=complex)
    if np.any(np.abs(zz - a) == 0.0):
        raise DomainError("G(z, a) has a pole at z = a")
    out = _greens(zz, a, cfg.r1, N)
    return float(out) if out.ndim == 0 else out


def _radial_derivative(cfg: AnnulusConfig, radius: float, theta: np.ndarray, tol: float, a: complex) -> np.ndarray:
    h = 1e-5 * (1.0 - cfg.r1)
    N = _terms_needed(cfg.r1, tol)
    e = np.exp(1j * theta)
    up = _greens((radius + h) * e, a, cfg.r1, N)
    down = _greens((radius - h) * e, a, cfg.r1, N)
    return (up - down) / (2.0 * h)


def _trapezoid_adaptive(f, tol: float, start: int = 512, max_points: int = 1 << 16) -> float:
    n = start
    prev = None
    while n <= max_points:
        theta = TWO_PI * np.arange(n) / n
        val = TWO_PI * float(np.mean(f(theta)))
        if prev is not None and abs(val - prev) < tol / 10.0:
            return val
        prev = val
        n *= 2
    raise ConvergenceError(f"quadrature did not settle to {tol} with {max_points} points")


def greens_period(cfg: AnnulusConfig, tol: float = 1e-8, boundary: int = 1) -> float:
    """Flux of -dG/dn through the outer circle (``boundary=1``) or the inner one.

    Central differences in r, trapezoidal rule in theta; the point count
    doubles from 512 until two successive values agree.
    """
    a = cfg.a_point
    if boundary == 1:
        return _trapezoid_adaptive(lambda th: -_radial_derivative(cfg, 1.0, th, tol, a), tol)
    if boundary == 0:
        # outward normal on the inner circle points toward the origin
        r1 = cfg.r1
        return _trapezoid_adaptive(lambda th: r1 * _radial_derivative(cfg, r1, th, tol, a), tol)
    raise ValueError("boundary is 0 (inner) or 1 (outer)")


def nonexistence_margin(r_ratio: float, r0: float, beta: float) -> float:
    """4*pi minus the period a degree-two boundary would have to carry."""
    if not 0.0 < r_ratio < r0 < 1.0:
        raise DomainError(f"need 0 < r_ratio < r0 < 1, got r_ratio={r_ratio}, r0={r0}")
    if not 0.0 < beta < TWO_PI:
        raise DomainError(f"beta = {beta} is not inside (0, 2 pi)")
    return 2.0 * TWO_PI - (beta + math.log(r0) * TWO_PI / math.log(r_ratio))


def _slit_extent(cfg: AnnulusConfig, n: int, tol: float) -> tuple[float, float]:
    r1, r0 = cfg.r1, cfg.r0
    c = math.log(r0)
    theta = TWO_PI * np.arange(n) / n
    # u = -G + c w0, and dH/dtheta = r du/dr on the circle |z| = r1
    du = -_radial_derivative(cfg, r1, theta, tol, complex(r0)) + c / (r1 * math.log(r1))
    dH = r1 * du
    coef = np.fft.rfft(dH)
    k = np.arange(coef.size)
    hcoef = np.zeros_like(coef)
    hcoef[1:] = coef[1:] / (1j * k[1:])
    # evaluate the trigonometric interpolant on a finer grid
    H = np.fft.irfft(hcoef, 16 * n) * 16
    return float(H.max() - H.min()), abs(coef[0]) / n


def slit_length(cfg: AnnulusConfig, tol: float = 1e-8) -> float:
    """Arc length of the slit that the inner circle maps onto.

    Uses the pole ``a = r0`` so the slit sits on the circle of radius r0.
    """
    if cfg.r0 is None:
        raise DomainError("slit_length needs r0")
    n, prev = 512, None
    while n <= 1 << 16:
        extent, drift = _slit_extent(cfg, n, tol)
        if prev is not None and abs(extent - prev) < tol:
            if drift > 1e-6:
                raise ConvergenceError("harmonic conjugate is not single valued")
            length = cfg.r0 * extent
            if not 0.0 < length < TWO_PI * cfg.r0:
                raise AssertionError(f"slit length {length} is not a proper arc")
            return length
        prev, n = extent, 2 * n
    raise ConvergenceError("slit length did not converge")
