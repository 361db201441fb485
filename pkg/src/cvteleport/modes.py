"""Temporal pulse modes with Legendre envelopes and cos/sin carriers.

The mode register pairs a shifted Legendre polynomial envelope of order n
with a fast carrier, giving two polarities per order.  For large carrier
phase OmegaT the family is orthonormal; `mode_overlap` quantifies the
finite-OmegaT residuals but the rest of the package treats the modes as
exactly orthonormal.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy import integrate

from .errors import DomainError, NumericError

# carrier phase over the pulse: 2*pi * 100 kHz * 5 ms
DEFAULT_OMEGA_T = 2 * math.pi * 100e3 * 5e-3


class Polarity(enum.IntEnum):
    COS = 0
    SIN = 1


@dataclass(frozen=True, order=True)
class TemporalModeId:
    """Label (polarity, order) of one temporal mode; sort order is stable."""

    polarity: Polarity
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise DomainError("mode order must be nonnegative")


@dataclass(frozen=True)
class Envelope:
    """Unit-norm coefficient vector c_0..c_N over the Legendre envelopes."""

    coefficients: tuple

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise DomainError("envelope needs at least one coefficient")
        norm2 = float(np.dot(c, c))
        if abs(norm2 - 1.0) > 1e-12:
            raise DomainError(f"envelope norm^2 = {norm2!r}, must be 1 within 1e-12")
        object.__setattr__(self, "coefficients", tuple(float(x) for x in c))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)


def shifted_legendre(n: int, u):
    """P_n(2u - 1) for u in [0, 1], by the stable three-term recurrence."""
    if n < 0:
        raise DomainError("polynomial order must be nonnegative")
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0.0) or np.any(u_arr > 1.0):
        raise DomainError("argument outside [0, 1]")
    x = 2.0 * u_arr - 1.0
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev if u_arr.ndim else float(p_prev)
    p_cur = x.copy()
    for k in range(1, n):
        p_prev, p_cur = p_cur, ((2 * k + 1) * x * p_cur - k * p_prev) / (k + 1)
    return p_cur if u_arr.ndim else float(p_cur)


def mode_normalization(n: int) -> float:
    """Normalization sqrt(4n + 2) of the order-n envelope."""
    if n < 0:
        raise DomainError("mode order must be nonnegative")
    return math.sqrt(4 * n + 2)


def _legendre_product_integral(na: int, nb: int) -> float:
    # exact Gauss-Legendre for the polynomial part, int_0^1 Pbar_a Pbar_b du
    nodes = na + nb + 2
    x, w = npleg.leggauss(nodes)
    u = 0.5 * (x + 1.0)
    vals = shifted_legendre(na, u) * shifted_legendre(nb, u)
    return float(0.5 * np.dot(w, vals))


def _oscillatory_integral(na: int, nb: int, w: float, kind: str, tol: float):
    # int_0^1 Pbar_a Pbar_b {cos|sin}(w u) du via weighted Clenshaw-Curtis
    def poly(u):
        return shifted_legendre(na, u) * shifted_legendre(nb, u)

    val, err = integrate.quad(poly, 0.0, 1.0, weight=kind, wvar=w, limit=400)
    if err > tol:
        raise NumericError(
            f"oscillatory overlap integral achieved tolerance {err:.3e} > {tol:.3e}",
            residual=err,
        )
    return val


def mode_overlap(a: TemporalModeId, b: TemporalModeId, omega_t: float = DEFAULT_OMEGA_T,
                 tol: float = 1e-8) -> float:
    """Gram entry of two carrier-modulated modes on [0, 1].

    The carrier product splits into a slow (polynomial) part and a fast part
    at frequency 2*OmegaT; both pieces are integrated to quadrature accuracy.
    Raises NumericError with the achieved tolerance if the oscillatory
    quadrature cannot reach `tol`.
    """
    if omega_t <= 0:
        raise DomainError("omega_t must be positive")
    norm = mode_normalization(a.order) * mode_normalization(b.order)
    if a.polarity == b.polarity:
        # cos*cos = (1 + cos 2wu)/2, sin*sin = (1 - cos 2wu)/2
        sign = 1.0 if a.polarity == Polarity.COS else -1.0
        slow = _legendre_product_integral(a.order, b.order)
        fast = _oscillatory_integral(a.order, b.order, 2.0 * omega_t, "cos", tol)
        return norm * 0.5 * (slow + sign * fast)
    # cos*sin = sin(2wu)/2
    fast = _oscillatory_integral(a.order, b.order, 2.0 * omega_t, "sin", tol)
    return norm * 0.5 * fast


def gram_matrix(num_orders: int, omega_t: float = DEFAULT_OMEGA_T) -> np.ndarray:
    """Overlap matrix of the first 2*num_orders modes (Cos block then Sin)."""
    ids = [TemporalModeId(pol, n) for pol in (Polarity.COS, Polarity.SIN)
           for n in range(num_orders)]
    g = np.empty((len(ids), len(ids)))
    for i, mi in enumerate(ids):
        for j, mj in enumerate(ids):
            if j < i:
                g[i, j] = g[j, i]
            else:
                g[i, j] = mode_overlap(mi, mj, omega_t)
    return g


def sample_envelope(c: Envelope, grid) -> np.ndarray:
    """Envelope E(u) = sum_n c_n sqrt(4n+2) Pbar_n(u) on the given grid.

    E is the slowly varying envelope of the unit-norm carrier-modulated
    pulse; the carrier mean-square 1/2 makes int E^2 du = 2 for unit-norm
    coefficients.
    """
    u = np.asarray(grid, dtype=float)
    out = np.zeros_like(u)
    for n, cn in enumerate(c.coefficients):
        if cn != 0.0:
            out = out + cn * mode_normalization(n) * shifted_legendre(n, u)
    return out
