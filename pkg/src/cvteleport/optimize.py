"""Envelope and gain optimization for the teleportation figures of merit.

The per-quadrature excess noise is exactly quadratic in the envelope
coefficients (every noise coefficient is affine in c), so the inner
problem is a trust-region subproblem on the unit sphere solved exactly by
eigendecomposition plus a one-dimensional secular equation.  The gain
enters only as c -> g*c in the feedback terms, so one unit-gain assembly
per kappa serves the whole gain search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import brentq

from .errors import DomainError, NumericError
from .imperfections import ImperfectionConfig
from .merit import (QubitChannelParams, average_coherent_fidelity,
                    coherent_fidelity, qubit_average_fidelity, qubit_sigma2)
from .modes import Envelope
from .protocol import ProtocolParams, final_atomic_state

GAIN_BRACKET = (0.0, 1.5)
GAIN_TOL = 1e-4
_COARSE_STEP = 0.05


@dataclass(frozen=True)
class Objective:
    """Figure of merit to maximize: coherent, coherent-avg, or qubit."""

    kind: str
    nbar: float = 0.0

    _KINDS = ("coherent", "coherent-avg", "qubit")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise DomainError(f"objective must be one of {self._KINDS}")
        if self.nbar < 0:
            raise DomainError("mean photon number must be nonnegative")

    @property
    def unit_gain(self) -> bool:
        return self.kind == "coherent"


@dataclass(frozen=True)
class QuadraticForm:
    """Excess noise Sigma(c) = c^T A c + 2 b^T c + d, shot units."""

    a: np.ndarray
    b: np.ndarray
    d: float

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if np.max(np.abs(a - a.T)) > 1e-12:
            raise DomainError("quadratic part must be symmetric")
        object.__setattr__(self, "a", 0.5 * (a + a.T))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))

    def evaluate(self, c) -> float:
        c = np.asarray(c, dtype=float)
        return float(c @ self.a @ c + 2.0 * self.b @ c + self.d)

    def at_gain(self, g: float) -> "QuadraticForm":
        """Rescale a unit-gain form: feedback terms carry g*c."""
        return QuadraticForm(g * g * self.a, g * self.b, self.d)


@dataclass(frozen=True)
class OptimResult:
    kappa: float
    objective: Objective
    fidelity: Optional[float]
    excess: Optional[float]
    g_star: Optional[float]
    c_star: Optional[Envelope]

    @property
    def feasible(self) -> bool:
        return self.fidelity is not None


def _excess_x(kappa, envelope, gain, imperfections) -> float:
    params = ProtocolParams(kappa=kappa, envelope=envelope, gain=gain,
                            imperfections=imperfections)
    return final_atomic_state(params).moments.excess_x


def noise_quadratic_form(kappa: float, order: int,
                         imperfections: ImperfectionConfig,
                         gain: float = 1.0) -> QuadraticForm:
    """Assemble (A, b, d) by polarization over unit-norm basis envelopes.

    d comes from a zero-gain evaluation (no feedback, so no c dependence);
    diagonal and linear parts from +-e_i, off-diagonal from (e_i+e_j)/sqrt(2).
    Exact because the excess is quadratic in the feedback weights.
    """
    dim = order + 1
    eye = np.eye(dim)

    def env(vec):
        return Envelope(tuple(vec))

    d = _excess_x(kappa, env(eye[0]), 0.0, imperfections)
    a = np.zeros((dim, dim))
    b = np.zeros(dim)
    plus = np.empty(dim)
    for i in range(dim):
        sp = _excess_x(kappa, env(eye[i]), 1.0, imperfections)
        sm = _excess_x(kappa, env(-eye[i]), 1.0, imperfections)
        plus[i] = sp
        b[i] = (sp - sm) / 4.0
        a[i, i] = (sp + sm) / 2.0 - d
    for i in range(dim):
        for j in range(i + 1, dim):
            sij = _excess_x(kappa, env((eye[i] + eye[j]) / math.sqrt(2.0)), 1.0,
                            imperfections)
            a[i, j] = a[j, i] = sij - 0.5 * (a[i, i] + a[j, j]) \
                - math.sqrt(2.0) * (b[i] + b[j]) - d
    form = QuadraticForm(a, b, d)
    return form if gain == 1.0 else form.at_gain(gain)


def minimize_on_sphere(q: QuadraticForm):
    """Global minimizer of c^T A c + 2 b^T c + d on the unit sphere.

    Eigendecomposes A and root-finds the secular equation ||c(lam)|| = 1
    on the Lagrange multiplier; handles the hard case where b has no
    component in the bottom eigenspace.
    """
    try:
        lam, vecs = eigh(q.a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    beta = vecs.T @ q.b
    lo = lam[0]
    bottom = np.abs(lam - lo) < 1e-12 * max(1.0, abs(lam[-1]))
    bnorm = float(np.linalg.norm(q.b))
    scale = max(1.0, bnorm)

    if bnorm < 1e-14:
        c = vecs[:, 0]
        return _canonical_sign(c, q), q.evaluate(c)

    def coeffs_at(mult):
        return -beta / (lam + mult)

    if np.all(np.abs(beta[bottom]) < 1e-13 * scale):
        # hard case candidate: solve on the orthogonal complement at -lo
        denom = lam[~bottom] - lo
        c_perp = np.zeros_like(beta)
        c_perp[~bottom] = -beta[~bottom] / denom
        norm2 = float(np.dot(c_perp, c_perp))
        if norm2 <= 1.0:
            tau = math.sqrt(max(0.0, 1.0 - norm2))
            c = vecs @ c_perp + tau * vecs[:, 0]
            return _canonical_sign(c, q), q.evaluate(c)

    def secular(mult):
        w = coeffs_at(mult)
        return 1.0 / math.sqrt(float(np.dot(w, w))) - 1.0

    eps = 1e-12 * scale
    left = -lo + eps
    while secular(left) >= 0.0:
        eps *= 0.5
        left = -lo + eps
        if eps < 1e-300:  # pragma: no cover
            raise NumericError("secular bracketing failed at the pole")
    right = -lo + bnorm + 1.0
    mult = brentq(secular, left, right, xtol=1e-14, rtol=1e-15)
    c = vecs @ coeffs_at(mult)
    c = c / np.linalg.norm(c)
    return _canonical_sign(c, q), q.evaluate(c)


def _canonical_sign(c: np.ndarray, q: QuadraticForm) -> np.ndarray:
    # flip sign only when the value is unaffected (pure quadratic direction)
    if q.evaluate(-c) <= q.evaluate(c) + 1e-14 * (1.0 + abs(q.d)):
        idx = int(np.argmax(np.abs(c)))
        if c[idx] < 0:
            return -c
    return c


@lru_cache(maxsize=1)
def _qubit_monotonicity_ok() -> bool:
    """Closed-form qubit fidelity decreases in sigma2 at fixed gain."""
    sig = np.linspace(0.0, 1.0, 21)
    for g in np.linspace(0.0, 1.2, 13):
        vals = [qubit_average_fidelity(QubitChannelParams(g, s2)) for s2 in sig]
        if np.any(np.diff(vals) >= 0):
            return False
    return True


def _objective_value(objective: Objective, g: float, sigma: float):
    """Figure of merit from the minimized excess; None when infeasible."""
    if objective.kind == "coherent":
        # at fixed non-unit gain this is the zero-amplitude fidelity
        return 2.0 / (2.0 + sigma)
    if objective.kind == "coherent-avg":
        extra = 2.0 * objective.nbar * (g - 1.0) ** 2
        return 2.0 / (2.0 + sigma + extra)
    s2 = (g * g + sigma - 1.0) / 4.0
    if s2 < -1e-12:
        return None
    return qubit_average_fidelity(QubitChannelParams(g, max(s2, 0.0)))


def optimize_point(kappa: float, order: int, imperfections: ImperfectionConfig,
                   objective: Objective, fixed_gain: Optional[float] = None,
                   g_hint: Optional[float] = None) -> OptimResult:
    """Best envelope (and gain, unless fixed) at one coupling strength."""
    base = noise_quadratic_form(kappa, order, imperfections, gain=1.0)

    def solve(g: float):
        c, sigma = minimize_on_sphere(base.at_gain(g))
        return c, max(sigma, 0.0)

    def value(g: float):
        c, sigma = solve(g)
        return _objective_value(objective, g, sigma), c, sigma

    if objective.unit_gain and fixed_gain is None:
        fixed_gain = 1.0
    if fixed_gain is not None:
        fid, c, sigma = value(fixed_gain)
        return _finish(kappa, objective, fid, sigma, fixed_gain, c)

    if objective.kind == "qubit" and not _qubit_monotonicity_ok():  # pragma: no cover
        return _joint_fallback(kappa, objective, base)

    lo, hi = GAIN_BRACKET
    grid = list(np.arange(lo, hi + 1e-9, _COARSE_STEP))
    if g_hint is not None and lo <= g_hint <= hi:
        grid.append(float(g_hint))
    best_g, best = None, None
    for g in grid:
        fid, c, sigma = value(g)
        if fid is not None and (best is None or fid > best[0]):
            best_g, best = g, (fid, c, sigma)
    if best is None:
        return OptimResult(kappa, objective, None, None, None, None)

    a, b = max(lo, best_g - _COARSE_STEP), min(hi, best_g + _COARSE_STEP)
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - phi * (b - a)
    x2 = a + phi * (b - a)
    def key(f):
        # infeasible (None) never wins a comparison
        return -1.0 if f is None else f

    f1, f2 = value(x1)[0], value(x2)[0]
    while b - a > GAIN_TOL:
        if key(f1) < key(f2):
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (b - a)
            f2 = value(x2)[0]
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - phi * (b - a)
            f1 = value(x1)[0]
    g_star = 0.5 * (a + b)
    fid, c, sigma = value(g_star)
    if fid is None or (best is not None and best[0] > fid):
        g_star, (fid, c, sigma) = best_g, best
    return _finish(kappa, objective, fid, sigma, g_star, c)


def _finish(kappa, objective, fid, sigma, g, c) -> OptimResult:
    if fid is None:
        return OptimResult(kappa, objective, None, None, float(g), None)
    return OptimResult(kappa, objective, float(fid), float(sigma), float(g),
                       Envelope(tuple(c / np.linalg.norm(c))))


def _joint_fallback(kappa, objective, base) -> OptimResult:  # pragma: no cover
    """Dense joint scan used only if the monotonicity premise ever failed."""
    best = None
    for g in np.arange(GAIN_BRACKET[0], GAIN_BRACKET[1] + 1e-9, GAIN_TOL * 10):
        c, sigma = minimize_on_sphere(base.at_gain(g))
        fid = _objective_value(objective, g, max(sigma, 0.0))
        if fid is not None and (best is None or fid > best[1]):
            best = (g, fid, max(sigma, 0.0), c)
    if best is None:
        return OptimResult(kappa, objective, None, None, None, None)
    g, fid, sigma, c = best
    return _finish(kappa, objective, fid, sigma, g, c)


def kappa_sweep(kappas: Sequence[float], order: int,
                imperfections: ImperfectionConfig, objective: Objective,
                fixed_gain: Optional[float] = None):
    """Per-point optimization over a sorted coupling grid with warm starts."""
    results = []
    hint = None
    for kappa in kappas:
        res = optimize_point(kappa, order, imperfections, objective,
                             fixed_gain=fixed_gain, g_hint=hint)
        if res.feasible:
            hint = res.g_star
        results.append(res)
    return results
