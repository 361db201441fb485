"""Heisenberg-picture bookkeeping for linear quadrature expansions.

Every operator of interest is a real linear combination of the initial-time
canonical coordinates of a fixed register (atom pair, light modes, vacuum
ancillas), plus a payload part tracked separately.  Initial states are
products of uncorrelated single-mode Gaussians, so variances reduce to
weighted sums of per-slot variances and no general covariance machinery is
needed.

Units: canonical inside ([X, P] = i, vacuum variance 1/2); everything
reported crosses to shot units (vacuum = 1) through `to_shot_units` only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, StructuralError
from .modes import Polarity


class BasisLayout:
    """Slot table for the noise register.

    Mode m occupies coordinates (2m, 2m+1) = (x, p).  Order of modes:
    atom, light modes grouped by order (Cos then Sin within each order),
    one atomic-decay ancilla, then `num_loss_ancillas` loss ancillas that
    are handed out on demand via `fresh_loss_ancilla`.
    """

    def __init__(self, num_orders: int, num_loss_ancillas: int = 0):
        if num_orders < 2:
            raise StructuralError("register needs at least two mode orders")
        self.num_orders = int(num_orders)
        self.num_loss_ancillas = int(num_loss_ancillas)
        self._atom = 0
        self._light0 = 1
        self._decay = self._light0 + 2 * self.num_orders
        self._loss0 = self._decay + 1
        self.n_modes = self._loss0 + self.num_loss_ancillas
        self._next_loss = 0

    @property
    def n_coords(self) -> int:
        return 2 * self.n_modes

    # -- slot lookups ------------------------------------------------------
    def atom_x(self) -> int:
        return 2 * self._atom

    def atom_p(self) -> int:
        return 2 * self._atom + 1

    def light_mode(self, polarity: Polarity, order: int) -> int:
        if not 0 <= order < self.num_orders:
            raise StructuralError(f"light order {order} outside register")
        return self._light0 + 2 * order + int(polarity)

    def light_x(self, polarity: Polarity, order: int) -> int:
        return 2 * self.light_mode(polarity, order)

    def light_p(self, polarity: Polarity, order: int) -> int:
        return 2 * self.light_mode(polarity, order) + 1

    def decay_ancilla(self) -> int:
        return self._decay

    def fresh_loss_ancilla(self) -> int:
        """Next unused loss-ancilla mode index."""
        if self._next_loss >= self.num_loss_ancillas:
            raise StructuralError("loss ancilla budget exhausted")
        mode = self._loss0 + self._next_loss
        self._next_loss += 1
        return mode

    def light_modes(self, max_order: Optional[int] = None):
        top = self.num_orders if max_order is None else max_order + 1
        return [self.light_mode(pol, n) for n in range(top)
                for pol in (Polarity.COS, Polarity.SIN)]


@dataclass
class QuadExpansion:
    """One quadrature operator as coefficients over the noise register.

    `payload` holds coefficients over the input-pulse register (managed by
    the protocol layer); `signal_gain_y` / `signal_gain_q` are filled once
    the payload part has been projected onto the signal mode.
    """

    coeffs: np.ndarray
    payload: Optional[np.ndarray] = None
    signal_gain_y: Optional[float] = None
    signal_gain_q: Optional[float] = None

    def copy(self) -> "QuadExpansion":
        return QuadExpansion(
            self.coeffs.copy(),
            None if self.payload is None else self.payload.copy(),
            self.signal_gain_y,
            self.signal_gain_q,
        )

    def scaled(self, factor: float) -> "QuadExpansion":
        e = self.copy()
        e.coeffs *= factor
        if e.payload is not None:
            e.payload *= factor
        if e.signal_gain_y is not None:
            e.signal_gain_y *= factor
        if e.signal_gain_q is not None:
            e.signal_gain_q *= factor
        return e


def zero_expansion(layout: BasisLayout, payload_size: int = 0) -> QuadExpansion:
    payload = np.zeros(payload_size) if payload_size else None
    return QuadExpansion(np.zeros(layout.n_coords), payload)


@dataclass(frozen=True)
class DiagonalState:
    """Per-coordinate variances of the product initial state, canonical units."""

    variances: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.variances, dtype=float)
        if v.ndim != 1 or v.size % 2:
            raise StructuralError("need one (x, p) variance pair per mode")
        if np.any(v <= 0):
            raise DomainError("variances must be positive")
        if np.any(v[0::2] * v[1::2] < 0.25 - 1e-12):
            raise DomainError("uncertainty product below 1/4")
        object.__setattr__(self, "variances", v)


@dataclass(frozen=True)
class Moments:
    """Final-state summary: signal gains plus excess variances, shot units."""

    gain_x: float
    gain_p: float
    excess_x: float
    excess_p: float

    def __post_init__(self):
        if self.excess_x < 0 or self.excess_p < 0:
            raise DomainError("excess variances cannot be negative")


def variance_of(e: QuadExpansion, state: DiagonalState) -> float:
    """Variance (canonical units) of the noise part of an expansion."""
    if e.coeffs.shape != state.variances.shape:
        raise StructuralError(
            f"expansion over {e.coeffs.size} coords, state over {state.variances.size}"
        )
    return float(np.dot(e.coeffs * e.coeffs, state.variances))


def to_shot_units(v_canonical: float) -> float:
    """Canonical variance (vacuum 1/2) to shot units (vacuum 1)."""
    if v_canonical < 0:
        raise DomainError("variance cannot be negative")
    return 2.0 * v_canonical


def symplectic_defect(matrix: np.ndarray, modes=None) -> float:
    """Max-abs entry of S J S^T - J for a map over (x, p) pairs.

    `modes` restricts the defect matrix to the coordinate block of the given
    mode indices (the full product is formed first, then the sub-block is
    taken), matching the protected-sub-register check.
    """
    s = np.asarray(matrix, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
        raise StructuralError("map must be square with an even dimension")
    n_modes = s.shape[0] // 2
    j = np.zeros_like(s)
    for m in range(n_modes):
        j[2 * m, 2 * m + 1] = 1.0
        j[2 * m + 1, 2 * m] = -1.0
    defect = s @ j @ s.T - j
    if modes is not None:
        coords = np.sort(np.concatenate([[2 * m, 2 * m + 1] for m in modes]))
        defect = defect[np.ix_(coords, coords)]
    return float(np.max(np.abs(defect)))


def gaussian_coherent_fidelity(g: float, excess_x: float, excess_p: float,
                               mean: complex = 0j) -> float:
    """Overlap of a coherent state with its teleported Gaussian image.

    The output has quadrature means scaled by g and variances 1 + excess
    (shot units).  At g = 1 the result 2/sqrt((2+ex)(2+ep)) holds for every
    amplitude; away from unit gain the displaced mean costs a Gaussian
    penalty in the mismatch (g-1) times the input amplitude.
    """
    if excess_x < 0 or excess_p < 0:
        raise DomainError("excess variances must be nonnegative")
    base = 2.0 / math.sqrt((2.0 + excess_x) * (2.0 + excess_p))
    if g == 1.0 or mean == 0:
        return base
    d = g - 1.0
    re, im = mean.real, mean.imag
    arg = 2.0 * d * d * (re * re / (2.0 + excess_x) + im * im / (2.0 + excess_p))
    return base * math.exp(-arg)
