"""Composition of scattering, Bell measurement, and gain-scaled feedback.

The measured sum/difference quadratures behind the balanced beam splitter
are assembled as expansions over the noise register plus a payload part
over the input-pulse register.  Feedback adds them to the decayed atomic
output with weights g*c_n; the payload part of the result collapses onto
the signal mode exactly, leaving signal gains plus excess-noise variances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, StructuralError
from .gaussian import BasisLayout, Moments, QuadExpansion, to_shot_units, variance_of
from .imperfections import (ImperfectionConfig, apply_atomic_decay,
                            apply_light_loss, initial_state,
                            loss_ancillas_needed)
from .modes import Envelope, Polarity
from .scattering import alpha_coupling, build_scattering_map

COS, SIN = Polarity.COS, Polarity.SIN


class PayloadLayout:
    """Coordinates of the input-pulse register (y, q pairs per mode)."""

    def __init__(self, measured_orders: int):
        self.measured_orders = measured_orders
        self.size = 4 * measured_orders

    def y(self, polarity: Polarity, order: int) -> int:
        return 4 * order + 2 * int(polarity)

    def q(self, polarity: Polarity, order: int) -> int:
        return 4 * order + 2 * int(polarity) + 1

    def signal_vectors(self, c: Envelope):
        """Unit payload vectors of the signal quadratures y and q."""
        y_vec = np.zeros(self.size)
        q_vec = np.zeros(self.size)
        for n, cn in enumerate(c.coefficients):
            w = cn / math.sqrt(2.0)
            y_vec[self.y(SIN, n)] += w
            y_vec[self.q(COS, n)] += w
            q_vec[self.q(SIN, n)] += w
            q_vec[self.y(COS, n)] -= w
        return y_vec, q_vec


@dataclass(frozen=True)
class ProtocolParams:
    kappa: float
    envelope: Envelope
    gain: float = 1.0
    imperfections: ImperfectionConfig = field(default_factory=ImperfectionConfig)
    register_orders: int = 0    # 0 means the minimal exact size N+3

    def __post_init__(self):
        if self.kappa < 0:
            raise DomainError("coupling kappa must be nonnegative")
        if self.gain < 0:
            raise DomainError("gain must be nonnegative")
        minimum = self.envelope.order + 3
        orders = self.register_orders or minimum
        if orders < minimum:
            raise DomainError(f"register needs at least {minimum} orders")
        object.__setattr__(self, "register_orders", orders)

    @property
    def measured_orders(self) -> int:
        # Bell observables are read out for orders 0..N+1
        return self.envelope.order + 2


@dataclass(frozen=True)
class FinalState:
    x_fin: QuadExpansion
    p_fin: QuadExpansion
    moments: Moments


def feedback_coefficient_f(n: int, c, kappa: float) -> float:
    """Closed-form weight of -p_(cos,n) in the ideal final X quadrature.

    Accepts an envelope or a bare coefficient sequence; coefficients beyond
    the envelope order are zero.  Defined for 0 <= n <= N+1.
    """
    coeffs = c.coefficients if isinstance(c, Envelope) else tuple(c)
    N = len(coeffs) - 1
    if n < 0 or n > N + 1:
        raise DomainError(f"feedback coefficient defined for 0 <= n <= {N + 1}")

    def cc(i):
        return coeffs[i] if 0 <= i <= N else 0.0

    k2 = (kappa / 2.0) ** 2
    if n == 0:
        val = cc(0) - kappa + k2 * (cc(0) + cc(1) * alpha_coupling(1))
    else:
        val = cc(n) + k2 * (cc(n + 1) * alpha_coupling(n + 1) - cc(n - 1) * alpha_coupling(n))
    return val / math.sqrt(2.0)


def _build_layers(params: ProtocolParams):
    cfg = params.imperfections
    n_meas = params.measured_orders
    budget = loss_ancillas_needed(cfg.loss_placement, n_meas)
    smap = build_scattering_map(params.kappa, params.register_orders, budget)
    layout = smap.layout
    pl = PayloadLayout(n_meas)

    atom_x = smap.row_expansion(layout.atom_x(), pl.size)
    atom_p = smap.row_expansion(layout.atom_p(), pl.size)
    atom_x, atom_p = apply_atomic_decay(atom_x, atom_p, cfg.beta, layout)

    root_half = 1.0 / math.sqrt(2.0)
    x_obs, q_obs = {}, {}
    for n in range(n_meas):
        for pol in (COS, SIN):
            ex = smap.row_expansion(layout.light_x(pol, n), pl.size)
            ex.coeffs *= root_half
            ex.payload[pl.y(pol, n)] += root_half
            eq = smap.row_expansion(layout.light_p(pol, n), pl.size)
            eq.coeffs *= root_half
            eq.payload[pl.q(pol, n)] -= root_half
            x_obs[(pol, n)] = ex
            q_obs[(pol, n)] = eq
    x_obs, q_obs = apply_light_loss(x_obs, q_obs, cfg.epsilon,
                                    cfg.loss_placement, layout)
    return smap, layout, pl, atom_x, atom_p, x_obs, q_obs


def bell_observable_expansions(params: ProtocolParams):
    """Measured Bell quadratures keyed by (polarity, order), n <= N+1.

    Returns (x_observables, q_observables) after loss has been applied per
    the configured placement.
    """
    _, _, _, _, _, x_obs, q_obs = _build_layers(params)
    return x_obs, q_obs


def final_atomic_state(params: ProtocolParams) -> FinalState:
    """Final atomic quadrature expansions and their moments."""
    _, layout, pl, atom_x, atom_p, x_obs, q_obs = _build_layers(params)
    c = params.envelope.coefficients
    g = params.gain

    x_fin, p_fin = atom_x, atom_p
    for n, cn in enumerate(c):
        w = g * cn
        if w == 0.0:
            continue
        x_fin.coeffs += w * (x_obs[(SIN, n)].coeffs - q_obs[(COS, n)].coeffs)
        x_fin.payload += w * (x_obs[(SIN, n)].payload - q_obs[(COS, n)].payload)
        p_fin.coeffs -= w * (x_obs[(COS, n)].coeffs + q_obs[(SIN, n)].coeffs)
        p_fin.payload -= w * (x_obs[(COS, n)].payload + q_obs[(SIN, n)].payload)

    y_vec, q_vec = pl.signal_vectors(params.envelope)
    for e in (x_fin, p_fin):
        e.signal_gain_y = float(np.dot(e.payload, y_vec))
        e.signal_gain_q = float(np.dot(e.payload, q_vec))
        residual = e.payload - e.signal_gain_y * y_vec - e.signal_gain_q * q_vec
        if np.max(np.abs(residual)) > 1e-10:
            raise StructuralError("payload leaked outside the signal mode")

    state = initial_state(params.imperfections, layout)
    moments = Moments(
        gain_x=x_fin.signal_gain_y,
        gain_p=p_fin.signal_gain_q,
        excess_x=to_shot_units(variance_of(x_fin, state)),
        excess_p=to_shot_units(variance_of(p_fin, state)),
    )
    return FinalState(x_fin, p_fin, moments)


def fidelity_ceiling(s: float, beta: float, epsilon: float) -> float:
    """Coherent-state fidelity ceiling 2/(2 + s/2 + beta + epsilon).

    The limit is reached when the feedback cancels every correctable term
    and only the squeezed floor plus the decay and loss vacuum admixtures
    remain.
    """
    if s <= 0 or beta < 0 or epsilon < 0:
        raise DomainError("invalid imperfection parameters")
    return 2.0 / (2.0 + s / 2.0 + beta + epsilon)
