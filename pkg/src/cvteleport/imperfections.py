"""Squeezed-light initialization, atomic decay, and passive light loss.

All three imperfections are Gaussian: squeezing sets the initial light
variances, decay and loss are beam-splitter admixtures of fresh vacuum
ancillas applied directly to the operator expansions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gaussian import BasisLayout, DiagonalState, QuadExpansion
from .modes import Polarity


class LossPlacement(enum.Enum):
    """Where the light loss acts relative to the Bell beam splitter."""

    SCATTERED_ONLY = "scattered-only"   # scattered modes only, before the splitter
    DETECTION = "detection"             # both splitter outputs (detector loss)
    BOTH = "both"                       # scattered and input modes independently


@dataclass(frozen=True)
class ImperfectionConfig:
    s: float = 1.0
    beta: float = 0.0
    epsilon: float = 0.0
    loss_placement: LossPlacement = LossPlacement.SCATTERED_ONLY

    def __post_init__(self):
        if not 0.0 < self.s <= 1.0:
            raise DomainError("squeezing s must lie in (0, 1]")
        if not 0.0 <= self.beta < 1.0:
            raise DomainError("decay beta must lie in [0, 1)")
        if not 0.0 <= self.epsilon < 1.0:
            raise DomainError("loss epsilon must lie in [0, 1)")


def loss_ancillas_needed(placement: LossPlacement, measured_orders: int) -> int:
    """Ancilla-mode budget for `measured_orders` orders of Bell observables."""
    per_mode = 1 if placement is LossPlacement.SCATTERED_ONLY else 2
    return per_mode * 2 * measured_orders


def initial_state(cfg: ImperfectionConfig, layout: BasisLayout) -> DiagonalState:
    """Initial variances: atom and ancillas in vacuum, light squeezed.

    The x quadratures of every light mode (both polarities, all orders)
    carry the squeezed variance s/2 canonical; pure minimum-uncertainty
    squeezing puts 1/(2s) on the conjugate quadratures.
    """
    v = np.full(layout.n_coords, 0.5)
    for n in range(layout.num_orders):
        for pol in (Polarity.COS, Polarity.SIN):
            v[layout.light_x(pol, n)] = cfg.s / 2.0
            v[layout.light_p(pol, n)] = 1.0 / (2.0 * cfg.s)
    return DiagonalState(v)


def apply_atomic_decay(e_x: QuadExpansion, e_p: QuadExpansion, beta: float,
                       layout: BasisLayout):
    """Admix a fraction beta of vacuum into the atomic quadrature pair.

    Scales every existing coefficient and any signal gains by sqrt(1-beta)
    and adds sqrt(beta) on the dedicated decay ancilla pair.
    """
    if not 0.0 <= beta <= 1.0:
        raise DomainError("decay beta must lie in [0, 1]")
    keep = math.sqrt(1.0 - beta)
    mix = math.sqrt(beta)
    anc = layout.decay_ancilla()
    out_x = e_x.scaled(keep)
    out_p = e_p.scaled(keep)
    out_x.coeffs[2 * anc] += mix
    out_p.coeffs[2 * anc + 1] += mix
    return out_x, out_p


def apply_light_loss(x_obs: dict, q_obs: dict, epsilon: float,
                     placement: LossPlacement, layout: BasisLayout):
    """Loss on the measured Bell quadratures, keyed by (polarity, order).

    ScatteredOnly attenuates only the scattered-side (noise) coefficients,
    with the vacuum admixture entering through the balanced splitter at
    sqrt(eps/2); Detection attenuates the complete observables, signal
    content included, at full sqrt(eps) admixture; Both attenuates scattered
    and input sides independently before they interfere.
    """
    if not 0.0 <= epsilon < 1.0:
        raise DomainError("loss epsilon must lie in [0, 1)")
    keep = math.sqrt(1.0 - epsilon)
    out_x, out_q = {}, {}
    for key in x_obs:
        ex, eq = x_obs[key].copy(), q_obs[key].copy()
        if placement is LossPlacement.SCATTERED_ONLY:
            anc = layout.fresh_loss_ancilla()
            mix = math.sqrt(epsilon / 2.0)
            ex.coeffs *= keep
            eq.coeffs *= keep
            ex.coeffs[2 * anc] += mix
            eq.coeffs[2 * anc + 1] += mix
        elif placement is LossPlacement.DETECTION:
            anc_a = layout.fresh_loss_ancilla()
            anc_b = layout.fresh_loss_ancilla()
            mix = math.sqrt(epsilon)
            ex = ex.scaled(keep)
            eq = eq.scaled(keep)
            ex.coeffs[2 * anc_a] += mix
            eq.coeffs[2 * anc_b + 1] += mix
        else:  # BOTH
            anc_s = layout.fresh_loss_ancilla()
            anc_i = layout.fresh_loss_ancilla()
            mix = math.sqrt(epsilon / 2.0)
            ex.coeffs *= keep
            eq.coeffs *= keep
            ex.coeffs[2 * anc_s] += mix
            eq.coeffs[2 * anc_s + 1] += mix
            if ex.payload is not None:
                ex.payload *= keep
            if eq.payload is not None:
                eq.payload *= keep
            ex.coeffs[2 * anc_i] += mix
            eq.coeffs[2 * anc_i + 1] += mix
        out_x[key], out_q[key] = ex, eq
    return out_x, out_q
