"""Closed-form input-output map of the atom-light scattering interaction.

The atom picks up the zero-order momentum quadratures at strength
kappa/sqrt(2); the zero-order x quadratures pick up the conjugate atomic
quadrature plus second-order (kappa/2)^2 corrections that couple
neighboring Legendre orders through alpha_n = 1/sqrt(4 n^2 - 1).  All
momentum quadratures of the light are left untouched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gaussian import BasisLayout, QuadExpansion
from .modes import Polarity

COS, SIN = Polarity.COS, Polarity.SIN


def alpha_coupling(n: int) -> float:
    """Order-coupling coefficient 1/sqrt(4 n^2 - 1), defined for n >= 1."""
    if n < 1:
        raise DomainError("alpha coupling defined for order >= 1 only")
    return 1.0 / math.sqrt(4 * n * n - 1)


@dataclass(frozen=True)
class ScatteringMap:
    """Linear map over the noise register; rows are output expansions."""

    matrix: np.ndarray
    kappa: float
    layout: BasisLayout

    def row_expansion(self, coord: int, payload_size: int = 0) -> QuadExpansion:
        payload = np.zeros(payload_size) if payload_size else None
        return QuadExpansion(self.matrix[coord].copy(), payload)


def build_scattering_map(kappa: float, register_orders: int,
                         num_loss_ancillas: int = 0) -> ScatteringMap:
    """Assemble the map for orders 0..register_orders-1.

    The top order keeps its in-coupling from below but has no order above
    it to couple out to; the protocol only ever reads orders at least two
    below the top, where the map is exact.
    """
    if kappa < 0:
        raise DomainError("coupling kappa must be nonnegative")
    layout = BasisLayout(register_orders, num_loss_ancillas)
    m = np.eye(layout.n_coords)
    k2 = (kappa / 2.0) ** 2
    ks = kappa / math.sqrt(2.0)

    m[layout.atom_x(), layout.light_p(COS, 0)] += ks
    m[layout.atom_p(), layout.light_p(SIN, 0)] += ks

    m[layout.light_x(COS, 0), layout.atom_p()] += ks
    m[layout.light_x(COS, 0), layout.light_p(SIN, 0)] += k2
    m[layout.light_x(COS, 0), layout.light_p(SIN, 1)] -= k2 * alpha_coupling(1)

    m[layout.light_x(SIN, 0), layout.atom_x()] -= ks
    m[layout.light_x(SIN, 0), layout.light_p(COS, 0)] -= k2
    m[layout.light_x(SIN, 0), layout.light_p(COS, 1)] += k2 * alpha_coupling(1)

    for n in range(1, register_orders):
        down = k2 * alpha_coupling(n)
        m[layout.light_x(COS, n), layout.light_p(SIN, n - 1)] += down
        m[layout.light_x(SIN, n), layout.light_p(COS, n - 1)] -= down
        if n + 1 < register_orders:
            up = k2 * alpha_coupling(n + 1)
            m[layout.light_x(COS, n), layout.light_p(SIN, n + 1)] -= up
            m[layout.light_x(SIN, n), layout.light_p(COS, n + 1)] += up

    return ScatteringMap(m, float(kappa), layout)


def atomic_output_variance(kappa: float) -> float:
    """Shot-unit variance of an atomic quadrature after scattering on vacuum.

    The kappa/sqrt(2) admixture of a vacuum momentum adds kappa^2/4
    canonical on top of the atomic 1/2; doubling gives 1 + kappa^2/2.
    """
    if kappa < 0:
        raise DomainError("coupling kappa must be nonnegative")
    return 1.0 + kappa * kappa / 2.0
