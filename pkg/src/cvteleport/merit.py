"""Fidelity figures: coherent, Gaussian-ensemble averaged, and qubit.

The qubit path has two independent routes: a closed-form Bloch-sphere
average in terms of (g, sigma^2), and an oracle that builds the channel's
two-level Fock matrix elements from coherent-state generating functions
and averages over an explicit Bloch grid.  Their agreement validates the
closed form and the shot-unit reading of the final variance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

from .errors import DomainError, RepresentationError, StructuralError
from .gaussian import Moments, gaussian_coherent_fidelity


@dataclass(frozen=True)
class QubitChannelParams:
    g: float
    sigma2: float

    def __post_init__(self):
        if self.sigma2 < 0:
            raise DomainError("channel noise sigma2 must be nonnegative")


def _symmetric_gain(moments: Moments) -> float:
    if abs(moments.gain_x - moments.gain_p) > 1e-9:
        raise StructuralError("quadrature gains differ; no single-gain figure exists")
    return moments.gain_x


def coherent_fidelity(moments: Moments, mean: complex = 0j) -> float:
    """Teleportation fidelity for a coherent input.

    At unit gain this is 2/sqrt((2+Sx)(2+Sp)) for every amplitude; away
    from unit gain the amplitude mismatch penalty applies at the given
    mean.
    """
    g = _symmetric_gain(moments)
    if abs(g - 1.0) < 1e-12:
        return 2.0 / math.sqrt((2.0 + moments.excess_x) * (2.0 + moments.excess_p))
    return gaussian_coherent_fidelity(g, moments.excess_x, moments.excess_p, mean)


def average_coherent_fidelity(moments: Moments, nbar: float) -> float:
    """Fidelity averaged over an isotropic Gaussian amplitude ensemble.

    nbar is the mean photon number of the input distribution.  The
    Gaussian integral closes: each quadrature factor picks up an extra
    2*nbar*(g-1)^2 of effective noise.
    """
    if nbar < 0:
        raise DomainError("mean photon number must be nonnegative")
    dx = moments.gain_x - 1.0
    dp = moments.gain_p - 1.0
    fx = 2.0 + moments.excess_x + 2.0 * nbar * dx * dx
    fp = 2.0 + moments.excess_p + 2.0 * nbar * dp * dp
    return 2.0 / math.sqrt(fx * fp)


def qubit_sigma2(moments: Moments) -> float:
    """Channel noise sigma^2 = ((Delta X_fin)^2 - 1)/4 in shot units.

    The final variance at vacuum payload is g^2 + excess; a channel of the
    required classical-noise form exists only when that is at least the
    vacuum unit.
    """
    value = (moments.gain_x ** 2 + moments.excess_x - 1.0) / 4.0
    if value < -1e-12:
        raise RepresentationError(
            f"final variance below vacuum (sigma2 = {value:.3e}); "
            "no classical-noise channel represents these moments"
        )
    return max(value, 0.0)


def qubit_average_fidelity(p: QubitChannelParams) -> float:
    """Closed-form Bloch-sphere-averaged fidelity of the noisy gain channel."""
    g, s2 = p.g, p.sigma2
    num = 3.0 + 2.0 * g + g * g + 2.0 * (9.0 + 2.0 * g - 3.0 * g * g) * s2 + 24.0 * s2 * s2
    den = 6.0 * (1.0 + 2.0 * s2) ** 3
    return num / den


def _channel_fock_tensor(g: float, sigma2: float) -> np.ndarray:
    """Matrix elements T[n,m,n',m'] = <n'| E(|n><m|) |m'> for n,m,n',m' <= 1.

    Derived from the generating functions G_{n'm'}(a, a*) =
    exp(a a*) <n'| E(|a><a|) |m'> of the displaced-thermal channel output
    (thermal occupation t = 2 sigma^2, center g*a), differentiated once in
    each of a, a* at the origin.
    """
    t = 2.0 * sigma2
    d = 1.0 + t
    c = 1.0 - g * g / d
    T = np.zeros((2, 2, 2, 2))
    T[0, 0, 0, 0] = 1.0 / d
    T[0, 0, 1, 1] = t / d ** 2
    T[1, 0, 1, 0] = g / d ** 2
    T[0, 1, 0, 1] = g / d ** 2
    T[1, 1, 0, 0] = c / d
    T[1, 1, 1, 1] = g * g / d ** 3 + t * c / d ** 2
    return T


def qubit_fidelity_oracle(p: QubitChannelParams, bloch_grid=(32, 16)) -> float:
    """Bloch-sphere-averaged fidelity via the Fock-space channel tensor.

    Independent of the closed form: pure states cos(t/2)|0> +
    e^{i phi} sin(t/2)|1> are pushed through the truncated channel tensor
    and the overlap is quadrature-averaged with Gauss-Legendre nodes in
    (phi, cos theta).
    """
    n_phi, n_cos = bloch_grid
    T = _channel_fock_tensor(p.g, p.sigma2)
    phi_x, phi_w = npleg.leggauss(n_phi)
    phi = math.pi * (phi_x + 1.0)          # [0, 2 pi]
    cos_x, cos_w = npleg.leggauss(n_cos)   # cos theta on [-1, 1]

    total = 0.0
    weight = 0.0
    for ct, wc in zip(cos_x, cos_w):
        a = math.sqrt((1.0 + ct) / 2.0)
        b = math.sqrt((1.0 - ct) / 2.0)
        for ph, wp in zip(phi, phi_w):
            psi = np.array([a, b * complex(math.cos(ph), math.sin(ph))])
            rho_in = np.outer(psi, psi.conj())
            rho_out = np.einsum("nm,nmab->ab", rho_in, T)
            overlap = np.real(psi.conj() @ rho_out @ psi)
            total += wc * wp * overlap
            weight += wc * wp
    return total / weight
