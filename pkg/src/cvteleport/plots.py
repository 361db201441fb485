"""Matplotlib rendering of preset figures to PNG files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .modes import sample_envelope  # noqa: E402


def render_figure(preset, curve_results: dict, out_path, envelope_curve=None):
    """Fidelity and excess-noise panels for one preset.

    curve_results maps curve label to a list of OptimResult; envelope_curve,
    when given, is the (label, kappa, Envelope) triple shown as an inset.
    """
    fig, (ax_f, ax_n) = plt.subplots(
        2, 1, sharex=True, figsize=(6.4, 7.2),
        gridspec_kw={"height_ratios": [3, 2]},
    )
    for spec in preset.curves:
        results = curve_results[spec.label]
        kappas = [r.kappa for r in results]
        fid = [r.fidelity if r.feasible else np.nan for r in results]
        exc = [r.excess if r.feasible else np.nan for r in results]
        ax_f.plot(kappas, fid, label=spec.label)
        ax_n.plot(kappas, exc, label=spec.label)
    ax_f.set_ylabel("fidelity")
    ax_f.legend(loc="lower right", fontsize=8)
    ax_f.set_title(preset.title, fontsize=10)
    ax_n.set_ylabel("excess noise (shot units)")
    ax_n.set_xlabel("coupling $\\kappa$")

    if envelope_curve is not None:
        label, kappa, envelope = envelope_curve
        u = np.linspace(0.0, 1.0, 256)
        inset = ax_f.inset_axes([0.55, 0.12, 0.4, 0.35])
        inset.plot(u, sample_envelope(envelope, u), lw=1.0)
        inset.set_title(f"envelope {label}, $\\kappa$={kappa:g}", fontsize=7)
        inset.tick_params(labelsize=6)

    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
