"""Regenerate the population / negativity figures for every preset protocol.

    python3 scripts/reproduce_figures.py --out figures/
"""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from coupledqubits.protocols import preset, run_negativity_scan, run_protocol

FIGURES = ("phi_minus_fstirap", "phi_pulse_area", "ghz_fstirap_plus_pi", "ghz_fstirap_all_on")


def plot_protocol(ax, name, overrides=None):
    spec = preset(name, overrides)
    res = run_protocol(spec)
    tr = res.trajectory
    for k, label in enumerate(tr.basis_labels):
        ax.plot(tr.times, tr.populations[:, k], label=label)
    ax.plot(tr.times, tr.negativity, "k--", label="Ne")
    ax.set_xlabel("t / T")
    ax.set_title(f"{name}  F={res.final_fidelity:.4f}")
    ax.legend(fontsize=8)
    return res


def plot_negativity_scan(ax, ratios=(2.0, 1.0, 0.5)):
    for r, rec in zip(ratios, run_negativity_scan(ratios)):
        ax.plot(rec.times, rec.negativity, label=f"ratio {r:g}")
    ax.set_xlabel("t / T")
    ax.set_ylabel("Ne")
    ax.legend()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="figures")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for name in FIGURES:
        fig, ax = plt.subplots(figsize=(6, 4))
        overrides = {"phase_over_pi": 4.0} if name == "phi_pulse_area" else None
        res = plot_protocol(ax, name, overrides)
        fig.tight_layout()
        fig.savefig(out / f"{name}.png")
        plt.close(fig)
        print(f"{name}: final populations {np.round(res.trajectory.final_populations, 4)}")

    fig, ax = plt.subplots(figsize=(6, 4))
    plot_negativity_scan(ax)
    fig.tight_layout()
    fig.savefig(out / "negativity_scan.png")
    plt.close(fig)
    print(f"wrote figures to {out}/")


if __name__ == "__main__":
    main()
