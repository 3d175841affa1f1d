#!/usr/bin/env python3
"""Render the comparison files written by `airship_ctl run` into PNGs.

Usage: plot.py OUT_DIR   (suitable for --plot-cmd "python3 tools/plot.py")
"""
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def flavors(df, suffix):
    return [c[: -len(suffix)] for c in df.columns if c.endswith(suffix)]


def main(out: Path) -> None:
    ned = out / "compare_ned.csv"
    if not ned.exists():
        return
    df = pd.read_csv(ned)
    fig, ax = plt.subplots(figsize=(6, 6))
    for f in flavors(df, "_N"):
        ax.plot(df[f + "_E"], df[f + "_N"], label=f)
    ax.set_xlabel("East [m]")
    ax.set_ylabel("North [m]")
    ax.set_aspect("equal")
    ax.legend()
    fig.savefig(out / "ned.png", dpi=120)

    pp = pd.read_csv(out / "compare_phase_plane.csv")
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for ax, ch in zip(axes, ["N", "D"]):
        for f in flavors(pp, f"_z1_{ch}"):
            ax.plot(pp[f"{f}_z1_{ch}"], pp[f"{f}_z1dot_{ch}"], label=f)
        lim = pp[[c for c in pp.columns if c.endswith(f"_z1_{ch}")]].abs().max().max()
        ax.plot([-lim, lim], [0.2 * lim, -0.2 * lim], "k--", lw=0.8, label="sliding line")
        ax.set_xlabel(f"z1 {ch}")
        ax.set_ylabel(f"dz1/dt {ch}")
        ax.legend()
    fig.tight_layout()
    fig.savefig(out / "phase_plane.png", dpi=120)

    wr = pd.read_csv(out / "compare_wrench.csv")
    fig, axes = plt.subplots(6, 1, figsize=(8, 12), sharex=True)
    for ax, axis in zip(axes, "XYZLMN"):
        for f in flavors(wr, "_" + axis):
            ax.plot(wr["t"], wr[f"{f}_{axis}"], lw=0.6, label=f)
        ax.set_ylabel(axis)
    axes[0].legend()
    axes[-1].set_xlabel("t [s]")
    fig.tight_layout()
    fig.savefig(out / "wrench.png", dpi=120)


if __name__ == "__main__":
    main(Path(sys.argv[1]))
