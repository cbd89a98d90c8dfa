#!/usr/bin/env python3
"""Plot drumlab CSV outputs.

Usage:
    drumlab audit --config prob.conf --out results
    python3 tools/plot_results.py results

Writes xi.png, delta.png and staircase.png next to the CSVs. Display-only
helper; the CSVs are the interface.
"""

import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return {k: [float(r[k]) for r in rows] for k in rows[0]}


def main(outdir):
    outdir = pathlib.Path(outdir)

    audit = outdir / "audit.csv"
    if audit.exists():
        data = read_csv(audit)
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(data["N"], data["xi"], lw=0.8)
        ax.set_xlabel("N")
        ax.set_ylabel(r"$\Xi_N$")
        fig.tight_layout()
        fig.savefig(outdir / "xi.png", dpi=150)

        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(data["N"], data["delta"], lw=0.8, label=r"$\delta_N$")
        ax.plot(data["N"], data["delta_pred_conjecture"], "--",
                label="conjecture boundary term")
        ax.plot(data["N"], data["delta_pred_weylsigma"], ":",
                label="square boundary term")
        ax.set_xlabel("N")
        ax.set_ylabel(r"$\delta_N$")
        ax.legend()
        fig.tight_layout()
        fig.savefig(outdir / "delta.png", dpi=150)
        print("wrote xi.png, delta.png")

    spectrum = outdir / "spectrum_dirichlet.csv"
    if spectrum.exists():
        fig, ax = plt.subplots(figsize=(6, 4))
        for name, style in (("spectrum_dirichlet.csv", "-"),
                            ("spectrum_neumann.csv", "--")):
            path = outdir / name
            if not path.exists():
                continue
            data = read_csv(path)
            ax.step(data["E"], data["N"], style, where="post",
                    label=name.split("_")[1].split(".")[0])
        ax.set_xlabel("E")
        ax.set_ylabel("N(E)")
        ax.legend()
        fig.tight_layout()
        fig.savefig(outdir / "staircase.png", dpi=150)
        print("wrote staircase.png")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
