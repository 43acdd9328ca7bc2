#!/usr/bin/env python3
"""Plot the CSV datasets produced by `noclone sweep <figure>`.

Usage:
    python scripts/make_figures.py <data_dir> [--out <plot_dir>]

`data_dir` is scanned for the known dataset names (fig2.csv, fig3a.csv, ...)
and a PNG is written per dataset found. Plotting is intentionally separate
from data generation so the package itself has no matplotlib dependency.
"""

import argparse
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _load(path: Path):
    return np.genfromtxt(path, delimiter=",", names=True,
                         encoding="utf-8", dtype=None)


def plot_fig2(d, ax):
    for key, label in [("rc_classical", "classical"),
                       ("rc_gaussian", "Gaussian"),
                       ("rc_ultimate", "ultimate")]:
        ax.plot(d["n"], d[key], "o-", label=label)
    ax.set_xlabel("Fock input n")
    ax.set_ylabel("critical squeezing $r_c$")
    ax.legend()


def _plot_scatter(d, ax, xkey, ykey, xlabel, ylabel):
    for family in np.unique(d["family"]):
        m = d["family"] == family
        ax.scatter(d[xkey][m], d[ykey][m], s=14, label=str(family))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=7)


def plot_fig3a(d, ax):
    _plot_scatter(d, ax, "delta", "ncb", r"QNG $\delta$", "ultimate NCB")


def plot_fig3b(d, ax):
    _plot_scatter(d, ax, "delta", "r_c", r"QNG $\delta$",
                  "critical squeezing $r_c$")


def plot_fig4a(d, ax):
    ax.plot(d["alpha"], d["rc_even_cat"], "kx-", label="even cat")
    ax.plot(d["alpha"], d["rc_mixture"], "^-", color="tab:orange",
            label="coherent mixture")
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel("critical squeezing $r_c$")
    ax.legend()


def plot_fig4b(d, ax):
    ax.scatter(d["wn"], d["r_c"], s=12)
    ax.set_xlabel(r"Wigner negativity $W_N$")
    ax.set_ylabel("critical squeezing $r_c$")


def plot_s1(d, ax):
    for n in np.unique(d["n"]):
        m = d["n"] == n
        ax.plot(d["ntrunc"][m], d["bound"][m], "o-", label=f"n = {int(n)}")
    ax.set_xlabel("Fock truncation")
    ax.set_ylabel("ultimate NCB")
    ax.legend()


def plot_s2(d, ax):
    for n in np.unique(d["n"]):
        m = d["n"] == n
        ax.plot(d["step"][m], d["rq_ansatz"][m], "o-",
                label=f"n = {int(n)}, ansatz start")
        ax.plot(d["step"][m], d["rq_vacuum"][m], "s--",
                label=f"n = {int(n)}, vacuum start")
    ax.set_xlabel("iteration step")
    ax.set_ylabel("Rayleigh quotient")
    ax.legend(fontsize=7)


def plot_s3(d, ax):
    for n in np.unique(d["n"]):
        m = d["n"] == n
        ax.plot(d["z"][m], d["pz"][m], label=f"n = {int(n)}")
    ax.set_xlim(0, 10)
    ax.set_xlabel("z")
    ax.set_ylabel("P(z)")
    ax.legend()


def plot_s4(d, ax):
    _plot_scatter(d, ax, "wn", "r_c", r"Wigner negativity $W_N$",
                  "critical squeezing $r_c$")


def plot_s5(d, ax):
    for n in np.unique(d["n"]):
        m = d["n"] == n
        for key in ("f_d0", "f_d1", "f_d2"):
            ax.plot(d["n_av"][m], d[key][m],
                    label=f"n = {int(n)}, {key[2:]}")
    ax.set_xlabel(r"mean photon number $\bar n$")
    ax.set_ylabel("optimal fidelity")
    ax.legend(fontsize=7)


def plot_s6(d, ax):
    for n in np.unique(d["n"]):
        m = d["n"] == n
        ax.plot(d["n_av"][m], d["f_pnes"][m], "-", label=f"n = {int(n)}, optimal")
        ax.plot(d["n_av"][m], d["f_tmsv"][m], "--", label=f"n = {int(n)}, TMSV")
    ax.set_xlim(0, 3)
    ax.set_xlabel(r"mean photon number $\bar n$")
    ax.set_ylabel("fidelity")
    ax.legend(fontsize=7)


PLOTTERS = {
    "fig2": plot_fig2, "fig3a": plot_fig3a, "fig3b": plot_fig3b,
    "fig4a": plot_fig4a, "fig4b": plot_fig4b,
    "s1": plot_s1, "s2": plot_s2, "s3": plot_s3, "s4": plot_s4,
    "s5": plot_s5, "s6": plot_s6,
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("data_dir", type=Path)
    parser.add_argument("--out", type=Path, default=None)
    args = parser.parse_args()
    out = args.out if args.out is not None else args.data_dir
    out.mkdir(parents=True, exist_ok=True)
    made = 0
    for name, plotter in PLOTTERS.items():
        csv = args.data_dir / f"{name}.csv"
        if not csv.is_file():
            continue
        fig, ax = plt.subplots(figsize=(4.2, 3.2), dpi=160)
        plotter(_load(csv), ax)
        fig.tight_layout()
        fig.savefig(out / f"{name}.png")
        plt.close(fig)
        print(out / f"{name}.png")
        made += 1
    if made == 0:
        print(f"no known datasets found in {args.data_dir}")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
