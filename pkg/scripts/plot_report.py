#!/usr/bin/env python3
"""Draw the tables written by ``edcal report``.

Needs the optional plotting dependency (``pip install edcal[plot]``).

Usage:
    python scripts/plot_report.py out/report --out out/figures
"""

import argparse
import math
import re
from pathlib import Path

import matplotlib as mpl
import matplotlib.pyplot as plt
import pandas as pd

CENSUS_FILE = re.compile(r"census_(\w)_([\w-]+)\.csv$")
ECDF_FILE = re.compile(r"ecdf_(\w)_([\w-]+)_(DOT|DIT)\.csv$")


def figure(width: float = 8, height: float | None = None) -> tuple[plt.Figure, plt.Axes]:
    """A figure with readable font sizes; height defaults to width times the golden ratio."""
    mpl.rcParams["font.sans-serif"] = "DejaVu Sans"
    golden_ratio = (math.sqrt(5) - 1.0) / 2.0
    fig, ax = plt.subplots(figsize=(width, height or width * golden_ratio), facecolor="w")
    ax.tick_params(labelsize=width * 1.5)
    return fig, ax


def plot_census(path: Path, tag: str, unit: str, out: Path) -> Path:
    data = pd.read_csv(path)
    fig, ax = figure()
    ax.plot(data["hour"], data["real"], "o-", color="black", label="real")
    ax.plot(data["hour"], data["sim_mean"], "s--", color="tab:blue", label="simulated mean")
    if data["ci_low"].notna().all():
        ax.fill_between(data["hour"], data["ci_low"], data["ci_high"], color="tab:blue", alpha=0.2, label="95% CI")
    ax.set_xlabel("hour of day")
    ax.set_ylabel("patients after visit start")
    ax.set_title(f"{tag}/{unit}")
    ax.legend()
    target = out / f"census_{tag}_{unit}.png"
    fig.savefig(target, bbox_inches="tight")
    plt.close(fig)
    return target


def plot_ecdf(path: Path, tag: str, unit: str, kind: str, out: Path) -> Path:
    data = pd.read_csv(path)
    fig, ax = figure()
    ax.step(data["t"], data["real_F"], where="post", color="black", label="real")
    ax.step(data["t"], data["sim_F"], where="post", color="tab:orange", label="simulated")
    ax.set_xlabel(f"{kind} (hours)")
    ax.set_ylabel("ECDF")
    ax.set_ylim(0, 1.02)
    ax.set_title(f"{tag}/{unit} {kind}")
    ax.legend(loc="lower right")
    target = out / f"ecdf_{tag}_{unit}_{kind}.png"
    fig.savefig(target, bbox_inches="tight")
    plt.close(fig)
    return target


def plot_kpi_means(path: Path, out: Path) -> list[Path]:
    data = pd.read_csv(path)
    targets = []
    for kind, group in data.groupby("kpi"):
        fig, ax = figure()
        labels = group["tag"] + "/" + group["unit"]
        x = range(len(group))
        ax.plot(x, group["real_mean"], "o", color="black", label="real")
        err = (group["ci_high"] - group["ci_low"]) / 2
        ax.errorbar(x, group["sim_mean"], yerr=err.fillna(0), fmt="s", color="tab:blue", capsize=4, label="simulated")
        ax.set_xticks(list(x), labels)
        ax.set_ylabel(f"mean {kind} (hours)")
        ax.legend()
        target = out / f"means_{kind}.png"
        fig.savefig(target, bbox_inches="tight")
        plt.close(fig)
        targets.append(target)
    return targets


def main() -> int:
    parser = argparse.ArgumentParser(description="Plot edcal report tables")
    parser.add_argument("report_dir", type=Path, help="Directory written by 'edcal report'")
    parser.add_argument("--out", type=Path, default=Path("out/figures"), help="Where to save PNG files")
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    written = []
    for path in sorted(args.report_dir.iterdir()):
        if m := CENSUS_FILE.search(path.name):
            written.append(plot_census(path, *m.groups(), args.out))
        elif m := ECDF_FILE.search(path.name):
            written.append(plot_ecdf(path, *m.groups(), args.out))
    means = args.report_dir / "kpi_means.csv"
    if means.exists():
        written += plot_kpi_means(means, args.out)
    print(f"Wrote {len(written)} figures to {args.out}")
    return 0


if __name__ == "__main__":
    exit(main())
