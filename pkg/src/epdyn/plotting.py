"""Matplotlib renderings of sweep and time-series tables.

matplotlib is an optional dependency (``pip install epdyn[plot]``); it is only
imported when a figure is requested.
"""

from pathlib import Path

import numpy as np

LINE_KWARGS = dict(linewidth=1.2)
START_KWARGS = dict(marker="o", markersize=5, linestyle="none")
LABEL_KWARGS = dict(fontsize=11)
FIG_SIZE = (5.0, 3.6)

# strip timestamps / version strings so repeated runs write identical files
_DETERMINISTIC_METADATA = {
    ".png": {"Software": None},
    ".svg": {"Date": None, "Creator": None},
    ".pdf": {"CreationDate": None, "Creator": None, "Producer": None},
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path):
    path = Path(path)
    meta = _DETERMINISTIC_METADATA.get(path.suffix.lower())
    fig.savefig(path, metadata=meta, bbox_inches="tight", dpi=150)


def plot_trajectory(traj, path):
    """Eigenvalue paths in the complex energy plane, starting points dotted."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    for name, e in (("E1", traj.e1_path), ("E2", traj.e2_path)):
        (line,) = ax.plot(e.real, e.imag, label=name, **LINE_KWARGS)
        ax.plot(e.real[:1], e.imag[:1], color=line.get_color(), **START_KWARGS)
    ax.set_xlabel("Re E", **LABEL_KWARGS)
    ax.set_ylabel("Im E", **LABEL_KWARGS)
    ax.set_title(
        f"lambda = {traj.lambdas[0]:.3g} ... {traj.lambdas[-1]:.3g}", **LABEL_KWARGS
    )
    ax.legend(loc="best", frameon=False)
    _save(fig, path)
    plt.close(fig)


def plot_time_series(series, path, part="real"):
    """Real (or imaginary) parts of z1(t) and z2(t) in two stacked panels."""
    plt = _pyplot()
    take = np.real if part == "real" else np.imag
    fig, axes = plt.subplots(2, 1, sharex=True, figsize=(FIG_SIZE[0], 1.4 * FIG_SIZE[1]))
    for ax, name in zip(axes, ("z1", "z2")):
        z = series.component(name)
        ax.plot(series.times, take(z), **LINE_KWARGS)
        ax.plot(series.times, np.abs(z), color="0.6", linestyle="--", linewidth=0.8)
        ax.set_ylabel(f"{'Re' if part == 'real' else 'Im'} {name}", **LABEL_KWARGS)
    axes[-1].set_xlabel("t", **LABEL_KWARGS)
    lam = complex(series.lam)
    axes[0].set_title(
        f"lambda = {lam.real:.6g}, psi0 = ({series.psi0.z1:.3g}, {series.psi0.z2:.3g})",
        **LABEL_KWARGS,
    )
    _save(fig, path)
    plt.close(fig)
