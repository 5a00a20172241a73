"""Report figures, rendered off-screen to PNG files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed metadata keeps repeated runs byte-identical
_PNG_META = {"Software": None}


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)
    return path


def plot_rank_profile(profile, path, title: str = "") -> Path:
    """Rank per grid point over ``[-pi, pi)`` with the singular values below it."""
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(7, 5.5), sharex=True)
    ax0.step(profile.xi, profile.rank_at, where="mid", color="k", lw=1.2)
    ax0.set_ylabel("rank")
    ax0.set_yticks(sorted(set(profile.rank_at.tolist())))
    for t in profile.transitions:
        ax0.axvline(t["xi"], color="tab:red", lw=0.6, ls=":")
    floor = profile.tolerance * profile.reference
    sv = np.maximum(profile.singular_values, floor * 1e-4)
    for i in range(sv.shape[1]):
        ax1.semilogy(profile.xi, sv[:, i], lw=1)
    ax1.axhline(floor, color="tab:red", ls="--", lw=0.8, label="rank threshold")
    ax1.set_xlabel(r"$\xi$")
    ax1.set_ylabel("singular values")
    ax1.set_xlim(-np.pi, np.pi)
    ax1.legend(loc="lower right", fontsize=8)
    if title:
        ax0.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_gram_eigenvalues(xi, eigenvalues, path, threshold: float | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(7, 3.5))
    floor = threshold * 1e-4 if threshold else 1e-30
    for i in range(eigenvalues.shape[1]):
        ax.semilogy(xi, np.maximum(eigenvalues[:, i], floor), lw=1)
    if threshold:
        ax.axhline(threshold, color="tab:red", ls="--", lw=0.8)
    ax.set_xlabel(r"$\xi$")
    ax.set_ylabel("Gram eigenvalues")
    ax.set_xlim(-np.pi, np.pi)
    fig.tight_layout()
    return _save(fig, path)


def plot_generators(gens, path, x_max: float = 8.0, duals=None) -> Path:
    """Moduli of the time samples near the origin and the sampled spectra."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 3.8))
    x = gens.time_grid.points
    sel = np.abs(x) <= x_max
    for lab, g in zip(gens.labels, gens.time):
        ax0.plot(x[sel], np.abs(g.values[sel]), lw=1, label=fr"$|\phi_{{{lab}}}|$")
    if duals is not None:
        for lab, g in zip(gens.labels, duals.psi_time):
            ax0.plot(x[sel], np.abs(g.values[sel]), lw=0.8, ls="--", label=fr"$|\psi_{{{lab}}}|$")
    ax0.set_xlabel("x")
    ax0.legend(fontsize=7, ncol=2)
    xi = gens.fourier[0].grid.points
    reach = gens.support + 0.5
    sel = np.abs(xi) <= reach
    for lab, F in zip(gens.labels, gens.fourier):
        ax1.plot(xi[sel], F.values.real[sel], lw=1, label=fr"$\hat\phi_{{{lab}}}$")
    ax1.set_xlabel(r"$\xi$")
    ax1.legend(fontsize=7)
    fig.tight_layout()
    return _save(fig, path)


def plot_ratios(constants, path) -> Path:
    """Frame ratios per trial, one series per exponent."""
    fig, ax = plt.subplots(figsize=(7, 3.5))
    for label, fc in constants.items():
        ax.plot(np.arange(len(fc.ratios)), fc.ratios, ".", ms=4, label=f"p = {label}")
    ax.set_xlabel("trial")
    ax.set_ylabel("frame ratio")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)
