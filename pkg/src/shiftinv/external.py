"""Generators supplied as tabulated Fourier data.

Each generator comes from a CSV file with columns ``xi, re, im``.  Values
between samples are interpolated linearly and taken as zero outside the
tabulated range.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .generators import GeneratorSet
from .gram import DEFAULT_M, tail_mass


def read_frequency_csv(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        rows = [row for row in csv.DictReader(fh)]
    if not rows:
        raise ValueError(f"{path}: no samples")
    try:
        xi = np.array([float(r["xi"]) for r in rows])
        vals = np.array([float(r["re"]) + 1j * float(r["im"]) for r in rows])
    except KeyError as exc:
        raise ValueError(f"{path}: expected columns xi, re, im") from exc
    order = np.argsort(xi)
    xi, vals = xi[order], vals[order]
    if np.any(np.diff(xi) <= 0):
        raise ValueError(f"{path}: duplicate xi values")
    return xi, vals


def _interpolant(xi, vals):
    def spectrum(x):
        x = np.asarray(x, dtype=float)
        re = np.interp(x, xi, vals.real, left=0.0, right=0.0)
        im = np.interp(x, xi, vals.imag, left=0.0, right=0.0)
        return re + 1j * im
    return spectrum


def load_frequency_generators(paths, J: int | None = None, time_grid=None) -> GeneratorSet:
    """Build a ``GeneratorSet`` from one CSV per generator.

    With ``J`` given the periodization is cut at ``|j| <= J`` even when the
    data reach further; the discarded mass is stored in
    ``diagnostics["tail_mass"]``.
    """
    spectra, reach = [], 0.0
    for path in paths:
        xi, vals = read_frequency_csv(path)
        nz = np.nonzero(np.abs(vals))[0]
        if nz.size:
            reach = max(reach, float(np.abs(xi[nz]).max()))
        spectra.append(_interpolant(xi, vals))
    labels = [Path(p).stem for p in paths]
    gens = GeneratorSet(tuple(labels), spectra, max(reach, np.pi), compact=J is None)
    if time_grid is not None:
        gens.sample(time_grid, alias_check=False)
    if J is not None:
        gens.diagnostics["J"] = int(J)
        gens.diagnostics["tail_mass"] = tail_mass(gens, int(J), DEFAULT_M)
    return gens
