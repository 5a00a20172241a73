"""Weighted convolution and semi-convolution inequalities, evaluated on instances.

Each check returns ``(lhs, rhs)`` for one instance; the inequality holds
when ``lhs <= rhs``.  ``mu`` is assumed ``omega``-moderate with constant
1 and ``omega`` submultiplicative; ``moderate_pairs`` lists weight pairs
with that property.

The inequalities with constant 1 on the right-hand side are not all
valid in general.  Moving a weight across a translate inside a unit cell
costs up to ``cell_factor(omega)``, and for ``p > 1`` the semi-convolution
bound in ``L^p`` needs the amalgam norm of ``f``.  ``counterexamples``
builds instances that break them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal import (TIME, Grid, SampledFunction, Lp_mu_norm, amalgam_L_norm, amalgam_W_norm,
                     convolve, convolve_sequences, lp_mu_norm, semi_convolve, translate_pairing)
from .weights import Weight, cell_factor, constant, polynomial, subexponential


def moderate_pairs() -> list:
    """``(mu, omega)`` pairs with ``mu(x+y) <= omega(x) mu(y)`` exactly."""
    return [
        (constant(), constant()),
        (constant(), polynomial(2)),
        (polynomial(1), polynomial(2)),
        (polynomial(2), polynomial(2)),
        (subexponential(0.5, 0.5), subexponential(0.5, 0.5)),
        (subexponential(0.25, 0.5), subexponential(0.5, 0.5)),
    ]


@dataclass
class Instance:
    f: SampledFunction
    g: SampledFunction
    c: np.ndarray
    c_min: int
    d: np.ndarray
    d_min: int
    p: float
    mu: Weight
    omega: Weight


def _bump_on(grid: Grid, rng, lo: float, hi: float) -> np.ndarray:
    """Random smooth-ish complex profile supported on ``[lo, hi)``."""
    x = grid.points
    inside = (x >= lo) & (x < hi)
    k = rng.integers(1, 5)
    vals = np.zeros(grid.n, dtype=complex)
    t = (x[inside] - lo) / (hi - lo)
    for _ in range(k):
        amp = rng.standard_normal() + 1j * rng.standard_normal()
        vals[inside] += amp * np.sin(np.pi * t * rng.integers(1, 4)) ** 2
    return vals


def random_instance(rng: np.random.Generator, half_width: int = 12, q: int = 16,
                    max_support: float = 3.0) -> Instance:
    """Compactly supported ``f, g``, finitely supported ``c, d`` and a random ``(p, mu, omega)``."""
    grid = Grid.window(half_width, f"1/{q}")
    pairs = moderate_pairs()
    mu, omega = pairs[rng.integers(len(pairs))]
    p = [1.0, 2.0, np.inf][rng.integers(3)]
    supp = []
    for _ in range(2):
        width = rng.uniform(0.25, max_support)
        lo = rng.uniform(-2.0, 2.0 - width / 2)
        supp.append(_bump_on(grid, rng, lo, lo + width))
    n_c = int(rng.integers(1, 6))
    c_min = int(rng.integers(-3, 1))
    c = rng.standard_normal(n_c) + 1j * rng.standard_normal(n_c)
    n_d = int(rng.integers(1, 5))
    d = rng.standard_normal(n_d) + 1j * rng.standard_normal(n_d)
    d_min = int(rng.integers(-2, 1))
    return Instance(SampledFunction(grid, supp[0], TIME), SampledFunction(grid, supp[1], TIME),
                    c, c_min, d, d_min, p, mu, omega)


def _idx(c, c_min):
    return np.arange(c_min, c_min + len(c))


def convolution_Lp(inst: Instance):
    """``||f*g||_{L^p_mu} <= ||f||_{L^p_mu} ||g||_{L^1_omega}``."""
    h = convolve(inst.f, inst.g)
    return Lp_mu_norm(h, inst.p, inst.mu), Lp_mu_norm(inst.f, inst.p, inst.mu) * Lp_mu_norm(inst.g, 1, inst.omega)


def convolution_W(inst: Instance):
    """``||f*g||_{W^p_mu} <= ||f||_{L^p_mu} ||g||_{W^1_omega}``."""
    h = convolve(inst.f, inst.g)
    return amalgam_W_norm(h, inst.p, inst.mu), \
        Lp_mu_norm(inst.f, inst.p, inst.mu) * amalgam_W_norm(inst.g, 1, inst.omega)


def sequence_convolution(inst: Instance):
    """``||c*d||_{l^p_mu} <= ||c||_{l^p_mu} ||d||_{l^1_omega}``."""
    cd, first = convolve_sequences(inst.c, inst.c_min, inst.d, inst.d_min)
    lhs = lp_mu_norm(cd, inst.p, inst.mu, _idx(cd, first))
    rhs = lp_mu_norm(inst.c, inst.p, inst.mu, _idx(inst.c, inst.c_min)) * \
        lp_mu_norm(inst.d, 1, inst.omega, _idx(inst.d, inst.d_min))
    return lhs, rhs


def analysis_bound(inst: Instance, j_range: int = 8):
    """``||{<f, g(.-j)>}_j||_{l^p_mu} <= ||f||_{L^p_mu} ||g||_{W^1_omega}``."""
    seq = translate_pairing(inst.f, inst.g, -j_range, j_range)
    lhs = lp_mu_norm(seq, inst.p, inst.mu, np.arange(-j_range, j_range + 1))
    return lhs, Lp_mu_norm(inst.f, inst.p, inst.mu) * amalgam_W_norm(inst.g, 1, inst.omega)


def _semi(inst):
    return semi_convolve(inst.f, inst.c, inst.c_min)


def semi_convolution_Lp(inst: Instance):
    """``||f*'c||_{L^p_mu} <= ||c||_{l^p_mu} ||f||_{L^p_omega}``."""
    lhs = Lp_mu_norm(_semi(inst), inst.p, inst.mu)
    return lhs, lp_mu_norm(inst.c, inst.p, inst.mu, _idx(inst.c, inst.c_min)) * Lp_mu_norm(inst.f, inst.p, inst.omega)


def semi_convolution_L_amalgam(inst: Instance):
    """``||f*'c||_{cal L^p_mu} <= ||c||_{l^1_mu} ||f||_{cal L^p_omega}``."""
    lhs = amalgam_L_norm(_semi(inst), inst.p, inst.mu)
    return lhs, lp_mu_norm(inst.c, 1, inst.mu, _idx(inst.c, inst.c_min)) * amalgam_L_norm(inst.f, inst.p, inst.omega)


def semi_convolution_W_l1(inst: Instance):
    """``||f*'c||_{W^p_mu} <= ||c||_{l^1_mu} ||f||_{W^p_omega}``."""
    lhs = amalgam_W_norm(_semi(inst), inst.p, inst.mu)
    return lhs, lp_mu_norm(inst.c, 1, inst.mu, _idx(inst.c, inst.c_min)) * amalgam_W_norm(inst.f, inst.p, inst.omega)


def semi_convolution_W_lp(inst: Instance):
    """``||f*'c||_{W^p_mu} <= ||c||_{l^p_mu} ||f||_{W^1_omega}``."""
    lhs = amalgam_W_norm(_semi(inst), inst.p, inst.mu)
    return lhs, lp_mu_norm(inst.c, inst.p, inst.mu, _idx(inst.c, inst.c_min)) * amalgam_W_norm(inst.f, 1, inst.omega)


def semi_convolution_Lp_amalgam(inst: Instance):
    """``||f*'c||_{L^p_mu} <= ||c||_{l^p_mu} ||f||_{cal L^p_omega}``, valid for every p."""
    lhs = Lp_mu_norm(_semi(inst), inst.p, inst.mu)
    return lhs, lp_mu_norm(inst.c, inst.p, inst.mu, _idx(inst.c, inst.c_min)) * amalgam_L_norm(inst.f, inst.p, inst.omega)


CHECKS = {
    "convolution_Lp": convolution_Lp,
    "convolution_W": convolution_W,
    "sequence_convolution": sequence_convolution,
    "analysis_bound": analysis_bound,
    "semi_convolution_Lp": semi_convolution_Lp,
    "semi_convolution_L_amalgam": semi_convolution_L_amalgam,
    "semi_convolution_W_l1": semi_convolution_W_l1,
    "semi_convolution_W_lp": semi_convolution_W_lp,
}


# constants that make the bounds valid: one cell factor per weight moved
# across a unit cell, a factor 2 because a fractional translate of a cell
# meets two cells, and the amalgam norm in place of L^p_omega
REPAIRED = {
    "convolution_W": lambda inst: 2 * cell_factor(inst.omega) ** 2,
    "analysis_bound": lambda inst: cell_factor(inst.omega),
}


def run_suite(n: int = 200, seed: int = 0, slack: float = 1e-6, repaired: bool = False, **kwargs) -> dict:
    """Evaluate every check on ``n`` random instances; returns per-check failure data.

    With ``repaired`` the right-hand sides carry the constants of
    ``REPAIRED`` and the ``L^p`` semi-convolution bound uses the amalgam
    norm of ``f``.
    """
    rng = np.random.default_rng(seed)
    instances = [random_instance(rng, **kwargs) for _ in range(n)]
    checks = dict(CHECKS)
    if repaired:
        checks["semi_convolution_Lp"] = semi_convolution_Lp_amalgam
    out = {}
    for name, check in checks.items():
        worst, failures = 0.0, []
        for t, inst in enumerate(instances):
            lhs, rhs = check(inst)
            if repaired and name in REPAIRED:
                rhs *= REPAIRED[name](inst)
            ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else np.inf)
            worst = max(worst, ratio)
            if lhs > rhs * (1 + slack):
                failures.append(t)
        out[name] = {"worst_ratio": float(worst), "failures": failures}
    return out


def counterexamples() -> dict:
    """Instances on which the constant-1 forms fail.

    ``analysis_bound``: ``g`` the indicator of ``[0, 1)``, ``f`` a narrow
    spike at ``-1/2`` and ``mu = omega = (1+|x|)^2``.  The only nonzero
    coefficient sits at ``j = -1`` with weight 4 while ``mu(-1/2) = 2.25``.

    ``convolution_W``: the same ``g`` and a spike at ``1/2`` with constant
    weights; ``f*g`` is the indicator of ``[1/2, 3/2)`` and meets two cells.

    ``semi_convolution_Lp`` at ``p = inf``: ``f`` the indicator of
    ``[0, 10)`` and ``c`` ten ones; overlapping translates add up to 10.
    """
    grid = Grid.window(16, "1/64")
    x = grid.points
    g = SampledFunction(grid, ((x >= 0) & (x < 1)).astype(complex), TIME)
    f = SampledFunction(grid, ((x >= -0.5) & (x < -0.5 + grid.dx)).astype(complex), TIME)
    w = polynomial(2)
    a = Instance(f, g, np.ones(1), 0, np.ones(1), 0, 1.0, w, w)
    wide = SampledFunction(grid, ((x >= 0) & (x < 10)).astype(complex), TIME)
    b = Instance(wide, wide, np.ones(10), 0, np.ones(1), 0, np.inf, constant(), constant())
    half = SampledFunction(grid, ((x >= 0.5) & (x < 0.5 + grid.dx)).astype(complex) / grid.dx, TIME)
    c = Instance(half, g, np.ones(1), 0, np.ones(1), 0, 1.0, constant(), constant())
    return {"analysis_bound": (a, analysis_bound(a)), "convolution_W": (c, convolution_W(c)),
            "semi_convolution_Lp": (b, semi_convolution_Lp(b))}
