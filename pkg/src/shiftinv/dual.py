"""Dual generators, analysis/synthesis and empirical p-frame constants.

Everything here runs on the time torus ``[-T, T)`` of the generator set.
Translates by ``j`` wrap around, coefficient families are indexed by
``j = -T .. T-1`` and the 2T base frequencies ``pi*b/T`` in ``[-pi, pi)``
carry the whole Fourier picture.  On that torus the reconstruction and
biorthogonality identities hold exactly up to rounding.

Pairings are sesquilinear: ``<f, g> = int f conj(g)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .generators import GeneratorSet, frequency_grid, inverse_transform
from .gram import DEFAULT_M, DEFAULT_TOL, FrameVerdict, frame_verdict, reduce_frequency
from .linalg import jacobi_rows
from .signal import TIME, CoefficientArray, Grid, SampledFunction, Lp_mu_norm, lp_mu_norm, parse_p, \
    translate_pairing
from .weights import Weight, constant, eval_weight


class NotAFrameError(ValueError):
    """Raised when a dual is requested for a set whose rank is not constant."""


def torus_range(grid: Grid) -> tuple[int, int]:
    half = int(round(grid.length / 2))
    return -half, half - 1


def _base_blocks(grid: Grid, values: np.ndarray) -> np.ndarray:
    """Regroup frequency samples ``(r, n)`` as ``(2T, r, q)``: base frequency, generator, 2pi-shift."""
    q = grid.samples_per_unit
    period = grid.n // q
    r = values.shape[0]
    return np.transpose(values.reshape(r, q, period), (2, 0, 1))


def _unblock(blocks: np.ndarray) -> np.ndarray:
    period, r, q = blocks.shape
    return np.transpose(blocks, (1, 2, 0)).reshape(r, q * period)


@dataclass
class DualSet:
    base: GeneratorSet
    psi_fourier: list
    psi_time: list
    cutoff: float
    verdict: FrameVerdict | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def r(self) -> int:
        return len(self.psi_time)


def torus_spectrum(gens: GeneratorSet, tolerance: float = DEFAULT_TOL):
    """Singular values of the periodized matrix at the torus base frequencies.

    Returns ``(xi_base, sigma, u, b)`` with ``A = u @ b`` per base frequency.
    """
    grid = gens.time_grid
    F = np.stack([f.values for f in gens.fourier])
    blocks = _base_blocks(grid, F)
    sigma, u, b = jacobi_rows(blocks)
    period = grid.n // grid.samples_per_unit
    first = frequency_grid(grid).points[:period]
    xi_base = reduce_frequency(first)
    return xi_base, sigma, u, b


def build_dual(gens: GeneratorSet, tolerance: float = DEFAULT_TOL, strict: bool = True,
               m: int = DEFAULT_M) -> DualSet:
    """Dual generators with ``Psi^(xi) = G(xi)^+ Phi^(xi)``.

    The pseudoinverse keeps the singular values of the periodized matrix
    above ``tolerance`` times the largest one, the same rule the rank
    profile uses.  With ``strict`` a non-constant rank raises
    ``NotAFrameError``; otherwise the dual is built anyway and the
    negative verdict is kept on the result.
    """
    if gens.time_grid is None:
        raise ValueError("generators need time samples; build them with a time grid")
    verdict = frame_verdict(gens, m, tolerance)
    if strict and not verdict.positive:
        raise NotAFrameError(f"rank is not constant for {gens.labels}: {verdict.rank_histogram}")
    grid = gens.time_grid
    xi_base, sigma, u, b = torus_spectrum(gens, tolerance)
    cutoff = tolerance * float(sigma.max())
    keep = sigma > cutoff
    inv2 = np.where(keep, 1.0 / np.where(keep, sigma, 1.0) ** 2, 0.0)
    # G^+ A = U diag(sigma^-2) U^H U B = U diag(sigma^-2) B
    psi_blocks = u @ (inv2[:, :, None] * b)
    psi_hat = _unblock(psi_blocks)
    fgrid = frequency_grid(grid)
    psi_fourier = [SampledFunction(fgrid, row, "frequency") for row in psi_hat]
    psi_time = [SampledFunction(grid, inverse_transform(row, grid), TIME) for row in psi_hat]
    zeroed = sigma[(~keep) & (sigma > 0)]
    kept = sigma[keep]
    diag = {
        "cutoff": cutoff,
        "min_kept_singular_value": float(kept.min()) if kept.size else 0.0,
        "max_discarded_singular_value": float(zeroed.max()) if zeroed.size else 0.0,
        "rank_on_torus": sorted(set(int(k) for k in keep.sum(axis=1))),
        "max_dual_spectrum": float(np.abs(psi_hat).max()),
    }
    return DualSet(gens, psi_fourier, psi_time, cutoff, verdict, diag)


def analyze(f: SampledFunction, funcs, j_min: int | None = None, j_max: int | None = None,
            periodic: bool = True) -> CoefficientArray:
    """Coefficients ``c[i, j] = <f, g_i(. - j)>`` for each function ``g_i``.

    The default range is one full period of the torus.  A periodic range
    longer than the period, or a non-periodic one pushing translates out
    of the window, is rejected.
    """
    lo, hi = torus_range(f.grid)
    j_min = lo if j_min is None else j_min
    j_max = hi if j_max is None else j_max
    if periodic and j_max - j_min + 1 > hi - lo + 1:
        raise ValueError("translate range longer than the torus period")
    if not periodic and (j_min < lo or j_max > hi):
        raise ValueError("translates leave the time window")
    rows = [translate_pairing(f, g, j_min, j_max, periodic) for g in funcs]
    return CoefficientArray(j_min, j_max, np.array(rows))


def synthesize(funcs, c: CoefficientArray, periodic: bool = True) -> SampledFunction:
    """``sum_i sum_j c[i, j] g_i(. - j)``.

    ``funcs`` is a list of time-domain functions or a ``GeneratorSet``.
    """
    if isinstance(funcs, GeneratorSet):
        funcs = funcs.time
    if len(funcs) != c.r:
        raise ValueError("coefficient rows do not match the number of functions")
    grid = funcs[0].grid
    q = grid.samples_per_unit
    n = grid.n
    if periodic:
        total = np.zeros(n, dtype=complex)
        pos = (c.indices * q) % n
        for g, row in zip(funcs, c.data):
            comb = np.zeros(n, dtype=complex)
            np.add.at(comb, pos, row)
            total += np.fft.fft(g.values) * np.fft.fft(comb)
        return SampledFunction(grid, np.fft.ifft(total), TIME)
    from .signal import semi_convolve
    out = np.zeros(n, dtype=complex)
    for g, row in zip(funcs, c.data):
        out += semi_convolve(g, row, c.j_min, periodic=False).values
    return SampledFunction(grid, out, TIME)


def biorthogonality_matrix(gens: GeneratorSet, duals: DualSet) -> np.ndarray:
    """``B[i, k] = int phi_i conj(psi_k)`` over one period."""
    dx = gens.time_grid.dx
    phi = np.stack([g.values for g in gens.time])
    psi = np.stack([g.values for g in duals.psi_time])
    return phi @ np.conj(psi.T) * dx


def relative_l2(a: SampledFunction, b: SampledFunction) -> float:
    return float(np.linalg.norm(a.values - b.values) / np.linalg.norm(b.values))


def random_coefficients(rng: np.random.Generator, r: int, support: int, mu: Weight) -> CoefficientArray:
    """Complex Gaussian coefficients damped by ``mu(j)^-1 (1+|j|)^-2`` on ``|j| <= support``."""
    j = np.arange(-support, support + 1)
    env = 1.0 / (eval_weight(mu, j) * (1.0 + np.abs(j)) ** 2)
    z = (rng.standard_normal((r, j.size)) + 1j * rng.standard_normal((r, j.size))) / np.sqrt(2)
    return CoefficientArray(-support, support, z * env)


def reconstruction_errors(gens: GeneratorSet, duals: DualSet, n_trials: int = 50, seed: int = 0,
                          support: int = 8, swapped: bool = False) -> np.ndarray:
    """Relative L2 errors of ``f -> synthesize(analyze(f))`` for random ``f`` in the span.

    The default pairs dual analysis with generator synthesis; ``swapped``
    analyzes with the generators and synthesizes with the duals.
    """
    rng = np.random.default_rng(seed)
    analyzers, synthesizers = (gens.time, duals.psi_time) if swapped else (duals.psi_time, gens.time)
    errs = []
    for _ in range(n_trials):
        f = synthesize(gens, random_coefficients(rng, gens.r, support, constant()))
        errs.append(relative_l2(synthesize(synthesizers, analyze(f, analyzers)), f))
    return np.array(errs)


@dataclass
class FrameConstants:
    p: float
    mu: Weight
    lower: float
    upper: float
    n_trials: int
    seed: int
    ratios: np.ndarray
    dual_lower: float | None = None
    dual_upper: float | None = None
    adversarial_ratio: float | None = None
    adversarial_xi: float | None = None

    @property
    def spread(self) -> float:
        """``upper / lower`` including the adversarial trial when present."""
        lo, hi = self.lower, self.upper
        if self.adversarial_ratio is not None:
            lo, hi = min(lo, self.adversarial_ratio), max(hi, self.adversarial_ratio)
        return hi / lo

    @property
    def bounded(self) -> bool:
        return 0 < self.lower <= self.upper < np.inf

    def to_dict(self) -> dict:
        return {
            "p": "inf" if np.isinf(self.p) else self.p,
            "mu": self.mu.to_string(),
            "n_trials": self.n_trials,
            "seed": self.seed,
            "lower": self.lower,
            "upper": self.upper,
            "dual_lower": self.dual_lower,
            "dual_upper": self.dual_upper,
            "adversarial_ratio": self.adversarial_ratio,
            "adversarial_xi": self.adversarial_xi,
            "spread": self.spread,
        }


def frame_ratio(gens: GeneratorSet, f: SampledFunction, p, mu: Weight, funcs=None) -> float:
    """``sum_i ||{<f, g_i(. - j)>}_j||_{l^p_mu} / ||f||_{L^p_mu}`` (``g = phi`` by default)."""
    norm_f = Lp_mu_norm(f, p, mu)
    if norm_f <= 1e-300 or norm_f < 1e-14 * np.abs(f.values).max(initial=0.0) * f.grid.dx ** (0 if np.isinf(parse_p(p)) else 1):
        raise ValueError("test function is numerically zero")
    coeffs = analyze(f, gens.time if funcs is None else funcs)
    return coeffs.norm(p, mu) / norm_f


def adversarial_coefficients(gens: GeneratorSet, tolerance: float = DEFAULT_TOL):
    """Coefficients concentrated on the weakest nonzero Gram direction of the torus.

    Picks the base frequency and left singular vector ``u`` of the
    periodized matrix with the smallest singular value still above
    rounding level and modulates ``conj(u)`` at that frequency over the
    whole period.  For ``p = 2`` the resulting frame ratio equals that
    singular value up to normalization.
    """
    xi_base, sigma, u, _ = torus_spectrum(gens, tolerance)
    floor = 1e-12 * sigma.max()
    masked = np.where(sigma > floor, sigma, np.inf)
    b, i = np.unravel_index(np.argmin(masked), masked.shape)
    xi0 = float(xi_base[b])
    lo, hi = torus_range(gens.time_grid)
    j = np.arange(lo, hi + 1)
    data = np.conj(u[b][:, i])[:, None] * np.exp(1j * xi0 * j)[None, :]
    return CoefficientArray(lo, hi, data), xi0, float(sigma[b, i] / sigma.max())


def pframe_constants(gens: GeneratorSet, p, mu: Weight, n_trials: int = 50, seed: int = 0,
                     duals: DualSet | None = None, support: int = 16, adversarial: bool = False,
                     tolerance: float = DEFAULT_TOL) -> FrameConstants:
    """Empirical bracket of the p-frame ratio over random elements of the span.

    Trial ``t`` draws coefficients from a generator seeded by ``seed``, so
    the first ``n`` trials of a longer run repeat a shorter one.  When
    ``duals`` is given the ratio of dual coefficients to ``||f||`` is
    bracketed as well.
    """
    p = parse_p(p)
    if n_trials < 10:
        raise ValueError("n_trials must be at least 10")
    rng = np.random.default_rng(seed)
    ratios, dual_ratios = [], []
    for _ in range(n_trials):
        f = synthesize(gens, random_coefficients(rng, gens.r, support, mu))
        ratios.append(frame_ratio(gens, f, p, mu))
        if duals is not None:
            dual_ratios.append(frame_ratio(gens, f, p, mu, duals.psi_time))
    ratios = np.array(ratios)
    out = FrameConstants(p, mu, float(ratios.min()), float(ratios.max()), n_trials, seed, ratios)
    if dual_ratios:
        out.dual_lower, out.dual_upper = float(min(dual_ratios)), float(max(dual_ratios))
    if adversarial:
        c, xi0, _ = adversarial_coefficients(gens, tolerance)
        out.adversarial_ratio = frame_ratio(gens, synthesize(gens, c), p, mu)
        out.adversarial_xi = xi0
    return out


def cross_p_consistency(gens: GeneratorSet, mu: Weight, n_trials: int = 50, seed: int = 0,
                        duals: DualSet | None = None) -> dict:
    """Run ``pframe_constants`` for p in {1, 2, inf}; all bounded or not."""
    blocks = {}
    for p in (1.0, 2.0, np.inf):
        fc = pframe_constants(gens, p, mu, n_trials, seed, duals)
        blocks["inf" if np.isinf(p) else str(int(p))] = fc
    return {"constants": blocks, "consistent": all(fc.bounded for fc in blocks.values())}
