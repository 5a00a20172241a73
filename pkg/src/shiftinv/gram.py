"""Periodized Gram matrices, rank profiles and frame verdicts.

For generators ``Phi`` the periodized matrix at ``xi`` has entries
``phi_i^(xi + 2 j pi)`` for ``|j| <= J`` and the Gram matrix is its product
with its own conjugate transpose.  The translates form a frame for their
closed span exactly when the rank of that matrix does not depend on ``xi``;
equivalently the nonzero Gram eigenvalues stay inside ``[1/C, C]``.

Ranks are counted against a single reference: the largest singular value
seen over the whole frequency grid.  A per-point reference would report
full rank wherever all entries are merely tiny.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .generators import BumpSpec, GeneratorSet, build_generators
from .linalg import jacobi_eigh, jacobi_rows

DEFAULT_M = 1024
DEFAULT_TOL = 1e-8
BISECT_RESOLUTION = 1e-6


def xi_grid(m: int) -> np.ndarray:
    """``m`` equispaced points covering ``[-pi, pi)``."""
    return -np.pi + 2 * np.pi * np.arange(m) / m


def reduce_frequency(xi):
    """Representative of ``xi`` modulo 2pi in ``[-pi, pi)``."""
    xi = np.asarray(xi, dtype=float)
    out = xi - 2 * np.pi * np.floor((xi + np.pi) / (2 * np.pi))
    return float(out) if out.ndim == 0 else out


def _check_fundamental(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < -np.pi) or np.any(xi >= np.pi):
        raise ValueError("xi must lie in [-pi, pi); reduce it with reduce_frequency first")


def periodized_matrices(gens: GeneratorSet, xi, J: int | None = None) -> np.ndarray:
    """Stack of periodized matrices, shape ``(len(xi), r, 2J+1)``.

    Column ``j + J`` holds ``Phi^(xi + 2 j pi)``.
    """
    need = gens.required_J()
    J = need if J is None else int(J)
    if J < 0 or (J < need and gens.compact):
        raise ValueError(f"J = {J} does not cover the generator supports (need J >= {need})")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    shifts = 2 * np.pi * np.arange(-J, J + 1)
    vals = gens.fourier_values(xi[:, None] + shifts[None, :])  # (r, m, 2J+1)
    return np.transpose(vals, (1, 0, 2))


def periodized_matrix(gens: GeneratorSet, xi: float, J: int | None = None) -> np.ndarray:
    """``r x (2J+1)`` matrix ``[phi_i^(xi + 2 j pi)]``."""
    return periodized_matrices(gens, [xi], J)[0]


def _hermitian(a):
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def gram_matrix(gens: GeneratorSet, xi: float, J: int | None = None) -> np.ndarray:
    """``[Phi^, Phi^](xi)`` for ``xi`` in ``[-pi, pi)``."""
    _check_fundamental(xi)
    a = periodized_matrix(gens, xi, J)
    return _hermitian(a @ np.conj(a.T))


@dataclass
class GramGrid:
    xi: np.ndarray
    matrices: np.ndarray
    J: int

    def eigenvalues(self) -> np.ndarray:
        w, _ = jacobi_eigh(self.matrices)
        return w


def gram_grid(gens: GeneratorSet, m: int = DEFAULT_M, J: int | None = None) -> GramGrid:
    xi = xi_grid(m)
    a = periodized_matrices(gens, xi, J)
    return GramGrid(xi, _hermitian(a @ np.conj(np.swapaxes(a, 1, 2))), a.shape[2] // 2)


@dataclass
class RankProfile:
    xi: np.ndarray
    rank_at: np.ndarray
    singular_values: np.ndarray  # (m, r), descending
    tolerance: float
    reference: float
    transitions: list = field(default_factory=list)

    @property
    def histogram(self) -> dict:
        return {int(k): int(v) for k, v in sorted(Counter(self.rank_at.tolist()).items())}

    @property
    def constant(self) -> bool:
        return len(self.histogram) == 1

    def rank_near(self, xi: float) -> int:
        """Rank at the grid point closest to ``xi`` (mod 2pi)."""
        d = np.abs(reduce_frequency(self.xi - xi))
        return int(self.rank_at[np.argmin(d)])


def _sigma(gens, xi, J):
    sigma, _, _ = jacobi_rows(periodized_matrices(gens, xi, J))
    return -np.sort(-sigma, axis=1)


def rank_profile(gens: GeneratorSet, m: int = DEFAULT_M, tolerance: float = DEFAULT_TOL,
                 J: int | None = None, refine: bool = True) -> RankProfile:
    """Rank of the periodized matrix on an ``m``-point grid of ``[-pi, pi)``.

    Singular values come from Jacobi diagonalization of ``A A^H`` carried
    out on the rows of ``A``.  Where neighbouring grid points disagree,
    the jump is located by bisection to ``BISECT_RESOLUTION``.
    """
    if m < 64:
        raise ValueError("rank profiles need m >= 64 grid points")
    if not 0 < tolerance < 1:
        raise ValueError("tolerance must lie in (0, 1)")
    xi = xi_grid(m)
    sv = _sigma(gens, xi, J)
    ref = float(sv.max())
    if ref == 0:
        raise ValueError("all generator transforms vanish on the grid")
    ranks = np.sum(sv > tolerance * ref, axis=1)
    prof = RankProfile(xi, ranks, sv, tolerance, ref)
    if refine:
        prof.transitions = _locate_transitions(gens, prof, J)
    return prof


def _rank_at(gens, x, J, tolerance, ref):
    return int(np.sum(_sigma(gens, [reduce_frequency(x)], J)[0] > tolerance * ref))


def _locate_transitions(gens, prof, J):
    out = []
    m = len(prof.xi)
    step = 2 * np.pi / m
    for i in range(m):
        a_rank, b_rank = prof.rank_at[i], prof.rank_at[(i + 1) % m]
        if a_rank == b_rank:
            continue
        lo, hi = prof.xi[i], prof.xi[i] + step
        while hi - lo > BISECT_RESOLUTION:
            mid = 0.5 * (lo + hi)
            if _rank_at(gens, mid, J, prof.tolerance, prof.reference) == a_rank:
                lo = mid
            else:
                hi = mid
        out.append({"xi": float(reduce_frequency(0.5 * (lo + hi))), "from": int(a_rank), "to": int(b_rank)})
    return out


@dataclass
class FrameVerdict:
    labels: tuple
    constant_rank: bool
    rank_value: object  # int when constant, (min, max) otherwise
    C_estimate: float
    min_nonzero_eig: float
    max_eig: float
    m: int
    tolerance: float
    rank_histogram: dict
    transitions: list = field(default_factory=list)
    epsilon: float | None = None
    gap_case: str | None = None

    @property
    def positive(self) -> bool:
        return self.constant_rank and np.isfinite(self.C_estimate)

    def to_dict(self) -> dict:
        return {
            "indices": list(self.labels),
            "epsilon": self.epsilon,
            "m": self.m,
            "tolerance": self.tolerance,
            "rank_histogram": {str(k): v for k, v in self.rank_histogram.items()},
            "constant_rank": self.constant_rank,
            "rank_value": self.rank_value if isinstance(self.rank_value, int) else list(self.rank_value),
            "C_estimate": self.C_estimate,
            "min_nonzero_eig": self.min_nonzero_eig,
            "max_eig": self.max_eig,
            "verdict": "frame" if self.positive else "not a frame",
            "rank_transitions": self.transitions,
            "gap_case": self.gap_case,
        }


def verdict_from_profile(gens: GeneratorSet, prof: RankProfile) -> FrameVerdict:
    eig = prof.singular_values ** 2
    kept = prof.singular_values > prof.tolerance * prof.reference
    min_nz = float(eig[kept].min()) if kept.any() else 0.0
    max_eig = float(eig.max())
    constant = prof.constant
    if constant:
        rank_value = int(prof.rank_at[0])
        C = max(max_eig, 1.0 / min_nz) if min_nz > 0 else float("inf")
    else:
        rank_value = (int(prof.rank_at.min()), int(prof.rank_at.max()))
        C = float("inf")
    return FrameVerdict(
        labels=tuple(gens.labels), constant_rank=constant, rank_value=rank_value, C_estimate=C,
        min_nonzero_eig=min_nz, max_eig=max_eig, m=len(prof.xi), tolerance=prof.tolerance,
        rank_histogram=prof.histogram, transitions=prof.transitions,
        epsilon=gens.bump.epsilon if gens.bump else None,
        gap_case=gap_condition(gens.labels) if gens.bump else None,
    )


def frame_verdict(gens: GeneratorSet, m: int = DEFAULT_M, tolerance: float = DEFAULT_TOL,
                  J: int | None = None) -> FrameVerdict:
    """Rank constancy plus the spectral constant ``C``.

    For Hermitian PSD ``G`` the two-sided bound ``G/C <= G G^H <= C G``
    holds iff every nonzero eigenvalue of ``G`` lies in ``[1/C, C]``, so
    ``C_estimate = max(max_eig, 1/min_nonzero_eig)`` over the grid; it is
    infinite whenever the rank moves.
    """
    return verdict_from_profile(gens, rank_profile(gens, m, tolerance, J))


def gap_condition(indices) -> str | None:
    """Which index pattern ``indices`` follows.

    ``"successive"``: one run of consecutive integers of odd length.
    ``"separated"``: all gaps exceed 1.  ``"completed"``: every adjacent
    pair ``k, k+1`` is followed by ``k+2, ..., k+2n`` for some ``n >= 1``
    with ``2n <= r``.  ``None`` otherwise.
    """
    ks = sorted(int(k) for k in indices)
    present = set(ks)
    r = len(ks)
    gaps = [b - a for a, b in zip(ks, ks[1:])]
    if r > 1 and r % 2 == 1 and all(g == 1 for g in gaps):
        return "successive"
    if all(g > 1 for g in gaps):
        return "separated"
    for a, g in zip(ks, gaps):
        if g != 1:
            continue
        if not any(all(a + t in present for t in range(2, 2 * n + 1)) for n in range(1, r // 2 + 1)):
            return None
    return "completed"


def nonsuccessive_verdict(indices, spec: BumpSpec | None = None, m: int = DEFAULT_M,
                          tolerance: float = DEFAULT_TOL, sign: int = 1) -> FrameVerdict:
    """Frame verdict for an arbitrary increasing index set of bump generators."""
    return frame_verdict(build_generators(indices, spec or BumpSpec(), sign=sign), m, tolerance)


def tail_mass(gens: GeneratorSet, J: int, m: int = DEFAULT_M, extra: int = 8) -> float:
    """Relative Gram mass beyond ``|j| > J`` (zero for compact supports inside the window)."""
    xi = xi_grid(m)
    wide = periodized_matrices(gens, xi, max(J + extra, gens.required_J()))
    Jw = wide.shape[2] // 2
    total = np.sum(np.abs(wide) ** 2)
    inner = np.sum(np.abs(wide[:, :, Jw - J:Jw + J + 1]) ** 2)
    return float((total - inner) / total) if total else 0.0
