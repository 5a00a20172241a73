"""Band-limited generators built from a smooth bump.

Fourier convention used throughout the package::

    F(h)(xi)      = int exp(-i xi t) h(t) dt
    F^{-1}(g)(x)  = (1/2pi) int exp(i xi x) g(xi) dxi

so an integer translate ``h(. - j)`` has transform ``exp(-i j xi) F(h)`` and
every Gram object is 2pi-periodic in ``xi``.

Generator ``k`` has transform ``theta(xi + sign*k*pi)``.  The bump ``theta``
equals 1 on ``[-pi+eps, pi-eps]``, vanishes outside ``(-pi, pi)`` and is
smooth in between.

Time-domain samples live on the torus ``[-T, T)``: they are the exact
inverse DFT of the frequency samples at spacing ``pi/T``, i.e. the exact
values of the ``2T``-periodization of the generator (Poisson summation).
The distance to the non-periodized generator is measured at build time and
stored as ``alias_error``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .signal import FREQUENCY, TIME, Grid, SampledFunction, amalgam_W_norm
from .weights import polynomial

EXP = "exp"
POLY = "poly"


class GridTooCoarse(ValueError):
    pass


@dataclass(frozen=True)
class BumpSpec:
    epsilon: float = 0.2
    normalized: bool = False
    profile: str = EXP

    def __post_init__(self):
        if not 0 < self.epsilon < 0.25:
            raise ValueError(f"epsilon must lie in (0, 1/4) (got {self.epsilon})")
        if self.profile not in (EXP, POLY):
            raise ValueError(f"profile must be 'exp' or 'poly' (got {self.profile!r})")


def _smooth_step(t, profile):
    t = np.clip(t, 0.0, 1.0)
    if profile == POLY:
        return t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        b = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return a / (a + b)


def make_bump(spec: BumpSpec) -> Callable:
    """Return the (unnormalized) bump ``theta`` as a vectorized callable."""
    eps, profile = spec.epsilon, spec.profile

    def theta(xi):
        xi = np.asarray(xi, dtype=float)
        out = _smooth_step((np.pi - np.abs(xi)) / eps, profile)
        return float(out) if out.ndim == 0 else out

    return theta


def partition_sum(spec: BumpSpec, xi):
    """``sum_k theta(xi + k*pi)``; pi-periodic and >= 1."""
    theta = make_bump(spec)
    xi = np.asarray(xi, dtype=float)
    k0 = np.round(-xi / np.pi)
    total = sum(theta(xi + (k0 + d) * np.pi) for d in (-2, -1, 0, 1, 2))
    return float(total) if np.ndim(total) == 0 else total


def generator_spectrum(k: int, spec: BumpSpec, sign: int = 1) -> Callable:
    """Fourier transform of generator ``k`` as a callable of ``xi``."""
    theta = make_bump(spec)
    shift = sign * k * np.pi

    if spec.normalized:
        def spectrum(xi):
            xi = np.asarray(xi, dtype=float) + shift
            return theta(xi) / partition_sum(spec, xi)
    else:
        def spectrum(xi):
            return theta(np.asarray(xi, dtype=float) + shift)
    return spectrum


def frequency_grid(time_grid: Grid) -> Grid:
    """DFT frequencies of the time torus, in increasing order."""
    n, dx = time_grid.n, time_grid.dx
    dxi = 2 * np.pi / (n * dx)
    return Grid(-(n // 2) * dxi, dxi, n)


def inverse_transform(values: np.ndarray, time_grid: Grid) -> np.ndarray:
    """Time samples from frequency samples on ``frequency_grid(time_grid)``.

    Computes ``(1/2pi) sum_m g(xi_m) exp(i xi_m x) dxi`` at every grid point.
    """
    fgrid = frequency_grid(time_grid)
    xi = np.fft.ifftshift(fgrid.points)
    phased = np.fft.ifftshift(values) * np.exp(1j * xi * time_grid.x0)
    return np.fft.ifft(phased) / time_grid.dx


def forward_transform(values: np.ndarray, time_grid: Grid) -> np.ndarray:
    """Inverse of ``inverse_transform``: ``sum_x h(x) exp(-i xi x) dx``."""
    fgrid = frequency_grid(time_grid)
    xi = np.fft.ifftshift(fgrid.points)
    spec = np.fft.fft(values) * time_grid.dx * np.exp(-1j * xi * time_grid.x0)
    return np.fft.fftshift(spec)


@dataclass
class GeneratorSet:
    """Generators given by their Fourier transforms, optionally sampled in time.

    ``spectra`` are vectorized callables; ``support`` bounds ``|xi|`` on
    the union of their supports.
    """

    labels: tuple
    spectra: list
    support: float
    time_grid: Grid | None = None
    bump: BumpSpec | None = None
    sign: int = 1
    fourier: list = field(default_factory=list)
    time: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    # spectra[i](xi) == base_spectrum(xi + shifts[i]) when both are set
    base_spectrum: Callable | None = None
    shifts: tuple | None = None
    # False for tabulated data whose tails are cut by the chosen J
    compact: bool = True

    @property
    def r(self) -> int:
        return len(self.spectra)

    @property
    def indices(self) -> tuple:
        return self.labels

    def fourier_values(self, xi) -> np.ndarray:
        """Array of shape ``(r,) + xi.shape``."""
        xi = np.asarray(xi, dtype=float)
        return np.stack([np.asarray(s(xi), dtype=complex) for s in self.spectra])

    def required_J(self) -> int:
        """Smallest periodization half-width covering every support.

        Tabulated non-compact sets return the configured cut instead.
        """
        if not self.compact and "J" in self.diagnostics:
            return int(self.diagnostics["J"])
        return int(np.ceil((self.support / np.pi + 1) / 2 - 1e-12))

    @classmethod
    def from_spectra(cls, spectra: Sequence[Callable], support: float, time_grid: Grid | None = None,
                     labels: Sequence | None = None) -> "GeneratorSet":
        gens = cls(tuple(labels if labels is not None else range(len(spectra))), list(spectra), float(support))
        if time_grid is not None:
            gens.sample(time_grid)
        return gens

    def sample(self, time_grid: Grid, alias_check: bool = True) -> None:
        """Fill the frequency and time samples on the torus of ``time_grid``."""
        time_grid.samples_per_unit  # raises unless 1/dx is an integer
        if self.support >= np.pi / time_grid.dx:
            raise GridTooCoarse("time step too coarse: spectra reach past the Nyquist frequency")
        fgrid = frequency_grid(time_grid)
        xi = fgrid.points
        self.time_grid = time_grid
        self.fourier = [SampledFunction(fgrid, s(xi), FREQUENCY) for s in self.spectra]
        x = time_grid.points
        if self.base_spectrum is not None:
            # one transform, then exact modulations: keeps the relation
            # g_i(x) = exp(-i shift_i x) g_0(x) free of FFT round-off
            base = inverse_transform(self.base_spectrum(xi), time_grid)
            self.time = [SampledFunction(time_grid, np.exp(-1j * nu * x) * base, TIME) for nu in self.shifts]
        else:
            self.time = [SampledFunction(time_grid, inverse_transform(F.values, time_grid), TIME)
                         for F in self.fourier]
        omega4 = polynomial(4)
        self.diagnostics = {
            "decay_constant": [float(np.max(np.abs(g.values) * (1 + np.abs(x)) ** 4)) for g in self.time],
            "amalgam_W1_poly4": [amalgam_W_norm(g, 1, omega4) for g in self.time],
        }
        if alias_check:
            self.diagnostics["alias_error"] = self._alias_error()

    def _alias_error(self) -> float:
        """Max relative gap between the 2T- and 4T-periodizations on [-T, T)."""
        grid = self.time_grid
        wide = Grid(2 * grid.x0, grid.dx, 2 * grid.n)
        wxi = frequency_grid(wide).points
        worst = 0.0
        for s, g in zip(self.spectra, self.time):
            gw = inverse_transform(s(wxi), wide)[grid.n // 2: grid.n // 2 + grid.n]
            scale = np.max(np.abs(gw)) or 1.0
            worst = max(worst, float(np.max(np.abs(gw - g.values)) / scale))
        return worst


def build_generators(indices: Sequence[int], spec: BumpSpec | None = None, time_grid: Grid | None = None,
                     sign: int = 1) -> GeneratorSet:
    """Generators with transforms ``theta(. + sign*k*pi)`` for ``k`` in ``indices``.

    Raises ``ValueError`` for non-increasing indices and ``GridTooCoarse``
    when the DFT frequency step ``pi/T`` exceeds ``epsilon/8``.  With
    ``time_grid=None`` only the Fourier side is built.
    """
    spec = spec or BumpSpec()
    indices = [int(k) for k in indices]
    if not indices:
        raise ValueError("need at least one generator index")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError(f"indices must be strictly increasing (got {indices})")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    support = (max(abs(k) for k in indices) + 1) * np.pi
    gens = GeneratorSet(tuple(indices), [generator_spectrum(k, spec, sign) for k in indices], support,
                        bump=spec, sign=sign, base_spectrum=generator_spectrum(0, spec),
                        shifts=tuple(sign * k * np.pi for k in indices))
    if time_grid is not None:
        dxi = frequency_grid(time_grid).dx
        if dxi > spec.epsilon / 8:
            raise GridTooCoarse(
                f"frequency step pi/T = {dxi:.4g} exceeds epsilon/8 = {spec.epsilon / 8:.4g}; "
                f"use a time window T >= {int(np.ceil(8 * np.pi / spec.epsilon))}")
        gens.sample(time_grid)
    return gens
