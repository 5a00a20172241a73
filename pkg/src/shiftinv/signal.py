"""Gridded functions, coefficient families and their weighted norms.

All integrals are left-endpoint Riemann sums on a uniform grid.  Time grids
used with integer translates carry an integer number of samples per unit,
so translation by ``j`` is an exact shift by ``j * samples_per_unit``.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .weights import Weight, eval_weight

TIME = "time"
FREQUENCY = "frequency"
_DOMAIN_CODES = {TIME: 0, FREQUENCY: 1}
_HEADER = struct.Struct("<ddqq")


def parse_p(p) -> float:
    """Accept 1 <= p <= inf given as a number or as ``"inf"``."""
    if isinstance(p, str):
        p = np.inf if p.strip().lower() in ("inf", "infinity", "oo") else float(p)
    p = float(p)
    if not p >= 1:
        raise ValueError(f"p must satisfy p >= 1 (got {p})")
    return p


@dataclass(frozen=True)
class Grid:
    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if not self.dx > 0:
            raise ValueError("grid step must be positive")
        if self.n <= 0:
            raise ValueError("grid needs at least one sample")

    @classmethod
    def window(cls, half_width: int, dx) -> "Grid":
        """Grid covering ``[-half_width, half_width)`` with step ``dx``.

        ``dx`` may be a float, a Fraction or a string such as ``"1/256"``.
        """
        step = Fraction(dx) if not isinstance(dx, float) else Fraction(dx).limit_denominator(1 << 20)
        if step.numerator != 1:
            raise ValueError(f"dx must be 1/q for an integer q (got {step})")
        if int(half_width) != half_width or half_width <= 0:
            raise ValueError("time window half-width must be a positive integer")
        q = step.denominator
        return cls(-float(half_width), 1.0 / q, int(2 * half_width * q))

    @property
    def points(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def samples_per_unit(self) -> int:
        q = 1.0 / self.dx
        qi = int(round(q))
        if qi < 1 or abs(q - qi) > 1e-9 * qi:
            raise ValueError(f"1/dx = {q} is not an integer")
        return qi

    def first_integer_index(self) -> int:
        """Index of the first grid point that sits on an integer."""
        q = self.samples_per_unit
        i0 = int(np.ceil(self.x0 - 1e-9)) - self.x0
        i0 = int(round(i0 * q))
        if abs(self.x0 + i0 * self.dx - round(self.x0 + i0 * self.dx)) > 1e-9:
            raise ValueError("grid points never hit the integer lattice")
        return i0


@dataclass
class SampledFunction:
    grid: Grid
    values: np.ndarray
    domain: str = TIME

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {self.values.shape}")
        if self.domain not in _DOMAIN_CODES:
            raise ValueError(f"unknown domain tag {self.domain!r}")

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def __mul__(self, scalar):
        return SampledFunction(self.grid, self.values * scalar, self.domain)

    __rmul__ = __mul__

    def __add__(self, other: "SampledFunction"):
        if other.grid != self.grid:
            raise ValueError("grids differ")
        return SampledFunction(self.grid, self.values + other.values, self.domain)

    def __sub__(self, other: "SampledFunction"):
        return self + (-1.0) * other

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "re", "im"])
            for x, v in zip(self.x, self.values):
                w.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])

    @classmethod
    def from_csv(cls, path, domain: str = TIME) -> "SampledFunction":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        x = data[:, 0]
        if len(x) < 2:
            raise ValueError("need at least two samples to recover the grid")
        dx = (x[-1] - x[0]) / (len(x) - 1)
        grid = Grid(float(x[0]), float(dx), len(x))
        return cls(grid, data[:, 1] + 1j * data[:, 2], domain)

    def to_bytes(self) -> bytes:
        head = _HEADER.pack(self.grid.x0, self.grid.dx, self.grid.n, _DOMAIN_CODES[self.domain])
        body = np.empty(2 * self.grid.n, dtype="<f8")
        body[0::2] = self.values.real
        body[1::2] = self.values.imag
        return head + body.tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "SampledFunction":
        x0, dx, n, code = _HEADER.unpack_from(blob)
        body = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size, count=2 * n)
        domain = {v: k for k, v in _DOMAIN_CODES.items()}[code]
        return cls(Grid(x0, dx, n), body[0::2] + 1j * body[1::2], domain)


@dataclass
class CoefficientArray:
    """``r`` coefficient rows over translate indices ``j_min..j_max``."""

    j_min: int
    j_max: int
    data: np.ndarray = field(default=None)

    def __post_init__(self):
        self.data = np.atleast_2d(np.asarray(self.data, dtype=complex))
        if self.j_max < self.j_min:
            raise ValueError("empty translate range")
        if self.data.shape[1] != self.j_max - self.j_min + 1:
            raise ValueError("data width does not match the translate range")

    @classmethod
    def zeros(cls, r: int, j_min: int, j_max: int) -> "CoefficientArray":
        return cls(j_min, j_max, np.zeros((r, j_max - j_min + 1), dtype=complex))

    @classmethod
    def delta(cls, r: int, i: int, j: int, j_min: int, j_max: int) -> "CoefficientArray":
        c = cls.zeros(r, j_min, j_max)
        c.data[i, j - j_min] = 1.0
        return c

    @property
    def r(self) -> int:
        return self.data.shape[0]

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.j_min, self.j_max + 1)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i, j - self.j_min]

    def row_norm(self, i: int, p, mu: Weight) -> float:
        return lp_mu_norm(self.data[i], p, mu, self.indices)

    def norm(self, p, mu: Weight) -> float:
        """Sum of the row norms."""
        return float(sum(self.row_norm(i, p, mu) for i in range(self.r)))


# --- norms -----------------------------------------------------------------

def _pnorm(a: np.ndarray, p: float, measure: float = 1.0) -> float:
    a = np.abs(a)
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    scale = a.max() if a.size else 0.0
    if scale == 0:
        return 0.0
    # scaled to stay finite for large p
    return float(scale * (np.sum((a / scale) ** p) * measure) ** (1.0 / p))


def lp_mu_norm(c, p, mu: Weight, indices: Sequence[int] | None = None) -> float:
    """Weighted sequence norm ``||c mu||_p`` of a finitely supported row."""
    p = parse_p(p)
    c = np.asarray(c)
    j = np.arange(len(c)) if indices is None else np.asarray(indices)
    return _pnorm(c * eval_weight(mu, j), p)


def Lp_mu_norm(f: SampledFunction, p, mu: Weight) -> float:
    """Riemann-sum approximation of ``||f mu||_{L^p}``."""
    p = parse_p(p)
    if f.domain != TIME:
        raise ValueError("weighted L^p norms are taken in the time domain")
    return _pnorm(f.values * eval_weight(mu, f.x), p, f.grid.dx)


def _cells(f: SampledFunction):
    grid = f.grid
    q = grid.samples_per_unit
    i0 = grid.first_integer_index()
    ncell = (grid.n - i0) // q
    if ncell < 1:
        raise ValueError("grid does not cover a complete unit cell")
    block = f.values[i0:i0 + ncell * q].reshape(ncell, q)
    left = int(round(grid.x0 + i0 * grid.dx))
    return block, np.arange(left, left + ncell)


def amalgam_W_norm(f: SampledFunction, p, omega: Weight) -> float:
    """Wiener amalgam norm: l^p over unit cells of ``sup_cell |f| * omega(cell)``.

    The sup is the max over the samples inside the cell, so the result
    underestimates the continuous norm by at most ``dx * sup|f'|`` per cell.
    """
    p = parse_p(p)
    if f.domain != TIME:
        raise ValueError("amalgam norms are taken in the time domain")
    block, k = _cells(f)
    return _pnorm(np.abs(block).max(axis=1) * eval_weight(omega, k), p)


def amalgam_L_norm(f: SampledFunction, p, omega: Weight) -> float:
    """``( int_0^1 (sum_k |f(x+k)| omega(x+k))^p dx )^(1/p)`` on the grid."""
    p = parse_p(p)
    block, k = _cells(f)
    offsets = np.arange(block.shape[1]) * f.grid.dx
    w = eval_weight(omega, k[:, None] + offsets[None, :])
    return _pnorm((np.abs(block) * w).sum(axis=0), p, f.grid.dx)


# --- translates --------------------------------------------------------------

def shift(values: np.ndarray, s: int, periodic: bool) -> np.ndarray:
    """``out[i] = values[i - s]``; zero-filled unless periodic."""
    if periodic:
        return np.roll(values, s)
    out = np.zeros_like(values)
    n = len(values)
    if s >= n or s <= -n:
        return out
    if s >= 0:
        out[s:] = values[:n - s]
    else:
        out[:n + s] = values[-s:]
    return out


def semi_convolve(f: SampledFunction, c, j_min: int = 0, periodic: bool = False) -> SampledFunction:
    """``sum_j c_j f(x - j)`` on the grid of ``f``.

    ``c`` is a 1-d array indexed from ``j_min``.  Translates leaving the
    window are cut off, or wrapped around when ``periodic`` is set.
    """
    if f.domain != TIME:
        raise ValueError("semi-convolution acts on time-domain functions")
    q = f.grid.samples_per_unit
    c = np.asarray(c, dtype=complex)
    out = np.zeros(f.grid.n, dtype=complex)
    for offset in np.flatnonzero(c):
        out += c[offset] * shift(f.values, (j_min + int(offset)) * q, periodic)
    return SampledFunction(f.grid, out, TIME)


def translate_pairing(f: SampledFunction, g: SampledFunction, j_min: int, j_max: int,
                      periodic: bool = False) -> np.ndarray:
    """``{ int f(x) conj(g(x - j)) dx }_{j_min <= j <= j_max}``."""
    if f.grid != g.grid:
        raise ValueError("f and g must share a grid")
    q = f.grid.samples_per_unit
    js = np.arange(j_min, j_max + 1)
    if periodic:
        n = f.grid.n
        corr = np.fft.ifft(np.fft.fft(f.values) * np.conj(np.fft.fft(g.values)))
        return corr[(js * q) % n] * f.grid.dx
    return np.array([np.vdot(shift(g.values, j * q, False), f.values) for j in js]) * f.grid.dx


def convolve(f: SampledFunction, g: SampledFunction) -> SampledFunction:
    """Riemann-sum convolution ``int f(y) g(x - y) dy`` on the grid of ``f``.

    Both inputs must share a step; the result is cut to the grid of ``f``.
    """
    if abs(f.grid.dx - g.grid.dx) > 1e-15:
        raise ValueError("convolution needs a common step")
    full = np.convolve(f.values, g.values) * f.grid.dx
    # full[m] sits at x = f.x0 + g.x0 + m*dx
    start = int(round((f.grid.x0 - (f.grid.x0 + g.grid.x0)) / f.grid.dx))
    out = np.zeros(f.grid.n, dtype=complex)
    lo, hi = max(start, 0), min(start + f.grid.n, len(full))
    if hi > lo:
        out[lo - start:hi - start] = full[lo:hi]
    return SampledFunction(f.grid, out, TIME)


def convolve_sequences(c, c_min: int, d, d_min: int):
    """Discrete convolution; returns ``(values, first_index)``."""
    return np.convolve(np.asarray(c, dtype=complex), np.asarray(d, dtype=complex)), c_min + d_min
