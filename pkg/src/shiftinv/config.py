"""Run configuration: JSON file plus command-line overrides, validated up front."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

import numpy as np

from .generators import EXP, POLY, BumpSpec
from .signal import Grid, parse_p
from .weights import Weight, parse_weight

DEFAULT_T = 128


class ConfigError(ValueError):
    pass


def parse_indices(text) -> tuple:
    if isinstance(text, str):
        parts = [t for t in text.replace(" ", "").split(",") if t]
        try:
            ks = tuple(int(t) for t in parts)
        except ValueError as exc:
            raise ConfigError(f"indices must be comma-separated integers (got {text!r})") from exc
    else:
        ks = tuple(int(k) for k in text)
    if not ks:
        raise ConfigError("indices: need at least one generator index")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ConfigError(f"indices must be strictly increasing (got {list(ks)})")
    return ks


def parse_dx(text) -> Fraction:
    try:
        dx = Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"dx must be a rational like 1/256 (got {text!r})") from exc
    if dx <= 0 or dx.numerator != 1:
        raise ConfigError(f"dx must be 1/q for a positive integer q (got {text})")
    return dx


def parse_p_list(text) -> tuple:
    items = text.split(",") if isinstance(text, str) else list(text)
    out = []
    for item in items:
        try:
            out.append(parse_p(str(item).strip()))
        except ValueError as exc:
            raise ConfigError(f"p_list: {exc}") from exc
    if not out:
        raise ConfigError("p_list is empty")
    return tuple(out)


def p_label(p: float) -> str:
    return "inf" if np.isinf(p) else format(p, "g")


@dataclass
class RunConfig:
    indices: tuple = (0, 1, 2)
    epsilon: float = 0.2
    profile: str = EXP
    normalized: bool = False
    dx: str = "1/256"
    T: int = DEFAULT_T
    m: int = 1024
    tolerance: float = 1e-8
    p_list: tuple = (1.0, 2.0, float("inf"))
    mu_spec: str = "const"
    n_trials: int = 50
    seed: int = 0
    output_dir: str = "out"
    sign: int = 1
    force_dual: bool = False
    figures: bool = True

    def validate(self) -> "RunConfig":
        """Normalize field types and check every precondition; raises ``ConfigError``."""
        self.indices = parse_indices(self.indices)
        try:
            self.spec
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        self.dx = str(parse_dx(self.dx))
        if int(self.T) != self.T or self.T < 1:
            raise ConfigError(f"T must be a positive integer (got {self.T})")
        self.T = int(self.T)
        if self.m < 64:
            raise ConfigError(f"m must be at least 64 (got {self.m})")
        if not 0 < self.tolerance < 1:
            raise ConfigError(f"tolerance must lie in (0, 1) (got {self.tolerance})")
        self.p_list = parse_p_list(self.p_list)
        if any(p < 1 for p in self.p_list):
            raise ConfigError("every p must be >= 1")
        try:
            self.mu
        except ValueError as exc:
            raise ConfigError(f"mu_spec: {exc}") from exc
        if self.n_trials < 10:
            raise ConfigError(f"n_trials must be at least 10 (got {self.n_trials})")
        if self.sign not in (1, -1):
            raise ConfigError("sign must be 1 or -1")
        if self.profile not in (EXP, POLY):
            raise ConfigError(f"profile must be exp or poly (got {self.profile!r})")
        dxi = np.pi / self.T
        if dxi > self.epsilon / 8:
            raise ConfigError(f"grid too coarse: pi/T = {dxi:.4g} > epsilon/8 = {self.epsilon / 8:.4g}; "
                              f"need T >= {int(np.ceil(8 * np.pi / self.epsilon))}")
        q = parse_dx(self.dx).denominator
        if (max(abs(k) for k in self.indices) + 1) * np.pi >= np.pi * q:
            raise ConfigError("dx too coarse for the highest index (Nyquist)")
        return self

    @property
    def spec(self) -> BumpSpec:
        return BumpSpec(self.epsilon, self.normalized, self.profile)

    @property
    def mu(self) -> Weight:
        return parse_weight(self.mu_spec)

    @property
    def grid(self) -> Grid:
        return Grid.window(self.T, self.dx)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["indices"] = list(self.indices)
        d["p_list"] = [p_label(p) for p in self.p_list]
        d.pop("output_dir")
        d.pop("figures")
        return d


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Read a JSON config (optional), apply non-``None`` overrides and validate."""
    data = {}
    if path is not None:
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
    return RunConfig(**data).validate()
