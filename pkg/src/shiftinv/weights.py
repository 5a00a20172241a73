"""Weight functions on the real line.

Three families are supported: the constant weight, polynomial weights
``(1 + |x|)**s`` and subexponential weights ``exp(alpha * |x|**beta)``.
Submultiplicativity and moderateness are analytic properties; the checks
below only test them on finite samples of point pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

CONSTANT = "const"
POLYNOMIAL = "poly"
SUBEXPONENTIAL = "subexp"


@dataclass(frozen=True)
class Weight:
    """Evaluable weight.

    ``params`` is ``()`` for the constant weight, ``(s,)`` for polynomial
    weights and ``(alpha, beta)`` for subexponential ones.
    """

    kind: str = CONSTANT
    params: tuple[float, ...] = ()
    moderate_constant: float = 1.0

    def __post_init__(self):
        if self.kind == CONSTANT:
            if self.params:
                raise ValueError("constant weight takes no parameters")
        elif self.kind == POLYNOMIAL:
            if len(self.params) != 1 or not self.params[0] >= 0:
                raise ValueError("polynomial weight needs one exponent s >= 0")
        elif self.kind == SUBEXPONENTIAL:
            if len(self.params) != 2:
                raise ValueError("subexponential weight needs (alpha, beta)")
            alpha, beta = self.params
            if not alpha > 0 or not 0 < beta < 1:
                raise ValueError("subexponential weight needs alpha > 0 and 0 < beta < 1")
        else:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if not self.moderate_constant >= 1:
            raise ValueError("moderate constant must be >= 1")

    def __call__(self, x):
        return eval_weight(self, x)

    def with_moderate_constant(self, c: float) -> "Weight":
        return replace(self, moderate_constant=max(1.0, float(c)))

    @property
    def is_constant(self) -> bool:
        return self.kind == CONSTANT or (self.kind == POLYNOMIAL and self.params[0] == 0)

    def to_string(self) -> str:
        if self.kind == CONSTANT:
            return CONSTANT
        return ":".join([self.kind] + [repr(float(p)) for p in self.params])

    def __str__(self):
        return self.to_string()


def constant() -> Weight:
    return Weight(CONSTANT)


def polynomial(s: float) -> Weight:
    return Weight(POLYNOMIAL, (float(s),))


def subexponential(alpha: float, beta: float) -> Weight:
    return Weight(SUBEXPONENTIAL, (float(alpha), float(beta)))


def parse_weight(text: str) -> Weight:
    """Parse ``"const"``, ``"poly:s"`` or ``"subexp:alpha:beta"``."""
    parts = text.strip().split(":")
    try:
        values = tuple(float(p) for p in parts[1:])
    except ValueError:
        raise ValueError(f"malformed weight spec {text!r}") from None
    kind = parts[0].lower()
    if kind in ("const", "constant"):
        return Weight(CONSTANT, values)
    if kind in ("poly", "polynomial"):
        return Weight(POLYNOMIAL, values)
    if kind in ("subexp", "subexponential"):
        return Weight(SUBEXPONENTIAL, values)
    raise ValueError(f"unknown weight kind in {text!r}")


def eval_weight(w: Weight, x):
    """Evaluate ``w`` at a scalar or array ``x``.

    Returns a float for scalar input and an ndarray otherwise.
    """
    a = np.abs(np.asarray(x, dtype=float))
    if w.kind == POLYNOMIAL:
        out = (1.0 + a) ** w.params[0]
    elif w.kind == SUBEXPONENTIAL:
        alpha, beta = w.params
        out = np.exp(alpha * a**beta)
    else:
        out = np.ones_like(a)
    if out.ndim == 0:
        return float(out)
    return out


def _pairs(sample_points: Iterable) -> np.ndarray:
    pts = np.asarray(list(sample_points) if not isinstance(sample_points, np.ndarray) else sample_points,
                     dtype=float)
    if pts.size == 0:
        raise ValueError("sample_points must be nonempty")
    return pts.reshape(-1, 2)


def check_submultiplicative(w: Weight, sample_points, slack: float = 1e-12) -> bool:
    """True iff ``w(x+y) <= (1+slack) w(x) w(y)`` on every sampled pair."""
    pts = _pairs(sample_points)
    x, y = pts[:, 0], pts[:, 1]
    lhs = eval_weight(w, x + y)
    rhs = (1.0 + slack) * eval_weight(w, x) * eval_weight(w, y)
    return bool(np.all(lhs <= rhs))


def check_moderate(mu: Weight, omega: Weight, sample_points) -> float:
    """Smallest empirical C with ``mu(x+y) <= C omega(x) mu(y)`` on the sample."""
    pts = _pairs(sample_points)
    x, y = pts[:, 0], pts[:, 1]
    ratio = eval_weight(mu, x + y) / (eval_weight(omega, x) * eval_weight(mu, y))
    return float(np.max(ratio))


def cell_factor(w: Weight) -> float:
    """``max_{0<=y<=1} w(y)``; the price of moving a weight inside a unit cell."""
    return float(eval_weight(w, 1.0))
