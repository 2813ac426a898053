"""Near-linear matching cost model and the match-count regression."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CostModelParams:
    p_exact: float        # frame extends the most recent topic
    p_previous: float     # frame extends a prior topic
    p_new_topic: float    # frame starts a new topic
    topic_ratio: float    # topics per frame

    def __post_init__(self):
        total = self.p_exact + self.p_previous + self.p_new_topic
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"event probabilities must sum to 1, got {total}")
        if min(self.p_exact, self.p_previous, self.p_new_topic, self.topic_ratio) < 0:
            raise ValueError("cost model parameters must be non-negative")


# Empirical averages over the original 17-video corpus.
DEFAULT_PARAMS = CostModelParams(
    p_exact=0.89, p_previous=0.036, p_new_topic=0.074, topic_ratio=0.074
)


def coefficients(p: CostModelParams) -> tuple[float, float]:
    """(a, b) such that expected match count ~ a*f + (b/2)*f^2 for large f."""
    a = p.p_exact
    b = p.topic_ratio * (p.p_previous / 2.0 + p.p_new_topic)
    return a, b


def predicted_cost(f: int, p: CostModelParams) -> float:
    """Expected total pair-match count for clustering f frames.

    Sum over k = 1..f of p_exact + p_previous*O(k)/2 + p_new_topic*O(k) with
    O(k) = k * topic_ratio.
    """
    if f < 0:
        raise ValueError("frame count must be >= 0")
    k = np.arange(1, f + 1, dtype=np.float64)
    o = k * p.topic_ratio
    return float(np.sum(p.p_exact + p.p_previous * o / 2.0 + p.p_new_topic * o))


def predicted_cost_closed_form(f: int, p: CostModelParams) -> float:
    """Closed form of predicted_cost: a*f + b*f^2*(1 + 1/f)/2 (0 at f = 0)."""
    if f == 0:
        return 0.0
    a, b = coefficients(p)
    return a * f + b * f * f * (1.0 + 1.0 / f) / 2.0


@dataclass(frozen=True)
class QuadraticFit:
    a: float
    b: float
    residual: float


def fit_quadratic(points: list[tuple[float, float]]) -> QuadraticFit:
    """Least-squares fit of M = a*f + b*f^2 (no constant term)."""
    if len(points) < 3:
        raise ValueError("degenerate regression input")
    f = np.asarray([p[0] for p in points], dtype=np.float64)
    m = np.asarray([p[1] for p in points], dtype=np.float64)
    if np.unique(f).size < 2:
        raise ValueError("degenerate regression input")
    design = np.column_stack([f, f * f])
    coef, _, rank, _ = np.linalg.lstsq(design, m, rcond=None)
    if rank < 2:
        raise ValueError("degenerate regression input")
    residual = float(np.linalg.norm(design @ coef - m))
    return QuadraticFit(a=float(coef[0]), b=float(coef[1]), residual=residual)
