"""Distance and convergence diagnostics for rate-vector estimates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bayes import UpdateTrace
from .channel import PauliChannel


@dataclass(frozen=True)
class ConvergencePoint:
    n: int
    tvd: float
    rule: str


def tvd(a, b) -> float:
    """Total variation distance between two probability vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(0.5 * np.abs(a - b).sum())


def convergence_curve(
    trace: UpdateTrace, phys: PauliChannel, stride: int = 1
) -> list[ConvergencePoint]:
    """TVD between recorded posterior means and the physical rates.

    The first point is the prior's distance; later points are taken at
    the recorded steps, thinned to roughly every `stride` shots.
    """
    if not trace.steps:
        raise ValueError("trace is empty")
    if stride < 1:
        raise ValueError("stride must be at least 1")
    points = []
    next_at = 0
    last = len(trace.steps) - 1
    for pos, (step, means) in enumerate(zip(trace.steps, trace.means_at)):
        if step >= next_at or pos == last:
            points.append(ConvergencePoint(step, tvd(means, phys.rates), trace.rule))
            next_at = step + stride
    return points
