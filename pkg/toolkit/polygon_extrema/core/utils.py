"""Utility helpers shared by the toolkit modules."""

from __future__ import annotations

import math
import os
from typing import Callable, List

import numpy as np


def ensure_dir(path: str) -> None:
    os.makedirs(path, exist_ok=True)


def make_document_name(kind: str, n: int, tag: str | None = None) -> str:
    if tag:
        return f"{kind}-n{n}-{tag}.json"
    return f"{kind}-n{n}.json"


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def has_odd_factor(n: int) -> bool:
    """True when n has an odd divisor greater than one."""

    return n > 0 and not is_power_of_two(n)


def odd_divisors(n: int, minimum: int = 3) -> List[int]:
    return [k for k in range(minimum, n + 1) if k % 2 == 1 and n % k == 0]


def random_convex_polygon(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random convex n-gon (counterclockwise) by Valtr's construction.

    Returns an (n, 2) array centred on its vertex mean.
    """

    if n < 3:
        raise ValueError("a polygon needs at least 3 vertices")

    def _chain(values: np.ndarray) -> np.ndarray:
        lo, hi = values[0], values[-1]
        steps: List[float] = []
        last_a = last_b = lo
        for value in values[1:-1]:
            if rng.random() < 0.5:
                steps.append(value - last_a)
                last_a = value
            else:
                steps.append(last_b - value)
                last_b = value
        steps.append(hi - last_a)
        steps.append(last_b - hi)
        return np.asarray(steps)

    xs = np.sort(rng.random(n))
    ys = np.sort(rng.random(n))
    dx = _chain(xs)
    dy = _chain(ys)
    rng.shuffle(dy)
    steps = np.column_stack([dx, dy])
    steps = steps[np.argsort(np.arctan2(steps[:, 1], steps[:, 0]))]
    points = np.cumsum(steps, axis=0)
    return points - points.mean(axis=0)


def random_cyclic_polygon(
    rng: np.random.Generator, n: int, radius: float = 0.5
) -> np.ndarray:
    """n points on a circle of the given radius at sorted random angles.

    The diameter never exceeds 2 * radius; consecutive angular gaps are kept
    above a quarter of the regular gap so no edge collapses.
    """

    min_gap = 0.25 * 2.0 * math.pi / n
    while True:
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
        gaps = np.diff(np.concatenate([angles, angles[:1] + 2.0 * math.pi]))
        if gaps.min() > min_gap:
            break
    return radius * np.column_stack([np.cos(angles), np.sin(angles)])


def central_gradient(
    func: Callable[[np.ndarray], float], x: np.ndarray, rel_step: float = 1e-6
) -> np.ndarray:
    """Central finite-difference gradient with a relative step."""

    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        forward = x.copy()
        backward = x.copy()
        forward[i] += h
        backward[i] -= h
        grad[i] = (func(forward) - func(backward)) / (2.0 * h)
    return grad


def central_jacobian(
    func: Callable[[np.ndarray], np.ndarray], x: np.ndarray, rel_step: float = 1e-6
) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    columns = []
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        forward = x.copy()
        backward = x.copy()
        forward[i] += h
        backward[i] -= h
        columns.append((np.asarray(func(forward)) - np.asarray(func(backward))) / (2.0 * h))
    return np.column_stack(columns) if columns else np.zeros((0, 0))
