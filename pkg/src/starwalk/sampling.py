"""Seeded randomness and exact rejection samplers.

All randomness flows from integer seeds.  Chain ``i`` of a run owns the
counter-based generator Philox(key=(seed, i)), so chains are independent and
reproducible regardless of scheduling.  Rejection sampling draws from a
body-specific covering region (a box, ball or cylinder) and is exact; it backs
calibration and diagnostics independently of the ball walk.
"""

from __future__ import annotations

import numpy as np

from .bodies import StarBody

__all__ = ["chain_generator", "ball_offsets", "rejection_sample", "RejectionError"]

_MASK64 = (1 << 64) - 1


class RejectionError(RuntimeError):
    """Raised when the attempt budget is exhausted (for kernel sampling this
    usually signals a missing or false kernel witness)."""


def chain_generator(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator for chain `index` of run `seed`."""
    key = ((int(seed) & _MASK64) << 64) | (int(index) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def ball_offsets(rng: np.random.Generator, steps: int, n: int, delta: float) -> np.ndarray:
    """Pre-draw `steps` uniform-in-ball proposal offsets of radius delta.

    Directions come from one bulk normal draw, radii from one bulk uniform
    draw (radius ~ delta * U^(1/n)); the fixed draw order is what keeps the
    compiled and numpy walkers on identical chains.
    """
    dirs = rng.standard_normal((steps, n))
    norms = np.maximum(np.linalg.norm(dirs, axis=1), 1e-300)
    radii = delta * rng.random(steps) ** (1.0 / n)
    return dirs * (radii / norms)[:, None]


def rejection_sample(
    body: StarBody,
    count: int,
    seed: int | np.random.Generator,
    *,
    kernel: bool = False,
    batch: int = 8192,
    max_proposals: int | None = None,
    return_attempts: bool = False,
):
    """Exact uniform samples of the body (or its kernel) by rejection."""
    rng = seed if isinstance(seed, np.random.Generator) else chain_generator(seed)
    member = body.kernel_contains_many if kernel else body.contains_many
    if max_proposals is None:
        max_proposals = max(4_000_000, 4000 * count)
    out = []
    got = 0
    used = 0
    while got < count:
        if used >= max_proposals:
            what = "kernel" if kernel else "body"
            raise RejectionError(
                f"rejection sampling of the {what} got {got}/{count} points in "
                f"{used} proposals; covering region too loose or witness wrong"
            )
        m = min(batch, max_proposals - used)
        P = body.proposal_sample(rng, m)
        used += m
        hits = P[member(P)]
        if hits.shape[0]:
            out.append(hits)
            got += hits.shape[0]
    pts = np.concatenate(out)[:count]
    if return_attempts:
        return pts, used
    return pts
