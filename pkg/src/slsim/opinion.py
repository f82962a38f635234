"""Binomial subjective-logic opinions and the operators the simulator needs.

An opinion is a point ``(b, d, u)`` on the 2-simplex plus a base rate ``a``.
All operators here are pure functions over immutable :class:`Opinion` values.
Discounting, consensus and decay keep the base rate of the opinion being
updated; base rates never travel between agents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SIMPLEX_TOL = 1e-9
BETA_EPS = 1e-12
# Rounding noise of a few ulps is left alone so repeated decay stays exact.
_ULP_SLACK = 8 * 2.220446049250313e-16


def _check_unit(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class Opinion:
    """Belief, disbelief and uncertainty masses with a base rate.

    Masses must sum to one. A deviation of at most ``SIMPLEX_TOL`` is
    renormalized away on construction; anything larger raises ``ValueError``.
    """

    b: float
    d: float
    u: float
    a: float = 0.5

    def __post_init__(self) -> None:
        # Snap float noise just outside [0, 1] back onto the boundary.
        masses = []
        for name in ("b", "d", "u"):
            v = float(getattr(self, name))
            if -SIMPLEX_TOL <= v < 0.0:
                v = 0.0
            elif 1.0 < v <= 1.0 + SIMPLEX_TOL:
                v = 1.0
            _check_unit(name, v)
            masses.append(v)
        _check_unit("a", float(self.a))
        total = sum(masses)
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"b + d + u must equal 1, got {total!r}")
        if abs(total - 1.0) > _ULP_SLACK:
            masses = [m / total for m in masses]
        object.__setattr__(self, "b", masses[0])
        object.__setattr__(self, "d", masses[1])
        object.__setattr__(self, "u", masses[2])
        object.__setattr__(self, "a", float(self.a))

    @classmethod
    def vacuous(cls, a: float = 0.5) -> Opinion:
        return cls(0.0, 0.0, 1.0, a)

    def with_base_rate(self, a: float) -> Opinion:
        return Opinion(self.b, self.d, self.u, a)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.b, self.d, self.u)


@dataclass(frozen=True)
class EvidenceCounts:
    """Positive count ``r``, negative count ``s`` and uncertain mass ``W``."""

    r: int
    s: int
    W: float

    def __post_init__(self) -> None:
        if self.r < 0 or self.s < 0 or self.W < 0:
            raise ValueError(f"evidence counts must be non-negative, got {self}")


def expectation(op: Opinion) -> tuple[float, float]:
    """Projected probabilities ``(E_b, E_d)``; uncertainty is split by the base rate."""
    return op.b + op.a * op.u, op.d + (1.0 - op.a) * op.u


def from_evidence(ev: EvidenceCounts, a: float = 0.5) -> Opinion:
    """Map evidence counts onto an opinion with base rate ``a``.

    Raises
    ------
    ValueError
        If ``r + s + W`` is zero.
    """
    total = ev.r + ev.s + ev.W
    if total <= 0:
        raise ValueError("cannot form an opinion from zero evidence")
    return Opinion(ev.r / total, ev.s / total, ev.W / total, a)


def adjust_base_rate(a: float, tc: float) -> float:
    """Scale a prior belief by topic competence.

    ``tc = 0.5`` leaves ``a`` untouched, higher competence shrinks it and lower
    competence inflates it. The result is clamped into [0, 1] because the raw
    multiplier reaches 1.5 at ``tc = 0``.
    """
    _check_unit("a", a)
    _check_unit("tc", tc)
    return min(1.0, max(0.0, (1.0 - (tc - 0.5)) * a))


def similarity(w_i: Opinion, w_j: Opinion) -> float:
    """Cosine similarity of the ``(b, d)`` vectors; 0 if either vector is zero."""
    norm_i = math.hypot(w_i.b, w_i.d)
    norm_j = math.hypot(w_j.b, w_j.d)
    if norm_i == 0.0 or norm_j == 0.0:
        return 0.0
    # Normalize first so tiny masses cannot underflow the product of norms.
    cos = (w_i.b / norm_i) * (w_j.b / norm_j) + (w_i.d / norm_i) * (w_j.d / norm_j)
    return min(1.0, max(0.0, cos))


def discount(w_j: Opinion, s_ij: float) -> Opinion:
    """Scale ``w_j`` by the weight ``s_ij``; lost mass moves to uncertainty."""
    _check_unit("s_ij", s_ij)
    b = s_ij * w_j.b
    d = s_ij * w_j.d
    return Opinion(b, d, 1.0 - s_ij * (1.0 - w_j.u), w_j.a)


def consensus(w_i: Opinion, w_disc: Opinion) -> Opinion | None:
    """Fuse ``w_disc`` into ``w_i`` with the consensus operator.

    Returns ``None`` when both opinions are (numerically) dogmatic, i.e. when
    ``beta = u_i + u_disc - u_i * u_disc`` does not exceed ``BETA_EPS``; the
    caller is expected to keep ``w_i`` as it is. The result keeps ``w_i.a``.
    """
    beta = w_i.u + w_disc.u - w_i.u * w_disc.u
    if beta <= BETA_EPS:
        return None
    b = (w_i.b * w_disc.u + w_disc.b * w_i.u) / beta
    d = (w_i.d * w_disc.u + w_disc.d * w_i.u) / beta
    return Opinion(b, d, 1.0 - b - d, w_i.a)


def decay(op: Opinion, gamma: float) -> Opinion:
    """Move a fraction ``gamma`` of belief and disbelief mass into uncertainty."""
    _check_unit("gamma", gamma)
    keep = 1.0 - gamma
    return Opinion(keep * op.b, keep * op.d, op.u + gamma * (1.0 - op.u), op.a)
