"""Adadelta updates and the per-column l2 weight constraint."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from afeng.errors import ShapeMismatch


@dataclass
class AdadeltaState:
    """Running averages of squared gradients and squared updates."""

    rho: float = 0.95
    epsilon: float = 1e-6
    e_g2: dict = field(default_factory=dict)
    e_dx2: dict = field(default_factory=dict)

    @classmethod
    def for_params(cls, params: dict, rho: float = 0.95, epsilon: float = 1e-6) -> "AdadeltaState":
        return cls(
            rho=rho,
            epsilon=epsilon,
            e_g2={k: np.zeros_like(v) for k, v in params.items()},
            e_dx2={k: np.zeros_like(v) for k, v in params.items()},
        )


def adadelta_step(params: dict, grads: dict, state: AdadeltaState) -> None:
    """One in-place update of every parameter present in grads."""
    rho, eps = state.rho, state.epsilon
    for name, g in grads.items():
        p = params[name]
        if p.shape != g.shape:
            raise ShapeMismatch(f"{name}: gradient shape {g.shape} != {p.shape}")
        eg2 = state.e_g2[name]
        edx2 = state.e_dx2[name]
        eg2 *= rho
        eg2 += (1.0 - rho) * g * g
        delta = -(np.sqrt(edx2 + eps) / np.sqrt(eg2 + eps)) * g
        edx2 *= rho
        edx2 += (1.0 - rho) * delta * delta
        p += delta


def clip_l2(weight: np.ndarray, max_norm: float = 3.0) -> np.ndarray:
    """Rescale output-unit columns whose l2 norm exceeds max_norm, in place.

    Columns at or below the threshold are untouched, so a zero column
    stays zero.
    """
    if max_norm <= 0:
        raise ValueError("max_norm must be positive")
    norms = np.sqrt((weight * weight).sum(axis=0))
    over = norms > max_norm
    if over.any():
        weight[:, over] *= max_norm / norms[over]
    return weight
