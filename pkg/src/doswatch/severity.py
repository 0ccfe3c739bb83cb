"""Attack-severity score from attack-tweet counts, window volume and audience."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["SeverityInput", "severity_level"]


@dataclass(frozen=True)
class SeverityInput:
    """Inputs to the severity blend.

    ``beta`` weights the share-of-window-volume term against the
    share-of-audience term. ``n_user`` (the service's follower count) is
    operator-supplied; the score stays in [0, 1] whenever it is at least
    ``n_attack``, which holds for any realistically sized audience.
    """

    n_attack: int
    n_all: int
    n_user: int
    beta: float = 0.5

    def __post_init__(self):
        if self.n_attack < 0:
            raise ValueError("n_attack must be non-negative")
        if self.n_all <= 0:
            raise ValueError("n_all must be positive")
        if self.n_user <= 0:
            raise ValueError("n_user must be positive")
        if self.n_attack > self.n_all:
            raise ValueError("n_attack cannot exceed n_all")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must be in [0, 1]")


def severity_level(inp: SeverityInput) -> float:
    """beta * n_attack/n_all + (1-beta) * n_attack/n_user."""
    volume_share = inp.n_attack / inp.n_all
    audience_share = inp.n_attack / inp.n_user
    return inp.beta * volume_share + (1.0 - inp.beta) * audience_share
