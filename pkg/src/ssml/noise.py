"""Label-corruption channels acting on the one-bit measurement record."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_KINDS = ("none", "bsc", "fn")


@dataclass(frozen=True)
class NoiseModel:
    """Corruption channel for the recorded success/failure label.

    kind "none": labels recorded faithfully.
    kind "bsc":  recorded label flipped with probability q, both directions.
    kind "fn":   a true success recorded as failure with probability q;
                 failures always recorded faithfully.

    For "bsc", q = 0.5 is the degenerate boundary where the record carries no
    information about the outcome; larger q is rejected.
    """

    kind: str = "none"
    q: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "none":
            if self.q != 0.0:
                raise ValueError("noiseless model must have q = 0")
        elif self.kind == "bsc":
            if not 0.0 <= self.q <= 0.5:
                raise ValueError(f"bsc flip probability must lie in [0, 0.5], got {self.q!r}")
        else:
            if not 0.0 <= self.q < 1.0:
                raise ValueError(f"fn flip probability must lie in [0, 1), got {self.q!r}")

    @classmethod
    def none(cls) -> "NoiseModel":
        return cls("none", 0.0)

    @classmethod
    def bsc(cls, q: float) -> "NoiseModel":
        return cls("bsc", float(q))

    @classmethod
    def false_negative(cls, q: float) -> "NoiseModel":
        return cls("fn", float(q))

    @classmethod
    def parse(cls, text: str) -> "NoiseModel":
        """Parse 'none', 'bsc:Q' or 'fn:Q'."""
        text = text.strip().lower()
        if text == "none":
            return cls.none()
        head, sep, tail = text.partition(":")
        if not sep or head not in ("bsc", "fn"):
            raise ValueError(f"unrecognized noise spec {text!r}; expected none, bsc:Q or fn:Q")
        try:
            q = float(tail)
        except ValueError:
            raise ValueError(f"bad noise probability {tail!r} in {text!r}") from None
        return cls(head, q)

    @property
    def is_none(self) -> bool:
        return self.kind == "none"

    def describe(self) -> str:
        if self.kind == "none":
            return "none"
        return f"{self.kind}:{self.q:.17g}"


def corrupt_label(true_success: bool, noise: NoiseModel,
                  rng: np.random.Generator) -> bool:
    """Pass the true outcome label through the corruption channel.

    Draw pattern (determinism relevant): "none" consumes no randomness,
    "bsc" consumes one uniform per call, "fn" one uniform only on a true
    success.
    """
    if noise.kind == "none":
        return true_success
    if noise.kind == "bsc":
        flip = rng.random() < noise.q
        return true_success != flip
    # fn: failures are recorded faithfully
    if not true_success:
        return False
    return rng.random() >= noise.q


def effective_success(f: float, noise: NoiseModel) -> float:
    """Recorded-success probability for true success probability f.

    bsc: q + (1 - 2q) f, fn: (1 - q) f, none: f. Under either noisy channel
    the result is capped at 1 - q.
    """
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"success probability must lie in [0, 1], got {f!r}")
    if noise.kind == "none":
        return f
    if noise.kind == "bsc":
        return noise.q + (1.0 - 2.0 * noise.q) * f
    return (1.0 - noise.q) * f
