"""Closed-loop learning engine for a single trial.

One step = one state copy: apply the control unitary, measure in the
computational basis, corrupt the label, then either extend the success
streak (control frozen) or reset it and apply a failure-triggered random
rotation. A trial halts once the streak reaches the configured threshold,
or is censored at the shot cap.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericIntegrityError
from .noise import NoiseModel, corrupt_label
from .qstate import (
    StateVector,
    UnitaryMatrix,
    basis_state,
    check_state,
    check_unitary,
    embed_su2_rotation,
    fidelity,
    haar_random_state,
    haar_random_unitary,
)

# Outcome probabilities must sum to 1 within this before renormalization.
PROB_SUM_ATOL = 1e-10


@dataclass(frozen=True)
class SsmlConfig:
    """Full parameterization of one learning trial.

    multi_failure selects labeled-failure updates: the observed failure
    outcome k picks the update subspace span{e_0, e_k}. With it off, k is
    drawn uniformly; for dim = 2 the two modes coincide.
    """

    dim: int
    halt_threshold: int
    alpha: float = 0.3
    beta: float = 0.5
    noise: NoiseModel = NoiseModel("none", 0.0)
    max_shots: int = 1_000_000
    seed: int = 0
    multi_failure: bool = False

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"learning runs need dim >= 2, got {self.dim}")
        if self.halt_threshold < 1:
            raise ValueError(f"halt_threshold must be >= 1, got {self.halt_threshold}")
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be > 0, got {self.alpha!r}")
        if not self.beta > 0.0:
            raise ValueError(f"beta must be > 0, got {self.beta!r}")
        if self.max_shots < self.halt_threshold:
            raise ValueError(
                f"max_shots = {self.max_shots} cannot be below halt_threshold = {self.halt_threshold}")
        if self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed}")
        if not isinstance(self.noise, NoiseModel):
            raise TypeError(f"noise must be a NoiseModel, got {type(self.noise).__name__}")


@dataclass
class LearnerState:
    """Mutable per-trial state: current control, success streak, shots used."""

    unitary: UnitaryMatrix
    streak: int = 0
    shots: int = 0
    # Cached cumulative outcome probabilities of unitary @ psi; invalidated
    # whenever the control changes.
    _cum: list | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one trial.

    shots is the stopping time when halted, otherwise the censoring cap.
    run_lengths lists completed (failure-terminated) success runs, including
    zero-length ones. hitting_times maps each requested infidelity level to
    the first shot index whose control meets it, or None if never reached.
    """

    halted: bool
    shots: int
    infidelity: float
    run_lengths: tuple[int, ...] = ()
    hitting_times: dict[float, int | None] = field(default_factory=dict)


def step_size(alpha: float, beta: float, streak: int) -> float:
    """Failure step size alpha * (streak + 1) ** -beta, streak pre-reset."""
    return alpha * (streak + 1) ** -beta


def outcome_probabilities(u: UnitaryMatrix, psi: StateVector) -> np.ndarray:
    """Born probabilities |<j|U psi>|**2, validated and renormalized."""
    amps = np.asarray(u) @ np.asarray(psi)
    probs = amps.real ** 2 + amps.imag ** 2
    total = float(probs.sum())
    if abs(total - 1.0) > PROB_SUM_ATOL:
        raise NumericIntegrityError(
            f"outcome probabilities sum to {total!r}, off by more than {PROB_SUM_ATOL}")
    return probs / total


def _draw_outcome(cum: list, rng: np.random.Generator) -> int:
    u = rng.random()
    j = bisect.bisect_right(cum, u)
    last = len(cum) - 1
    return j if j < last else last


def born_measure(u: UnitaryMatrix, psi: StateVector,
                 rng: np.random.Generator) -> int:
    """Sample an outcome index in 0..d-1; outcome 0 is the success event."""
    probs = outcome_probabilities(u, psi)
    return _draw_outcome(list(np.cumsum(probs)), rng)


def ssml_step(state: LearnerState, psi: StateVector, cfg: SsmlConfig,
              rng: np.random.Generator, *, freeze: bool = False) -> LearnerState:
    """Consume one copy and update the learner in place.

    Recorded success: streak increments, control untouched. Recorded
    failure: streak resets and, unless freeze is set (test hook), the
    control is left-multiplied by a random subspace rotation whose angle
    uses the pre-reset streak.
    """
    if state.streak >= cfg.halt_threshold:
        raise ValueError("step on an already halted trial")
    cum = state._cum
    if cum is None:
        cum = list(np.cumsum(outcome_probabilities(state.unitary, psi)))
        state._cum = cum
    j = _draw_outcome(cum, rng)
    recorded = corrupt_label(j == 0, cfg.noise, rng)
    state.shots += 1
    if recorded:
        state.streak += 1
        return state
    prev_streak = state.streak
    state.streak = 0
    if not freeze:
        omega = step_size(cfg.alpha, cfg.beta, prev_streak)
        if cfg.multi_failure and j > 0:
            k = j
        else:
            # Binary mode, or a fabricated failure with no physical outcome
            # label: pick the update subspace uniformly.
            k = int(rng.integers(1, cfg.dim))
        state.unitary = embed_su2_rotation(cfg.dim, k, omega, rng) @ state.unitary
        state._cum = None
    return state


def run_trial(cfg: SsmlConfig,
              psi: StateVector | None = None,
              eps_levels: tuple[float, ...] = (),
              rng: np.random.Generator | None = None,
              *,
              initial_unitary: UnitaryMatrix | None = None,
              freeze_control: bool = False) -> TrialResult:
    """Run one closed-loop trial to halting or censoring.

    psi = None draws a fresh Haar state; initial_unitary = None draws a Haar
    control (draw order: state first, then control). eps_levels requests
    hitting-time diagnostics: the first shot index whose control infidelity
    is at or below each level.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if psi is None:
        psi = haar_random_state(cfg.dim, rng)
    else:
        psi = check_state(psi)
        if psi.shape[0] != cfg.dim:
            raise ValueError(f"state dimension {psi.shape[0]} != config dim {cfg.dim}")
    if initial_unitary is None:
        u0 = haar_random_unitary(cfg.dim, rng)
    else:
        u0 = check_unitary(initial_unitary)
        if u0.shape[0] != cfg.dim:
            raise ValueError(f"unitary dimension {u0.shape[0]} != config dim {cfg.dim}")

    state = LearnerState(unitary=u0)
    target = basis_state(cfg.dim, 0)
    hitting: dict[float, int | None] = {float(lvl): None for lvl in eps_levels}

    def note_hits(shot_index: int) -> None:
        eps_now = 1.0 - fidelity(state.unitary, psi, target)
        for lvl, hit in hitting.items():
            if hit is None and eps_now <= lvl:
                hitting[lvl] = shot_index

    if hitting:
        note_hits(1)

    run_lengths: list[int] = []
    while state.streak < cfg.halt_threshold and state.shots < cfg.max_shots:
        prev_streak = state.streak
        prev_unitary = state.unitary
        ssml_step(state, psi, cfg, rng, freeze=freeze_control)
        if state.streak == 0:
            run_lengths.append(prev_streak)
            if hitting and state.unitary is not prev_unitary:
                note_hits(state.shots + 1)

    halted = state.streak >= cfg.halt_threshold
    eps_final = 1.0 - fidelity(state.unitary, psi, target)
    return TrialResult(
        halted=halted,
        shots=state.shots,
        infidelity=eps_final,
        run_lengths=tuple(run_lengths),
        hitting_times=hitting,
    )


def bestcase_certification_trial(halt_threshold: int, p: float,
                                 max_shots: int,
                                 rng: np.random.Generator) -> TrialResult:
    """Halting time of a pure Bernoulli(p) record, no quantum state.

    Models perfect control with only label randomness left, the benchmark
    the noise-collapse experiment simulates. Sampled by run renewal: between
    failures the recorded success count is geometric, so each iteration
    draws one whole run. Exact in distribution and O(number of failures)
    per trial.
    """
    if halt_threshold < 1:
        raise ValueError(f"halt_threshold must be >= 1, got {halt_threshold}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"success probability must lie in (0, 1], got {p!r}")
    if max_shots < 1:
        raise ValueError(f"max_shots must be >= 1, got {max_shots}")

    shots = 0
    runs: list[int] = []
    halted = False
    while True:
        remaining = max_shots - shots
        if p == 1.0:
            g = halt_threshold
        else:
            g = int(rng.geometric(1.0 - p)) - 1  # successes before next failure
        if g >= halt_threshold:
            if halt_threshold <= remaining:
                shots += halt_threshold
                halted = True
            else:
                shots = max_shots
            break
        if g + 1 > remaining:
            # Cap reached inside this run (all remaining shots succeed or the
            # closing failure would land past the cap).
            shots = max_shots
            break
        shots += g + 1
        runs.append(g)
    return TrialResult(
        halted=halted,
        shots=shots,
        infidelity=0.0,
        run_lengths=tuple(runs),
        hitting_times={},
    )
