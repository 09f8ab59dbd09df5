"""Exact state-vector simulation and Monte Carlo sampling of concentration runs.

``run_exact`` iterates the gate on the dense two-qubit vector and is the
independent oracle for every closed form in :mod:`entconc.planner`.
``run_multipartite`` does the same for n-party states of the form
``c1|11...1> + c0|00...0>`` using their closed two-amplitude representation,
which the success branch preserves because the gate only touches one party
and the probe. ``run_monte_carlo`` samples probe outcomes per step with the
exact branch probabilities.

Random numbers come from numpy's PCG64 via ``numpy.random.default_rng(seed)``;
identical seeds reproduce runs bit for bit on any platform. Trial outcomes
are drawn row by row (one row of step uniforms per trial), so chunked and
single-shot evaluation consume the identical stream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gate import GateParams, apply_postselect, build_gate
from .planner import StepMode, _canonical_theta0, make_plan
from .states import schmidt_amplitudes

_TRIAL_CHUNK_VALUES = 10_000_000  # cap on uniforms held in memory at once


@dataclass(frozen=True, eq=False)
class ExactRun:
    """Trajectory of one all-successes run of the dense simulation."""

    final_state: np.ndarray  # conditional two-qubit state after the last step
    branch_probs: np.ndarray  # per-step success-branch probability
    thetas: np.ndarray  # canonical angle before/after each step


@dataclass(frozen=True)
class MultipartiteState:
    """n-party state ``c1|11...1> + c0|00...0>`` in its two-amplitude form."""

    parties: int
    c1: complex
    c0: complex

    def __post_init__(self) -> None:
        if self.parties < 2:
            raise ValueError(f"need at least 2 parties, got {self.parties}")
        total = abs(self.c0) ** 2 + abs(self.c1) ** 2
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"amplitudes are not normalized: |c0|^2 + |c1|^2 = {total}")


@dataclass(frozen=True, eq=False)
class MultipartiteRun:
    final: MultipartiteState
    branch_probs: np.ndarray
    thetas: np.ndarray


@dataclass(frozen=True)
class RunRecord:
    """Summary of a seeded Monte Carlo run."""

    seed: int
    trials: int
    successes: int
    empirical_prob: float
    mean_steps_on_success: float


def run_exact(theta0: float, params: GateParams, steps: int) -> ExactRun:
    """Iterate the gate ``steps`` times, always following the success branch.

    The canonical angle is read back from the amplitudes at every step (they
    stay real nonnegative in canonical form), so the returned trajectory is
    measured, not assumed.
    """
    theta0 = _canonical_theta0(theta0)
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    gate = build_gate(params.xi, params.eta)
    state = schmidt_amplitudes(theta0)
    probs = np.empty(steps)
    thetas = np.empty(steps + 1)
    thetas[0] = theta0
    for i in range(steps):
        success, _failure = apply_postselect(gate, state)
        state = success.state
        probs[i] = success.probability
        thetas[i + 1] = math.atan2(state[0].real, state[3].real)
    return ExactRun(state, probs, thetas)


def run_multipartite(
    parties: int, theta0: float, params: GateParams, steps: int
) -> MultipartiteRun:
    """Concentrate an n-party state through its two-amplitude representation.

    The gate acts on party 1 and the probe only, so the success branch maps
    ``(c1, c0) -> (delta * c1, c0)`` up to normalization regardless of the
    party count; trajectories and probabilities coincide with the bipartite
    case.
    """
    if parties < 2:
        raise ValueError(f"need at least 2 parties, got {parties}")
    theta0 = _canonical_theta0(theta0)
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    delta = params.delta
    c1 = math.cos(theta0)
    c0 = math.sin(theta0)
    probs = np.empty(steps)
    thetas = np.empty(steps + 1)
    thetas[0] = theta0
    for i in range(steps):
        kept = delta * c1
        prob = kept * kept + c0 * c0
        scale = math.sqrt(prob)
        c1 = kept / scale
        c0 = c0 / scale
        probs[i] = prob
        thetas[i + 1] = math.atan2(c0, c1)
    return MultipartiteRun(MultipartiteState(parties, complex(c1), complex(c0)), probs, thetas)


def run_monte_carlo(
    theta0: float,
    params: GateParams,
    mode: StepMode = StepMode.NEAREST,
    trials: int = 100_000,
    seed: int = 0,
) -> RunRecord:
    """Sample probe outcomes for every step of every trial.

    A trial succeeds iff all planned steps come out on the success branch, so
    the success count is Binomial(trials, Gamma). Deterministic given the
    seed.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    plan = make_plan(theta0, params, mode)
    gammas = plan.step_probs
    rng = np.random.default_rng(seed)

    successes = 0
    if plan.steps == 0:
        successes = trials
    else:
        chunk_rows = max(1, _TRIAL_CHUNK_VALUES // plan.steps)
        remaining = trials
        while remaining > 0:
            rows = min(remaining, chunk_rows)
            draws = rng.random((rows, plan.steps))
            successes += int((draws < gammas).all(axis=1).sum())
            remaining -= rows

    mean_steps = float(plan.steps) if successes > 0 else 0.0
    return RunRecord(
        seed=seed,
        trials=trials,
        successes=successes,
        empirical_prob=successes / trials,
        mean_steps_on_success=mean_steps,
    )


def run_record_row(record: RunRecord, gamma_analytic: float) -> dict[str, object]:
    """Flatten a Monte Carlo record to the delimited-output row."""
    return {
        "seed": record.seed,
        "trials": record.trials,
        "successes": record.successes,
        "empirical_prob": record.empirical_prob,
        "gamma_analytic": gamma_analytic,
    }
