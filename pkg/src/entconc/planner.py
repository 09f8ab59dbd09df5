"""Closed-form planning of iterated concentration runs.

Everything a run will do is known analytically from the initial canonical
angle theta0 and the gate parameters: each success maps
``tan(theta) -> step * tan(theta)``, so the angle trajectory, the per-step
success probabilities, the total success probability and the fidelity of the
final state against the maximally entangled target all have closed forms.
The simulator module recomputes the same quantities by brute-force state
evolution and serves as the independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .gate import GateParams
from .states import SchmidtState

_QUARTER_PI = math.pi / 4
_THETA0_SLACK = 1e-9  # accept decimal-rounded inputs marginally above pi/4
_LANDING_SNAP = 1e-9  # snap the step-count ratio to integers before flooring


class StepMode(str, Enum):
    """How to choose the number of gate applications.

    CAPPED never overshoots pi/4: T = floor(-ln tan(theta0) / ln step).
    NEAREST allows one overshoot when it lands closer to pi/4, with ties
    going to the smaller count. NEAREST gives the optimal final fidelity
    and is the default.
    """

    CAPPED = "capped"
    NEAREST = "nearest"


@dataclass(frozen=True, eq=False)
class ConcentrationPlan:
    """Full analytic prediction for one concentration run."""

    theta0: float
    params: GateParams
    mode: StepMode
    steps: int  # T, the number of gate applications
    thetas: np.ndarray  # angle trajectory theta_0 .. theta_T
    step_probs: np.ndarray  # per-step success probabilities gamma_1 .. gamma_T
    total_prob: float  # Gamma, probability that all T steps succeed
    fidelity: float  # squared overlap of the final state with the Bell target
    final_state: SchmidtState = field(repr=False)


def _canonical_theta0(theta0: float) -> float:
    if not theta0 > 0.0:
        raise ValueError(f"theta0 must lie in (0, pi/4], got {theta0}")
    if theta0 > _QUARTER_PI:
        if theta0 - _QUARTER_PI > _THETA0_SLACK:
            raise ValueError(
                f"theta0 must lie in (0, pi/4], got {theta0}; "
                "canonicalize the state with schmidt_decompose first"
            )
        return _QUARTER_PI
    return theta0


def next_theta(theta: float, params: GateParams) -> float:
    """Canonical angle after one successful gate application."""
    if not 0.0 < theta < math.pi / 2:
        raise ValueError(f"theta must lie strictly inside (0, pi/2), got {theta}")
    return math.atan(params.step * math.tan(theta))


def theta_after(theta0: float, params: GateParams, steps: int) -> float:
    """Canonical angle after ``steps`` successful applications."""
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    return math.atan(math.tan(theta0) * params.step**steps)


def step_count(theta0: float, params: GateParams, mode: StepMode = StepMode.NEAREST) -> int:
    """Number of gate applications for the requested mode."""
    theta0 = _canonical_theta0(theta0)
    mode = StepMode(mode)
    raw = -math.log(math.tan(theta0)) / math.log(params.step)
    nearest_int = round(raw)
    # Exact landings (tan(theta0) an integer power of 1/step) must not lose a
    # step to rounding noise in the logarithms.
    if abs(raw - nearest_int) <= _LANDING_SNAP:
        capped = int(nearest_int)
    else:
        capped = math.floor(raw)
    capped = max(capped, 0)
    if mode is StepMode.CAPPED:
        return capped
    below = theta_after(theta0, params, capped)
    above = theta_after(theta0, params, capped + 1)
    if abs(below - _QUARTER_PI) <= abs(above - _QUARTER_PI):
        return capped
    return capped + 1


def fidelity(theta0: float, params: GateParams, steps: int) -> float:
    """Squared overlap of the final state with (|11> + |00>)/sqrt(2).

    With t = tan(theta0) * step^T this is (1 + t)^2 / (2 (1 + t^2)); it
    reaches 1 exactly when t = 1.
    """
    theta0 = _canonical_theta0(theta0)
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    t = math.tan(theta0) * params.step**steps
    # Invariant under t -> 1/t; folding keeps huge step counts finite.
    u = 1.0 / t if t > 1.0 else t
    return 0.5 * (1.0 + u) ** 2 / (1.0 + u * u)


def f_min(delta_step: float) -> float:
    """Worst-case fidelity over all inputs for a given concentration step.

    Equals (1 + sqrt(step))^2 / (2 (1 + step)); 1 at step = 1 and strictly
    decreasing in the step, approaching 1/2 for very coarse steps.
    """
    if delta_step < 1.0:
        raise ValueError(f"concentration step must be >= 1, got {delta_step}")
    return 0.5 * (1.0 + math.sqrt(delta_step)) ** 2 / (1.0 + delta_step)


def normalization_coefficient(theta0: float, params: GateParams, steps: int) -> float:
    """Normalizing coefficient of the closed-form final state after ``steps`` successes."""
    theta0 = _canonical_theta0(theta0)
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    ratio = (1.0 + math.tan(params.xi) ** 2) / (1.0 + math.tan(params.eta) ** 2)
    inner = (
        math.cos(theta0) ** 2 + params.step ** (2 * steps) * math.sin(theta0) ** 2
    ) * ratio**steps
    return inner**-0.5


def make_plan(
    theta0: float, params: GateParams, mode: StepMode = StepMode.NEAREST
) -> ConcentrationPlan:
    """Plan a full run: step count, trajectory, probabilities, fidelity, final state."""
    theta0 = _canonical_theta0(theta0)
    mode = StepMode(mode)
    steps = step_count(theta0, params, mode)

    tan0 = math.tan(theta0)
    growth = params.step ** np.arange(steps + 1)
    thetas = np.arctan(tan0 * growth)
    thetas[0] = theta0
    sin_sq = np.sin(thetas) ** 2
    step_probs = sin_sq[:-1] / sin_sq[1:]
    total_prob = float(sin_sq[0] / sin_sq[-1])

    # The closed-form final state must come out exactly normalized; anything
    # else indicates an implementation bug, not a data problem.
    coeff = normalization_coefficient(theta0, params, steps)
    amp11 = math.cos(theta0) * (math.cos(params.eta) / math.cos(params.xi)) ** steps
    amp00 = math.sin(theta0) * (math.sin(params.eta) / math.sin(params.xi)) ** steps
    residual = abs(coeff * math.hypot(amp11, amp00) - 1.0)
    if residual > 1e-12:
        raise ArithmeticError(f"final-state normalization drifted: |A*norm - 1| = {residual:.3e}")

    identity = np.eye(2, dtype=complex)
    final_theta = float(thetas[-1])
    if final_theta <= _QUARTER_PI:
        final_state = SchmidtState(final_theta, identity, identity)
    else:
        # Overshoot past pi/4 (NEAREST mode): canonical angle is the mirror
        # image, reached by flipping both local bases.
        flip = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        final_state = SchmidtState(math.pi / 2 - final_theta, flip, flip)

    thetas.setflags(write=False)
    step_probs.setflags(write=False)
    return ConcentrationPlan(
        theta0=theta0,
        params=params,
        mode=mode,
        steps=steps,
        thetas=thetas,
        step_probs=step_probs,
        total_prob=total_prob,
        fidelity=fidelity(theta0, params, steps),
        final_state=final_state,
    )


def plan_record(plan: ConcentrationPlan) -> dict[str, object]:
    """Flatten a plan to the record used by the delimited command-line output."""
    return {
        "theta0": plan.theta0,
        "xi": plan.params.xi,
        "eta": plan.params.eta,
        "delta": plan.params.delta,
        "step": plan.params.step,
        "mode": plan.mode.value,
        "T": plan.steps,
        "Gamma": plan.total_prob,
        "F": plan.fidelity,
        "theta_final": float(plan.thetas[-1]),
    }
