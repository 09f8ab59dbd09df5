"""The concentration gate: a controlled probe rotation with postselection.

The gate ``G(xi, eta)`` acts on one party (Alice) and an ancilla probe
prepared in |P0>. On the A = |0> subspace it does nothing; on A = |1> it
rotates the probe by

    U = [[delta, -sqrt(1 - delta^2)],
         [sqrt(1 - delta^2), delta]],        delta = tan(xi) / tan(eta).

Measuring the probe in {|P0>, |P1>} filters the state: the |P0> outcome
multiplies tan(theta) of a canonical input by step = 1/delta and succeeds
with the optimal single-shot probability sin^2(theta)/sin^2(theta'); the
|P1> outcome collapses onto the product state |11>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, is_unitary

_QUARTER_PI = math.pi / 4


@dataclass(frozen=True)
class GateParams:
    """Gate angles with the derived per-step quantities.

    Requires 0 < xi < eta < pi/4, so 0 < delta < 1 and step > 1.
    """

    xi: float
    eta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.xi < self.eta < _QUARTER_PI:
            raise ValueError(
                f"gate parameters must satisfy 0 < xi < eta < pi/4, got xi={self.xi}, eta={self.eta}"
            )

    @property
    def delta(self) -> float:
        """Probe-rotation diagonal tan(xi)/tan(eta); kept as a direct ratio."""
        return math.tan(self.xi) / math.tan(self.eta)

    @property
    def step(self) -> float:
        """Concentration step tan(eta)/tan(xi), the per-success gain on tan(theta)."""
        return math.tan(self.eta) / math.tan(self.xi)

    @property
    def gamma0(self) -> float:
        """Success probability sin^2(xi)/sin^2(eta) for the matched input theta = xi."""
        return math.sin(self.xi) ** 2 / math.sin(self.eta) ** 2


@dataclass(frozen=True, eq=False)
class BranchOutcome:
    """One probe measurement branch of a single gate application."""

    probe_label: str  # "P0" (success) or "P1" (failure)
    state: np.ndarray  # normalized conditional state; zeros when probability == 0
    probability: float

    @property
    def is_valid(self) -> bool:
        return self.probability > 0.0


def build_gate(xi: float, eta: float) -> np.ndarray:
    """4x4 unitary on Alice (x) probe, Alice most significant.

    Identity on A = |0>; the probe rotation U on A = |1>.
    """
    params = GateParams(xi, eta)
    d = params.delta
    off = math.sqrt(1.0 - d * d)
    g = np.eye(4, dtype=complex)
    g[2:, 2:] = np.array([[d, -off], [off, d]])
    return g


def apply_postselect(gate: np.ndarray, state: np.ndarray) -> list[BranchOutcome]:
    """Apply the gate to an A (x) B state with the probe prepared in |P0>.

    Returns both probe branches, |P0> first. Branch probability is the squared
    norm of the projected component; the branch state is the renormalized
    conditional state on A (x) B. A zero-probability branch carries the zero
    vector and ``is_valid == False`` so the output shape is stable.
    """
    gate = np.asarray(gate, dtype=complex)
    state = np.asarray(state, dtype=complex)
    if gate.shape != (4, 4):
        raise ValueError(f"gate must be 4x4, got shape {gate.shape}")
    if not is_unitary(gate):
        raise ValueError(f"gate is not unitary within {DEFAULT_TOL.algebra}")
    if state.shape != (4,):
        raise ValueError(f"state must have 4 amplitudes, got shape {state.shape}")
    n = np.linalg.norm(state)
    if abs(n - 1.0) > DEFAULT_TOL.normalization:
        raise ValueError(f"state is not normalized: |norm - 1| = {abs(n - 1.0):.3e}")

    # Full register order is A (x) B (x) P. The gate touches the (A, P) axes
    # only; contracting over labeled axes leaves B untouched without ever
    # reordering amplitudes.
    full = np.zeros((2, 2, 2), dtype=complex)
    full[:, :, 0] = (state / n).reshape(2, 2)
    g = gate.reshape(2, 2, 2, 2)  # [a_out, p_out, a_in, p_in]
    out = np.einsum("apcq,cbq->abp", g, full)

    branches = []
    for label, p_index in (("P0", 0), ("P1", 1)):
        component = out[:, :, p_index].reshape(4)
        prob = float(np.vdot(component, component).real)
        if prob > 0.0:
            conditional = component / math.sqrt(prob)
        else:
            conditional = np.zeros(4, dtype=complex)
        branches.append(BranchOutcome(label, conditional, prob))
    return branches
