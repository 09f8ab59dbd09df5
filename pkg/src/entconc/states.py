"""Canonical forms of pure two-qubit states.

Amplitude vectors are indexed |00>, |01>, |10>, |11> (first qubit most
significant), matching the tensor convention in :mod:`entconc.linalg`. The
canonical form of a pure state is ``cos(theta)|11> + sin(theta)|00>`` with
``theta`` in [0, pi/4], reached by local rotations on each side; ``theta``
alone orders states by entanglement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOL, is_unitary, svd2x2, tensor

_QUARTER_PI = math.pi / 4


@dataclass(frozen=True, eq=False)
class SchmidtState:
    """Canonical angle plus the local frames that rotate it back to the input."""

    theta: float
    frame_a: np.ndarray = field(repr=False)
    frame_b: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if not -1e-12 <= self.theta <= _QUARTER_PI + 1e-12:
            raise ValueError(f"canonical angle must lie in [0, pi/4], got {self.theta}")
        for name, frame in (("frame_a", self.frame_a), ("frame_b", self.frame_b)):
            frame = np.asarray(frame, dtype=complex)
            if frame.shape != (2, 2):
                raise ValueError(f"{name} must be 2x2, got shape {frame.shape}")
            if not is_unitary(frame):
                raise ValueError(f"{name} is not unitary within {DEFAULT_TOL.algebra}")
            object.__setattr__(self, name, frame)


def schmidt_amplitudes(theta: float) -> np.ndarray:
    """Amplitudes of ``cos(theta)|11> + sin(theta)|00>``."""
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    return np.array([math.sin(theta), 0.0, 0.0, math.cos(theta)], dtype=complex)


def schmidt_decompose(amps: np.ndarray, tol: float = DEFAULT_TOL.normalization) -> SchmidtState:
    """Canonical form of a pure two-qubit state given as four amplitudes.

    The input must be normalized within ``tol``; it is renormalized internally
    before decomposition. Product states are fine (theta = 0).
    """
    amps = np.asarray(amps, dtype=complex)
    if amps.shape != (4,):
        raise ValueError(f"expected 4 amplitudes, got shape {amps.shape}")
    n = np.linalg.norm(amps)
    if abs(n - 1.0) > tol:
        raise ValueError(f"amplitudes are not normalized: |norm - 1| = {abs(n - 1.0):.3e}")
    coeff = (amps / n).reshape(2, 2)

    u, s, v = svd2x2(coeff)
    theta = math.atan2(s[1], s[0])
    # cos(theta) rides on |11>: the larger singular value pairs with the
    # second column of each frame, so the columns are swapped here.
    frame_a = u[:, ::-1].copy()
    frame_b = v.conj()[:, ::-1].copy()
    return SchmidtState(theta, frame_a, frame_b)


def reconstruct(state: SchmidtState) -> np.ndarray:
    """Amplitudes of a canonical state rotated back through its local frames."""
    base = schmidt_amplitudes(state.theta)
    return tensor(state.frame_a, state.frame_b) @ base


def entanglement(theta: float) -> float:
    """Entanglement entropy (base-2) of ``cos(theta)|11> + sin(theta)|00>``.

    Equals ``-cos^2 log2 cos^2 - sin^2 log2 sin^2`` with the ``0 log 0 := 0``
    limit, so 0 at theta in {0, pi/2} and 1 at theta = pi/4.
    """
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    value = 0.0
    if c2 > 0.0:
        value -= c2 * math.log2(c2)
    if s2 > 0.0:
        value -= s2 * math.log2(s2)
    return value


def parse_amplitudes(text: str) -> np.ndarray:
    """Parse four comma-separated complex amplitudes in ``re+imj`` form.

    Order is |00>, |01>, |10>, |11>; this is the amplitude format shared with
    the command line.
    """
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected 4 comma-separated amplitudes, got {len(parts)}")
    try:
        values = [complex(p.strip().replace(" ", "")) for p in parts]
    except ValueError as exc:
        raise ValueError(f"could not parse amplitudes {text!r}: {exc}") from None
    return np.array(values, dtype=complex)
