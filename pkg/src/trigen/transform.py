"""Gauge rotation mapping the invariant onto the weight generator.

The rotation V = exp(beta * raising - conj(beta) * lowering) with
displacement beta = -(polar/2) * gauge_gain * e^{-i azimuth} conjugates
the invariant into the static weight generator.  Under it the Hamiltonian
collapses onto a single scalar multiple of the weight; the scalar has a
closed form that is cross-checked here against a centered-difference
evaluation of the transformed generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from trigen.algebra import AlgebraRealization
from trigen.errors import IntegrationError
from trigen.invariant import AuxiliaryState, AuxiliaryTrajectory, closure_constants
from trigen.schedules import HamiltonianModel, hamiltonian_at

Array = np.ndarray


def matrix_exponential(matrix: Array) -> Array:
    """Dense matrix exponential via scaling-and-squaring Pade.

    Thin wrapper that enforces the finiteness contract on both sides;
    extreme norms that overflow the squaring stage are reported instead of
    returning inf/nan silently.
    """
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("matrix exponential needs a square matrix")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("matrix exponential input has non-finite entries")
    result = scipy.linalg.expm(np.asarray(matrix, dtype=complex))
    if not np.all(np.isfinite(result)):
        raise IntegrationError("matrix exponential overflowed")
    return result


@dataclass(frozen=True)
class GaugeOperator:
    """Exponentiated ladder displacement at one auxiliary state.

    Unitary exactly when the realization is an adjoint pair and the gauge
    gain is real (the elliptic Hermitian setting).
    """

    matrix: Array
    displacement: complex
    unitary: bool


def build_gauge(realization: AlgebraRealization, state: AuxiliaryState) -> GaugeOperator:
    """Exponentiate the ladder displacement for the given angles."""
    closure = closure_constants(realization.constants)
    beta = -(state.polar / 2.0) * closure.gauge_gain * np.exp(-1j * state.azimuth)
    generator = beta * realization.raising - np.conj(beta) * realization.lowering
    return GaugeOperator(
        matrix=matrix_exponential(generator),
        displacement=complex(beta),
        unitary=realization.hermitian_pair and closure.is_real,
    )


def conjugated_invariant(gauge: GaugeOperator, invariant: Array) -> Array:
    """Return V^dagger I V.

    With the closure constants in force and a unitary gauge this equals
    the weight generator exactly; it is the representation-independent
    identity the whole construction rests on.
    """
    v = gauge.matrix
    if invariant.shape != v.shape:
        raise ValueError("invariant and gauge dimensions differ")
    return v.conj().T @ invariant @ v


def effective_coefficient(model: HamiltonianModel, t: float,
                          state: AuxiliaryState, azimuth_rate: float) -> float:
    """Closed-form scalar multiplying the weight generator after the gauge.

    Only defined for the elliptic class, where the closure root is real.
    """
    closure = closure_constants(model.realization.constants)
    if not closure.is_real:
        raise ValueError("effective coefficient is defined for the elliptic class")
    m = model.realization.constants.step
    s = closure.root.real
    w, theta, phi = model.schedule.values(t)
    a, b = state.polar, state.azimuth
    return float(
        w * (np.cos(a) * np.cos(theta)
             + (s / m) * np.sin(a) * np.sin(theta) * np.cos(b - phi))
        + (azimuth_rate / m) * (1.0 - np.cos(a))
    )


def effective_hamiltonian_numeric(model: HamiltonianModel,
                                  traj: AuxiliaryTrajectory,
                                  t: float, dt: float | None = None) -> Array:
    """Centered-difference evaluation of V^dagger H V - i V^dagger dV/dt.

    The analytic route (nested-commutator expansion of the conjugation)
    is what this cross-checks; the derivative of the gauge is taken
    numerically to avoid transcribing the series.  ``t`` must sit at least
    ``dt`` inside the trajectory span.
    """
    span = traj.times[-1] - traj.times[0]
    if dt is None:
        dt = max(span * 1e-5, 1e-9)
    if t - dt < traj.times[0] or t + dt > traj.times[-1]:
        raise ValueError("centered difference needs t +/- dt inside the grid")
    r = model.realization
    gauge = build_gauge(r, traj.angles_at(t))
    before = build_gauge(r, traj.angles_at(t - dt)).matrix
    after = build_gauge(r, traj.angles_at(t + dt)).matrix
    v, vd = gauge.matrix, gauge.matrix.conj().T
    gauge_rate = (after - before) / (2.0 * dt)
    return vd @ hamiltonian_at(model, t) @ v - 1j * (vd @ gauge_rate)
