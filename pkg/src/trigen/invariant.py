"""Dynamical invariants steered by two auxiliary angles.

An operator I(t) with vanishing total derivative along the Schrodinger
flow, d/dt I + (1/i)[I, H] = 0, shares the ladder structure of the
Hamiltonian and is parameterized by a polar/azimuth angle pair.  Reducing
the operator equation to those angles yields two coupled real ODEs; this
module integrates them, rebuilds the invariant along the trajectory, and
quantifies invariant quality through the operator-equation defect and the
drift of the invariant spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from trigen.algebra import AlgebraRealization, StructureConstants, commutator
from trigen.errors import IntegrationError, SingularAngleError
from trigen.schedules import CoefficientSchedule, HamiltonianModel, hamiltonian_at

Array = np.ndarray

# Below this |sin(polar)| the azimuth equation is numerically meaningless.
SINGULAR_EPS = 1e-10


@dataclass(frozen=True)
class ClosureConstants:
    """Scalars that close the gauge rotation onto the weight generator.

    ``root`` is the principal square root of step*pairing/2; the invariant
    ladder gain is step/root and the gauge exponent gain 1/root.  For the
    hyperbolic class (negative product) both gains are imaginary and the
    invariant built from them is no longer Hermitian.
    """

    ladder_gain: complex
    gauge_gain: complex
    root: complex

    @property
    def is_real(self) -> bool:
        return abs(self.ladder_gain.imag) == 0.0


def closure_constants(constants: StructureConstants) -> ClosureConstants:
    """Compute the closure scalars from the structure constants."""
    m, n = constants.step, constants.pairing
    root = complex(np.sqrt(complex(m * n / 2.0)))
    gain = m / root
    # The two reduced equations are compatible only on this closure locus;
    # guards against transcription drift in the formulas above.
    if abs(gain * gain - 2.0 * m / n) > 1e-12:
        raise AssertionError("closure gain lost the 2*step/pairing relation")
    return ClosureConstants(ladder_gain=gain, gauge_gain=1.0 / root, root=root)


@dataclass(frozen=True)
class AuxiliaryState:
    """Polar and azimuth angle of the invariant direction, in radians."""

    polar: float
    azimuth: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.polar) and np.isfinite(self.azimuth)):
            raise ValueError("auxiliary angles must be finite")


@dataclass(frozen=True)
class AuxiliaryTrajectory:
    """Sampled solution of the auxiliary angle system.

    Angles and rates are sampled on ``times``; ``angles_at`` interpolates
    the underlying dense solution for off-grid evaluation.  ``stats``
    records step counts and the integration tolerance.
    """

    times: Array
    polar: Array
    azimuth: Array
    polar_rate: Array
    azimuth_rate: Array
    stats: dict
    _dense: object = field(repr=False, default=None)

    def __post_init__(self) -> None:
        n = len(self.times)
        if any(len(arr) != n for arr in (self.polar, self.azimuth,
                                         self.polar_rate, self.azimuth_rate)):
            raise ValueError("trajectory arrays must share one length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    def angles_at(self, t: float) -> AuxiliaryState:
        if self._dense is None:
            raise ValueError("trajectory carries no dense interpolant")
        a, b = self._dense(t)
        return AuxiliaryState(float(a), float(b))

    def state(self, index: int) -> AuxiliaryState:
        return AuxiliaryState(float(self.polar[index]), float(self.azimuth[index]))


def invariant_at(realization: AlgebraRealization, state: AuxiliaryState) -> Array:
    """Assemble the invariant matrix for the given angles."""
    y = closure_constants(realization.constants).ladder_gain
    a, b = state.polar, state.azimuth
    half = 0.5 * y * np.sin(a)
    return (half * np.exp(-1j * b) * realization.raising
            + half * np.exp(1j * b) * realization.lowering
            + np.cos(a) * realization.weight)


def invariant_rate(realization: AlgebraRealization, state: AuxiliaryState,
                   polar_rate: float, azimuth_rate: float) -> Array:
    """Analytic time derivative of the invariant for given angle rates."""
    y = closure_constants(realization.constants).ladder_gain
    a, b = state.polar, state.azimuth
    d_raise = 0.5 * y * (polar_rate * np.cos(a) - 1j * azimuth_rate * np.sin(a)) \
        * np.exp(-1j * b)
    d_lower = 0.5 * y * (polar_rate * np.cos(a) + 1j * azimuth_rate * np.sin(a)) \
        * np.exp(1j * b)
    return (d_raise * realization.raising + d_lower * realization.lowering
            - polar_rate * np.sin(a) * realization.weight)


def auxiliary_rhs(constants: StructureConstants, schedule: CoefficientSchedule,
                  t: float, state: AuxiliaryState) -> tuple[float, float]:
    """Angle rates that keep the invariant equation satisfied.

    Separating the raising-generator coefficient of the operator equation
    into real and imaginary parts (with the closure gain in force) gives

        polar_rate   = -w sin(theta) Im(root * e^{i(azimuth-phi)})
        azimuth_rate = step w cos(theta)
                       - w cot(polar) sin(theta) Re(root * e^{i(azimuth-phi)})

    In the elliptic class (real root) the polar-rate line coincides with
    the weight-coefficient equation of the reduction; the hyperbolic class
    satisfies the raising line only and is treated as experimental.
    Correctness is enforced by the residual oracle ``auxiliary_residual``,
    not by transcription.
    """
    a, b = state.polar, state.azimuth
    if abs(np.sin(a)) < SINGULAR_EPS:
        raise SingularAngleError(
            f"polar angle {a!r} at t={t!r} is within {SINGULAR_EPS} of a pole")
    w, theta, phi = schedule.values(t)
    m = constants.step
    root = closure_constants(constants).root
    rotated = root * np.exp(1j * (b - phi))
    polar_rate = -w * np.sin(theta) * rotated.imag
    azimuth_rate = m * w * np.cos(theta) \
        - w * (np.cos(a) / np.sin(a)) * np.sin(theta) * rotated.real
    return float(polar_rate), float(azimuth_rate)


def auxiliary_residual(constants: StructureConstants, schedule: CoefficientSchedule,
                       t: float, state: AuxiliaryState,
                       polar_rate: float, azimuth_rate: float) -> complex:
    """Complex residual of the raising-coefficient invariant equation.

    This is the independent oracle for ``auxiliary_rhs``: substituting a
    consistent (angles, rates) tuple must return zero to integration
    accuracy, for the elliptic and the hyperbolic class alike.
    """
    w, theta, phi = schedule.values(t)
    m = constants.step
    y = closure_constants(constants).ladder_gain
    a, b = state.polar, state.azimuth
    return (y * np.exp(-1j * b) * (polar_rate * np.cos(a)
                                   - 1j * azimuth_rate * np.sin(a))
            - 1j * m * w * (np.exp(-1j * phi) * np.cos(a) * np.sin(theta)
                            - y * np.exp(-1j * b) * np.sin(a) * np.cos(theta)))


def solve_auxiliary(model: HamiltonianModel, init: AuxiliaryState,
                    grid: Array, tol: float = 1e-12) -> AuxiliaryTrajectory:
    """Integrate the auxiliary angle system and sample it on ``grid``.

    Adaptive high-order (Dormand-Prince 8) integration with local error
    below ``tol``.  Hitting a polar-angle singularity aborts with a
    diagnostic instead of regularizing.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing with >= 2 nodes")
    constants = model.realization.constants
    schedule = model.schedule
    if abs(np.sin(init.polar)) < SINGULAR_EPS:
        raise SingularAngleError("initial polar angle sits on a pole")

    def rhs(t, angles):
        return auxiliary_rhs(constants, schedule, t,
                             AuxiliaryState(angles[0], angles[1]))

    def near_pole(t, angles):
        return abs(np.sin(angles[0])) - SINGULAR_EPS

    near_pole.terminal = True

    sol = solve_ivp(rhs, (grid[0], grid[-1]), [init.polar, init.azimuth],
                    method="DOP853", rtol=tol, atol=tol,
                    dense_output=True, events=near_pole)
    if sol.status == 1:
        t_hit = float(sol.t_events[0][0])
        raise SingularAngleError(
            f"auxiliary integration hit a polar singularity at t={t_hit:.6g}")
    if not sol.success:
        raise IntegrationError(f"auxiliary integration failed: {sol.message}")

    angles = sol.sol(grid)
    rates = np.array([
        auxiliary_rhs(constants, schedule, t, AuxiliaryState(a, b))
        for t, a, b in zip(grid, angles[0], angles[1])
    ])
    stats = {
        "steps": int(len(sol.t) - 1),
        "rhs_evaluations": int(sol.nfev),
        "tolerance": float(tol),
    }
    return AuxiliaryTrajectory(
        times=grid,
        polar=angles[0].copy(),
        azimuth=angles[1].copy(),
        polar_rate=rates[:, 0],
        azimuth_rate=rates[:, 1],
        stats=stats,
        _dense=sol.sol,
    )


def aligned_trajectory(model: HamiltonianModel, grid: Array,
                       azimuth0: float = 0.0) -> AuxiliaryTrajectory:
    """Constant polar=0 trajectory for schedules with no ladder terms.

    With sin(theta) identically zero the Hamiltonian is weight-diagonal
    and the invariant aligned with it stays put; the azimuth equation is
    regular in that limit (rate step * w * cos(theta)) even though the
    angle itself is then unobservable.  Rejects schedules with any ladder
    amplitude on the grid.
    """
    from scipy.integrate import cumulative_simpson

    grid = np.asarray(grid, dtype=float)
    w, theta, _ = model.schedule.values(grid)
    if np.max(np.abs(np.sin(theta))) > 1e-12:
        raise ValueError("aligned trajectory needs sin(theta) = 0 on the grid")
    azimuth_rate = model.realization.constants.step * np.asarray(w) * np.cos(theta)
    azimuth = azimuth0 + cumulative_simpson(azimuth_rate, x=grid, initial=0.0)
    zeros = np.zeros_like(grid)

    def dense(t):
        return 0.0, float(np.interp(t, grid, azimuth))

    return AuxiliaryTrajectory(
        times=grid,
        polar=zeros,
        azimuth=azimuth,
        polar_rate=zeros,
        azimuth_rate=np.asarray(azimuth_rate, dtype=float),
        stats={"steps": 0, "rhs_evaluations": 0, "tolerance": 0.0},
        _dense=dense,
    )


def invariant_defect(model: HamiltonianModel, traj: AuxiliaryTrajectory) -> float:
    """Max Frobenius norm of d/dt I + (1/i)[I, H] along the trajectory.

    The time derivative is analytic in the stored angles and rates, the
    commutator is evaluated from the matrices, so the two routes are
    independent; corrupting either the rates or the transcription of the
    rate formulas shows up here.  Truncated realizations are checked on
    their interior rows, like every algebra identity.
    """
    r = model.realization
    worst = 0.0
    for k, t in enumerate(traj.times):
        state = traj.state(k)
        d_inv = invariant_rate(r, state, traj.polar_rate[k], traj.azimuth_rate[k])
        h = hamiltonian_at(model, t)
        defect = d_inv + commutator(invariant_at(r, state), h) / 1j
        worst = max(worst, float(np.linalg.norm(r.project(defect))))
    return worst


@dataclass(frozen=True)
class SpectrumDriftReport:
    """Worst per-index spectral movement along a trajectory.

    For non-Hermitian invariants (the hyperbolic class, or ladder pairs
    that are not adjoint pairs) the eigenvalue drift is replaced by the
    singular-value drift and flagged.
    """

    drift: float
    via_singular_values: bool


def invariant_spectrum_drift(realization: AlgebraRealization,
                             traj: AuxiliaryTrajectory) -> SpectrumDriftReport:
    """Track the sorted invariant spectrum over the trajectory grid."""
    hermitian = realization.hermitian_pair \
        and closure_constants(realization.constants).is_real

    def spectrum(state: AuxiliaryState) -> Array:
        inv = invariant_at(realization, state)
        if hermitian:
            return np.linalg.eigvalsh(inv)
        return np.linalg.svd(inv, compute_uv=False)

    reference = spectrum(traj.state(0))
    drift = 0.0
    for k in range(1, len(traj.times)):
        drift = max(drift, float(np.max(np.abs(spectrum(traj.state(k)) - reference))))
    return SpectrumDriftReport(drift=drift, via_singular_values=not hermitian)
