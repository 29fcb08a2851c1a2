"""Phase accumulation, closed-form states, and the brute-force oracle.

The closed-form solution attached to a weight eigenvalue lam is

    psi(t) = e^{-i (phase_total(t) + scalar_phase(t))} V(t) |lam>

with the total phase split into a dynamical part (the transformed energy)
and a geometric part that depends only on the path of the auxiliary
angles.  Everything here is cross-checked against direct adaptive
integration of i d/dt psi = H(t) psi, which involves no invariant
machinery at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import cumulative_simpson, solve_ivp

from trigen.errors import IntegrationError
from trigen.invariant import (
    AuxiliaryTrajectory,
    auxiliary_rhs,
    closure_constants,
    invariant_defect,
)
from trigen.schedules import HamiltonianModel, hamiltonian_at
from trigen.transform import build_gauge

Array = np.ndarray


@dataclass(frozen=True)
class PhaseBreakdown:
    """Accumulated phases at one instant, in radians (raw, not wrapped)."""

    dynamical: float
    geometric: float
    scalar: float

    @property
    def total(self) -> float:
        return self.dynamical + self.geometric


@dataclass(frozen=True)
class PhaseHistory:
    """Cumulative phase quadratures sampled on a time grid.

    Phases accumulate as raw quadratures and are never wrapped here;
    cyclic-phase comparisons need the winding.
    """

    times: Array
    dynamical: Array
    geometric: Array
    scalar: Array

    @property
    def total(self) -> Array:
        return self.dynamical + self.geometric

    def at(self, index: int) -> PhaseBreakdown:
        return PhaseBreakdown(float(self.dynamical[index]),
                              float(self.geometric[index]),
                              float(self.scalar[index]))

    @property
    def final(self) -> PhaseBreakdown:
        return self.at(-1)


@dataclass(frozen=True)
class EvolutionReport:
    """States, phases and quality metrics over a time grid."""

    times: Array
    states: Array
    phases: PhaseHistory | None
    defect: float
    fidelity_vs_oracle: Array | None = field(default=None)

    @property
    def min_fidelity(self) -> float | None:
        if self.fidelity_vs_oracle is None:
            return None
        return float(np.min(self.fidelity_vs_oracle))


def _require_elliptic(model: HamiltonianModel) -> float:
    closure = closure_constants(model.realization.constants)
    if not closure.is_real:
        raise ValueError("phase formulas apply to the elliptic class only")
    return closure.root.real


def phase_integrands(model: HamiltonianModel, traj: AuxiliaryTrajectory,
                     t: float, lam: float) -> tuple[float, float]:
    """Dynamical and geometric phase rates at time ``t`` for eigenvalue ``lam``."""
    s = _require_elliptic(model)
    m = model.realization.constants.step
    state = traj.angles_at(t)
    _, azimuth_rate = auxiliary_rhs(model.realization.constants, model.schedule,
                                    t, state)
    w, theta, phi = model.schedule.values(t)
    a, b = state.polar, state.azimuth
    dynamical = lam * w * (np.cos(a) * np.cos(theta)
                           + (s / m) * np.sin(a) * np.sin(theta) * np.cos(b - phi))
    geometric = lam * (azimuth_rate / m) * (1.0 - np.cos(a))
    return float(dynamical), float(geometric)


def accumulate_phases(model: HamiltonianModel, traj: AuxiliaryTrajectory,
                      lam: float) -> PhaseHistory:
    """Composite Simpson quadrature of both phase rates on the grid."""
    if len(traj.times) < 3:
        raise ValueError("phase quadrature needs at least 3 grid nodes")
    s = _require_elliptic(model)
    m = model.realization.constants.step
    w, theta, phi = model.schedule.values(traj.times)
    a, b = traj.polar, traj.azimuth
    dyn = lam * np.asarray(w) * (np.cos(a) * np.cos(theta)
                                 + (s / m) * np.sin(a) * np.sin(theta)
                                 * np.cos(b - phi))
    geo = lam * (traj.azimuth_rate / m) * (1.0 - np.cos(a))
    offset = np.broadcast_to(np.asarray(model.scalar_offset(traj.times), dtype=float),
                             traj.times.shape)
    return PhaseHistory(
        times=traj.times,
        dynamical=cumulative_simpson(dyn, x=traj.times, initial=0.0),
        geometric=cumulative_simpson(geo, x=traj.times, initial=0.0),
        scalar=cumulative_simpson(offset, x=traj.times, initial=0.0),
    )


def cyclic_geometric_phase(polar: float, lam: float, step: float,
                           cycles: int = 1) -> float:
    """Geometric phase for a constant-tilt loop of the azimuth.

    Each full azimuth cycle contributes (lam/step) times the solid angle
    2*pi*(1 - cos(polar)) enclosed by the invariant direction; per unit
    solid angle this is the flux of a monopole of strength
    lam / (4*pi*step) sitting at the origin of the angle space.
    """
    return (lam / step) * 2.0 * np.pi * (1.0 - np.cos(polar)) * cycles


def evolve_exact(model: HamiltonianModel, traj: AuxiliaryTrajectory,
                 lam: float, eigvec: Array) -> EvolutionReport:
    """Closed-form states for one weight eigenvector along the trajectory.

    ``eigvec`` must satisfy weight @ eigvec = lam * eigvec; for degenerate
    eigenvalues the caller picks the vector, never this function.
    """
    _require_elliptic(model)
    r = model.realization
    eigvec = np.asarray(eigvec, dtype=complex)
    if eigvec.shape != (r.dim,):
        raise ValueError("eigenvector dimension mismatch")
    residual = np.linalg.norm(r.weight @ eigvec - lam * eigvec)
    if residual > 1e-9 * max(1.0, abs(lam)):
        raise ValueError(
            f"vector is not a weight eigenvector for {lam} (residual {residual:.2e})")
    phases = accumulate_phases(model, traj, lam)
    states = np.empty((len(traj.times), r.dim), dtype=complex)
    for k in range(len(traj.times)):
        gauge = build_gauge(r, traj.state(k))
        states[k] = np.exp(-1j * (phases.total[k] + phases.scalar[k])) \
            * (gauge.matrix @ eigvec)
    return EvolutionReport(
        times=traj.times,
        states=states,
        phases=phases,
        defect=invariant_defect(model, traj),
    )


def evolve_general(model: HamiltonianModel, traj: AuxiliaryTrajectory,
                   psi0: Array) -> EvolutionReport:
    """Propagate an arbitrary initial state as a sum of eigenvalue branches.

    The branch phases differ only through the eigenvalue multiplying one
    shared quadrature, so the combined propagator is

        U(t) = e^{-i scalar(t)} V(t) exp(-i Phi(t) * weight) V(t0)^dagger

    with Phi the unit-eigenvalue total-phase quadrature.  Requires the
    elliptic Hermitian setting (unitary gauge, real weight spectrum).
    """
    r = model.realization
    if not r.hermitian_pair:
        raise ValueError("general evolution needs an adjoint ladder pair")
    _require_elliptic(model)
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (r.dim,):
        raise ValueError("initial state dimension mismatch")
    unit_phases = accumulate_phases(model, traj, 1.0)
    eigvals, eigvecs = np.linalg.eigh(r.weight)
    start = build_gauge(r, traj.state(0)).matrix
    coeffs = eigvecs.conj().T @ (start.conj().T @ psi0)
    states = np.empty((len(traj.times), r.dim), dtype=complex)
    for k in range(len(traj.times)):
        gauge = build_gauge(r, traj.state(k))
        branch = np.exp(-1j * (unit_phases.total[k] * eigvals
                               + unit_phases.scalar[k])) * coeffs
        states[k] = gauge.matrix @ (eigvecs @ branch)
    return EvolutionReport(
        times=traj.times,
        states=states,
        phases=None,
        defect=invariant_defect(model, traj),
    )


def oracle_propagate(model: HamiltonianModel, psi0: Array, grid: Array,
                     tol: float = 1e-10, norm_tol: float = 1e-9) -> Array:
    """Brute-force adaptive integration of i d/dt psi = H(t) psi.

    The time-ordered propagator is never formed; the state is integrated
    directly with a high-order embedded pair.  The norm is monitored (not
    renormalized) and must stay within ``norm_tol`` of its initial value.
    """
    grid = np.asarray(grid, dtype=float)
    psi0 = np.asarray(psi0, dtype=complex)

    def rhs(t, psi):
        return -1j * (hamiltonian_at(model, t) @ psi)

    sol = solve_ivp(rhs, (grid[0], grid[-1]), psi0, method="DOP853",
                    rtol=tol, atol=tol, t_eval=grid)
    if not sol.success:
        raise IntegrationError(f"oracle integration failed: {sol.message}")
    states = sol.y.T
    drift = float(np.max(np.abs(np.linalg.norm(states, axis=1)
                                - np.linalg.norm(psi0))))
    if drift > norm_tol:
        raise IntegrationError(
            f"oracle norm drift {drift:.3e} exceeds {norm_tol:.1e}; "
            "either tighten the tolerance or the generator is not Hermitian")
    return states


def fidelity(states_a: Array, states_b: Array) -> Array:
    """Per-node overlap magnitude |<a(t)|b(t)>| of two state streams."""
    states_a = np.asarray(states_a)
    states_b = np.asarray(states_b)
    if states_a.shape != states_b.shape:
        raise ValueError("state streams must share grid and dimension")
    return np.abs(np.einsum("ij,ij->i", states_a.conj(), states_b))


def _stream_derivative(states: Array, h: float) -> Array:
    """Centered differences of a state stream, fourth order inside."""
    n = len(states)
    if n < 5:
        raise ValueError("need at least 5 nodes for the stream derivative")
    d = np.empty_like(states)
    d[2:-2] = (states[:-4] - 8 * states[1:-3] + 8 * states[3:-1]
               - states[4:]) / (12 * h)
    d[1] = (states[2] - states[0]) / (2 * h)
    d[-2] = (states[-1] - states[-3]) / (2 * h)
    d[0] = (-11 * states[0] + 18 * states[1] - 9 * states[2]
            + 2 * states[3]) / (6 * h)
    d[-1] = (11 * states[-1] - 18 * states[-2] + 9 * states[-3]
             - 2 * states[-4]) / (6 * h)
    return d


def lr_phase(model: HamiltonianModel, traj: AuxiliaryTrajectory,
             eigenstate_stream: Array) -> Array:
    """Phase from the expectation route, independent of the phase split.

    Quadrature of <state| H - i d/dt |state> over the gauge-rotated
    eigenstate stream (states without any phase factor attached).  The
    time derivative uses centered differences on the grid, with one-sided
    stencils at the two boundary nodes.  Matches the dynamical+geometric
    total plus the scalar-offset phase.
    """
    times = traj.times
    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-9):
        raise ValueError("expectation-route phase needs a uniform grid")
    stream = np.asarray(eigenstate_stream, dtype=complex)
    if stream.shape[0] != len(times):
        raise ValueError("stream length must match the trajectory grid")
    d_stream = _stream_derivative(stream, float(steps[0]))
    integrand = np.empty(len(times))
    for k, t in enumerate(times):
        h = hamiltonian_at(model, t)
        energy = np.vdot(stream[k], h @ stream[k])
        connection = np.vdot(stream[k], d_stream[k])
        integrand[k] = (energy - 1j * connection).real
    return cumulative_simpson(integrand, x=times, initial=0.0)
