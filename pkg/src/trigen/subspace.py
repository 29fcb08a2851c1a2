"""Conserved-generator block decomposition of coupled atom-field models.

The multiphoton two-level models treated here have no global ladder
structure, but a conserved operator commuting with the Hamiltonian at all
times splits the space into one- and two-dimensional sectors.  Inside
each two-dimensional sector the restricted coupling operators close a
ladder algebra, so every sector hands a standard three-generator model to
the core pipeline.

Basis convention: product states are ordered with the boson (or
angular-momentum) index slow and the two-level index fast, excited level
first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from trigen.algebra import AlgebraRealization, StructureConstants, boson_ladder
from trigen.errors import ScenarioError
from trigen.evolution import EvolutionReport, evolve_exact, evolve_general, fidelity, oracle_propagate
from trigen.invariant import AuxiliaryState, aligned_trajectory, solve_auxiliary
from trigen.schedules import (
    CoefficientSchedule,
    HamiltonianModel,
    TimeFunction,
    add_functions,
    polar_form,
    scale_function,
)

Array = np.ndarray

_ATOM_LEVELS = ("e", "g")


@dataclass(frozen=True)
class TwoLevelBosonSpace:
    """Truncated Fock space tensored with a two-level atom."""

    n_max: int

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    def index(self, n: int, level: str) -> int:
        if not 0 <= n <= self.n_max:
            raise ValueError(f"Fock index {n} outside truncation")
        return 2 * n + _ATOM_LEVELS.index(level)

    def label(self, index: int) -> str:
        return f"|{index // 2},{_ATOM_LEVELS[index % 2]}>"


def _atom_ops() -> tuple[Array, Array, Array]:
    sigma_plus = np.array([[0, 1], [0, 0]], dtype=complex)
    sigma_z = np.diag([1.0, -1.0]).astype(complex)
    return sigma_plus, sigma_plus.conj().T, sigma_z


@dataclass(frozen=True)
class SusyJCModel:
    """Multiphoton two-level model with its supersymmetric operators.

    ``photons`` is the number of quanta exchanged per atomic transition.
    The supercharge pair and the conserved operator are materialized as
    matrices on the product space; the conserved operator commutes with
    the Hamiltonian at every instant, which is what makes the sector
    decomposition exact even on a truncated Fock basis.
    """

    photons: int
    space: TwoLevelBosonSpace
    frequency: TimeFunction
    splitting: TimeFunction
    coupling_modulus: TimeFunction
    coupling_argument: TimeFunction
    supercharge: Array = field(repr=False)
    supercharge_dag: Array = field(repr=False)
    conserved: Array = field(repr=False)
    excitation: Array = field(repr=False)
    number_op: Array = field(repr=False)
    sigma_z: Array = field(repr=False)

    def coupling(self, t: float) -> complex:
        return self.coupling_modulus(t) * np.exp(1j * self.coupling_argument(t))

    def detuning(self, t: float) -> float:
        return self.photons * self.frequency(t) - self.splitting(t)

    def hamiltonian_at(self, t: float) -> Array:
        """Field + splitting + k-photon exchange terms."""
        g = self.coupling(t)
        return (self.frequency(t) * self.number_op
                + 0.5 * self.splitting(t) * self.sigma_z
                + g * self.supercharge + np.conj(g) * self.supercharge_dag)

    def rewritten_hamiltonian_at(self, t: float) -> Array:
        """Same operator written against the supersymmetric generators.

        Uses the detuning k*frequency - splitting, the unique choice that
        makes the two assemblies agree entrywise.
        """
        w = self.frequency(t)
        g = self.coupling(t)
        dim = self.space.dim
        return (w * self.excitation
                + 0.5 * (w - self.detuning(t)) * self.sigma_z
                + g * self.supercharge + np.conj(g) * self.supercharge_dag
                - 0.5 * w * np.eye(dim))


def build_susy_jc(photons: int, n_max: int,
                  frequency: TimeFunction, splitting: TimeFunction,
                  coupling_modulus: TimeFunction,
                  coupling_argument: TimeFunction) -> SusyJCModel:
    """Assemble the k-photon model and its conserved operators."""
    if photons < 1:
        raise ValueError("photons per transition must be >= 1")
    if n_max < photons:
        raise ValueError("Fock truncation must reach at least one transition")
    space = TwoLevelBosonSpace(n_max)
    fock = n_max + 1
    a = boson_ladder(fock)
    ad = a.conj().T
    eye_f = np.eye(fock)
    sp, sm, sz = _atom_ops()
    eye_a = np.eye(2)

    ad_k = np.linalg.matrix_power(ad, photons)
    a_k = np.linalg.matrix_power(a, photons)
    supercharge = np.kron(ad_k, sm)
    number_op = np.kron(ad @ a, eye_a)
    sigma_z = np.kron(eye_f, sz)
    excitation = number_op + 0.5 * (photons - 1) * sigma_z \
        + 0.5 * np.eye(space.dim)
    conserved = np.kron(a_k @ ad_k, np.diag([1.0, 0.0])) \
        + np.kron(ad_k @ a_k, np.diag([0.0, 1.0]))
    return SusyJCModel(
        photons=photons,
        space=space,
        frequency=frequency,
        splitting=splitting,
        coupling_modulus=coupling_modulus,
        coupling_argument=coupling_argument,
        supercharge=supercharge,
        supercharge_dag=supercharge.conj().T,
        conserved=conserved,
        excitation=excitation,
        number_op=number_op,
        sigma_z=sigma_z,
    )


@dataclass(frozen=True)
class BlockModel:
    """One conserved-generator sector, ready for the core pipeline.

    Two-dimensional sectors carry a ladder realization built from the
    restricted coupling operators plus the polar-form schedule of the
    restricted Hamiltonian; the trace part of the sector Hamiltonian
    travels on the scalar-offset channel.  One-dimensional sectors have
    no ladder dynamics and carry no model.
    """

    basis_indices: tuple[int, ...]
    basis_labels: tuple[str, ...]
    conserved_eigenvalue: float
    model: HamiltonianModel | None

    @property
    def dim(self) -> int:
        return len(self.basis_indices)

    @property
    def constants(self) -> StructureConstants | None:
        return None if self.model is None else self.model.realization.constants


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[BlockModel, ...]
    excluded_labels: tuple[str, ...]

    @property
    def two_dim_blocks(self) -> tuple[BlockModel, ...]:
        return tuple(b for b in self.blocks if b.dim == 2)

    @property
    def singletons(self) -> tuple[BlockModel, ...]:
        return tuple(b for b in self.blocks if b.dim == 1)


def _jc_block(model: SusyJCModel, n: int,
              sample_domain: tuple[float, float] | None = None) -> BlockModel:
    k = model.photons
    space = model.space
    lam = float(math.factorial(n + k) // math.factorial(n))
    indices = (space.index(n, "e"), space.index(n + k, "g"))
    root = math.sqrt(lam)
    raising = np.array([[0, 0], [root, 0]], dtype=complex)
    weight = np.diag([-0.5, 0.5]).astype(complex)
    realization = AlgebraRealization(
        name=f"jc-k{k}-n{n}",
        raising=raising,
        lowering=raising.conj().T,
        weight=weight,
        constants=StructureConstants(step=1.0, pairing=2.0 * lam),
        hermitian_pair=True,
        interior_mask=np.ones(2, dtype=bool),
    )
    detuning = add_functions(scale_function(model.frequency, float(k)),
                             model.splitting, scale_g=-1.0,
                             sample_domain=sample_domain)
    schedule = polar_form(detuning, model.coupling_modulus,
                          model.coupling_argument, sample_domain=sample_domain)
    offset = scale_function(model.frequency, n + k / 2.0)
    return BlockModel(
        basis_indices=indices,
        basis_labels=tuple(space.label(i) for i in indices),
        conserved_eigenvalue=lam,
        model=HamiltonianModel(realization, schedule, offset),
    )


def block_decompose(model: SusyJCModel,
                    sample_domain: tuple[float, float] | None = None) -> BlockDecomposition:
    """Split the model into conserved-operator sectors.

    Pairs {|n,e>, |n+k,g>} exist for n up to n_max - k; ground states
    |n,g> with n < k are one-dimensional sectors annihilated by the
    supercharge.  Excited states with n + k beyond the truncation have no
    partner inside the space and are reported as excluded.
    """
    k, n_max = model.photons, model.space.n_max
    blocks: list[BlockModel] = []
    for n in range(n_max - k + 1):
        blocks.append(_jc_block(model, n, sample_domain))
    for n in range(k):
        idx = model.space.index(n, "g")
        blocks.append(BlockModel(
            basis_indices=(idx,),
            basis_labels=(model.space.label(idx),),
            conserved_eigenvalue=0.0,
            model=None,
        ))
    excluded = tuple(model.space.label(model.space.index(n, "e"))
                     for n in range(n_max - k + 1, n_max + 1))
    return BlockDecomposition(blocks=tuple(blocks), excluded_labels=excluded)


def embed_block_states(block: BlockModel, states: Array, full_dim: int) -> Array:
    """Lift block-basis state vectors into the full product space."""
    states = np.atleast_2d(np.asarray(states, dtype=complex))
    if states.shape[1] != block.dim:
        raise ValueError("state dimension does not match the block")
    full = np.zeros((states.shape[0], full_dim), dtype=complex)
    full[:, list(block.basis_indices)] = states
    return full


def solve_block(block: BlockModel, grid: Array, init: AuxiliaryState,
                tol: float = 1e-12, lambda_index: int = 0,
                initial_state: Array | None = None,
                with_oracle: bool = True) -> EvolutionReport:
    """Run the core pipeline on one two-dimensional sector.

    The gauge rotation of the sector is the exponentiated restricted
    supercharge pair.  With ``initial_state`` given the sector is solved
    for that vector via the branch superposition; otherwise the
    ``lambda_index``-th weight eigenvector (descending eigenvalue order)
    is propagated.  ``with_oracle`` attaches the brute-force fidelity.
    """
    if block.model is None or block.dim != 2:
        raise ValueError("only two-dimensional sectors carry ladder dynamics")
    grid = np.asarray(grid, dtype=float)
    model = block.model
    _, theta, _ = model.schedule.values(grid)
    if init.polar == 0.0 and np.max(np.abs(np.sin(theta))) < 1e-12:
        traj = aligned_trajectory(model, grid, azimuth0=init.azimuth)
    else:
        traj = solve_auxiliary(model, init, grid, tol)
    if initial_state is not None:
        report = evolve_general(model, traj, np.asarray(initial_state, dtype=complex))
    else:
        eigvals, eigvecs = np.linalg.eigh(model.realization.weight)
        order = np.argsort(eigvals)[::-1]
        lam = float(eigvals[order[lambda_index]])
        vec = eigvecs[:, order[lambda_index]]
        report = evolve_exact(model, traj, lam, vec)
    if with_oracle:
        oracle = oracle_propagate(model, report.states[0], grid, tol=min(tol, 1e-10))
        report = EvolutionReport(
            times=report.times,
            states=report.states,
            phases=report.phases,
            defect=report.defect,
            fidelity_vs_oracle=fidelity(report.states, oracle),
        )
    return report


@dataclass(frozen=True)
class CavityModel:
    """Two-level atom coupled to a generalized single-ladder cavity.

    The cavity operators obey [step_op, ladder_down] = -weight_step *
    ladder_down (and the adjoint relation); the Hamiltonian is a pair of
    diagonal polynomials plus a ladder-exchange coupling.  The conserved
    combination step_op + weight_step*(1+sigma_z)/2 commutes with the
    Hamiltonian at all times.
    """

    instance: str
    weight_step: float
    r_coeffs: tuple[float, ...]
    s_coeffs: tuple[float, ...]
    coupling_modulus: TimeFunction
    coupling_argument: TimeFunction
    labels: tuple[str, ...]
    step_op: Array = field(repr=False)
    ladder_down: Array = field(repr=False)
    ladder_up: Array = field(repr=False)
    sigma_z: Array = field(repr=False)
    conserved: Array = field(repr=False)
    coupling_down: Array = field(repr=False)

    @property
    def dim(self) -> int:
        return self.step_op.shape[0]

    def coupling(self, t: float) -> complex:
        return self.coupling_modulus(t) * np.exp(1j * self.coupling_argument(t))

    def hamiltonian_at(self, t: float) -> Array:
        g = self.coupling(t)
        diag_r = np.polynomial.polynomial.polyval(np.diag(self.step_op).real,
                                                  self.r_coeffs)
        diag_s = np.polynomial.polynomial.polyval(np.diag(self.step_op).real,
                                                  self.s_coeffs)
        return (np.diag(diag_r).astype(complex)
                + np.diag(diag_s) @ self.sigma_z
                + g * self.coupling_down + np.conj(g) * self.coupling_down.conj().T)


def build_generalized_cavity(instance: str, params: dict) -> CavityModel:
    """Build a cavity model from one of the ladder instances.

    ``oscillator`` uses the truncated Fock ladder (params: n_max),
    ``angular-momentum`` a fixed angular momentum shell (params: l).
    Both need polynomial coefficient lists r_coeffs and s_coeffs
    (ascending powers of the step operator) and the coupling schedules
    g_modulus, g_argument.
    """
    params = dict(params)
    r_coeffs = tuple(float(c) for c in params.pop("r_coeffs"))
    s_coeffs = tuple(float(c) for c in params.pop("s_coeffs"))
    g_modulus = params.pop("g_modulus")
    g_argument = params.pop("g_argument", TimeFunction.constant(0.0))
    if instance == "oscillator":
        n_max = int(params.pop("n_max"))
        down = boson_ladder(n_max + 1)
        step_values = np.arange(n_max + 1, dtype=float)
        site_labels = [str(n) for n in range(n_max + 1)]
        weight_step = 1.0
    elif instance == "angular-momentum":
        l = params.pop("l")
        two_l = int(round(2 * l))
        if two_l <= 0 or abs(2 * l - two_l) > 1e-12:
            raise ValueError("angular momentum l must be a positive (half-)integer")
        size = two_l + 1
        m_values = -l + np.arange(size)
        down = np.zeros((size, size), dtype=complex)
        for idx in range(size - 1):
            m_hi = m_values[idx + 1]
            down[idx, idx + 1] = np.sqrt(l * (l + 1) - m_hi * (m_hi - 1))
        step_values = m_values.astype(float)
        site_labels = [f"{m:g}" for m in m_values]
        weight_step = 1.0
    else:
        raise ValueError(f"unknown cavity instance {instance!r}")
    if params:
        raise ValueError(f"unused cavity parameters: {sorted(params)}")

    size = down.shape[0]
    sp, sm, sz = _atom_ops()
    eye_site = np.eye(size)
    eye_atom = np.eye(2)
    step_op = np.kron(np.diag(step_values), eye_atom)
    sigma_z = np.kron(eye_site, sz)
    coupling_down = np.kron(down, sp)
    conserved = step_op + weight_step * 0.5 * (np.eye(2 * size) + sigma_z)
    labels = tuple(f"|{site},{lvl}>" for site in site_labels
                   for lvl in _ATOM_LEVELS)
    return CavityModel(
        instance=instance,
        weight_step=weight_step,
        r_coeffs=r_coeffs,
        s_coeffs=s_coeffs,
        coupling_modulus=g_modulus,
        coupling_argument=g_argument,
        labels=labels,
        step_op=step_op,
        ladder_down=np.kron(down, eye_atom),
        ladder_up=np.kron(down.conj().T, eye_atom),
        sigma_z=sigma_z,
        conserved=conserved,
        coupling_down=coupling_down,
    )


def hydrogenlike_cavity(l: float, alpha: float, beta: float) -> CavityModel:
    """Spin-orbit plus Zeeman coupling written as a generalized cavity.

    The orbit-projection ladder plays the cavity role; the diagonal
    polynomials and the exchange coupling are fixed by the two physical
    couplings (spin-orbit strength and field strength).
    """
    return build_generalized_cavity("angular-momentum", {
        "l": l,
        "r_coeffs": (0.0, beta),
        "s_coeffs": (beta, 0.5 * alpha),
        "g_modulus": TimeFunction.constant(0.5 * alpha),
        "g_argument": TimeFunction.constant(0.0),
    })


def _cavity_pair_coupling(model: CavityModel, e_idx: int, g_idx: int) -> complex:
    return complex(model.coupling_down[e_idx, g_idx])


def sigma_block_operators(model: CavityModel,
                          delta_eigenvalue: float) -> tuple[Array, Array, Array]:
    """Spin-1/2 triple generated by the coupling on one conserved sector.

    The exchange operators normalized by the sector value of the
    ladder-product expectation (taken on the lower, spin-down member)
    close the standard angular momentum relations on the sector.
    """
    indices = _cavity_block_indices(model, delta_eigenvalue)
    if len(indices) != 2:
        raise ValueError("sigma operators need a two-dimensional sector")
    e_idx, g_idx = indices
    sub = np.ix_(indices, indices)
    down = model.coupling_down[sub]
    up = down.conj().T
    chi = float(np.abs(_cavity_pair_coupling(model, e_idx, g_idx)) ** 2)
    if chi <= 0:
        raise ValueError("sector coupling vanishes; sigma triple undefined")
    root = np.sqrt(chi)
    sigma1 = (down + up) / (2 * root)
    sigma2 = 1j * (up - down) / (2 * root)
    sigma3 = model.sigma_z[sub] / 2
    return sigma1, sigma2, sigma3


def _cavity_block_indices(model: CavityModel, value: float) -> tuple[int, ...]:
    diag = np.diag(model.conserved).real
    hits = [i for i, d in enumerate(diag) if abs(d - value) < 1e-9]
    # Excited member first to match the sector weight diag(+1/2, -1/2).
    return tuple(sorted(hits, key=lambda i: i % 2))


def cavity_block_decompose(model: CavityModel) -> BlockDecomposition:
    """Group the basis by eigenvalue of the conserved combination."""
    diag = np.diag(model.conserved).real
    values = sorted({round(float(d), 9) for d in diag})
    blocks: list[BlockModel] = []
    for value in values:
        indices = _cavity_block_indices(model, value)
        labels = tuple(model.labels[i] for i in indices)
        if len(indices) == 1:
            blocks.append(BlockModel(indices, labels, float(value), None))
            continue
        e_idx, g_idx = indices
        pair = _cavity_pair_coupling(model, e_idx, g_idx)
        chi_root = abs(pair)
        if chi_root == 0.0:
            blocks.append(BlockModel((e_idx,), (model.labels[e_idx],),
                                     float(value), None))
            blocks.append(BlockModel((g_idx,), (model.labels[g_idx],),
                                     float(value), None))
            continue
        step_diag = np.diag(model.step_op).real
        rvals = np.polynomial.polynomial.polyval(
            np.array([step_diag[e_idx], step_diag[g_idx]]), model.r_coeffs)
        svals = np.polynomial.polynomial.polyval(
            np.array([step_diag[e_idx], step_diag[g_idx]]), model.s_coeffs)
        diag_e = rvals[0] + svals[0]
        diag_g = rvals[1] - svals[1]
        mean = 0.5 * (diag_e + diag_g)
        weight_coeff = float(diag_e - diag_g)
        raising = np.array([[0, 1], [0, 0]], dtype=complex)
        realization = AlgebraRealization(
            name=f"{model.instance}-sector-{value:g}",
            raising=raising,
            lowering=raising.conj().T,
            weight=np.diag([0.5, -0.5]).astype(complex),
            constants=StructureConstants(step=1.0, pairing=2.0),
            hermitian_pair=True,
            interior_mask=np.ones(2, dtype=bool),
        )
        schedule = polar_form(
            TimeFunction.constant(weight_coeff),
            scale_function(model.coupling_modulus, chi_root),
            model.coupling_argument,
        )
        blocks.append(BlockModel(
            basis_indices=indices,
            basis_labels=labels,
            conserved_eigenvalue=float(value),
            model=HamiltonianModel(realization, schedule,
                                   TimeFunction.constant(float(mean))),
        ))
    return BlockDecomposition(blocks=tuple(blocks), excluded_labels=())
