"""Exact propagation of time-dependent three-generator quantum systems.

The package covers Hamiltonians of the form

    H(t) = w(t) * (sin(theta)/2 * e^{-i phi} * raising
                   + sin(theta)/2 * e^{+i phi} * lowering
                   + cos(theta) * weight)

where the three generators close a ladder algebra

    [raising, lowering] = pairing * weight
    [weight, raising]   = +step * raising
    [weight, lowering]  = -step * lowering.

A dynamical invariant with the same ladder structure is steered by two
auxiliary angles; a gauge rotation built from the ladder pair maps it onto
the static weight generator, which yields closed-form states and a clean
split of the accumulated phase into dynamical and geometric parts.  Every
closed-form result can be cross-checked against a brute-force integration
of the Schrodinger equation.
"""

from trigen.algebra import (
    AlgebraRealization,
    StructureConstants,
    commutator,
    gho_realization,
    schwinger_su2,
    spin_j,
    su11_discrete,
    two_level_realization,
    verify_realization,
)
from trigen.schedules import (
    CoefficientSchedule,
    HamiltonianModel,
    TimeFunction,
    hamiltonian_at,
    model_catalog,
)
from trigen.invariant import (
    AuxiliaryState,
    AuxiliaryTrajectory,
    ClosureConstants,
    auxiliary_residual,
    auxiliary_rhs,
    closure_constants,
    invariant_at,
    invariant_defect,
    invariant_spectrum_drift,
    solve_auxiliary,
)
from trigen.transform import (
    GaugeOperator,
    build_gauge,
    conjugated_invariant,
    effective_coefficient,
    effective_hamiltonian_numeric,
    matrix_exponential,
)
from trigen.evolution import (
    EvolutionReport,
    PhaseHistory,
    accumulate_phases,
    cyclic_geometric_phase,
    evolve_exact,
    evolve_general,
    fidelity,
    lr_phase,
    oracle_propagate,
    phase_integrands,
)
from trigen.subspace import (
    BlockModel,
    CavityModel,
    SusyJCModel,
    block_decompose,
    build_generalized_cavity,
    build_susy_jc,
    cavity_block_decompose,
    embed_block_states,
    hydrogenlike_cavity,
    sigma_block_operators,
    solve_block,
)
from trigen.errors import IntegrationError, ScenarioError, SingularAngleError

__version__ = "0.1.0"
