"""Bit-commitment simulation over entanglement-breaking depolarizing channels.

Layers, bottom up: ``linalg`` (dense two-qubit operator algebra),
``states`` and ``channels`` (the protocol's physics), ``entanglement``
(concurrence, separability, the channel factorization law), ``protocol``
(session state machines plus a seeded Monte Carlo harness), ``security``
(hiding and binding bounds), ``cli`` (experiment runner).
"""

__version__ = "0.1.0"

from .channels import (
    DepolarizingChannel,
    KrausChannel,
    NoiseLocation,
    as_kraus,
    channel_apply,
    choi,
    depolarize_apply,
    is_entanglement_breaking,
    lift_apply,
)
from .entanglement import (
    ConcurrenceResult,
    concurrence,
    eb_threshold,
    factorization_residual,
    is_separable,
)
from .linalg import (
    eig_hermitian,
    fidelity,
    is_psd,
    kron,
    partial_trace,
    partial_transpose,
    trace_distance,
)
from .protocol import (
    EprAlice,
    HonestAlice,
    MonteCarloSummary,
    ProtocolConfig,
    RoundRecord,
    Transcript,
    VerificationReport,
    commit_cheating,
    commit_honest,
    derive_rng,
    monte_carlo,
    open_and_steer,
    run_session,
    verify,
)
from .security import (
    BindingReport,
    CheatStrategy,
    HidingReport,
    alice_binding_attack,
    bell_strategy,
    binding_curve,
    bob_cheat_probability,
)
from .states import (
    DIAGONAL,
    RECTILINEAR,
    Bb84Symbol,
    DensityMatrix,
    ProjectiveBasis,
    bb84_pair_mixture,
    bb84_projector,
    bb84_state,
    bell_psi_plus,
    cheat_state,
    encoding_basis,
    isotropic,
    measure,
    measure_joint,
)

__all__ = [
    "__version__",
    "Bb84Symbol",
    "BindingReport",
    "CheatStrategy",
    "ConcurrenceResult",
    "DIAGONAL",
    "DensityMatrix",
    "DepolarizingChannel",
    "EprAlice",
    "HidingReport",
    "HonestAlice",
    "KrausChannel",
    "MonteCarloSummary",
    "NoiseLocation",
    "ProjectiveBasis",
    "ProtocolConfig",
    "RECTILINEAR",
    "RoundRecord",
    "Transcript",
    "VerificationReport",
    "alice_binding_attack",
    "as_kraus",
    "bb84_pair_mixture",
    "bb84_projector",
    "bb84_state",
    "bell_psi_plus",
    "bell_strategy",
    "binding_curve",
    "bob_cheat_probability",
    "channel_apply",
    "cheat_state",
    "choi",
    "commit_cheating",
    "commit_honest",
    "concurrence",
    "depolarize_apply",
    "derive_rng",
    "eb_threshold",
    "eig_hermitian",
    "encoding_basis",
    "factorization_residual",
    "fidelity",
    "is_entanglement_breaking",
    "is_psd",
    "is_separable",
    "isotropic",
    "kron",
    "lift_apply",
    "measure",
    "measure_joint",
    "monte_carlo",
    "open_and_steer",
    "partial_trace",
    "partial_transpose",
    "run_session",
    "trace_distance",
    "verify",
]
