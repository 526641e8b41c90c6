"""Hiding and binding metrics for the noisy commitment.

Hiding: the receiver's best guess of an honestly committed bit succeeds
with probability 1/2 + max(D, D')/2 where D is the trace distance
between the two bit encodings and D' the same distance after the
channel. The scheme's encodings both average to I/2, so it is perfectly
hiding.

Binding: a cheating sender who committed half of an entangled pair picks
a measurement on her half to steer the receiver's state toward the bit
she now wants to open. Her figure of merit is the squared fidelity
between the receiver's conditional state and the announced carrier,
maximized over announcement after she sees each outcome. The search over
steering bases is an exhaustive (theta, phi) grid; at two parameters on
a compact domain this is oracle-grade and derivative-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import DepolarizingChannel, KrausChannel, channel_apply, lift_apply
from .linalg import eig_hermitian, fidelity, trace_distance
from .states import (
    DensityMatrix,
    ProjectiveBasis,
    cheat_state,
    joint_outcome_decomposition,
)


@dataclass(frozen=True, eq=False)
class CheatStrategy:
    """Entangling amplitudes plus the steering-search resolution.

    ``a0`` and ``a1`` are the single-qubit amplitudes of the committed
    pair |a0>|0> + |a1>|1>; ``steer_grid`` is the (theta, phi) resolution
    of the candidate-basis grid.
    """

    a0: np.ndarray
    a1: np.ndarray
    steer_grid: tuple[int, int] = (64, 64)

    def __post_init__(self):
        for name in ("a0", "a1"):
            v = np.asarray(getattr(self, name), dtype=complex).reshape(-1)
            if v.shape != (2,):
                raise ValueError(f"{name} must be a single-qubit state vector")
            n = np.linalg.norm(v)
            if abs(n - 1.0) > 1e-9:
                raise ValueError(f"{name} must be normalized, got norm {n!r}")
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        nt, np_ = self.steer_grid
        if nt < 2 or np_ < 2:
            raise ValueError(f"steer_grid needs >= 2 points per axis, got {self.steer_grid}")


def bell_strategy(steer_grid: tuple[int, int] = (64, 64)) -> CheatStrategy:
    """The canonical attack: commit half of a maximally entangled pair."""
    return CheatStrategy(
        a0=np.array([1, 0], dtype=complex),
        a1=np.array([0, 1], dtype=complex),
        steer_grid=steer_grid,
    )


@dataclass(frozen=True)
class HidingReport:
    delta_raw: float
    delta_channel: float
    p_bcheat: float


@dataclass(frozen=True, eq=False)
class BindingReport:
    """Best steering basis with the objective over the whole grid.

    ``fidelity_grid`` is theta-major: entry ``i * n_phi + j`` belongs to
    ``(theta_i, phi_j)``. Ties resolve to the lowest index.
    """

    best_basis: ProjectiveBasis
    best_fidelity_sq: float
    fidelity_grid: np.ndarray


def bob_cheat_probability(
    sigma0: DensityMatrix, sigma1: DensityMatrix, channel: KrausChannel | DepolarizingChannel
) -> HidingReport:
    """Receiver's guessing probability 1/2 + max(D, D')/2 for the two encodings.

    Both distances are computed as written even though the depolarizing
    family can only contract them (D' = q D), so the raw term decides.
    """
    delta_raw = trace_distance(sigma0, sigma1)
    delta_channel = trace_distance(
        channel_apply(channel, sigma0), channel_apply(channel, sigma1)
    )
    return HidingReport(
        delta_raw=delta_raw,
        delta_channel=delta_channel,
        p_bcheat=0.5 + max(delta_raw, delta_channel) / 2.0,
    )


def _orthogonal_variant(target: DensityMatrix) -> DensityMatrix:
    """The other carrier of the target's encoding: its minor eigenstate."""
    _, v = eig_hermitian(target.mat, vectors=True)
    return DensityMatrix.from_pure(v[:, -1], (2,))


def _steering_objective(
    rho_out: DensityMatrix,
    basis: ProjectiveBasis,
    announcements: tuple[DensityMatrix, ...],
) -> float:
    obj = 0.0
    for p, cond in joint_outcome_decomposition(rho_out, "A", basis):
        if cond is None:
            continue
        obj += p * max(fidelity(cond, t) ** 2 for t in announcements)
    return obj


def alice_binding_attack(
    strategy: CheatStrategy, channel: DepolarizingChannel, target: DensityMatrix
) -> BindingReport:
    """Grid-search the sender's steering measurement.

    The objective at each basis is the outcome-weighted best squared
    fidelity between the receiver's conditional state and an
    announcement, where the sender may announce either variant of the
    target's encoding after seeing her outcome. This is the reading most
    generous to the sender.
    """
    rho_out = lift_apply(channel, cheat_state(strategy.a0, strategy.a1))
    announcements = (target, _orthogonal_variant(target))
    n_theta, n_phi = strategy.steer_grid
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)

    grid = np.empty(n_theta * n_phi)
    for i, theta in enumerate(thetas):
        for j, phi in enumerate(phis):
            basis = ProjectiveBasis(float(theta), float(phi))
            grid[i * n_phi + j] = _steering_objective(rho_out, basis, announcements)
    best = int(np.argmax(grid))
    best_basis = ProjectiveBasis(float(thetas[best // n_phi]), float(phis[best % n_phi]))
    grid.setflags(write=False)
    return BindingReport(
        best_basis=best_basis,
        best_fidelity_sq=float(grid[best]),
        fidelity_grid=grid,
    )


def binding_curve(
    strategy: CheatStrategy, q_grid, target: DensityMatrix
) -> list[tuple[float, float]]:
    """Best steering objective as a function of the channel parameter."""
    out = []
    for q in q_grid:
        report = alice_binding_attack(strategy, DepolarizingChannel(q), target)
        out.append((float(q), report.best_fidelity_sq))
    return out
