"""No-regret learners over density matrices and the repeated-game runner.

Learners implement a two-method protocol: ``strategy`` is the density played
this round (the maximally mixed state before any feedback), and
``observe(gain, opponents)`` absorbs the round's gain matrix.  The runner is
round-synchronous: all gains for round t are computed from round-t strategies
before any learner advances, matching full-information simultaneous play.

Feedback is the exact gain matrix of each player (full-information online
linear optimization), never a sampled payoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log, sqrt
from typing import Sequence

import numpy as np

from .equilibria import exploitability
from .games import QuantumGame, front_tensor, utility
from .tensor import (
    bloch_coords,
    check_density,
    exp_density,
    herm,
    is_hermitian,
    kron,
    lambda_max,
    maxabs,
    project_to_density,
)

DEVIATION_DETECT_TOL = 1e-9


@dataclass(frozen=True)
class Schedule:
    """Stepsize policy: a fixed eta, or restarts on epochs of doubling length.

    The doubling variant runs epochs of length ``base_epoch * 2^e`` with
    ``eta_e = sqrt(ln(d) / T_e)``, restarting the learner at each boundary;
    this turns the fixed-horizon regret guarantee into an anytime one at a
    small constant-factor cost.
    """

    kind: str = "fixed"
    eta: float = 0.1
    base_epoch: int = 8

    def __post_init__(self):
        if self.kind not in ("fixed", "doubling"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.kind == "fixed" and self.eta <= 0:
            raise ValueError("stepsize must be positive")
        if self.base_epoch < 1:
            raise ValueError("base epoch length must be >= 1")

    def epoch_length(self, epoch: int) -> int:
        return self.base_epoch * (2 ** epoch)

    def epoch_eta(self, epoch: int, dim: int) -> float:
        return sqrt(log(dim) / self.epoch_length(epoch))

    def cumulative_bound(self, t: int, dim: int) -> float:
        """Upper bound on cumulative external regret after t rounds.

        Each (partial) epoch of length tau at stepsize eta contributes at
        most ``eta * tau + ln(d) / eta`` for gains with eigenvalues in
        [-1, 1].
        """
        if t < 1:
            return 0.0
        if self.kind == "fixed":
            return self.eta * t + log(dim) / self.eta
        total = 0.0
        remaining = t
        epoch = 0
        while remaining > 0:
            t_e = self.epoch_length(epoch)
            eta_e = self.epoch_eta(epoch, dim)
            used = min(remaining, t_e)
            total += eta_e * used + log(dim) / eta_e
            remaining -= used
            epoch += 1
        return total

    def average_bound(self, t: int, dim: int) -> float:
        return self.cumulative_bound(t, dim) / t if t >= 1 else float("inf")


def fixed_schedule(eta: float) -> Schedule:
    return Schedule("fixed", eta=eta)


def doubling_schedule(base_epoch: int = 8) -> Schedule:
    return Schedule("doubling", base_epoch=base_epoch)


def _check_gain(gain: np.ndarray, dim: int) -> np.ndarray:
    gain = np.asarray(gain, dtype=complex)
    if gain.shape != (dim, dim):
        raise ValueError(f"gain shape {gain.shape} does not match learner dim {dim}")
    if not is_hermitian(gain):
        raise ValueError("gain matrix must be Hermitian")
    return gain


class MMWU:
    """Matrix multiplicative weights: play exp(eta * sum of gains), normalized.

    The exponent is shift-stabilized (top eigenvalue subtracted before
    exponentiating), so cumulative gains growing linearly in t never
    overflow.  Before any feedback the play is the maximally mixed state,
    and adding c*I to every gain leaves the iterates unchanged.
    """

    kind = "mmwu"

    def __init__(self, dim: int, schedule: Schedule):
        self.dim = int(dim)
        self.schedule = schedule
        self._sum = np.zeros((dim, dim), dtype=complex)
        self._epoch = 0
        self._in_epoch = 0
        self._cached = None

    @property
    def _eta(self) -> float:
        if self.schedule.kind == "fixed":
            return self.schedule.eta
        return self.schedule.epoch_eta(self._epoch, self.dim)

    @property
    def strategy(self) -> np.ndarray:
        if self._cached is None:
            self._cached = exp_density(self._eta * self._sum)
        return self._cached

    def observe(self, gain: np.ndarray, opponents: np.ndarray | None = None) -> None:
        gain = _check_gain(gain, self.dim)
        self._sum = herm(self._sum + gain)
        self._in_epoch += 1
        # eager epoch rollover: the first play of the next epoch is the fresh
        # maximally mixed state, so every epoch is a clean fixed-eta run
        if self.schedule.kind == "doubling" and self._in_epoch >= self.schedule.epoch_length(self._epoch):
            self._epoch += 1
            self._in_epoch = 0
            self._sum = np.zeros((self.dim, self.dim), dtype=complex)
        self._cached = None

    def average_regret_bound(self, t: int) -> float:
        return self.schedule.average_bound(t, self.dim)


class FrobeniusFTRL:
    """Follow-the-regularized-leader with the squared-Frobenius regularizer.

    Plays the Euclidean projection of ``eta * sum of gains`` onto the density
    set; the projection of the zero matrix is the maximally mixed state.
    """

    kind = "ftrl_frobenius"

    def __init__(self, dim: int, eta: float):
        if eta <= 0:
            raise ValueError("stepsize must be positive")
        self.dim = int(dim)
        self.eta = float(eta)
        self._sum = np.zeros((dim, dim), dtype=complex)
        self._cached = None

    @property
    def strategy(self) -> np.ndarray:
        if self._cached is None:
            self._cached = project_to_density(self.eta * self._sum)
        return self._cached

    def observe(self, gain: np.ndarray, opponents: np.ndarray | None = None) -> None:
        gain = _check_gain(gain, self.dim)
        self._sum = herm(self._sum + gain)
        self._cached = None

    def average_regret_bound(self, t: int) -> float:
        return float("nan")


class Constant:
    """Plays one fixed density forever (useful as an adversarial deviator)."""

    kind = "constant"

    def __init__(self, rho: np.ndarray):
        rho = check_density(np.asarray(rho, dtype=complex))
        self.dim = rho.shape[0]
        self._rho = rho

    @property
    def strategy(self) -> np.ndarray:
        return self._rho

    def observe(self, gain: np.ndarray, opponents: np.ndarray | None = None) -> None:
        pass

    def average_regret_bound(self, t: int) -> float:
        return float("nan")


def script_indices(weights: Sequence[float], t: int) -> list[int]:
    """First t component choices of the greedy discrepancy-minimizing script.

    At round s the script plays ``argmax_j (weights_j * s - count_j)``, ties
    to the lowest index, which keeps every empirical frequency within
    ``len(weights) / t`` of its target weight.
    """
    weights = np.asarray(weights, dtype=float)
    counts = np.zeros(len(weights))
    out = []
    for s in range(1, t + 1):
        j = int(np.argmax(weights * s - counts))
        counts[j] += 1
        out.append(j)
    return out


class ScriptedNoRegret:
    """Replays a shared product-state script; falls back to MMWU on deviation.

    All players derive the same deterministic component index per round from
    the mixture weights.  Each round the learner compares the opponents'
    reported joint state with the scripted one; any mismatch beyond 1e-9
    permanently switches it to MMWU on a doubling schedule restarted at the
    deviation round (the deviation round's gain is the first one fed to it).
    """

    kind = "scripted"

    def __init__(
        self,
        player: int,
        weights: Sequence[float],
        profiles: Sequence[Sequence[np.ndarray]],
        fallback_base_epoch: int = 8,
    ):
        weights = np.asarray(weights, dtype=float)
        if weights.ndim != 1 or weights.min() < -1e-12 or abs(weights.sum() - 1.0) > 1e-9:
            raise ValueError("weights must form a probability distribution")
        if len(profiles) != len(weights):
            raise ValueError("one strategy profile per mixture component required")
        self.player = int(player)
        self.weights = weights
        self.profiles = [[check_density(np.asarray(r, dtype=complex)) for r in prof] for prof in profiles]
        self.dim = self.profiles[0][self.player].shape[0]
        self.fallback_base_epoch = int(fallback_base_epoch)
        self._counts = np.zeros(len(weights))
        self._t = 0
        self._fallback: MMWU | None = None

    def _current_component(self) -> int:
        return int(np.argmax(self.weights * (self._t + 1) - self._counts))

    @property
    def strategy(self) -> np.ndarray:
        if self._fallback is not None:
            return self._fallback.strategy
        return self.profiles[self._current_component()][self.player]

    def observe(self, gain: np.ndarray, opponents: np.ndarray | None = None) -> None:
        if self._fallback is not None:
            self._fallback.observe(gain)
            return
        j = self._current_component()
        deviated = False
        if opponents is not None:
            expected = kron(*(r for p, r in enumerate(self.profiles[j]) if p != self.player))
            deviated = maxabs(np.asarray(opponents) - expected) > DEVIATION_DETECT_TOL
        self._counts[j] += 1
        self._t += 1
        if deviated:
            self._fallback = MMWU(self.dim, doubling_schedule(self.fallback_base_epoch))
            self._fallback.observe(gain)

    def average_regret_bound(self, t: int) -> float:
        return float("nan")


def scripted_team(
    weights: Sequence[float],
    profiles: Sequence[Sequence[np.ndarray]],
    fallback_base_epoch: int = 8,
) -> list[ScriptedNoRegret]:
    """One scripted learner per player, all sharing the same decomposition."""
    k = len(profiles[0])
    return [ScriptedNoRegret(i, weights, profiles, fallback_base_epoch) for i in range(k)]


def horizon_for_epsilon(setting: str, dim: int, epsilon: float, k: int | None = None) -> tuple[float, int]:
    """Stepsize and horizon guaranteeing an epsilon-certificate by time T.

    general:    eta = eps/2,     T = ceil(4 ln d / eps^2),      eps <= 2
    zero_sum:   eta = eps/4,     T = ceil(16 ln d / eps^2),     eps <= 4
    polymatrix: eta = eps/(2k),  T = ceil(4 k^2 ln d / eps^2),  eps <= 2k
    """
    if dim < 2:
        raise ValueError("register dimension must be >= 2")
    if setting == "general":
        if not 0 < epsilon <= 2:
            raise ValueError("epsilon must be in (0, 2] for general games")
        return epsilon / 2.0, ceil(4.0 * log(dim) / epsilon**2)
    if setting == "zero_sum":
        if not 0 < epsilon <= 4:
            raise ValueError("epsilon must be in (0, 4] for zero-sum games")
        return epsilon / 4.0, ceil(16.0 * log(dim) / epsilon**2)
    if setting == "polymatrix":
        if k is None or k < 2:
            raise ValueError("polymatrix setting needs the player count k")
        if not 0 < epsilon <= 2 * k:
            raise ValueError("epsilon must be in (0, 2k] for polymatrix games")
        return epsilon / (2.0 * k), ceil(4.0 * k**2 * log(dim) / epsilon**2)
    raise ValueError(f"unknown setting {setting!r}")


@dataclass
class Trajectory:
    """Checkpointed record of a repeated-game run.

    Running sums (joint product states, marginals, gain matrices, realized
    payoffs) cover the full horizon; the per-checkpoint arrays hold the CSV
    columns.  The joint average at any checkpoint is a valid density up to
    accumulated rounding (1e-6 tier), and its marginals equal the averaged
    marginals exactly by linearity.
    """

    dims: tuple[int, ...]
    T: int
    gap_mode: str
    bound_scale: float
    checkpoints: np.ndarray
    utils: np.ndarray            # (C, k) realized utility at the checkpoint round
    avg_regret: np.ndarray       # (C, k)
    gaps: np.ndarray             # (C, k) exploitability per player
    bound: np.ndarray            # (C,)
    joint_eigs: np.ndarray       # (C, n) spectrum of the round-t product state
    avg_joint_eigs: np.ndarray   # (C, n) spectrum of the running joint average
    bloch: dict[int, np.ndarray]  # player -> (C, 3), for 2-dimensional registers
    joint_sum: np.ndarray
    marginal_sums: list[np.ndarray]
    cum_gain: list[np.ndarray]
    realized: np.ndarray
    final_strategies: list[np.ndarray]

    @property
    def n_players(self) -> int:
        return len(self.dims)

    def joint_average(self) -> np.ndarray:
        return herm(self.joint_sum / self.T)

    def marginal_average(self, i: int) -> np.ndarray:
        return herm(self.marginal_sums[i] / self.T)

    def product_of_marginal_averages(self) -> np.ndarray:
        return kron(*(self.marginal_average(i) for i in range(self.n_players)))


def external_regret(traj: Trajectory, i: int, average: bool = True) -> float:
    """Regret against the best fixed density in hindsight.

    The best fixed strategy for a cumulative gain matrix is its top
    eigenprojector, so the benchmark term is ``lambda_max(sum_t G_t)``.
    """
    reg = lambda_max(traj.cum_gain[i]) - traj.realized[i]
    return reg / traj.T if average else reg


@dataclass(frozen=True)
class RegretReport:
    """Average external regret per player next to the stepsize bound."""

    avg_regret: tuple[float, ...]
    T: int
    bound: float


def regret_report(traj: Trajectory, schedule: Schedule) -> RegretReport:
    regs = tuple(external_regret(traj, i) for i in range(traj.n_players))
    bound = max(schedule.average_bound(traj.T, d) for d in traj.dims)
    return RegretReport(regs, traj.T, bound)


def run_game(
    g: QuantumGame,
    learners: Sequence,
    T: int,
    stride: int | None = None,
    gap_mode: str = "qcce",
    bound_scale: float = 1.0,
) -> Trajectory:
    """Run T synchronous rounds of self-play and record checkpoints.

    Each round every learner's gain matrix is computed from the current
    strategy profile, utilities and running sums are updated, and only then
    do all learners advance.  ``gap_mode`` selects the exploitability column:
    "qcce" evaluates deviation gaps at the running joint average, while
    "qne" evaluates them at the product of averaged marginals.  Checkpoints
    fall every ``stride`` rounds (default ``max(1, T // 1000)``) plus the
    final round.  The run is deterministic given the game and learners.
    """
    k = g.n_players
    if len(learners) != k:
        raise ValueError("one learner per player required")
    for i, ln in enumerate(learners):
        if ln.dim != g.dims[i]:
            raise ValueError(f"learner {i} dim {ln.dim} does not match register dim {g.dims[i]}")
    if T < 1:
        raise ValueError("horizon must be >= 1")
    if gap_mode not in ("qcce", "qne"):
        raise ValueError(f"unknown gap mode {gap_mode!r}")
    if stride is None:
        stride = max(1, T // 1000)
    if stride < 1:
        raise ValueError("checkpoint stride must be >= 1")

    n = g.joint_dim
    d_rest = [n // d for d in g.dims]
    fronts = [
        np.ascontiguousarray(front_tensor(g, i).reshape(g.dims[i], d_rest[i], g.dims[i], d_rest[i]))
        for i in range(k)
    ]

    joint_sum = np.zeros((n, n), dtype=complex)
    marginal_sums = [np.zeros((d, d), dtype=complex) for d in g.dims]
    cum_gain = [np.zeros((d, d), dtype=complex) for d in g.dims]
    realized = np.zeros(k)

    check_ts, utils_rows, regret_rows, gap_rows, bound_rows = [], [], [], [], []
    joint_eig_rows, avg_eig_rows = [], []
    qubit_players = [i for i, d in enumerate(g.dims) if d == 2]
    bloch_rows = {i: [] for i in qubit_players}

    strategies = [ln.strategy for ln in learners]
    for t in range(1, T + 1):
        joint = kron(*strategies)
        opponents = [kron(*(strategies[j] for j in range(k) if j != i)) for i in range(k)]
        gains = [herm(np.einsum("arbs,sr->ab", fronts[i], opponents[i])) for i in range(k)]

        joint_sum += joint
        for i in range(k):
            marginal_sums[i] += strategies[i]
            cum_gain[i] += gains[i]
            realized[i] += float(np.vdot(strategies[i], gains[i]).real)

        if t % stride == 0 or t == T:
            check_ts.append(t)
            utils_rows.append([utility(g, joint, i) for i in range(k)])
            regret_rows.append([(lambda_max(cum_gain[i]) - realized[i]) / t for i in range(k)])
            rho_bar = herm(joint_sum / t)
            if gap_mode == "qcce":
                gap_state = rho_bar
            else:
                gap_state = kron(*(herm(marginal_sums[i] / t) for i in range(k)))
            gap_rows.append([exploitability(g, i, gap_state) for i in range(k)])
            per_learner = [ln.average_regret_bound(t) for ln in learners]
            finite = [b for b in per_learner if not np.isnan(b)]
            bound_rows.append(bound_scale * max(finite) if finite else float("nan"))
            joint_eig_rows.append(np.sort(np.linalg.eigvalsh(joint))[::-1])
            avg_eig_rows.append(np.sort(np.linalg.eigvalsh(rho_bar))[::-1])
            for i in qubit_players:
                bloch_rows[i].append(bloch_coords(strategies[i]))

        for i in range(k):
            learners[i].observe(gains[i], opponents[i])
        if t < T:
            strategies = [ln.strategy for ln in learners]

    return Trajectory(
        dims=g.dims,
        T=T,
        gap_mode=gap_mode,
        bound_scale=bound_scale,
        checkpoints=np.asarray(check_ts, dtype=int),
        utils=np.asarray(utils_rows),
        avg_regret=np.asarray(regret_rows),
        gaps=np.asarray(gap_rows),
        bound=np.asarray(bound_rows),
        joint_eigs=np.asarray(joint_eig_rows),
        avg_joint_eigs=np.asarray(avg_eig_rows),
        bloch={i: np.asarray(rows) for i, rows in bloch_rows.items()},
        joint_sum=joint_sum,
        marginal_sums=marginal_sums,
        cum_gain=cum_gain,
        realized=realized,
        final_strategies=list(strategies),
    )
