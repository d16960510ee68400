"""Construction and evaluation of multiplayer quantum games.

A game assigns each player a Hermitian utility tensor on the joint register
space; payoffs are expectations ``u_i(rho) = Tr(R_i rho)``.  Supported
constructions: direct tensors, two-player zero-sum pairs, diagonal embeddings
of classical normal-form games, Bell-basis embeddings of 2x2 bimatrix games,
polymatrix graph games with edgewise two-player tensors, and seeded random
generators normalized so every achievable utility lies in [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .tensor import (
    herm,
    is_hermitian,
    kron,
    maxabs,
    partial_trace,
    partial_transpose,
    permute_registers,
    random_hermitian,
)

ZERO_SUM_TOL = 1e-9


def _freeze(m: np.ndarray) -> np.ndarray:
    m = np.ascontiguousarray(m)
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class QuantumGame:
    """k-player game: register dims and one Hermitian tensor per player."""

    dims: tuple[int, ...]
    tensors: tuple[np.ndarray, ...]
    zero_sum: bool = False

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        n = prod(dims)
        tensors = []
        for r in self.tensors:
            r = np.asarray(r, dtype=complex)
            if r.shape != (n, n):
                raise ValueError(f"utility tensor shape {r.shape} does not match joint dim {n}")
            if not is_hermitian(r):
                raise ValueError("utility tensors must be Hermitian")
            tensors.append(_freeze(herm(r)))
        if self.zero_sum and maxabs(sum(tensors)) > ZERO_SUM_TOL:
            raise ValueError("zero_sum flag set but tensors do not cancel")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "tensors", tuple(tensors))

    @property
    def n_players(self) -> int:
        return len(self.dims)

    @property
    def joint_dim(self) -> int:
        return prod(self.dims)


def utility(g: QuantumGame, rho: np.ndarray, i: int) -> float:
    """Player i's payoff Tr(R_i rho) at the joint state rho."""
    rho = np.asarray(rho, dtype=complex)
    n = g.joint_dim
    if rho.shape != (n, n):
        raise ValueError(f"state shape {rho.shape} does not match joint dim {n}")
    return float(np.vdot(g.tensors[i], rho).real)


def front_tensor(g: QuantumGame, i: int) -> np.ndarray:
    """R_i with register i permuted to the most significant slot."""
    order = (i,) + tuple(j for j in range(g.n_players) if j != i)
    return permute_registers(g.tensors[i], g.dims, order)


def gain_matrix(g: QuantumGame, i: int, rho_others: np.ndarray) -> np.ndarray:
    """Player i's gain matrix against the opponents' joint state.

    With register i brought to the front, this is the contraction
    ``Tr_rest(R_i (I_{d_i} (x) rho_others))``, i.e. the operator G on H_i
    satisfying ``<rho_i, G> = u_i(rho_i (x) rho_others)`` for every rho_i.
    """
    d = g.dims[i]
    rest = g.joint_dim // d
    rho_others = np.asarray(rho_others, dtype=complex)
    if rho_others.shape != (rest, rest):
        raise ValueError(f"opponent state shape {rho_others.shape} does not match dim {rest}")
    r4 = front_tensor(g, i).reshape(d, rest, d, rest)
    return herm(np.einsum("arbs,sr->ab", r4, rho_others))


def zero_sum_game(r: np.ndarray, d_a: int, d_b: int) -> QuantumGame:
    """Two-player game with tensors (r, -r)."""
    r = np.asarray(r, dtype=complex)
    return QuantumGame((d_a, d_b), (r, -r), zero_sum=True)


@dataclass(frozen=True)
class TwoPlayerZeroSum:
    """Zero-sum game in the bilinear convention u_A(rho, sigma) = Tr(r (rho (x) sigma^T)).

    This convention makes Alice's gain operator against sigma exactly the
    Choi superoperator of ``r`` applied to sigma, which is what the minimax
    value certificates consume.  Bob's tensor is -r implicitly.  Conversion
    to and from the plain ``QuantumGame`` convention (no transpose on sigma)
    is a partial transpose on the second factor, isolated in
    :func:`zs_from_game` / :func:`zs_to_game`.
    """

    r: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        dims = (int(self.dims[0]), int(self.dims[1]))
        r = np.asarray(self.r, dtype=complex)
        n = dims[0] * dims[1]
        if r.shape != (n, n):
            raise ValueError(f"tensor shape {r.shape} does not match dims {dims}")
        if not is_hermitian(r):
            raise ValueError("zero-sum tensor must be Hermitian")
        object.__setattr__(self, "r", _freeze(herm(r)))
        object.__setattr__(self, "dims", dims)


def zs_from_game(g: QuantumGame) -> TwoPlayerZeroSum:
    if g.n_players != 2 or not g.zero_sum:
        raise ValueError("expected a two-player zero-sum game")
    return TwoPlayerZeroSum(partial_transpose(g.tensors[0], g.dims, 1), g.dims)


def zs_to_game(zs: TwoPlayerZeroSum) -> QuantumGame:
    return zero_sum_game(partial_transpose(zs.r, zs.dims, 1), *zs.dims)


def classical_embed(payoffs: Sequence[np.ndarray]) -> QuantumGame:
    """Diagonal embedding of a classical normal-form game.

    ``payoffs[i]`` is player i's real payoff array over action profiles; the
    utility tensors are diagonal in the computational product basis, so only
    the diagonal of a joint density (a classical joint distribution) affects
    payoffs.
    """
    if not payoffs:
        raise ValueError("need at least one payoff array")
    shape = np.asarray(payoffs[0]).shape
    tensors = []
    for p in payoffs:
        p = np.asarray(p, dtype=float)
        if p.shape != shape:
            raise ValueError("payoff arrays must share one action-profile shape")
        tensors.append(np.diag(p.reshape(-1).astype(complex)))
    return QuantumGame(tuple(shape), tuple(tensors), zero_sum=maxabs(sum(tensors)) <= ZERO_SUM_TOL)


_S2 = 1.0 / np.sqrt(2.0)
# Ordered (phi+, phi-, psi+, psi-), indexed by (p, q) as 2*p + q.
BELL_BASIS = (
    np.array([_S2, 0, 0, _S2], dtype=complex),
    np.array([_S2, 0, 0, -_S2], dtype=complex),
    np.array([0, _S2, _S2, 0], dtype=complex),
    np.array([0, _S2, -_S2, 0], dtype=complex),
)


def bell_projector(p: int, q: int) -> np.ndarray:
    v = BELL_BASIS[2 * p + q]
    return np.outer(v, v.conj())


def maxent_game(a: np.ndarray, b: np.ndarray) -> QuantumGame:
    """2x2 bimatrix game with payoffs attached to the Bell basis of C^2 (x) C^2.

    ``R_1 = sum_pq a[p, q] |e_pq><e_pq|`` and likewise for b, so the
    eigenvalues of each tensor are exactly the classical payoff entries.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError("Bell-basis construction needs 2x2 payoff matrices")
    r1 = sum(a[p, q] * bell_projector(p, q) for p in range(2) for q in range(2))
    r2 = sum(b[p, q] * bell_projector(p, q) for p in range(2) for q in range(2))
    return QuantumGame((2, 2), (r1, r2), zero_sum=maxabs(r1 + r2) <= ZERO_SUM_TOL)


@dataclass(frozen=True)
class PolymatrixGame:
    """Graph game: every edge (i, j) holds two-player tensors R_ij and R_ji.

    ``edges`` maps canonical pairs (i, j) with i < j to ``(r_ij, r_ji)`` where
    r_ij lives on H_i (x) H_j (player i's payoff tensor for that edge) and
    r_ji on H_j (x) H_i.
    """

    dims: tuple[int, ...]
    edges: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        k = len(dims)
        edges = {}
        for (i, j), (r_ij, r_ji) in self.edges.items():
            if not (0 <= i < k and 0 <= j < k) or i == j:
                raise ValueError(f"invalid edge ({i}, {j})")
            if i > j:
                i, j, r_ij, r_ji = j, i, r_ji, r_ij
            nij = dims[i] * dims[j]
            r_ij = np.asarray(r_ij, dtype=complex)
            r_ji = np.asarray(r_ji, dtype=complex)
            if r_ij.shape != (nij, nij) or r_ji.shape != (nij, nij):
                raise ValueError(f"edge ({i}, {j}) tensor shapes do not match register dims")
            if not (is_hermitian(r_ij) and is_hermitian(r_ji)):
                raise ValueError("edge tensors must be Hermitian")
            edges[(i, j)] = (_freeze(herm(r_ij)), _freeze(herm(r_ji)))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "edges", edges)

    @property
    def n_players(self) -> int:
        return len(self.dims)

    def neighbors(self, i: int) -> list[int]:
        out = [j for (a, j) in self.edges if a == i] + [a for (a, j) in self.edges if j == i]
        return sorted(out)


def polymatrix_utility(pg: PolymatrixGame, rho: np.ndarray, i: int) -> float:
    """Edgewise payoff sum: u_i = sum_j Tr(Tr_{-ij}(rho) R_ij)."""
    total = 0.0
    for (a, b), (r_ab, r_ba) in pg.edges.items():
        if i not in (a, b):
            continue
        rho_ab = partial_trace(rho, pg.dims, keep=(a, b))
        if i == a:
            total += float(np.vdot(r_ab, rho_ab).real)
        else:
            rho_ba = permute_registers(rho_ab, (pg.dims[a], pg.dims[b]), (1, 0))
            total += float(np.vdot(r_ba, rho_ba).real)
    return total


def _embed_edge(r: np.ndarray, dims: Sequence[int], i: int, j: int) -> np.ndarray:
    """Place a two-register operator on registers (i, j), identity elsewhere."""
    k = len(dims)
    others = [m for m in range(k) if m not in (i, j)]
    rest = prod(dims[m] for m in others) if others else 1
    layout = (i, j, *others)
    m = kron(r, np.eye(rest, dtype=complex)) if others else np.asarray(r, dtype=complex)
    back = tuple(layout.index(s) for s in range(k))
    return permute_registers(m, tuple(dims[p] for p in layout), back)


def polymatrix_to_qg(pg: PolymatrixGame) -> QuantumGame:
    """Lift edge tensors to joint-space tensors R_i = sum_j R_ij (x) I_rest."""
    k = pg.n_players
    n = prod(pg.dims)
    tensors = [np.zeros((n, n), dtype=complex) for _ in range(k)]
    for (i, j), (r_ij, r_ji) in pg.edges.items():
        tensors[i] = tensors[i] + _embed_edge(r_ij, pg.dims, i, j)
        tensors[j] = tensors[j] + _embed_edge(r_ji, pg.dims, j, i)
    return QuantumGame(pg.dims, tuple(tensors), zero_sum=maxabs(sum(tensors)) <= ZERO_SUM_TOL)


def random_game(dims: Sequence[int], seed: int, kind: str = "general") -> QuantumGame:
    """Seeded random game with every utility tensor at spectral norm one.

    Entries are independent standard complex Gaussians, Hermitized, then
    scaled so ``||R_i||_spec = 1``, which bounds every achievable utility in
    [-1, 1].  Identical seeds produce bitwise-identical games.
    """
    dims = tuple(int(d) for d in dims)
    n = prod(dims)
    rng = np.random.default_rng(seed)
    if kind == "general":
        tensors = tuple(random_hermitian(n, rng, norm=1.0) for _ in dims)
        return QuantumGame(dims, tensors)
    if kind == "zero_sum":
        if len(dims) != 2:
            raise ValueError("zero-sum generation needs exactly two players")
        r = random_hermitian(n, rng, norm=1.0)
        return zero_sum_game(r, *dims)
    raise ValueError(f"unknown game kind {kind!r}")


def graph_edges(name: str, k: int) -> list[tuple[int, int]]:
    """Named interaction graphs: cycle, path, complete."""
    if k < 2:
        raise ValueError("graphs need at least two players")
    if name == "cycle":
        if k == 2:
            return [(0, 1)]
        return [(i, (i + 1) % k) for i in range(k)]
    if name == "path":
        return [(i, i + 1) for i in range(k - 1)]
    if name == "complete":
        return [(i, j) for i in range(k) for j in range(i + 1, k)]
    raise ValueError(f"unknown graph {name!r}")


def random_polymatrix(
    dims: Sequence[int],
    edges: Sequence[tuple[int, int]],
    seed: int,
    pairwise_zero_sum: bool = True,
) -> PolymatrixGame:
    """Seeded random polymatrix game with utilities bounded in [-1, 1].

    Edge tensors are drawn at spectral norm 1 / max_degree, so each player's
    summed payoff stays in [-1, 1].  With ``pairwise_zero_sum`` every edge
    satisfies R_ji = -swap(R_ij), a sufficient (strictly stronger than
    necessary) construction for the global zero-sum property.
    """
    dims = tuple(int(d) for d in dims)
    rng = np.random.default_rng(seed)
    canonical = []
    degree = [0] * len(dims)
    for (i, j) in edges:
        i, j = (i, j) if i < j else (j, i)
        canonical.append((i, j))
        degree[i] += 1
        degree[j] += 1
    if len(set(canonical)) != len(canonical):
        raise ValueError("duplicate edges")
    scale = 1.0 / max(degree)
    built = {}
    for (i, j) in canonical:
        nij = dims[i] * dims[j]
        r_ij = random_hermitian(nij, rng, norm=scale)
        if pairwise_zero_sum:
            r_ji = -permute_registers(r_ij, (dims[i], dims[j]), (1, 0))
        else:
            r_ji = random_hermitian(nij, rng, norm=scale)
        built[(i, j)] = (r_ij, r_ji)
    return PolymatrixGame(dims, built)
