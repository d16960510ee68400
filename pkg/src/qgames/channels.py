"""Superoperators stored canonically as Choi matrices.

A map ``Theta: L(B) -> L(A)`` is identified with the matrix
``C = sum_ij Theta(E_ij) (x) E_ij`` on the output-then-input space ``A (x) B``,
where ``E_ij`` is the standard matrix-unit basis of ``L(B)``.  Applying the
map is the contraction ``Theta(X) = Tr_B(C (I_A (x) X^T))``, the transpose
taken in the computational basis of the stored matrix; no basis parameter is
exposed.  Complete positivity is an eigenvalue check on ``C``,
trace preservation is ``Tr_A(C) = I_B``, and unitality is ``Tr_B(C) = I_A``.
(Some texts attach different labels to the adjoint-side version of the
trace-preservation condition; here the names above are the contract.)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .tensor import (
    check_density,
    dagger,
    herm,
    is_hermitian,
    kron,
    lambda_min,
    maxabs,
    partial_trace,
    permute_registers,
)

CPTP_TOL = 1e-8


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi matrix of a Hermiticity-preserving superoperator L(B) -> L(A)."""

    matrix: np.ndarray
    out_dim: int
    in_dim: int
    kind: str = "general"

    def __post_init__(self):
        n = self.out_dim * self.in_dim
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (n, n):
            raise ValueError(f"Choi matrix shape {m.shape} does not match out {self.out_dim} x in {self.in_dim}")
        if not is_hermitian(m):
            raise ValueError("Choi matrix must be Hermitian (Hermiticity-preserving maps only)")
        m = herm(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def _tensor(self) -> np.ndarray:
        return self.matrix.reshape(self.out_dim, self.in_dim, self.out_dim, self.in_dim)


def choi_of_map(fn: Callable[[np.ndarray], np.ndarray], in_dim: int) -> np.ndarray:
    """Assemble sum_ij fn(E_ij) (x) E_ij column by column."""
    probe = np.zeros((in_dim, in_dim), dtype=complex)
    probe[0, 0] = 1.0
    out_dim = np.asarray(fn(probe)).shape[0]
    c = np.zeros((out_dim * in_dim, out_dim * in_dim), dtype=complex)
    for i in range(in_dim):
        for j in range(in_dim):
            e = np.zeros((in_dim, in_dim), dtype=complex)
            e[i, j] = 1.0
            c += kron(np.asarray(fn(e), dtype=complex), e)
    return c


def choi_of_identity(dim: int) -> ChoiMatrix:
    """Identity channel: rank one, trace ``dim``, positive semidefinite."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    u = np.eye(dim, dtype=complex).reshape(-1)
    return ChoiMatrix(np.outer(u, u.conj()), dim, dim, kind="identity")


def replacement_channel(target: np.ndarray) -> ChoiMatrix:
    """The constant map X -> Tr(X) * target; Choi matrix target (x) I."""
    target = check_density(np.asarray(target, dtype=complex))
    d = target.shape[0]
    return ChoiMatrix(kron(target, np.eye(d, dtype=complex)), d, d, kind="replacement")


def unitary_channel(u: np.ndarray) -> ChoiMatrix:
    """Conjugation X -> U X U^dag, assembled from its action on matrix units."""
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    if u.shape != (d, d) or maxabs(dagger(u) @ u - np.eye(d)) > 1e-9:
        raise ValueError("matrix is not unitary within 1e-9")
    return ChoiMatrix(choi_of_map(lambda x: u @ x @ dagger(u), d), d, d, kind="unitary")


def apply_superop(c: ChoiMatrix, x: np.ndarray) -> np.ndarray:
    """Theta(X) = Tr_B(C (I_A (x) X^T)), exactly linear in X."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (c.in_dim, c.in_dim):
        raise ValueError(f"input shape {x.shape} does not match channel input dim {c.in_dim}")
    return np.einsum("ambn,mn->ab", c._tensor, x)


def apply_adjoint(c: ChoiMatrix, a: np.ndarray) -> np.ndarray:
    """Theta^dag(A) = (Tr_A(C (A (x) I_B)))^T.

    This is the unique map satisfying <A, Theta(B)> = <Theta^dag(A), B> on
    Hermitian inputs, which is the contract the tests pin down.
    """
    a = np.asarray(a, dtype=complex)
    if a.shape != (c.out_dim, c.out_dim):
        raise ValueError(f"input shape {a.shape} does not match channel output dim {c.out_dim}")
    return np.einsum("ambn,ba->nm", c._tensor, a)


def is_completely_positive(c: ChoiMatrix, tol: float = 1e-9) -> bool:
    return lambda_min(c.matrix) >= -tol


def is_trace_preserving(c: ChoiMatrix, tol: float = 1e-9) -> bool:
    tr_a = partial_trace(c.matrix, (c.out_dim, c.in_dim), keep=(1,))
    return maxabs(tr_a - np.eye(c.in_dim)) <= tol


def is_unital(c: ChoiMatrix, tol: float = 1e-9) -> bool:
    tr_b = partial_trace(c.matrix, (c.out_dim, c.in_dim), keep=(0,))
    return maxabs(tr_b - np.eye(c.out_dim)) <= tol


def is_cptp(c: ChoiMatrix, tol: float = CPTP_TOL) -> bool:
    return is_completely_positive(c, tol) and is_trace_preserving(c, tol)


def lift_channel(c: ChoiMatrix, dims: Sequence[int], i: int, tol: float = CPTP_TOL) -> Callable[[np.ndarray], np.ndarray]:
    """Extend a single-register channel to ``phi_i (x) id`` on the joint space.

    Permutes register ``i`` to the front, applies the superoperator blockwise
    on the first factor, and permutes back.  The channel must be CPTP and
    square on register ``i``; the returned function maps densities to
    densities.
    """
    dims = tuple(int(d) for d in dims)
    k = len(dims)
    if not 0 <= i < k:
        raise ValueError(f"player index {i} out of range")
    if c.in_dim != dims[i] or c.out_dim != dims[i]:
        raise ValueError(f"channel dims ({c.out_dim}, {c.in_dim}) do not match register {i} dim {dims[i]}")
    if not is_cptp(c, tol):
        raise ValueError("lifting requires a CPTP channel")
    d = dims[i]
    rest = 1
    for j, dj in enumerate(dims):
        if j != i:
            rest *= dj
    front = (i,) + tuple(j for j in range(k) if j != i)
    dims_front = tuple(dims[p] for p in front)
    back = tuple(front.index(r) for r in range(k))
    c4 = c._tensor

    def lifted(rho: np.ndarray) -> np.ndarray:
        rho_f = permute_registers(rho, dims, front).reshape(d, rest, d, rest)
        out = np.einsum("cadb,arbs->crds", c4, rho_f).reshape(d * rest, d * rest)
        return permute_registers(out, dims_front, back)

    return lifted
