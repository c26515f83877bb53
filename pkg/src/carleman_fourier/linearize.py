"""Lifted state and the matrix-free truncated lifted operator.

Lifting replaces the nonlinear ODE in x by a linear ODE on the blocks
Psi_j = (e^{ix})^{tensor j}, j = 1..N.  The generator is block upper
bidiagonal: block j of d Psi/dt equals B_j^(0) Psi_j + B_{j+1}^(1) Psi_{j+1}
(the last block drops the coupling term).  B_j^(0) is diagonal in the tensor
enumeration and B_{j+1}^(1) inserts the stacked-row coupling matrix at each
of the j digit positions; both are applied matrix-free through the kernels
in _kernels (numba by default, pure numpy fallback via CFL_BACKEND=numpy).

Dense assembly is a test/diagnostic path guarded by a size budget
(CFL_DENSE_BUDGET, default 4096 total rows).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ._kernels import apply_b0 as _apply_b0_kernel
from ._kernels import apply_b1 as _apply_b1_kernel
from .errors import BudgetError, ConfigError
from .norms import vector_p_norm
from .problem import RescaledProblem

DEFAULT_DENSE_BUDGET = 4096
DEFAULT_STATE_BUDGET = 1 << 22  # total complex entries across all blocks


def dense_budget() -> int:
    raw = os.environ.get("CFL_DENSE_BUDGET")
    if raw is None:
        return DEFAULT_DENSE_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"CFL_DENSE_BUDGET is not an integer: {raw!r}") from exc
    if value < 1:
        raise ConfigError("CFL_DENSE_BUDGET must be positive")
    return value


def total_size(n: int, order: int) -> int:
    """sum_{j=1..N} n^j, the length of the concatenated (unpadded) state."""
    return sum(n ** j for j in range(1, order + 1))


@dataclass
class LiftedState:
    """Blocks Psi_j in C^{n^j}, j = 1..N, in tensor enumeration."""

    order: int
    blocks: list

    def __post_init__(self):
        if self.order < 1:
            raise ConfigError("LiftedState: order must be >= 1")
        if len(self.blocks) != self.order:
            raise ConfigError("LiftedState: expected one block per level")
        n = self.n
        for j, block in enumerate(self.blocks, start=1):
            if block.shape != (n ** j,):
                raise ConfigError(
                    f"LiftedState: block {j} has length {block.shape}, "
                    f"expected {n ** j}"
                )

    @property
    def n(self) -> int:
        return int(self.blocks[0].shape[0])

    def copy(self) -> "LiftedState":
        return LiftedState(self.order, [b.copy() for b in self.blocks])

    def to_vector(self) -> np.ndarray:
        """Concatenated unpadded layout (lengths n^j)."""
        return np.concatenate(self.blocks)

    def norm(self, p: float = 2) -> float:
        return vector_p_norm(self.to_vector(), p)

    def all_finite(self) -> bool:
        return all(np.isfinite(b).all() for b in self.blocks)

    @classmethod
    def from_vector(cls, n: int, order: int, vec: np.ndarray) -> "LiftedState":
        if vec.shape != (total_size(n, order),):
            raise ConfigError("from_vector: length mismatch")
        blocks, at = [], 0
        for j in range(1, order + 1):
            blocks.append(np.asarray(vec[at:at + n ** j], dtype=complex))
            at += n ** j
        return cls(order, blocks)


def padded_index(n: int, order: int, level: int, tensor_index: int) -> int:
    """Index of entry `tensor_index` of block `level` in the zero-padded
    N n^N register layout used for dimensional bookkeeping.

    Block j sits in segment [(j-1) n^N, j n^N); inside the segment the
    leading N-j digits are pinned to symbol 0, so the entry keeps its flat
    tensor offset.
    """
    if not 1 <= level <= order:
        raise ConfigError(f"padded_index: level {level} outside 1..{order}")
    if not 0 <= tensor_index < n ** level:
        raise ConfigError("padded_index: tensor index out of range")
    return (level - 1) * n ** order + tensor_index


def to_padded(state: LiftedState) -> np.ndarray:
    """Embed the unpadded blocks into the N n^N padded register layout."""
    n, order = state.n, state.order
    out = np.zeros(order * n ** order, dtype=complex)
    for level, block in enumerate(state.blocks, start=1):
        base = (level - 1) * n ** order
        out[base:base + block.shape[0]] = block
    return out


def lift_initial(rescaled: RescaledProblem, order: int,
                 state_budget: int = DEFAULT_STATE_BUDGET) -> LiftedState:
    """Initial lifted state: block j is the j-th Kronecker power of w0
    (leftmost factor most significant)."""
    if order < 1:
        raise ConfigError("lift_initial: order must be >= 1")
    n = rescaled.n
    if total_size(n, order) > state_budget:
        raise BudgetError(
            f"lift_initial: state size {total_size(n, order)} exceeds "
            f"budget {state_budget}"
        )
    blocks = [rescaled.w0.copy()]
    for _ in range(order - 1):
        blocks.append(np.kron(blocks[-1], rescaled.w0))
    return LiftedState(order, blocks)


def lift_point(w: np.ndarray, order: int) -> LiftedState:
    """Lift an arbitrary point w = e^{ix} (tensor powers of w)."""
    w = np.asarray(w, dtype=complex).ravel()
    blocks = [w.copy()]
    for _ in range(order - 1):
        blocks.append(np.kron(blocks[-1], w))
    return LiftedState(order, blocks)


def apply_B0(j: int, f0: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Diagonal block action: entry l is scaled by i (count(l) . F0)."""
    f0 = np.asarray(f0, dtype=complex).ravel()
    n = f0.shape[0]
    v = np.asarray(v, dtype=complex).ravel()
    if v.shape != (n ** j,):
        raise ConfigError(f"apply_B0: block must have length n^j = {n ** j}")
    return _apply_b0_kernel(n, j, f0, v)


def apply_B1(j: int, f1: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Coupling action C^{n^{j+1}} -> C^{n^j}: the stacked-row matrix built
    from F1 is inserted at each of the j digit positions and summed."""
    f1 = np.atleast_2d(np.asarray(f1, dtype=complex))
    n = f1.shape[0]
    v = np.asarray(v, dtype=complex).ravel()
    if v.shape != (n ** (j + 1),):
        raise ConfigError(
            f"apply_B1: block must have length n^(j+1) = {n ** (j + 1)}"
        )
    return _apply_b1_kernel(n, j, f1, v)


@dataclass
class LinearOperatorLN:
    """Matrix-free truncated lifted generator (block upper bidiagonal)."""

    order: int
    n: int
    f0: np.ndarray
    f1: np.ndarray

    def __post_init__(self):
        self.f0 = np.asarray(self.f0, dtype=complex).ravel()
        self.f1 = np.atleast_2d(np.asarray(self.f1, dtype=complex))
        if self.order < 1:
            raise ConfigError("LinearOperatorLN: order must be >= 1")
        if self.f0.shape != (self.n,) or self.f1.shape != (self.n, self.n):
            raise ConfigError("LinearOperatorLN: coefficient shapes inconsistent")

    @classmethod
    def from_rescaled(cls, rescaled: RescaledProblem, order: int) -> "LinearOperatorLN":
        return cls(order=order, n=rescaled.n, f0=rescaled.f0, f1=rescaled.f1)

    def apply(self, state: LiftedState) -> LiftedState:
        return apply_LN(self, state)

    @property
    def size(self) -> int:
        return total_size(self.n, self.order)


def apply_LN(op: LinearOperatorLN, state: LiftedState) -> LiftedState:
    """Action of the truncated generator: block j of the output is
    B_j^(0) Psi_j + B_{j+1}^(1) Psi_{j+1}, with the coupling term dropped on
    the last block."""
    if state.order != op.order:
        raise ConfigError("apply_LN: state and operator order differ")
    if state.n != op.n:
        raise ConfigError("apply_LN: state and operator dimension differ")
    out = []
    for j in range(1, op.order + 1):
        block = apply_B0(j, op.f0, state.blocks[j - 1])
        if j < op.order:
            block = block + apply_B1(j, op.f1, state.blocks[j])
        out.append(block)
    return LiftedState(op.order, out)


def dense_f1_tilde(f1: np.ndarray) -> np.ndarray:
    """Stacked-row coupling matrix (n x n^2): row r holds row r of F1 in
    column block r."""
    f1 = np.atleast_2d(np.asarray(f1, dtype=complex))
    n = f1.shape[0]
    out = np.zeros((n, n * n), dtype=complex)
    for r in range(n):
        out[r, r * n:(r + 1) * n] = f1[r]
    return out


def apply_b0_diag(n: int, j: int, f0: np.ndarray) -> np.ndarray:
    weight = np.zeros((n,) * j, dtype=complex)
    for a in range(j):
        shape = [1] * j
        shape[a] = n
        weight += f0.reshape(shape)
    return 1j * weight.reshape(-1)


def dense_B1(j: int, f1: np.ndarray) -> np.ndarray:
    """Dense coupling block n^j x n^{j+1} via Kronecker assembly."""
    f1 = np.atleast_2d(np.asarray(f1, dtype=complex))
    n = f1.shape[0]
    tilde = 1j * dense_f1_tilde(f1)
    out = np.zeros((n ** j, n ** (j + 1)), dtype=complex)
    for a in range(j):
        term = np.kron(np.eye(n ** a), np.kron(tilde, np.eye(n ** (j - 1 - a))))
        out += term
    return out


def dense_LN(op: LinearOperatorLN, budget: int | None = None) -> np.ndarray:
    """Explicit matrix of the truncated generator in the unpadded layout.

    Guarded by the dense budget; the matrix-free path is the primary
    representation and this assembly exists for diagnostics and oracles.
    """
    cap = dense_budget() if budget is None else budget
    size = op.size
    if size > cap:
        raise BudgetError(
            f"dense_LN: size {size} exceeds dense budget {cap} "
            "(override with CFL_DENSE_BUDGET)"
        )
    n = op.n
    out = np.zeros((size, size), dtype=complex)
    offsets = np.cumsum([0] + [n ** j for j in range(1, op.order + 1)])
    for j in range(1, op.order + 1):
        r0, r1 = offsets[j - 1], offsets[j]
        out[r0:r1, r0:r1] = np.diag(apply_b0_diag(n, j, op.f0))
        if j < op.order:
            out[r0:r1, r1:offsets[j + 1]] = dense_B1(j, op.f1)
    return out
