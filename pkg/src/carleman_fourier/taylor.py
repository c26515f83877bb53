"""Truncated-Taylor time stepping for the lifted linear ODE.

The propagator over one step h is approximated by the degree-k Taylor
polynomial V_k of exp(L h), applied matrix-free via Horner evaluation.  The
whole time grid is one lower block-bidiagonal system (identity diagonal,
-V_k subdiagonal, m trailing copy rows); forward substitution solves it
exactly, so the returned residual only detects implementation drift.  The
trailing copy rows exist to mirror the register layout of the linear-system
formulation and are represented implicitly (the final state is stored once;
their residual is zero by construction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DivergenceError
from .linearize import LiftedState, LinearOperatorLN, apply_LN, dense_LN
from .norms import op_norm


@dataclass(frozen=True)
class TaylorConfig:
    """Step count m, step size h (m h = T) and Taylor order k."""

    m: int
    h: float
    k: int

    def __post_init__(self):
        if self.m < 1:
            raise ConfigError("TaylorConfig: m must be >= 1")
        if self.h <= 0:
            raise ConfigError("TaylorConfig: h must be positive")
        if self.k < 1:
            raise ConfigError("TaylorConfig: k must be >= 1")

    @property
    def horizon(self) -> float:
        return self.m * self.h

    @classmethod
    def for_horizon(cls, horizon: float, m: int, k: int) -> "TaylorConfig":
        cfg = cls(m=m, h=horizon / m, k=k)
        if abs(cfg.horizon - horizon) > 1e-12 * max(abs(horizon), 1.0):
            raise ConfigError("TaylorConfig: m*h does not reproduce the horizon")
        return cfg


@dataclass
class SolveResult:
    """History Phi_0..Phi_m, the verified system residual and the readout."""

    config: TaylorConfig
    phis: list
    residual: float
    readout_value: complex | None = None

    @property
    def final(self) -> LiftedState:
        return self.phis[-1]

    def state_at_step(self, j: int) -> LiftedState:
        if not 0 <= j <= self.config.m:
            raise ConfigError(f"step {j} outside 0..{self.config.m}")
        return self.phis[j]


def apply_Vk(op: LinearOperatorLN, cfg: TaylorConfig, v: LiftedState) -> LiftedState:
    """Degree-k Taylor polynomial of exp(L h) applied to v, by Horner:
    u <- v; for i = k..1: u <- v + (h/i) L u."""
    if v.order != op.order or v.n != op.n:
        raise ConfigError("apply_Vk: state and operator shapes differ")
    u = v.copy()
    for i in range(cfg.k, 0, -1):
        lu = apply_LN(op, u)
        scale = cfg.h / i
        u = LiftedState(
            v.order,
            [v.blocks[b] + scale * lu.blocks[b] for b in range(v.order)],
        )
    return u


def _apply_Vk_direct(op: LinearOperatorLN, cfg: TaylorConfig,
                     v: LiftedState) -> LiftedState:
    """Term-by-term evaluation of the same polynomial (independent of the
    Horner ordering; used for the residual check)."""
    acc = v.copy()
    term = v
    for i in range(1, cfg.k + 1):
        lterm = apply_LN(op, term)
        term = LiftedState(
            v.order, [(cfg.h / i) * b for b in lterm.blocks]
        )
        acc = LiftedState(
            v.order, [acc.blocks[b] + term.blocks[b] for b in range(v.order)]
        )
    return acc


def forward_solve(op: LinearOperatorLN, cfg: TaylorConfig,
                  psi0: LiftedState, verify: bool = True) -> SolveResult:
    """Exact forward substitution on the block-bidiagonal time-step system:
    Phi_0 = psi0 and Phi_{j+1} = V_k Phi_j.

    Any non-finite intermediate aborts with the first offending step.  When
    verify is set, each step is re-evaluated with a different summation
    order and the worst relative discrepancy is reported as the residual.
    """
    if psi0.order != op.order or psi0.n != op.n:
        raise ConfigError("forward_solve: state and operator shapes differ")
    if not psi0.all_finite():
        raise DivergenceError("forward_solve: initial state is not finite", step=0)
    phis = [psi0.copy()]
    residual = 0.0
    for j in range(cfg.m):
        # overflow surfaces as inf/nan and is reported as DivergenceError
        with np.errstate(over="ignore", invalid="ignore"):
            nxt = apply_Vk(op, cfg, phis[-1])
        if not nxt.all_finite():
            raise DivergenceError(
                f"forward_solve: non-finite values at step {j + 1} "
                f"(t = {(j + 1) * cfg.h:g}); parameters are unstable",
                step=j + 1,
            )
        if verify:
            # on the way to a detected divergence, intermediate magnitudes
            # can overflow inside the norm as well
            with np.errstate(over="ignore", invalid="ignore"):
                ref = _apply_Vk_direct(op, cfg, phis[-1])
                num = np.linalg.norm(nxt.to_vector() - ref.to_vector())
                den = max(np.linalg.norm(phis[-1].to_vector()), 1e-300)
                ratio = float(num / den)
            if math.isfinite(ratio):
                residual = max(residual, ratio)
        phis.append(nxt)
    return SolveResult(config=cfg, phis=phis, residual=residual)


def readout_value(result: SolveResult, coeff_blocks: list) -> complex:
    """Blockwise (bilinear) dot product of the coefficient blocks with the
    final state: sum_l c_l . (Phi_m)_l.

    This equals the full time-grid contraction with weight 1/m over the m
    final-state copies, since the copies are identical.
    """
    final = result.final
    if len(coeff_blocks) > final.order:
        raise ConfigError("readout_value: more coefficient blocks than state blocks")
    total = 0j
    for level, coeffs in enumerate(coeff_blocks):
        if coeffs.shape != final.blocks[level].shape:
            raise ConfigError(f"readout_value: block {level + 1} length mismatch")
        total += np.dot(coeffs, final.blocks[level])
    result.readout_value = complex(total)
    return result.readout_value


def w_matrix(op: LinearOperatorLN, cfg: TaylorConfig, ell: int,
             budget: int | None = None) -> np.ndarray:
    """Dense W_{l,k} = sum_{i=0}^{k-l} l!/(l+i)! (L h)^i."""
    if not 0 <= ell <= cfg.k:
        raise ConfigError(f"w_matrix: need 0 <= l <= k, got l={ell}, k={cfg.k}")
    lh = dense_LN(op, budget=budget) * cfg.h
    size = lh.shape[0]
    acc = np.eye(size, dtype=complex)
    power = np.eye(size, dtype=complex)
    coeff = 1.0
    for i in range(1, cfg.k - ell + 1):
        power = power @ lh
        coeff /= (ell + i)
        acc = acc + coeff * power
    return acc


def w_matrix_norm(op: LinearOperatorLN, cfg: TaylorConfig, ell: int,
                  budget: int | None = None) -> float:
    """2-norm of the dense W_{l,k} diagnostic operator."""
    return op_norm(w_matrix(op, cfg, ell, budget=budget), 2)


def dense_Vk(op: LinearOperatorLN, cfg: TaylorConfig,
             budget: int | None = None) -> np.ndarray:
    """Dense degree-k Taylor polynomial of exp(L h) (= W_{0,k})."""
    return w_matrix(op, cfg, 0, budget=budget)


def step_count_for(horizon: float, order: int, rate: float,
                   power_of_two: bool = False) -> int:
    """ceil(T N rate) steps; optionally rounded up to a power of two to
    mirror register-style indexing when cross-checking the estimator."""
    if horizon < 0:
        raise ConfigError("step_count_for: horizon must be >= 0")
    m = max(1, math.ceil(horizon * order * rate))
    if power_of_two:
        m = 1 << (m - 1).bit_length()
    return m
