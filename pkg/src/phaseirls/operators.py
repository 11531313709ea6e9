"""Matrix-free difference operators and the block system map.

The unknown is kept in matrix layout as a triple (u, vv, vh) of grids; the
system map and its building blocks never materialize a matrix.  Dense
materializations exist only as small-instance test oracles and follow the
column-stacking vec() convention, so ``vec(X) = X.ravel(order="F")``.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .phase import GradientField

__all__ = [
    "SizeLimitExceeded",
    "SystemVector",
    "DiagonalWeights",
    "apply_s",
    "apply_s_transpose",
    "apply_t",
    "apply_t_transpose",
    "apply_system",
    "build_rhs",
    "materialize_dense_system",
    "materialize_dense_preconditioner",
    "stack_system",
    "unstack_system",
]

DENSE_CELL_LIMIT = 4096


class SizeLimitExceeded(ValueError):
    """Raised when a dense oracle materialization is requested above guard size."""


@dataclass
class SystemVector:
    """Triple (u, vv, vh) of grids viewed as one vector of the block system."""

    u: np.ndarray
    vv: np.ndarray
    vh: np.ndarray

    def __post_init__(self):
        n, m = self.u.shape
        if self.vv.shape != (n - 1, m) or self.vh.shape != (n, m - 1):
            raise ValueError(
                f"inconsistent block shapes: u {self.u.shape}, "
                f"vv {self.vv.shape}, vh {self.vh.shape}"
            )

    @classmethod
    def zeros(cls, n, m):
        return cls(np.zeros((n, m)), np.zeros((n - 1, m)), np.zeros((n, m - 1)))

    @property
    def shape(self):
        return self.u.shape

    @property
    def dim(self):
        return self.u.size + self.vv.size + self.vh.size

    def copy(self):
        return SystemVector(self.u.copy(), self.vv.copy(), self.vh.copy())

    def dot(self, other):
        return (
            float(np.vdot(self.u, other.u))
            + float(np.vdot(self.vv, other.vv))
            + float(np.vdot(self.vh, other.vh))
        )

    def norm(self):
        return np.sqrt(self.dot(self))

    def axpy(self, alpha, other):
        """self += alpha * other, in place."""
        self.u += alpha * other.u
        self.vv += alpha * other.vv
        self.vh += alpha * other.vh

    def scale(self, beta):
        self.u *= beta
        self.vv *= beta
        self.vh *= beta

    def add(self, other):
        self.u += other.u
        self.vv += other.vv
        self.vh += other.vh

    def is_finite(self):
        return bool(
            np.all(np.isfinite(self.u))
            and np.all(np.isfinite(self.vv))
            and np.all(np.isfinite(self.vh))
        )


@dataclass(frozen=True)
class DiagonalWeights:
    """Diagonal blocks of the system stored as grids, never as matrices."""

    dv: np.ndarray
    dh: np.ndarray

    def __post_init__(self):
        if self.dv.shape[0] + 1 != self.dh.shape[0] or self.dv.shape[1] != self.dh.shape[1] + 1:
            raise ValueError(
                f"inconsistent diagonal shapes {self.dv.shape} / {self.dh.shape}"
            )


def apply_s(u):
    """Forward row differences: out[i, j] = u[i+1, j] - u[i, j]."""
    return kernels.diff_rows(u)


def apply_s_transpose(v):
    """Adjoint of row differences, mapping (N-1, M) back to (N, M)."""
    return kernels.adj_diff_rows(v)


def apply_t(u):
    """Forward column differences: out[i, j] = u[i, j+1] - u[i, j]."""
    return kernels.diff_cols(u)


def apply_t_transpose(v):
    """Adjoint of column differences, mapping (N, M-1) back to (N, M)."""
    return kernels.adj_diff_cols(v)


def apply_system(x, d, tau):
    """Apply the symmetric PSD block map of the weighted least squares system.

    Returns the triple

      (1/tau) * (StS u + u TTt - St vv - vh Tt)
      dv * vv + (1/tau) * (vv - S u)
      dh * vh + (1/tau) * (vh - u T)

    The map annihilates (c*1, 0, 0), so its nullspace contains the constant
    mode of the u block.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    au, avv, avh = kernels.apply_system_blocks(x.u, x.vv, x.vh, d.dv, d.dh, 1.0 / tau)
    return SystemVector(au, avv, avh)


def build_rhs(g: GradientField, tau):
    """Right-hand side of the system; orthogonal to the constant-u mode."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    inv_tau = 1.0 / tau
    bu = inv_tau * (apply_s_transpose(g.gv) + apply_t_transpose(g.gh))
    return SystemVector(bu, -inv_tau * g.gv, -inv_tau * g.gh)


# ---------------------------------------------------------------------------
# dense oracles (small instances only)
# ---------------------------------------------------------------------------

def _dense_s(n):
    s = np.zeros((n - 1, n))
    for i in range(n - 1):
        s[i, i] = -1.0
        s[i, i + 1] = 1.0
    return s


def _dense_t(m):
    t = np.zeros((m, m - 1))
    for j in range(m - 1):
        t[j, j] = -1.0
        t[j + 1, j] = 1.0
    return t


def _check_dense_size(n, m):
    if n * m > DENSE_CELL_LIMIT:
        raise SizeLimitExceeded(
            f"dense materialization limited to {DENSE_CELL_LIMIT} cells, got {n * m}"
        )


def materialize_dense_system(n, m, d, tau):
    """Dense symmetric PSD matrix of the block system, for oracle-scale tests."""
    _check_dense_size(n, m)
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    s = _dense_s(n)
    t = _dense_t(m)
    i_n = np.eye(n)
    i_m = np.eye(m)
    inv_tau = 1.0 / tau
    lap = np.kron(i_m, s.T @ s) + np.kron(t @ t.T, i_n)
    ks = np.kron(i_m, s)
    kt = np.kron(t.T, i_n)
    dv_diag = np.diag(d.dv.ravel(order="F"))
    dh_diag = np.diag(d.dh.ravel(order="F"))
    return np.block(
        [
            [inv_tau * lap, -inv_tau * ks.T, -inv_tau * kt.T],
            [-inv_tau * ks, dv_diag + inv_tau * np.eye(ks.shape[0]), np.zeros((ks.shape[0], kt.shape[0]))],
            [-inv_tau * kt, np.zeros((kt.shape[0], ks.shape[0])), dh_diag + inv_tau * np.eye(kt.shape[0])],
        ]
    )


def materialize_dense_preconditioner(n, m, d, tau):
    """Dense block-diagonal preconditioner matching the same vec layout."""
    _check_dense_size(n, m)
    s = _dense_s(n)
    t = _dense_t(m)
    inv_tau = 1.0 / tau
    lap = np.kron(np.eye(m), s.T @ s) + np.kron(t @ t.T, np.eye(n))
    nv = (n - 1) * m
    nh = n * (m - 1)
    out = np.zeros((n * m + nv + nh, n * m + nv + nh))
    out[: n * m, : n * m] = inv_tau * lap
    out[n * m : n * m + nv, n * m : n * m + nv] = np.diag(
        d.dv.ravel(order="F") + inv_tau
    )
    out[n * m + nv :, n * m + nv :] = np.diag(d.dh.ravel(order="F") + inv_tau)
    return out


def stack_system(x: SystemVector):
    """Column-stack (u, vv, vh) into one flat vector matching the dense layout."""
    return np.concatenate(
        [x.u.ravel(order="F"), x.vv.ravel(order="F"), x.vh.ravel(order="F")]
    )


def unstack_system(vec, n, m):
    """Inverse of stack_system for an (n, m) grid."""
    nu = n * m
    nv = (n - 1) * m
    u = vec[:nu].reshape((n, m), order="F")
    vv = vec[nu : nu + nv].reshape((n - 1, m), order="F")
    vh = vec[nu + nv :].reshape((n, m - 1), order="F")
    return SystemVector(u.copy(), vv.copy(), vh.copy())
