"""Independent brute-force constructions used as test oracles.

Everything here is deliberately built from first principles (index rules,
eye-shifts, scalar loops, dense linear algebra) so it shares no code with
the implementations it checks.
"""

import numpy as np

from phaseirls.operators import SystemVector
from phaseirls.phase import GradientField, WeightField


def dense_s(n):
    """First-difference matrix of shape (n-1, n) via shifted identities."""
    return np.eye(n - 1, n, k=1) - np.eye(n - 1, n)


def dense_t(m):
    """Column-difference matrix of shape (m, m-1): entry 1 at i == j+1, -1 at i == j."""
    t = np.zeros((m, m - 1))
    for i in range(m):
        for j in range(m - 1):
            if i == j + 1:
                t[i, j] = 1.0
            elif i == j:
                t[i, j] = -1.0
    return t


def vec(a):
    """Column-stacking vectorization."""
    return np.asarray(a).ravel(order="F")


def dense_system_entrywise(n, m, d, tau):
    """System matrix written entry by entry from the banded stencil rules.

    Column-stacked index layout: pixel (i, j) sits at j*n + i, a vertical
    arc (i, j) at j*(n-1) + i, a horizontal arc (i, j) at j*n + i.
    """
    nu = n * m
    nv = (n - 1) * m
    nh = n * (m - 1)
    a = np.zeros((nu + nv + nh, nu + nv + nh))

    # u-u block: block-diagonal second differences down columns plus a block
    # tridiagonal of +/- identities across columns, both with unit corners
    for jp in range(m):
        for ip in range(n):
            p = jp * n + ip
            deg_rows = 1.0 if ip in (0, n - 1) and n > 1 else (2.0 if n > 1 else 0.0)
            deg_cols = 1.0 if jp in (0, m - 1) and m > 1 else (2.0 if m > 1 else 0.0)
            a[p, p] = (deg_rows + deg_cols) / tau
            if ip + 1 < n:
                a[p, jp * n + ip + 1] = -1.0 / tau
                a[jp * n + ip + 1, p] = -1.0 / tau
            if jp + 1 < m:
                a[p, (jp + 1) * n + ip] = -1.0 / tau
                a[(jp + 1) * n + ip, p] = -1.0 / tau

    # u-vv coupling: each vertical arc hits its two endpoint pixels
    for j in range(m):
        for i in range(n - 1):
            r = nu + j * (n - 1) + i
            a[r, j * n + i] = 1.0 / tau
            a[r, j * n + i + 1] = -1.0 / tau
            a[j * n + i, r] = 1.0 / tau
            a[j * n + i + 1, r] = -1.0 / tau

    # u-vh coupling: each horizontal arc hits its two endpoint pixels
    for j in range(m - 1):
        for i in range(n):
            r = nu + nv + j * n + i
            a[r, j * n + i] = 1.0 / tau
            a[r, (j + 1) * n + i] = -1.0 / tau
            a[j * n + i, r] = 1.0 / tau
            a[(j + 1) * n + i, r] = -1.0 / tau

    for j in range(m):
        for i in range(n - 1):
            r = nu + j * (n - 1) + i
            a[r, r] = d.dv[i, j] + 1.0 / tau
    for j in range(m - 1):
        for i in range(n):
            r = nu + nv + j * n + i
            a[r, r] = d.dh[i, j] + 1.0 / tau
    return a


def random_state(rng, n, m, scale=1.0):
    return SystemVector(
        scale * rng.standard_normal((n, m)),
        scale * rng.standard_normal((n - 1, m)),
        scale * rng.standard_normal((n, m - 1)),
    )


def random_gradients(rng, n, m):
    return GradientField(
        rng.uniform(-np.pi, np.pi, (n - 1, m)),
        rng.uniform(-np.pi, np.pi, (n, m - 1)),
    )


def random_weights(rng, n, m, lo=0.2, hi=2.0):
    return WeightField(
        rng.uniform(lo, hi, (n - 1, m)),
        rng.uniform(lo, hi, (n, m - 1)),
    )


def objective_scalar_loops(x, g, c, tau):
    """Scalar-loop evaluation of the l1 + quadratic-penalty objective."""
    n, m = x.u.shape
    total = 0.0
    for i in range(n - 1):
        for j in range(m):
            total += c.cv[i, j] * abs(x.vv[i, j])
    for i in range(n):
        for j in range(m - 1):
            total += c.ch[i, j] * abs(x.vh[i, j])
    quad = 0.0
    for i in range(n - 1):
        for j in range(m):
            r = x.u[i + 1, j] - x.u[i, j] - g.gv[i, j] - x.vv[i, j]
            quad += r * r
    for i in range(n):
        for j in range(m - 1):
            r = x.u[i, j + 1] - x.u[i, j] - g.gh[i, j] - x.vh[i, j]
            quad += r * r
    return total + quad / (2.0 * tau)


def plain_cg_dense(a, b, x0, iters):
    """Textbook unpreconditioned CG on a dense matrix, returning all iterates."""
    x = x0.astype(float).copy()
    r = b - a @ x
    p = r.copy()
    rho = float(r @ r)
    iterates = [x.copy()]
    for _ in range(iters):
        ap = a @ p
        pap = float(p @ ap)
        if pap <= 1e-300:
            break
        alpha = rho / pap
        x = x + alpha * p
        r = r - alpha * ap
        rho_next = float(r @ r)
        beta = rho_next / rho
        rho = rho_next
        p = r + beta * p
        iterates.append(x.copy())
    return iterates
