"""Dense fixed-size numerical kernels.

Everything here is plain loop code over NumPy arrays so that numba can
compile it.  When numba is installed the kernels are JIT-compiled (nogil,
cached); setting ATOMOPTOMECH_NO_NUMBA=1 forces the pure-Python/NumPy
fallback, which is bit-identical but slower.  benchmarks/bench_kernels.py
compares the two paths.
"""

import os

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    numba = None
    _HAVE_NUMBA = False

NUMBA_ENABLED = _HAVE_NUMBA and os.environ.get("ATOMOPTOMECH_NO_NUMBA", "") not in (
    "1",
    "true",
    "yes",
)


def _jit(func):
    if NUMBA_ENABLED:
        return numba.njit(cache=True, nogil=True)(func)
    return func


@_jit
def lu_solve(a, b):
    """Solve ``a @ x = b`` by LU with partial pivoting, in place.

    ``a`` and ``b`` are scratch copies owned by the caller.  Returns
    ``(x, min_pivot, max_norm)``; the caller decides what pivot magnitude
    counts as singular.  When a pivot is exactly zero the remaining
    elimination is abandoned and x is garbage; min_pivot = 0 flags it.
    """
    n = a.shape[0]
    anorm = 0.0
    for i in range(n):
        s = 0.0
        for j in range(n):
            s += abs(a[i, j])
        if s > anorm:
            anorm = s
    min_pivot = np.inf
    for k in range(n):
        piv = k
        pmax = abs(a[k, k])
        for i in range(k + 1, n):
            m = abs(a[i, k])
            if m > pmax:
                pmax = m
                piv = i
        if piv != k:
            for j in range(n):
                tmp = a[k, j]
                a[k, j] = a[piv, j]
                a[piv, j] = tmp
            tmpb = b[k]
            b[k] = b[piv]
            b[piv] = tmpb
        if pmax < min_pivot:
            min_pivot = pmax
        if pmax == 0.0:
            return b, 0.0, anorm
        for i in range(k + 1, n):
            f = a[i, k] / a[k, k]
            a[i, k] = f
            for j in range(k + 1, n):
                a[i, j] -= f * a[k, j]
            b[i] -= f * b[k]
    for i in range(n - 1, -1, -1):
        s = b[i]
        for j in range(i + 1, n):
            s -= a[i, j] * b[j]
        b[i] = s / a[i, i]
    return b, min_pivot, anorm


@_jit
def char_poly_coeffs(j):
    """Monic characteristic polynomial by the Faddeev-LeVerrier recursion."""
    n = j.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    m = np.zeros((n, n))
    for i in range(n):
        m[i, i] = 1.0
    for k in range(1, n + 1):
        m = np.dot(j, m)
        tr = 0.0
        for i in range(n):
            tr += m[i, i]
        c = -tr / k
        coeffs[k] = c
        for i in range(n):
            m[i, i] += c
    return coeffs


@_jit
def routh_flags(coeffs):
    """Routh array sign test for a monic polynomial.

    Returns (stable, marginal) as ints.  A vanishing first-column entry
    (exactly zero, or at rounding level relative to the array scale) is
    replaced by eps = 1e-30 and flags the result marginal.
    """
    n = coeffs.shape[0] - 1
    rows = n + 1
    width = (n + 2) // 2
    table = np.zeros((rows, width + 1))
    for i in range(0, n + 1, 2):
        table[0, i // 2] = coeffs[i]
    for i in range(1, n + 1, 2):
        table[1, (i - 1) // 2] = coeffs[i]
    scale = 0.0
    for r in range(2):
        for c in range(width):
            m = abs(table[r, c])
            if m > scale:
                scale = m
    marginal = 0
    eps = 1e-30
    for r in range(2, rows):
        if abs(table[r - 1, 0]) <= 1e-14 * scale:
            table[r - 1, 0] = eps
            marginal = 1
        for c in range(width):
            table[r, c] = (
                table[r - 1, 0] * table[r - 2, c + 1]
                - table[r - 2, 0] * table[r - 1, c + 1]
            ) / table[r - 1, 0]
            m = abs(table[r, c])
            if m > scale and marginal == 0:
                scale = m
    stable = 1
    for r in range(rows):
        if table[r, 0] == 0.0:
            table[r, 0] = eps
            marginal = 1
        if table[0, 0] * table[r, 0] < 0.0:
            stable = 0
    return stable, marginal


@_jit
def lyapunov_system(j, d):
    """Vectorize j v + v j^T = -d into a 36x36 column-stacked linear system."""
    n = j.shape[0]
    nn = n * n
    k = np.zeros((nn, nn))
    rhs = np.zeros(nn)
    for c in range(n):
        for r in range(n):
            row = c * n + r
            rhs[row] = -d[r, c]
            for rp in range(n):
                k[row, c * n + rp] += j[r, rp]
            for cp in range(n):
                k[row, cp * n + r] += j[c, cp]
    return k, rhs


@_jit
def beta_roots(delta_r, gamma_r, grid_n, tol, max_iter, dedup_tol):
    """Multistart Newton for the collective-amplitude fixed-point equation.

    Same algorithm as the generic 2-D multistart (central finite-difference
    Jacobian, silent discard of non-converged starts), specialized so the
    grid scan can be JIT-compiled.  Returns (roots, count) with the roots
    packed in the first ``count`` slots.
    """
    cap = grid_n * grid_n
    roots = np.zeros(cap, dtype=np.complex128)
    count = 0
    coef = -2.0 * (delta_r - 1j * gamma_r)
    for ix in range(grid_n):
        for iy in range(grid_n):
            x = -2.0 + 4.0 * ix / (grid_n - 1)
            y = -2.0 + 4.0 * iy / (grid_n - 1)
            for _ in range(max_iter):
                b = complex(x, y)
                f = coef * b + 2.0 * (x * x + y * y) + b * b - 2.0
                if not (np.isfinite(f.real) and np.isfinite(f.imag)):
                    break
                if max(abs(f.real), abs(f.imag)) <= tol:
                    dup = False
                    for k in range(count):
                        dr = x - roots[k].real
                        di = y - roots[k].imag
                        if dr * dr + di * di <= dedup_tol * dedup_tol:
                            dup = True
                            break
                    if not dup:
                        roots[count] = b
                        count += 1
                    break
                hx = 1e-7 * (1.0 + abs(x))
                hy = 1e-7 * (1.0 + abs(y))
                bpx = complex(x + hx, y)
                bmx = complex(x - hx, y)
                bpy = complex(x, y + hy)
                bmy = complex(x, y - hy)
                fpx = coef * bpx + 2.0 * ((x + hx) ** 2 + y * y) + bpx * bpx - 2.0
                fmx = coef * bmx + 2.0 * ((x - hx) ** 2 + y * y) + bmx * bmx - 2.0
                fpy = coef * bpy + 2.0 * (x * x + (y + hy) ** 2) + bpy * bpy - 2.0
                fmy = coef * bmy + 2.0 * (x * x + (y - hy) ** 2) + bmy * bmy - 2.0
                j00 = (fpx.real - fmx.real) / (2.0 * hx)
                j10 = (fpx.imag - fmx.imag) / (2.0 * hx)
                j01 = (fpy.real - fmy.real) / (2.0 * hy)
                j11 = (fpy.imag - fmy.imag) / (2.0 * hy)
                det = j00 * j11 - j01 * j10
                if det == 0.0 or not np.isfinite(det):
                    break
                x -= (f.real * j11 - f.imag * j01) / det
                y -= (f.imag * j00 - f.real * j10) / det
                if not (np.isfinite(x) and np.isfinite(y)):
                    break
    return roots, count


@_jit
def fluctuation_matrix(w, kappa, gamma_a, delta, delta_a_prime, g1, g2, g3, g0cs, wm, gm):
    """Frequency-domain 6x6 matrix of the linearized dynamics.

    Basis order: intracavity field, its conjugate, collective atomic mode,
    its conjugate, mirror position, mirror momentum.
    """
    mu1 = kappa + 1j * (delta - w)
    mu2 = kappa - 1j * (delta + w)
    nu1 = gamma_a + 1j * (delta_a_prime - w)
    nu2 = gamma_a - 1j * (delta_a_prime + w)
    a = np.zeros((6, 6), dtype=np.complex128)
    a[0, 0] = mu1
    a[0, 2] = 1j * g2
    a[0, 3] = -1j * g3
    a[0, 4] = -1j * g0cs
    a[1, 1] = mu2
    a[1, 2] = 1j * np.conj(g3)
    a[1, 3] = -1j * np.conj(g2)
    a[1, 4] = 1j * np.conj(g0cs)
    a[2, 0] = 1j * g2
    a[2, 1] = -1j * g3
    a[2, 2] = nu1
    a[2, 3] = -1j * g1
    a[3, 0] = 1j * np.conj(g3)
    a[3, 1] = -1j * np.conj(g2)
    a[3, 2] = 1j * np.conj(g1)
    a[3, 3] = nu2
    a[4, 4] = 1j * w
    a[4, 5] = wm
    a[5, 0] = -np.conj(g0cs)
    a[5, 1] = -g0cs
    a[5, 4] = wm
    a[5, 5] = gm - 1j * w
    return a


@_jit
def transfer_row_closed(w, kappa, gamma_a, delta, delta_a_prime, g1, g2, g3, g0, cs, wm, gm):
    """Closed-form first row of the inverse fluctuation matrix.

    Returns (m11, m12, m13, m14, m16, dval) where dval is the determinant
    that appears as the common denominator.  These are the cofactor
    expressions of the 6x6 system written out; they are checked against the
    LU route by the verification suite.
    """
    mu1 = kappa + 1j * (delta - w)
    mu2 = kappa - 1j * (delta + w)
    nu1 = gamma_a + 1j * (delta_a_prime - w)
    nu2 = gamma_a - 1j * (delta_a_prime + w)
    g1c = np.conj(g1)
    g2c = np.conj(g2)
    g3c = np.conj(g3)
    csc = np.conj(cs)
    cs2 = cs * cs
    csc2 = csc * csc
    acs = (cs * csc).real
    a1 = (g1 * g1c).real
    a2 = (g2 * g2c).real
    a3 = (g3 * g3c).real
    s = g1 * g3c + g3 * g1c

    d = (
        -2j * w * a2 * a3 * gm
        - mu1 * w * (1j * w - gm) * (g1 * g2c * g3c + g3 * g1c * g2c)
        + mu2 * w * (1j * w - gm) * (g1 * g2 * g3c + g2 * g3 * g1c)
        - w * (w + 1j * gm) * (mu1 * mu2 * a1 - mu1 * nu1 * g2c * g2c - g2 * g2 * mu2 * nu2 - mu1 * mu2 * nu1 * nu2)
        + 1j
        * g0
        * g0
        * (
            cs2 * g3c * (nu1 * g2c - g2 * nu2)
            - 1j * g1 * cs2 * g3c * g3c
            + g3 * csc2 * (nu1 * g2c - 1j * g3 * g1c - g2 * nu2)
            + acs * ((mu1 - mu2) * (a1 - nu1 * nu2) + nu1 * g2c * g2c - 2j * s * g2.real - g2 * g2 * nu2)
        )
        * wm
        + (
            2 * a2 * a3
            - mu1 * nu1 * g2c * g2c
            + 1j * mu1 * g2c * s
            + mu2 * (mu1 * a1 - 1j * g2 * s - nu2 * (g2 * g2 + mu1 * nu1))
        )
        * wm
        * wm
        + a2 * (g0 * g0 * wm * (g1 * csc2 + cs2 * g1c) - 2 * w * w * a3)
        + (a2 * a2 + a3 * a3) * (1j * w * gm - wm * wm + w * w)
        + a3
        * (
            1j * (nu1 - nu2) * g0 * g0 * wm * acs
            - (mu2 * nu1 + mu1 * nu2) * (w * w + 1j * gm * w)
            + (mu2 * nu1 + mu1 * nu2) * wm * wm
        )
    )

    qa = nu2 * a3 - nu2 * mu2 * nu1 + mu2 * a1
    br_a = (
        1j * g0 * g0 * wm * acs * (a1 - nu1 * nu2)
        - (w * w + 1j * w * gm) * qa
        + wm * wm * qa
        + (g1 * g3c * g2c + g3 * g1c * g2c + 1j * nu1 * g2c * g2c) * (w * gm - 1j * w * w + 1j * wm * wm)
    )

    br_b = (
        g0 * g0 * cs2 * wm * (a1 - nu1 * nu2)
        + (1j * w * gm - wm * wm + w * w)
        * (g1 * a2 + 1j * g3 * g2c * nu1 + g3 * g3 * g1c - 1j * g2 * g3 * nu2)
    )

    br_c = (
        -g0 * g0 * wm * (g1c * g3 * acs + cs2 * g1c * g2c - 1j * nu2 * (g2 * acs + cs2 * g3c))
        + (w * w + 1j * w * gm - wm * wm)
        * (a3 * g2c - a2 * g2c - mu2 * nu2 * g2 - 1j * g3 * mu2 * g1c)
    )

    br_d = (
        g2c * g0 * g0 * cs2 * nu1 * wm
        + (1j * w * gm - wm * wm + w * w)
        * (1j * a2 * g3 + g1 * g2 * mu2 - 1j * a3 * g3 + 1j * g3 * nu1 * mu2)
        - 1j * g3c * g1 * g0 * g0 * cs2 * wm
        + g0 * g0 * wm * acs * (g3 * nu1 - 1j * g1 * g2)
    )

    br_f = (
        cs * (nu2 * (a3 - mu2 * nu1) + mu2 * a1 - nu1 * g2c * g2c)
        + 1j * a2 * g1 * csc
        + 1j * g2c * g1 * g3c * cs
        + g2c * g3 * (1j * g1c * cs - nu1 * csc)
        + g3 * csc * (g2 * nu2 + 1j * g3 * g1c)
    )

    return br_a / d, 1j * br_b / d, 1j * br_c / d, br_d / d, 1j * g0 * wm * br_f / d, d
