"""Dense modular linear algebra kernels.

Each kernel has a numba version and a numpy version with identical results.
The module-level names dispatch according to ``_accel.USE_NUMBA``; both
variants stay importable so they can be compared directly.
"""

import numpy as np

from . import _accel
from ._accel import njit


def _inv_mod(a, p):
    return pow(int(a), p - 2, p)


def rref_mod_p_numpy(mat, p):
    """Reduced row echelon form of ``mat`` over F_p.

    Returns ``(reduced, pivots)``; ``reduced`` keeps the input row count with
    zero rows moved to the bottom, ``pivots`` lists the pivot column of each
    nonzero row.
    """
    m = np.array(mat, dtype=np.int64) % p
    nrows, ncols = m.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.nonzero(m[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            m[[row, piv]] = m[[piv, row]]
        inv = _inv_mod(m[row, col], p)
        m[row] = (m[row] * inv) % p
        others = np.nonzero(m[:, col])[0]
        others = others[others != row]
        if others.size:
            factors = m[others, col].copy()
            m[others] = (m[others] - np.outer(factors, m[row])) % p
        pivots.append(col)
        row += 1
    return m, pivots


@njit(cache=True)
def _rref_kernel(m, p):
    nrows, ncols = m.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        piv = -1
        for i in range(row, nrows):
            if m[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            for j in range(ncols):
                tmp = m[row, j]
                m[row, j] = m[piv, j]
                m[piv, j] = tmp
        # modular inverse by exponentiation
        base = m[row, col]
        e = p - 2
        inv = 1
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for j in range(col, ncols):
            m[row, j] = (m[row, j] * inv) % p
        for i in range(nrows):
            if i != row:
                f = m[i, col]
                if f != 0:
                    for j in range(col, ncols):
                        m[i, j] = (m[i, j] - f * m[row, j]) % p
        pivots[row] = col
        row += 1
    return row, pivots


def rref_mod_p_numba(mat, p):
    m = np.array(mat, dtype=np.int64) % p
    if m.size == 0:
        return m, []
    rank, piv = _rref_kernel(m, np.int64(p))
    return m, [int(c) for c in piv[:rank]]


def rref_mod_p(mat, p):
    if _accel.USE_NUMBA:
        return rref_mod_p_numba(mat, p)
    return rref_mod_p_numpy(mat, p)


def rank_mod_p(mat, p):
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0
    return len(rref_mod_p(mat, p)[1])


def eval_monomials_numpy(exps, points, p):
    """Evaluate every monomial (rows of ``exps``) at every point mod p.

    ``points`` has shape (npoints, nvars); result has shape (npoints, nmonos).
    """
    exps = np.asarray(exps, dtype=np.int64)
    points = np.asarray(points, dtype=np.int64) % p
    out = np.ones((points.shape[0], exps.shape[0]), dtype=np.int64)
    if exps.size == 0:
        return out
    maxe = int(exps.max()) if exps.size else 0
    # power table: pow_tab[k][pt, var] = point[var]^k
    pow_tab = [np.ones_like(points)]
    for _ in range(maxe):
        pow_tab.append((pow_tab[-1] * points) % p)
    pow_tab = np.stack(pow_tab)
    for v in range(exps.shape[1]):
        out = (out * pow_tab[exps[:, v]][:, :, v].T) % p
    return out


@njit(cache=True)
def _eval_monomials_kernel(exps, points, p):
    npts = points.shape[0]
    nmon, nvar = exps.shape
    out = np.ones((npts, nmon), dtype=np.int64)
    for a in range(npts):
        for b in range(nmon):
            acc = 1
            for v in range(nvar):
                e = exps[b, v]
                base = points[a, v] % p
                while e > 0:
                    if e & 1:
                        acc = (acc * base) % p
                    base = (base * base) % p
                    e >>= 1
            out[a, b] = acc
    return out


def eval_monomials_numba(exps, points, p):
    exps = np.ascontiguousarray(np.asarray(exps, dtype=np.int64))
    points = np.ascontiguousarray(np.asarray(points, dtype=np.int64))
    if exps.shape[0] == 0:
        return np.ones((points.shape[0], 0), dtype=np.int64)
    return _eval_monomials_kernel(exps, points, np.int64(p))


def eval_monomials(exps, points, p):
    if _accel.USE_NUMBA:
        return eval_monomials_numba(exps, points, p)
    return eval_monomials_numpy(exps, points, p)
