"""Hot numeric kernels with two interchangeable implementations.

Each kernel ships as numba-compiled explicit loops plus a vectorized
pure-numpy fallback; ``_backend.use_numba()`` picks the path at call time.
The three kernels dominate the package runtime:

* ``grid_scan``        - exhaustive product-state scan over per-qubit Bloch
                         lattices (the brute-force optimizer leg),
* ``seesaw_run``       - one full alternating-eigenvector descent/ascent from
                         a given product start,
* ``product_form_batch`` - batched quadratic form <psi|X|psi> over product
                         vectors (Monte-Carlo witness checks).

Both paths share scan order and tie-breaking, so results agree to roundoff
and incumbent selection is deterministic per backend.
"""

from __future__ import annotations

import numpy as np

from ._backend import HAVE_NUMBA, njit, use_numba

_PHASE_TOL = 1e-12
_DEGENERACY_RTOL = 1e-10


# ---------------------------------------------------------------------------
# shared helper: deterministic extremal-eigenvector selection
# ---------------------------------------------------------------------------

def _pick_column(w, v, want_max):
    """Extremal eigenvector with deterministic tie-breaking.

    Among eigenvalues within 1e-10*(1+|ext|) of the extremum, takes the
    column whose absolute-amplitude pattern is lexicographically largest,
    then fixes the global phase so the first nonzero amplitude is real
    positive. Returns (eigenvalue, column).
    """
    d = w.shape[0]
    ext = w[d - 1] if want_max else w[0]
    dtol = _DEGENERACY_RTOL * (1.0 + abs(ext))
    best_c = -1
    for c in range(d):
        if abs(w[c] - ext) <= dtol:
            if best_c < 0:
                best_c = c
            else:
                for i in range(d):
                    ai = abs(v[i, c])
                    bi = abs(v[i, best_c])
                    if ai > bi:
                        best_c = c
                        break
                    if ai < bi:
                        break
    col = v[:, best_c].copy()
    for i in range(d):
        if abs(col[i]) > _PHASE_TOL:
            ph = np.conj(col[i]) / abs(col[i])
            for q in range(d):
                col[q] = col[q] * ph
            break
    return w[best_c], col


_pick_column_j = njit(cache=True)(_pick_column)


# ---------------------------------------------------------------------------
# grid scan kernel
# ---------------------------------------------------------------------------

@njit(cache=True)
def _grid_scan_loops(gram, flat, minimize):
    """Scan all per-qubit candidate combinations of the quadratic form.

    gram: (n, m, 2, 2) candidate Gram tensors G[q,p,i,j] = conj(v_i) v_j.
    flat: the (2^n x 2^n) Hermitian form flattened in C order.
    Returns (best value, per-qubit candidate indices). First strictly better
    value wins, scanned in row-major candidate order.
    """
    n = gram.shape[0]
    m = gram.shape[1]
    best = np.inf if minimize else -np.inf
    bidx = np.zeros(n, dtype=np.int64)
    if n == 1:
        for p in range(m):
            acc = 0.0
            for i in range(2):
                for j in range(2):
                    acc += (gram[0, p, i, j] * flat[i * 2 + j]).real
            if (minimize and acc < best) or ((not minimize) and acc > best):
                best = acc
                bidx[0] = p
        return best, bidx

    npref = n - 2
    size0 = 4**n
    z = np.zeros((npref + 1, size0), dtype=np.complex128)
    for q in range(size0):
        z[0, q] = flat[q]
    combos = 1
    for _ in range(npref):
        combos *= m
    pref = np.zeros(max(npref, 1), dtype=np.int64)
    w = np.zeros(4, dtype=np.complex128)
    for combo in range(combos):
        c = combo
        for t in range(npref - 1, -1, -1):
            pref[t] = c % m
            c //= m
        for t in range(npref):
            h = 1 << (n - t)
            hn = h >> 1
            p = pref[t]
            for bb in range(hn):
                for kk in range(hn):
                    acc = 0.0 + 0.0j
                    for i in range(2):
                        for j in range(2):
                            acc += gram[t, p, i, j] * z[t, (i * hn + bb) * h + (j * hn + kk)]
                    z[t + 1, bb * hn + kk] = acc
        # leaf: last two qubits; z[npref] entries laid out ((i*2+a)*4 + j*2+b)
        for pa in range(m):
            for a in range(2):
                for b in range(2):
                    acc = 0.0 + 0.0j
                    for i in range(2):
                        for j in range(2):
                            acc += gram[n - 2, pa, i, j] * z[npref, (i * 2 + a) * 4 + (j * 2 + b)]
                    w[a * 2 + b] = acc
            for pb in range(m):
                val = 0.0
                for a in range(2):
                    for b in range(2):
                        val += (gram[n - 1, pb, a, b] * w[a * 2 + b]).real
                if (minimize and val < best) or ((not minimize) and val > best):
                    best = val
                    for t in range(npref):
                        bidx[t] = pref[t]
                    bidx[n - 2] = pa
                    bidx[n - 1] = pb
    return best, bidx


def _grid_scan_numpy(gram, flat, minimize):
    """Vectorized fallback: staged contractions, GEMM on the last two qubits."""
    n, m = gram.shape[0], gram.shape[1]
    if n == 1:
        vals = np.einsum("pij,ij->p", gram[0], flat.reshape(2, 2)).real
        k = int(np.argmin(vals)) if minimize else int(np.argmax(vals))
        return float(vals[k]), np.array([k], dtype=np.int64)

    npref = n - 2
    g_last = gram[n - 1].reshape(m, 4)
    best = np.inf if minimize else -np.inf
    bidx = np.zeros(n, dtype=np.int64)
    for pref in np.ndindex(*([m] * npref)):
        z = flat
        h = 1 << n
        for t in range(npref):
            hn = h >> 1
            zr = z.reshape(2, hn, 2, hn)
            z = np.einsum("ij,ibjk->bk", gram[t, pref[t]], zr).reshape(-1)
            h = hn
        zz = z.reshape(2, 2, 2, 2)  # (i, a, j, b)
        wmat = np.einsum("pij,iajb->pab", gram[n - 2], zz).reshape(m, 4)
        vals = (wmat @ g_last.T).real
        k = int(np.argmin(vals)) if minimize else int(np.argmax(vals))
        val = float(vals.flat[k])
        if (minimize and val < best) or ((not minimize) and val > best):
            best = val
            bidx[:npref] = pref
            bidx[n - 2] = k // m
            bidx[n - 1] = k % m
    return float(best), bidx


def grid_scan(gram: np.ndarray, flat: np.ndarray, minimize: bool) -> tuple[float, np.ndarray]:
    gram = np.ascontiguousarray(gram, dtype=np.complex128)
    flat = np.ascontiguousarray(flat, dtype=np.complex128).reshape(-1)
    if gram.ndim != 4 or gram.shape[2:] != (2, 2):
        raise ValueError(f"gram must have shape (n, m, 2, 2), got {gram.shape}")
    if flat.size != 4 ** gram.shape[0]:
        raise ValueError(f"form size {flat.size} does not match {gram.shape[0]} qubits")
    if use_numba():
        val, idx = _grid_scan_loops(gram, flat, bool(minimize))
        return float(val), idx
    return _grid_scan_numpy(gram, flat, bool(minimize))


# ---------------------------------------------------------------------------
# seesaw kernel
# ---------------------------------------------------------------------------

@njit(cache=True)
def _kron_others(locs, dims, skip, out, tmp):
    """Kronecker product of all local vectors except site ``skip``; returns length."""
    n = dims.shape[0]
    ln = 1
    out[0] = 1.0 + 0.0j
    for j in range(n):
        if j == skip:
            continue
        dj = dims[j]
        for a in range(ln):
            va = out[a]
            for b in range(dj):
                tmp[a * dj + b] = va * locs[j, b]
        ln *= dj
        for a in range(ln):
            out[a] = tmp[a]
    return ln


@njit(cache=True)
def _effective_operator(forms, k, dk, rk, u, mbuf):
    """mbuf[a,b] = sum_{r,s} conj(u_r) forms[k,a,r,b,s] u_s (Hermitian by mirroring)."""
    for a in range(dk):
        for b in range(a, dk):
            acc = 0.0 + 0.0j
            for r in range(rk):
                cu = np.conj(u[r])
                for s in range(rk):
                    acc += cu * forms[k, a, r, b, s] * u[s]
            mbuf[a, b] = acc
            mbuf[b, a] = np.conj(acc)


@njit(cache=True)
def _seesaw_loops(forms, dims, rsz, locs0, want_max, tol, max_sweeps):
    """Alternating extremal-eigenvector updates from one product start.

    forms: (n, dmax, rmax, dmax, rmax) per-site reshaped form, site leading.
    Returns (value, locals, sweeps, converged, history, history length);
    history[0] is the start objective, history[s] the objective after sweep s.
    """
    n = dims.shape[0]
    dmax = locs0.shape[1]
    rmax = forms.shape[2]
    locs = locs0.copy()
    hist = np.zeros(max_sweeps + 1, dtype=np.float64)
    ua = np.zeros(rmax, dtype=np.complex128)
    ub = np.zeros(rmax, dtype=np.complex128)
    mbuf = np.zeros((dmax, dmax), dtype=np.complex128)

    _kron_others(locs, dims, 0, ua, ub)
    _effective_operator(forms, 0, dims[0], rsz[0], ua, mbuf)
    acc = 0.0 + 0.0j
    for a in range(dims[0]):
        for b in range(dims[0]):
            acc += np.conj(locs[0, a]) * mbuf[a, b] * locs[0, b]
    cur = acc.real
    hist[0] = cur

    sweeps = 0
    converged = False
    for s in range(max_sweeps):
        for k in range(n):
            _kron_others(locs, dims, k, ua, ub)
            _effective_operator(forms, k, dims[k], rsz[k], ua, mbuf)
            mm = np.ascontiguousarray(mbuf[: dims[k], : dims[k]])
            w, v = np.linalg.eigh(mm)
            lam, col = _pick_column_j(w, v, want_max)
            for a in range(dims[k]):
                locs[k, a] = col[a]
            cur = lam
        sweeps = s + 1
        hist[sweeps] = cur
        if abs(hist[sweeps] - hist[sweeps - 1]) <= tol * (1.0 + abs(cur)):
            converged = True
            break
    return cur, locs, sweeps, converged, hist, sweeps + 1


def _seesaw_numpy(forms, dims, rsz, locs0, want_max, tol, max_sweeps):
    """Fallback with per-site einsum contractions and numpy eigh."""
    n = int(dims.shape[0])
    locs = locs0.copy()

    def u_for(k):
        u = np.ones(1, dtype=np.complex128)
        for j in range(n):
            if j != k:
                u = np.kron(u, locs[j, : dims[j]])
        return u

    def eff(k):
        u = u_for(k)
        f = forms[k, : dims[k], : rsz[k], : dims[k], : rsz[k]]
        m = np.einsum("r,arbs,s->ab", u.conj(), f, u)
        return (m + m.conj().T) / 2.0

    hist = np.zeros(max_sweeps + 1, dtype=np.float64)
    m0 = eff(0)
    v0 = locs[0, : dims[0]]
    cur = float(np.real(v0.conj() @ m0 @ v0))
    hist[0] = cur

    sweeps = 0
    converged = False
    for s in range(max_sweeps):
        for k in range(n):
            w, v = np.linalg.eigh(eff(k))
            lam, col = _pick_column(w, v, want_max)
            locs[k, : dims[k]] = col
            cur = float(lam)
        sweeps = s + 1
        hist[sweeps] = cur
        if abs(hist[sweeps] - hist[sweeps - 1]) <= tol * (1.0 + abs(cur)):
            converged = True
            break
    return cur, locs, sweeps, converged, hist, sweeps + 1


def seesaw_run(
    forms: np.ndarray,
    dims: np.ndarray,
    rsz: np.ndarray,
    locs0: np.ndarray,
    want_max: bool,
    tol: float,
    max_sweeps: int,
) -> tuple[float, np.ndarray, int, bool, np.ndarray]:
    """One seesaw restart; returns (value, locals, sweeps, converged, history)."""
    runner = _seesaw_loops if use_numba() else _seesaw_numpy
    val, locs, sweeps, converged, hist, hlen = runner(
        forms, dims, rsz, locs0, bool(want_max), float(tol), int(max_sweeps)
    )
    return float(val), locs, int(sweeps), bool(converged), hist[:hlen].copy()


# ---------------------------------------------------------------------------
# batched product quadratic form
# ---------------------------------------------------------------------------

@njit(cache=True)
def _batch_eval_loops(locs, dims, x):
    b_count = locs.shape[0]
    n = dims.shape[0]
    dtot = x.shape[0]
    out = np.empty(b_count, dtype=np.float64)
    psi = np.zeros(dtot, dtype=np.complex128)
    tmp = np.zeros(dtot, dtype=np.complex128)
    for b in range(b_count):
        ln = 1
        psi[0] = 1.0 + 0.0j
        for k in range(n):
            dk = dims[k]
            for a in range(ln):
                va = psi[a]
                for c in range(dk):
                    tmp[a * dk + c] = va * locs[b, k, c]
            ln *= dk
            for a in range(ln):
                psi[a] = tmp[a]
        acc = 0.0
        for i in range(dtot):
            row = 0.0 + 0.0j
            for j in range(dtot):
                row += x[i, j] * psi[j]
            acc += (np.conj(psi[i]) * row).real
        out[b] = acc
    return out


def _batch_eval_numpy(local_arrays, x):
    psi = local_arrays[0]
    b_count = psi.shape[0]
    for arr in local_arrays[1:]:
        psi = (psi[:, :, None] * arr[:, None, :]).reshape(b_count, -1)
    y = psi @ x.T
    return np.einsum("bi,bi->b", psi.conj(), y).real


def product_form_batch(local_arrays: list[np.ndarray], x: np.ndarray) -> np.ndarray:
    """<psi_b|X|psi_b> for a batch of product vectors given per-site arrays.

    ``local_arrays[k]`` holds the (count, d_k) local vectors of site k.
    """
    x = np.ascontiguousarray(x, dtype=np.complex128)
    if not use_numba():
        return _batch_eval_numpy([np.asarray(a, dtype=np.complex128) for a in local_arrays], x)
    dims = np.array([a.shape[1] for a in local_arrays], dtype=np.int64)
    b_count = local_arrays[0].shape[0]
    dmax = int(dims.max())
    locs = np.zeros((b_count, len(local_arrays), dmax), dtype=np.complex128)
    for k, arr in enumerate(local_arrays):
        locs[:, k, : arr.shape[1]] = arr
    return _batch_eval_loops(locs, dims, x)


def warmup() -> None:
    """Compile the numba kernels on tiny inputs (no-op on the numpy path)."""
    if not (HAVE_NUMBA and use_numba()):
        return
    gram = np.zeros((2, 2, 2, 2), dtype=np.complex128)
    gram[:, :, 0, 0] = 1.0
    flat = np.eye(4, dtype=np.complex128).reshape(-1)
    _grid_scan_loops(gram, flat, True)
    gram1 = gram[:1]
    _grid_scan_loops(gram1, np.eye(2, dtype=np.complex128).reshape(-1), False)
    forms = np.zeros((2, 2, 2, 2, 2), dtype=np.complex128)
    for k in range(2):
        for a in range(2):
            for r in range(2):
                forms[k, a, r, a, r] = 1.0
    dims = np.array([2, 2], dtype=np.int64)
    rsz = np.array([2, 2], dtype=np.int64)
    locs0 = np.zeros((2, 2), dtype=np.complex128)
    locs0[:, 0] = 1.0
    _seesaw_loops(forms, dims, rsz, locs0, True, 1e-10, 3)
    _batch_eval_loops(locs0[None, :, :], dims, np.eye(4, dtype=np.complex128))
