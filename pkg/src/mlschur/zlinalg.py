"""Exact integer linear algebra over Z and Z/m.

Everything here is exact: Smith normal form uses arbitrary-precision
integers (numpy object arrays), and all modular routines reduce eagerly
mod m so that int64 arithmetic never overflows.  The kernel solver works
one prime power at a time: it peels the row module of the constraint
matrix into p-adic layers (each layer a unit-pivot echelon over F_p kept
as exact integer rows), substitutes the layer-0 pivots away, and finishes
with a small diagonalization that tracks column operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

_FLOAT_EXACT = 2 ** 53


def factorize(m: int) -> list[tuple[int, int]]:
    """Prime factorization of m >= 2 as a list of (p, exponent) pairs."""
    out = []
    n = m
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def _as_int64_mod(a, m: int) -> np.ndarray:
    """Reduce an integer matrix (any precision) into int64 residues mod m."""
    arr = np.asarray(a, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    red = np.vectorize(lambda x: int(x) % m, otypes=[object])(arr) if arr.size else arr
    return np.array(red.tolist(), dtype=np.int64).reshape(arr.shape)


def _matmul_mod(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    """Exact (a @ b) % m for int64 inputs with entries in [0, m)."""
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # chunk the inner dimension so float64 products stay exact
    step = max(1, int(_FLOAT_EXACT // max(1, (m - 1) * (m - 1))))
    n = a.shape[1]
    if step >= n:
        c = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
        return c % m
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, n, step):
        part = np.rint(
            a[:, s : s + step].astype(np.float64) @ b[s : s + step, :].astype(np.float64)
        ).astype(np.int64)
        acc = (acc + part) % m
    return acc


class _PadicEchelon:
    """Unit-pivot echelon over F_p whose rows are exact integer rows mod `mod`.

    Pivot entries are exactly 1 and pivot columns are exactly zero in every
    other stored row, so reducing a batch is a single matrix product and the
    leftover of a batch row that is in the F_p row span is divisible by p.
    The quotients (residual rows / p) feed the next p-adic layer.
    """

    def __init__(self, ncols: int, p: int, mod: int):
        self.ncols = ncols
        self.p = p
        self.mod = mod
        self.rows: list[np.ndarray] = []
        self.pivcols: list[int] = []
        self._mat: np.ndarray | None = None

    def _matrix(self) -> np.ndarray:
        if self._mat is None or self._mat.shape[0] != len(self.rows):
            self._mat = (
                np.array(self.rows, dtype=np.int64)
                if self.rows
                else np.zeros((0, self.ncols), dtype=np.int64)
            )
        return self._mat

    def insert(self, batch: np.ndarray) -> np.ndarray:
        """Insert rows; return the nonzero residual rows divided by p."""
        mod, p = self.mod, self.p
        b = np.array(batch, dtype=np.int64) % mod
        if b.size == 0:
            return np.zeros((0, self.ncols), dtype=np.int64)
        if self.pivcols:
            coeff = b[:, self.pivcols]
            b = (b - _matmul_mod(coeff, self._matrix(), mod)) % mod
        while True:
            bp = b % p
            nz_rows = np.nonzero(bp.any(axis=1))[0]
            if nz_rows.size == 0:
                break
            r = int(nz_rows[0])
            j = int(np.nonzero(bp[r])[0][0])
            u = int(b[r, j])
            row = (b[r] * pow(u, -1, mod)) % mod
            if self.rows:
                mat = self._matrix()
                col = mat[:, j].copy()
                if col.any():
                    mat -= np.outer(col, row)
                    mat %= mod
                self.rows = list(mat)
            self.rows.append(row)
            self.pivcols.append(j)
            self._mat = None
            col_b = b[:, j].copy()
            col_b[r] = 0
            b -= np.outer(col_b, row)
            b %= mod
            b[r] = 0
        res = b // p
        keep = np.nonzero(res.any(axis=1))[0]
        return res[keep]


def _kernel_diag_mod_pe(w: np.ndarray, p: int, e: int) -> np.ndarray:
    """Kernel generators of w·x = 0 over Z/p^e via valuation-pivot diagonalization.

    Tracks column operations in V; generators are scaled V columns.  Meant
    for small dense systems (the residual system after pivot substitution).
    """
    mod = p ** e
    r, c = w.shape
    m = w.copy() % mod
    v = np.eye(c, dtype=np.int64)
    avals = [e] * c
    for k in range(min(r, c)):
        block = m[k:, k:]
        if not block.any():
            break
        vals = np.full(block.shape, e, dtype=np.int64)
        t = block.copy()
        active = t != 0
        cur = 0
        while active.any() and cur < e:
            newly = active & (t % p != 0)
            vals[newly] = cur
            active &= ~newly
            t = t // p
            cur += 1
        flat = int(np.argmin(vals))
        i, j = divmod(flat, block.shape[1])
        a = int(vals[i, j])
        if a >= e:
            break
        i += k
        j += k
        m[[k, i], :] = m[[i, k], :]
        m[:, [k, j]] = m[:, [j, k]]
        v[:, [k, j]] = v[:, [j, k]]
        pa = p ** a
        u = int(m[k, k]) // pa
        w_inv = pow(u, -1, mod)
        m[:, k] = (m[:, k] * w_inv) % mod
        v[:, k] = (v[:, k] * w_inv) % mod
        if k + 1 < r:
            q = m[k + 1 :, k] // pa
            if q.any():
                m[k + 1 :, :] = (m[k + 1 :, :] - np.outer(q, m[k, :])) % mod
        if k + 1 < c:
            q = m[k, k + 1 :] // pa
            if q.any():
                m[:, k + 1 :] = (m[:, k + 1 :] - np.outer(m[:, k], q)) % mod
                v[:, k + 1 :] = (v[:, k + 1 :] - np.outer(v[:, k], q)) % mod
        avals[k] = a
    gens = []
    for t in range(c):
        if avals[t] >= 1:
            g = (v[:, t] * (p ** (e - avals[t]))) % mod
            if g.any():
                gens.append(g)
    return (
        np.array(gens, dtype=np.int64) if gens else np.zeros((0, c), dtype=np.int64)
    )


def _kernel_mod_pe(batches, ncols: int, p: int, e: int) -> np.ndarray:
    """Kernel generators mod p^e of the row constraints produced by `batches`."""
    mod = p ** e
    ech0 = _PadicEchelon(ncols, p, mod)
    residual = []
    for batch in batches:
        res = ech0.insert(batch)
        if res.size:
            residual.append(res)
    layers = [ech0]
    cur = np.vstack(residual) if residual else np.zeros((0, ncols), dtype=np.int64)
    for level in range(1, e):
        if cur.shape[0] == 0:
            break
        ech = _PadicEchelon(ncols, p, p ** (e - level))
        cur = ech.insert(cur)
        layers.append(ech)
    piv = layers[0].pivcols
    pivset = set(piv)
    free = [c for c in range(ncols) if c not in pivset]
    if not free:
        return np.zeros((0, ncols), dtype=np.int64)
    # x = S u parametrizes solutions of the layer-0 block (pivots are exact 1s)
    s = np.zeros((ncols, len(free)), dtype=np.int64)
    for i, c in enumerate(free):
        s[c, i] = 1
    e0 = layers[0]._matrix()
    if piv:
        s[piv, :] = (-e0[:, free]) % mod
    wrows = []
    for level in range(1, len(layers)):
        el = layers[level]._matrix()
        if el.shape[0] == 0:
            continue
        red = _matmul_mod(el % mod, s, mod)
        wrows.append((red * (p ** level)) % mod)
    w = (
        np.vstack(wrows) if wrows else np.zeros((0, len(free)), dtype=np.int64)
    )
    gens_u = _kernel_diag_mod_pe(w, p, e)
    if gens_u.shape[0] == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    gens = _matmul_mod(s, gens_u.T, mod).T
    keep = np.nonzero(gens.any(axis=1))[0]
    return gens[keep]


def _batched(a: np.ndarray, size: int = 4096):
    for s in range(0, a.shape[0], size):
        yield a[s : s + size]


def kernel_mod(a, m: int):
    """Generating set of {x : a·x = 0 (mod m)} as rows of an int64 matrix.

    Works prime power by prime power and CRT-lifts the generators; the
    union over primes generates the full solution module.
    """
    if m < 2:
        raise ValueError("modulus must be >= 2")
    arr = _as_int64_mod(a, m)
    ncols = arr.shape[1]
    gens = []
    for p, e in factorize(m):
        pe = p ** e
        part = _kernel_mod_pe(_batched(arr % pe), ncols, p, e)
        if part.shape[0] == 0:
            continue
        t = m // pe
        coef = (t * pow(t, -1, pe)) % m if t > 1 else 1
        lifted = (part.astype(np.int64) * coef) % m
        gens.append(lifted)
    if not gens:
        return np.zeros((0, ncols), dtype=np.int64)
    out = np.vstack(gens)
    keep = np.nonzero(out.any(axis=1))[0]
    return out[keep]


def solve_affine_mod(a, b, m: int):
    """One solution x of a·x = b (mod m), or None when the system is inconsistent.

    Reduces to a kernel computation on [a | -b]: any kernel element whose
    last coordinate is invertible yields a solution; the returned x is
    re-verified by substitution.
    """
    arr = _as_int64_mod(a, m)
    rhs = _as_int64_mod(b, m).reshape(-1)
    if rhs.shape[0] != arr.shape[0]:
        raise ValueError("dimension mismatch between matrix and right-hand side")
    aug = np.hstack([arr, ((-rhs) % m).reshape(-1, 1)])
    kern = kernel_mod(aug, m)
    if kern.shape[0] == 0:
        return None
    tails = [int(x) for x in kern[:, -1]]
    g = m
    combo = np.zeros(kern.shape[0], dtype=object)
    for i, t in enumerate(tails):
        if t == 0:
            continue
        new_g = gcd(g, t)
        if new_g == g:
            continue
        # alpha*g + beta*t == new_g
        alpha, beta = _bezout(g, t)
        combo = (combo * alpha) % m
        combo[i] = (combo[i] + beta) % m
        g = new_g
        if g == 1:
            break
    if gcd(g, m) != 1:
        return None
    inv = pow(int(g), -1, m)
    coeffs = _as_int64_mod((combo * inv) % m, m).reshape(-1)
    sol = _matmul_mod(coeffs.reshape(1, -1), kern, m)[0][:-1]
    check = _matmul_mod(arr, sol.reshape(-1, 1), m).reshape(-1)
    if not np.array_equal(check, rhs % m):
        raise AssertionError("affine solver produced an invalid solution")
    return sol


def _bezout(a: int, b: int) -> tuple[int, int]:
    """Coefficients (x, y) with x*a + y*b == gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


def _snf_diag_mod(rows: np.ndarray, m: int) -> list[int]:
    """Diagonal invariants of Z^s / (row lattice + mZ^s), eagerly reduced mod m.

    Mod-m wraps during elimination only ever subtract vectors of mZ^s, which
    is part of the lattice by construction, so the final diagonal d yields
    the true invariants as gcd(d, m) (with 0 standing for m).
    """
    a = np.array(rows, dtype=np.int64) % m
    r, s = a.shape
    diag = []
    k = 0
    while k < s:
        block = a[k:, k:] if k < r else np.zeros((0, s - k), dtype=np.int64)
        if block.size == 0 or not block.any():
            diag.extend([m] * (s - k))
            break
        while True:
            nz = block[block > 0]
            val = int(nz.min())
            pos = np.argwhere(block == val)[0]
            i, j = int(pos[0]) + k, int(pos[1]) + k
            a[[k, i], :] = a[[i, k], :]
            a[:, [k, j]] = a[:, [j, k]]
            piv = int(a[k, k])
            col = a[k + 1 :, k]
            row = a[k, k + 1 :]
            if not col.any() and not row.any():
                break
            if col.any():
                q = col // piv
                a[k + 1 :, :] = (a[k + 1 :, :] - np.outer(q, a[k, :])) % m
            if row.any():
                q = a[k, k + 1 :] // piv
                a[:, k + 1 :] = (a[:, k + 1 :] - np.outer(a[:, k], q)) % m
            block = a[k:, k:]
        diag.append(gcd(int(a[k, k]), m))
        k += 1
    diag = [d if d else m for d in diag]
    return _divisor_chain(diag)


def _divisor_chain(values: list[int]) -> list[int]:
    """Canonical d1 | d2 | ... chain presenting the same abelian group."""
    vals = [v for v in values if v != 1]
    changed = True
    while changed:
        changed = False
        vals.sort()
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if vals[j] % vals[i]:
                    g = gcd(vals[i], vals[j])
                    l = vals[i] * vals[j] // g
                    vals[i], vals[j] = g, l
                    changed = True
        vals = [v for v in vals if v != 1]
    return sorted(vals)


def span_membership(gens: np.ndarray, vectors: np.ndarray, m: int) -> bool:
    """True when every row of `vectors` lies in the row span of `gens` mod m."""
    if vectors.shape[0] == 0:
        return True
    mat = _as_int64_mod(gens, m)
    for vec in vectors:
        if solve_affine_mod(mat.T, vec, m) is None:
            return False
    return True


def subquotient_invariants(zgens, bgens, m: int) -> list[int]:
    """Invariant factors of (span Z)/(span B) as Z/m-modules.

    Requires span(B) <= span(Z) (checked).  Presents the quotient on the Z
    generators: a relation holds exactly when an integer combination of the
    Z generators lands in span(B) mod m, and those relation vectors are the
    kernel of [Z^T | B^T].
    """
    z = _as_int64_mod(zgens, m) if np.asarray(zgens, dtype=object).size else np.zeros((0, 0), dtype=np.int64)
    if z.shape[0] == 0:
        return []
    b = _as_int64_mod(bgens, m) if np.asarray(bgens, dtype=object).size else np.zeros((0, z.shape[1]), dtype=np.int64)
    if b.shape[0] and b.shape[1] != z.shape[1]:
        raise ValueError("Z and B generators live in different spaces")
    if not span_membership(z, b, m):
        raise ValueError("B generators are not contained in the span of Z")
    s, t = z.shape[0], b.shape[0]
    stacked = np.vstack([z, b]) if t else z
    kern = kernel_mod(stacked.T, m)
    rel = kern[:, :s] if kern.shape[0] else np.zeros((0, s), dtype=np.int64)
    return _snf_diag_mod(rel, m)


def span_order(gens, m: int) -> int:
    """Order of the Z/m-module generated by the given rows."""
    invs = subquotient_invariants(gens, np.zeros((0, np.asarray(gens).shape[1]), dtype=np.int64), m)
    order = 1
    for d in invs:
        order *= d
    return order


@dataclass
class SmithDecomposition:
    """U @ A @ V == D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    d: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def diagonal(self) -> list[int]:
        k = min(self.d.shape)
        return [int(self.d[i, i]) for i in range(k)]


def _object_matrix(a) -> np.ndarray:
    arr = np.asarray(a, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    out = np.empty(arr.shape, dtype=object)
    for i in range(arr.shape[0]):
        for j in range(arr.shape[1]):
            out[i, j] = int(arr[i, j])
    return out


def smith_normal_form(a, check: bool = True) -> SmithDecomposition:
    """Exact Smith normal form over Z with transformation matrices.

    Pivot rule: smallest nonzero absolute value, ties broken by lowest row
    then column index.  The decomposition U @ A @ V == D is re-verified on
    every call unless check=False.
    """
    a0 = _object_matrix(a)
    m = a0.copy()
    r, c = m.shape
    u = np.eye(r, dtype=object)
    v = np.eye(c, dtype=object)
    k = 0
    while k < min(r, c):
        piv = _find_pivot(m, k)
        if piv is None:
            break
        i, j = piv
        if i != k:
            m[[k, i], :] = m[[i, k], :]
            u[[k, i], :] = u[[i, k], :]
        if j != k:
            m[:, [k, j]] = m[:, [j, k]]
            v[:, [k, j]] = v[:, [j, k]]
        while True:
            # clear column k below the pivot
            restart = False
            for i in range(k + 1, r):
                if m[i, k]:
                    q = m[i, k] // m[k, k]
                    if q:
                        m[i, :] -= q * m[k, :]
                        u[i, :] -= q * u[k, :]
                    if m[i, k]:
                        m[[k, i], :] = m[[i, k], :]
                        u[[k, i], :] = u[[i, k], :]
                        restart = True
                        break
            if restart:
                continue
            for j in range(k + 1, c):
                if m[k, j]:
                    q = m[k, j] // m[k, k]
                    if q:
                        m[:, j] -= q * m[:, k]
                        v[:, j] -= q * v[:, k]
                    if m[k, j]:
                        m[:, [k, j]] = m[:, [j, k]]
                        v[:, [k, j]] = v[:, [j, k]]
                        restart = True
                        break
            if restart:
                continue
            offender = None
            piv_val = m[k, k]
            for i in range(k + 1, r):
                for j in range(k + 1, c):
                    if m[i, j] % piv_val:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            m[k, :] += m[offender, :]
            u[k, :] += u[offender, :]
        if m[k, k] < 0:
            m[k, :] = -m[k, :]
            u[k, :] = -u[k, :]
        k += 1
    if check and not np.array_equal(u @ a0 @ v, m):
        raise AssertionError("Smith decomposition failed to recompose")
    return SmithDecomposition(d=m, u=u, v=v)


def _find_pivot(m: np.ndarray, k: int):
    best = None
    r, c = m.shape
    for i in range(k, r):
        for j in range(k, c):
            val = m[i, j]
            if val:
                if best is None or abs(val) < best[0]:
                    best = (abs(val), i, j)
    if best is None:
        return None
    return best[1], best[2]


def det_bareiss(a) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    m = _object_matrix(a).copy()
    n = m.shape[0]
    if n != m.shape[1]:
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k, k] == 0:
            for i in range(k + 1, n):
                if m[i, k]:
                    m[[k, i], :] = m[[i, k], :]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i, j] = (m[i, j] * m[k, k] - m[i, k] * m[k, j]) // prev
        prev = m[k, k]
    return sign * int(m[n - 1, n - 1])
