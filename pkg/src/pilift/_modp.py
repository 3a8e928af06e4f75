"""Dense linear algebra over the prime field F_p with int64 numpy arrays."""

from __future__ import annotations

import numpy as np


def rref(A: np.ndarray, p: int):
    """Reduced row echelon form of A mod p and the list of pivot columns."""
    R = np.array(A, dtype=np.int64) % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        f = R[:, c].copy()
        f[r] = 0
        R = (R - np.outer(f, R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A: np.ndarray, p: int) -> int:
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {x : A x = 0} mod p."""
    R, piv = rref(A, p)
    n = R.shape[1]
    free = [c for c in range(n) if c not in set(piv)]
    N = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        N[f, j] = 1
        for i, c in enumerate(piv):
            N[c, j] = (-R[i, f]) % p
    return N


def column_echelon(B: np.ndarray, p: int):
    """A basis of the column space of B with B'[pivots] = identity, and those pivot rows."""
    R, piv = rref(B.T, p)
    return np.ascontiguousarray(R[: len(piv)].T), piv


def solve(A: np.ndarray, b: np.ndarray, p: int):
    """Some x with A x = b mod p, or None when the system is inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    aug = np.concatenate([A % p, (np.asarray(b, dtype=np.int64) % p)[:, None]], axis=1)
    R, piv = rref(aug, p)
    if piv and piv[-1] == A.shape[1]:
        return None
    x = np.zeros(A.shape[1], dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, -1]
    return x


def hessenberg(A: np.ndarray, p: int) -> np.ndarray:
    """Upper Hessenberg matrix similar to A mod p."""
    H = np.array(A, dtype=np.int64) % p
    n = H.shape[0]
    for m in range(1, n - 1):
        nz = np.nonzero(H[m:, m - 1])[0]
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            H[[m, i]] = H[[i, m]]
            H[:, [m, i]] = H[:, [i, m]]
        u = H[m + 1:, m - 1] * pow(int(H[m, m - 1]), -1, p) % p
        if not u.any():
            continue
        H[m + 1:] = (H[m + 1:] - np.outer(u, H[m])) % p
        H[:, m] = (H[:, m] + H[:, m + 1:] @ u) % p
    return H


def charpoly(A: np.ndarray, p: int) -> np.ndarray:
    """Coefficients (constant first) of det(xI - A) mod p."""
    H = hessenberg(A, p)
    n = H.shape[0]
    polys = [np.array([1], dtype=np.int64)]
    for k in range(n):
        # expand along the last column of the leading (k+1) x (k+1) block
        cur = np.zeros(k + 2, dtype=np.int64)
        prev = polys[k]
        cur[1:] += prev
        cur[: k + 1] -= H[k, k] * prev
        prod = 1
        for i in range(1, k + 1):
            prod = prod * int(H[k - i + 1, k - i]) % p
            if prod == 0:
                break
            coef = int(H[k - i, k]) * prod % p
            if coef:
                q = polys[k - i]
                cur[: len(q)] -= coef * q
        polys.append(cur % p)
    return polys[n]


def roots(poly: np.ndarray, p: int) -> list:
    """All roots of poly (constant first) in F_p, by evaluation at every field element."""
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in poly[::-1]:
        acc = (acc * xs + int(c)) % p
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def primitive_root_of_unity(e: int, p: int) -> int:
    """An element of exact order e in F_p^* (requires e | p - 1)."""
    from sympy import primefactors

    if (p - 1) % e:
        raise ValueError(f"{e} does not divide {p} - 1")
    qs = primefactors(e)
    for g in range(2, p):
        z = pow(g, (p - 1) // e, p)
        if all(pow(z, e // q, p) != 1 for q in qs):
            return z
    return 1
