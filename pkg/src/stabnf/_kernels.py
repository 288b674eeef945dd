"""Numba kernels over bit-packed GF(2) data.

Layout: a vector of dimension n is a ``uint64`` array of ``nwords(n)`` words,
bit ``i`` living in word ``i >> 6`` at position ``i & 63``.  A square matrix is
an ``(n, nwords(n))`` array whose row ``r`` is packed the same way.

Everything here mutates its arguments in place; the public wrappers in
:mod:`stabnf.gf2core` copy first.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)


def nwords(n):
    return max(1, (n + 63) >> 6)


@njit(cache=True, inline="always")
def get(v, i):
    return int((v[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))


@njit(cache=True, inline="always")
def flip(v, i):
    v[i >> 6] ^= np.uint64(1) << np.uint64(i & 63)


@njit(cache=True, inline="always")
def put(v, i, bit):
    mask = np.uint64(1) << np.uint64(i & 63)
    if bit:
        v[i >> 6] |= mask
    else:
        v[i >> 6] &= ~mask


@njit(cache=True, inline="always")
def mget(M, r, c):
    return int((M[r, c >> 6] >> np.uint64(c & 63)) & np.uint64(1))


@njit(cache=True, inline="always")
def mflip(M, r, c):
    M[r, c >> 6] ^= np.uint64(1) << np.uint64(c & 63)


@njit(cache=True)
def row_add(M, dst, src):
    """Left multiplication by [dst src]: row ``src`` is added into row ``dst``."""
    for w in range(M.shape[1]):
        M[dst, w] ^= M[src, w]


@njit(cache=True)
def col_add(M, src, dst):
    """Right multiplication by [src dst]: column ``src`` is added into column ``dst``."""
    sw = src >> 6
    sb = np.uint64(src & 63)
    dw = dst >> 6
    db = np.uint64(dst & 63)
    for r in range(M.shape[0]):
        bit = (M[r, sw] >> sb) & np.uint64(1)
        M[r, dw] ^= bit << db


@njit(cache=True)
def vec_transvect(v, i, j):
    """v <- [ij] v."""
    if get(v, j):
        flip(v, i)


@njit(cache=True)
def sym_congruence(B, i, j):
    """B <- [ji] B [ij] for symmetric zero-diagonal B."""
    row_add(B, j, i)
    col_add(B, i, j)


@njit(cache=True)
def dot(x, y):
    acc = np.uint64(0)
    for w in range(x.shape[0]):
        acc ^= x[w] & y[w]
    # parity of the folded word
    acc ^= acc >> np.uint64(32)
    acc ^= acc >> np.uint64(16)
    acc ^= acc >> np.uint64(8)
    acc ^= acc >> np.uint64(4)
    acc ^= acc >> np.uint64(2)
    acc ^= acc >> np.uint64(1)
    return int(acc & np.uint64(1))


@njit(cache=True)
def popcount_word(x):
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


@njit(cache=True)
def popcount(v):
    c = 0
    for w in range(v.shape[0]):
        c += popcount_word(v[w])
    return c


@njit(cache=True)
def qform(B, x):
    """sum_{i<j} B_ij x_i x_j over GF(2), i.e. parity of the edges inside supp(x)."""
    n = B.shape[0]
    acc = 0
    for i in range(n):
        if get(x, i):
            # edges {i, k} with k > i and x_k = 1
            cnt = 0
            for w in range(x.shape[0]):
                word = B[i, w] & x[w]
                if w == (i >> 6):
                    # drop k <= i
                    sh = np.uint64((i & 63) + 1)
                    if sh == np.uint64(64):
                        word = np.uint64(0)
                    else:
                        word = (word >> sh) << sh
                elif w < (i >> 6):
                    word = np.uint64(0)
                cnt += popcount_word(word)
            acc ^= cnt & 1
    return acc


@njit(cache=True)
def mat_vec(M, x, out):
    """out <- M x."""
    for w in range(out.shape[0]):
        out[w] = np.uint64(0)
    for r in range(M.shape[0]):
        if dot(M[r], x):
            flip(out, r)


@njit(cache=True)
def mat_mul(X, Y, out):
    """out <- X Y (rows of out are XORs of rows of Y)."""
    n = X.shape[0]
    for r in range(n):
        for w in range(out.shape[1]):
            out[r, w] = np.uint64(0)
        for k in range(n):
            if mget(X, r, k):
                for w in range(out.shape[1]):
                    out[r, w] ^= Y[k, w]


@njit(cache=True)
def transpose(M, out):
    n = M.shape[0]
    for w in range(out.shape[1]):
        for r in range(n):
            out[r, w] = np.uint64(0)
    for r in range(n):
        for c in range(n):
            if mget(M, r, c):
                mflip(out, c, r)


@njit(cache=True)
def invert(M, out):
    """Gauss-Jordan inverse; returns False when M is singular."""
    n = M.shape[0]
    work = M.copy()
    for r in range(n):
        for w in range(out.shape[1]):
            out[r, w] = np.uint64(0)
        mflip(out, r, r)
    for col in range(n):
        piv = -1
        for r in range(col, n):
            if mget(work, r, col):
                piv = r
                break
        if piv < 0:
            return False
        if piv != col:
            row_add(work, col, piv)
            row_add(out, col, piv)
        for r in range(n):
            if r != col and mget(work, r, col):
                row_add(work, r, col)
                row_add(out, r, col)
    return True


# ---------------------------------------------------------------------------
# PZX block updates: left multiplication of Z_v P_b Z_B X_A by one gate
# ---------------------------------------------------------------------------


@njit(cache=True)
def pzx_cz(B, i, j):
    mflip(B, i, j)
    mflip(B, j, i)


@njit(cache=True)
def pzx_p(v, b, i):
    if get(b, i):
        flip(v, i)
    flip(b, i)


@njit(cache=True)
def pzx_cx_diag(v, b, B, i, j):
    """Diagonal part of the CNOT case: X_[ij] Z_v P_b Z_B X_[ij]."""
    bi = get(b, i)
    bj = get(b, j)
    bij = mget(B, i, j)
    # v <- [ji]v + b_i b_j e_j + B_ij e_j
    if get(v, i):
        flip(v, j)
    if (bi & bj) ^ bij:
        flip(v, j)
    # B <- [ji]B[ij] + b_i {{i,j}}
    sym_congruence(B, i, j)
    if bi:
        pzx_cz(B, i, j)
    # b <- [ji]b
    if bi:
        flip(b, j)


@njit(cache=True)
def pzx_cx(v, b, B, A, i, j):
    pzx_cx_diag(v, b, B, i, j)
    row_add(A, i, j)


# gate opcodes shared with the Python side
OP_H = 0
OP_P = 1
OP_CX = 2
OP_CZ = 3


@njit(cache=True)
def pzx_run(ops, v, b, B, A):
    """Fold a (k, 3) opcode array, in application order, into the PZX block.

    Returns -1 on success or the index of the first unsupported gate.
    """
    for k in range(ops.shape[0]):
        op = ops[k, 0]
        i = ops[k, 1]
        j = ops[k, 2]
        if op == OP_P:
            pzx_p(v, b, i)
        elif op == OP_CZ:
            pzx_cz(B, i, j)
        elif op == OP_CX:
            pzx_cx(v, b, B, A, i, j)
        else:
            return k
    return -1
