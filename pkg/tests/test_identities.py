"""Every labelled identity of the gate background and the conjugation toolbox,
checked as a dense matrix equality.

Gates are built here from their basis actions, independently of the library's
simulator; the library's own gate matrices are then checked against them.
Each identity is registered under its label so the acceptance run can report
on the whole catalogue.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np
import pytest

from stabnf.circuit import CX, CZ, SWAP, Circuit, Gate, H as Hg, P as Pg
from stabnf.gf2core import BitMat, BitVec, QuadraticForm, SymZeroDiag, Transvection, eval_qform, invert, qform_of_matrix
from stabnf.oracle import build_unitary

TOL = 1e-9
I2 = np.eye(2, dtype=complex)
X1 = np.array([[0, 1], [1, 0]], dtype=complex)
Y1 = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z1 = np.diag([1, -1]).astype(complex)
H1 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
P1 = np.diag([1, 1j])
W8 = np.exp(1j * np.pi / 4)


def close(a, b) -> None:
    assert np.allclose(a, b, atol=TOL, rtol=0), f"max deviation {np.abs(np.asarray(a) - np.asarray(b)).max()}"


def inv(U):
    return U.conj().T


def prod(*ms):
    out = ms[0]
    for m in ms[1:]:
        out = out @ m
    return out


def labels(n):
    return list(itertools.product((0, 1), repeat=n))


def idx(x):
    return int("".join(map(str, x)), 2) if x else 0


def ket(x):
    psi = np.zeros(1 << len(x), dtype=complex)
    psi[idx(x)] = 1
    return psi


def local(M, i, n):
    out = np.eye(1, dtype=complex)
    for q in range(n):
        out = np.kron(out, M if q == i else I2)
    return out


def layer(M, vec):
    """Tensor product with M on every qubit q where vec[q] = 1."""
    out = np.eye(1, dtype=complex)
    for bit in vec:
        out = np.kron(out, M if bit else I2)
    return out


def from_basis_map(n, f):
    """Matrix of |x> -> c |y> for (c, y) = f(x)."""
    U = np.zeros((1 << n, 1 << n), dtype=complex)
    for x in labels(n):
        c, y = f(x)
        U[idx(y), idx(x)] = c
    return U


def cx(i, j, n):
    def f(x):
        y = list(x)
        y[i] ^= x[j]
        return 1, y

    return from_basis_map(n, f)


def cz(i, j, n):
    return from_basis_map(n, lambda x: ((-1) ** (x[i] & x[j]), x))


def swap(i, j, n):
    def f(x):
        y = list(x)
        y[i], y[j] = x[j], x[i]
        return 1, y

    return from_basis_map(n, f)


def Xv(u):
    return layer(X1, u)


def Zv(v):
    return layer(Z1, v)


def Pv(b):
    return layer(P1, b)


def Hv(a):
    return layer(H1, a)


def ZB(B: SymZeroDiag):
    n = B.n
    out = np.eye(1 << n, dtype=complex)
    for i, j in B.sorted_edges():
        out = out @ cz(i, j, n)
    return out


def XA(A: BitMat):
    """|x> -> |Ax>, straight from the matrix."""
    n = A.n
    return from_basis_map(n, lambda x: (1, (A @ BitVec.from_bits(x)).bits()))



def hlayer(n):
    return Hv([1] * n)


def conj_h(U, n):
    h = hlayer(n)
    return h @ U @ h


def vecs(n):
    return [BitVec.from_bits(x) for x in labels(n)]


def all_sym(n):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for mask in range(1 << len(pairs)):
        yield SymZeroDiag(n, [p for k, p in enumerate(pairs) if mask >> k & 1])


def all_invertible(n):
    for bits in itertools.product((0, 1), repeat=n * n):
        A = BitMat.from_array(np.array(bits).reshape(n, n))
        if A.is_invertible():
            yield A


def ordered_pairs(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def distinct_triples(n):
    return list(itertools.permutations(range(n), 3))


def tv(i, j, n):
    return BitMat.from_word(n, [Transvection(i, j)])


def perm_matrix(perm):
    return BitMat.permutation(perm)


def edge(n, i, j):
    return SymZeroDiag(n, [(i, j)])


# -- the catalogue -----------------------------------------------------------

IDENTITIES = {}


def identity(name):
    def deco(fn):
        IDENTITIES[name] = fn
        return fn

    return deco


@identity("involutions")
def _involutions():
    for M in (H1, X1, Y1, Z1):
        close(M @ M, I2)


@identity("anticom")
def _anticom():
    close(X1 @ Z1, -Z1 @ X1)


@identity("yixz")
def _yixz():
    close(Y1, 1j * X1 @ Z1)


@identity("conj-z-h")
def _conj_z_h():
    close(H1 @ Z1 @ H1, X1)


@identity("p-squared")
def _p_squared():
    close(P1 @ P1, Z1)


@identity("conj-x-p")
def _conj_x_p():
    close(P1 @ X1 @ inv(P1), Y1)


@identity("zu")
def _zu():
    for n in (1, 2, 3):
        for v in labels(n):
            for x in labels(n):
                sign = (-1) ** (np.dot(v, x) % 2)
                close(Zv(v) @ ket(x), sign * ket(x))


@identity("pu")
def _pu():
    for n in (1, 2, 3):
        for b in labels(n):
            for x in labels(n):
                close(Pv(b) @ ket(x), 1j ** int(np.dot(b, x)) * ket(x))


def _lib(g: Gate, n: int):
    return build_unitary(Circuit(n, (g,)))


@identity("xij")
def _xij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            if i < j:
                close(_lib(CX(i, j), n), cx(i, j, n))


@identity("xji")
def _xji():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            if i < j:
                close(_lib(CX(j, i), n), cx(j, i, n))


@identity("zij")
def _zij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            close(_lib(CZ(i, j), n), cz(i, j, n))
            for x in labels(n):
                close(cz(i, j, n) @ ket(x), (-1) ** (x[i] & x[j]) * ket(x))


@identity("sij")
def _sij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            close(_lib(SWAP(i, j), n), swap(i, j, n))


@identity("conj-xij-h")
def _conj_xij_h():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            Hi, Hj = local(H1, i, n), local(H1, j, n)
            close(cx(i, j, n), prod(Hi, Hj, cx(j, i, n), Hi, Hj))


@identity("zijxij")
def _zijxij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            Hi, Hj = local(H1, i, n), local(H1, j, n)
            close(cz(i, j, n), prod(Hi, cx(i, j, n), Hi))
            close(cz(i, j, n), prod(Hj, cx(j, i, n), Hj))


@identity("sijxij")
def _sijxij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            a, b = cx(i, j, n), cx(j, i, n)
            close(swap(i, j, n), a @ b @ a)
            close(swap(i, j, n), b @ a @ b)


def pauli(lam, u, v):
    return 1j**lam * _xz(tuple(u), tuple(v))


@identity("pauli-mult")
def _pauli_mult():
    for n in (1, 2):
        for lam, lam2 in itertools.product(range(4), repeat=2):
            for u, v, u2, v2 in itertools.product(labels(n), repeat=4):
                lhs = pauli(lam, u, v) @ pauli(lam2, u2, v2)
                sign = (-1) ** (np.dot(u2, v) % 2)
                uu = [a ^ b for a, b in zip(u, u2)]
                vv = [a ^ b for a, b in zip(v, v2)]
                close(lhs, sign * pauli(lam + lam2, uu, vv))


@identity("hp3")
def _hp3():
    for n in (1, 2, 3):
        for i in range(n):
            HP = local(H1, i, n) @ local(P1, i, n)
            PH = local(P1, i, n) @ local(H1, i, n)
            close(HP @ HP @ HP, W8 * np.eye(1 << n))
            close(PH @ PH @ PH, W8 * np.eye(1 << n))


@identity("zB")
def _zB():
    for n in (2, 3):
        for B in all_sym(n):
            for x in labels(n):
                s = sum(x[i] * x[j] for i, j in B.sorted_edges()) % 2
                close(ZB(B) @ ket(x), (-1) ** s * ket(x))


@identity("qB-form")
def _qB_form():
    for n in (2, 3):
        for B in all_sym(n):
            q = QuadraticForm(B)
            for x in labels(n):
                s = eval_qform(q, BitVec.from_bits(x))
                close(ZB(B) @ ket(x), (-1) ** s * ket(x))


@identity("xijtij")
def _xijtij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            for x in vecs(n):
                close(cx(i, j, n) @ ket(x.bits()), ket((tv(i, j, n) @ x).bits()))


@identity("conj-xij-xjk")
def _conj_xij_xjk():
    n = 3
    for i, j, k in distinct_triples(n):
        a, b, c = cx(i, j, n), cx(j, k, n), cx(i, k, n)
        close(a @ b @ a, c @ b)
        close(a @ b @ a, b @ c)


def czp(v, b, B):
    return Zv(v.bits()) @ Pv(b.bits()) @ ZB(B)


@identity("czpg-mult")
def _czpg_mult():
    rng = np.random.default_rng(7)
    n = 3
    Bs = list(all_sym(n))
    for _ in range(200):
        v, b, v2, b2 = (BitVec.from_bits(rng.integers(0, 2, n).tolist()) for _ in range(4))
        B, B2 = Bs[rng.integers(len(Bs))], Bs[rng.integers(len(Bs))]
        close(czp(v, b, B) @ czp(v2, b2, B2), czp(v ^ v2 ^ (b & b2), b ^ b2, B ^ B2))


@identity("conj-Zij")
def _conj_Zij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            x = cx(i, j, n)
            close(x @ cz(i, j, n) @ x, cz(i, j, n) @ local(Z1, j, n))


@identity("conj-Zik")
def _conj_Zik():
    n = 3
    for i, j, k in distinct_triples(n):
        x = cx(i, j, n)
        close(x @ cz(i, k, n) @ x, cz(i, k, n) @ cz(j, k, n))


@identity("conj-Zpq")
def _conj_Zpq():
    for n in (3,):
        for i, j in ordered_pairs(n):
            x = cx(i, j, n)
            for p, q in itertools.combinations(range(n), 2):
                if i not in (p, q):
                    close(x @ cz(p, q, n) @ x, cz(p, q, n))


@identity("conj-Zi")
def _conj_Zi():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            x = cx(i, j, n)
            close(x @ local(Z1, i, n) @ x, local(Z1, i, n) @ local(Z1, j, n))


@identity("conj-Zj")
def _conj_Zj():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            x = cx(i, j, n)
            close(x @ local(Z1, j, n) @ x, local(Z1, j, n))


@identity("conj-Pi")
def _conj_Pi():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            x = cx(i, j, n)
            close(x @ local(P1, i, n) @ x, local(P1, i, n) @ local(P1, j, n) @ cz(i, j, n))


@identity("conj-Pj")
def _conj_Pj():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            x = cx(i, j, n)
            close(x @ local(P1, j, n) @ x, local(P1, j, n))


@identity("conj-Za-xij")
def _conj_Za_xij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            x = cx(i, j, n)
            for v in vecs(n):
                close(x @ Zv(v.bits()) @ x, Zv((tv(j, i, n) @ v).bits()))


@identity("conj-Pb-xij")
def _conj_Pb_xij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            x = cx(i, j, n)
            for b in vecs(n):
                bi, bj = b[i], b[j]
                zpart = Zv(BitVec.from_support(n, [j] if bi & bj else []).bits())
                rhs = zpart @ Pv((tv(j, i, n) @ b).bits()) @ (cz(i, j, n) if bi else np.eye(1 << n))
                close(x @ Pv(b.bits()) @ x, rhs)


@identity("conj-ZB-xij")
def _conj_ZB_xij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            x = cx(i, j, n)
            for B in all_sym(n):
                ev = BitVec.from_support(n, [j] if B[i, j] else [])
                B2 = SymZeroDiag.from_matrix(tv(j, i, n) @ B.as_bitmat() @ tv(i, j, n))
                close(x @ ZB(B) @ x, Zv(ev.bits()) @ ZB(B2))


def _split(B: SymZeroDiag, i: int, j: int):
    n = B.n
    Bi = SymZeroDiag(n, [e for e in B.sorted_edges() if i in e])
    Bic = Bi ^ B
    Bi_prime = Bi ^ (edge(n, i, j) if B[i, j] else SymZeroDiag(n))
    lam = [k for k in range(n) if k != i and Bi_prime[i, k]]
    return Bic, lam


@identity("one-hand")
def _one_hand():
    n = 3
    for i, j in ordered_pairs(n):
        for B in all_sym(n):
            Bic, lam = _split(B, i, j)
            B2 = SymZeroDiag.from_matrix(tv(j, i, n) @ B.as_bitmat() @ tv(i, j, n))
            rhs = (cz(i, j, n) if B[i, j] else np.eye(1 << n)) @ ZB(Bic)
            for k in lam:
                rhs = rhs @ cz(i, k, n) @ cz(j, k, n)
            close(ZB(B2), rhs)


@identity("other-hand")
def _other_hand():
    n = 3
    for i, j in ordered_pairs(n):
        x = cx(i, j, n)
        for B in all_sym(n):
            Bic, lam = _split(B, i, j)
            rhs = (cz(i, j, n) @ local(Z1, j, n) if B[i, j] else np.eye(1 << n)) @ ZB(Bic)
            for k in lam:
                rhs = rhs @ cz(i, k, n) @ cz(j, k, n)
            close(x @ ZB(B) @ x, rhs)


@identity("conj-ZB-XA")
def _conj_ZB_XA():
    for n in (2, 3):
        Bs = list(all_sym(n))
        for A in all_invertible(n):
            Ai = invert(A)
            for B in Bs:
                v = qform_of_matrix(QuadraticForm(B), Ai)
                B2 = SymZeroDiag.from_matrix(Ai.T @ B.as_bitmat() @ Ai)
                close(XA(A) @ ZB(B) @ inv(XA(A)), Zv(v.bits()) @ ZB(B2))


@identity("conj-Za-sij")
def _conj_Za_sij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            s = swap(i, j, n)
            perm = list(range(n))
            perm[i], perm[j] = j, i
            for v in vecs(n):
                close(s @ Zv(v.bits()) @ s, Zv((perm_matrix(perm) @ v).bits()))


@identity("conj-Pb-sij")
def _conj_Pb_sij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            s = swap(i, j, n)
            perm = list(range(n))
            perm[i], perm[j] = j, i
            for b in vecs(n):
                close(s @ Pv(b.bits()) @ s, Pv((perm_matrix(perm) @ b).bits()))


@identity("conj-ZB-sij")
def _conj_ZB_sij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            s = swap(i, j, n)
            perm = list(range(n))
            perm[i], perm[j] = j, i
            S = perm_matrix(perm)
            for B in all_sym(n):
                close(s @ ZB(B) @ s, ZB(SymZeroDiag.from_matrix(S @ B.as_bitmat() @ S)))


@identity("conj-ZB-sigma")
def _conj_ZB_sigma():
    for n in (2, 3):
        for perm in itertools.permutations(range(n)):
            S = perm_matrix(perm)
            U = XA(S)
            for B in all_sym(n):
                close(U @ ZB(B) @ inv(U), ZB(SymZeroDiag.from_matrix(S @ B.as_bitmat() @ invert(S))))


@identity("conj-XA-h")
def _conj_XA_h():
    for n in (1, 2, 3):
        for A in all_invertible(n):
            close(conj_h(XA(A), n), XA(invert(A).T))


@identity("conj-p-ph")
def _conj_p_ph():
    for n in (1, 2, 3):
        for i in range(n):
            Ph = conj_h(local(P1, i, n), n)
            close(Ph @ local(P1, i, n) @ inv(Ph), W8 * local(H1, i, n) @ local(X1, i, n))


@identity("conj-z-ph")
def _conj_z_ph():
    for n in (2, 3):
        for i, k in ordered_pairs(n):
            Ph = conj_h(local(P1, i, n), n)
            close(Ph @ cz(i, k, n) @ inv(Ph), cz(i, k, n) @ cx(i, k, n) @ local(P1, k, n))


@identity("conj-pj-zijh")
def _conj_pj_zijh():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            Zh = conj_h(cz(i, j, n), n)
            Pih = conj_h(local(P1, i, n), n)
            close(Zh @ local(P1, j, n) @ inv(Zh), Pih @ cx(i, j, n) @ local(P1, j, n))


@identity("conj-zij-zijh")
def _conj_zij_zijh():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            Z = cz(i, j, n)
            Zh = conj_h(Z, n)
            HH = local(H1, i, n) @ local(H1, j, n)
            s = swap(i, j, n)
            close(Zh @ Z @ inv(Zh), Z @ Zh @ Z)
            close(Z @ Zh @ Z, HH @ s)
            close(HH @ s, s @ HH)


@identity("conj-zik-zijh")
def _conj_zik_zijh():
    n = 3
    for i, j, k in distinct_triples(n):
        Zh = conj_h(cz(i, j, n), n)
        close(Zh @ cz(i, k, n) @ inv(Zh), cx(j, k, n) @ cz(i, k, n))
        close(cx(j, k, n) @ cz(i, k, n), cz(i, k, n) @ cx(j, k, n))


@functools.lru_cache(maxsize=None)
def _xz(u, v):
    return Xv(u) @ Zv(v)


def xz(u, v):
    return _xz(tuple(u.bits()), tuple(v.bits()))


@identity("conj-xz-pi")
def _conj_xz_pi():
    for n in (1, 2, 3):
        for i in range(n):
            Pi = local(P1, i, n)
            for u in vecs(n):
                for v in vecs(n):
                    ev = BitVec.basis(n, i) if u[i] else BitVec(n)
                    close(Pi @ xz(u, v) @ inv(Pi), 1j ** u[i] * xz(u, v ^ ev))


@identity("conj-xz-xij")
def _conj_xz_xij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            x = cx(i, j, n)
            for u in vecs(n):
                for v in vecs(n):
                    close(x @ xz(u, v) @ x, xz(tv(i, j, n) @ u, tv(j, i, n) @ v))


@identity("conj-xz-zij")
def _conj_xz_zij():
    for n in (2, 3):
        for i, j in ordered_pairs(n):
            z = cz(i, j, n)
            E = edge(n, i, j).as_bitmat()
            for u in vecs(n):
                for v in vecs(n):
                    close(z @ xz(u, v) @ z, (-1) ** (u[i] & u[j]) * xz(u, v ^ (E @ u)))


@identity("conj-xz-h")
def _conj_xz_h():
    # the printed rule omits the sign (-1)^{u.v} picked up when Z_u X_v is
    # reordered as X_v Z_u
    for n in (1, 2, 3):
        h = hlayer(n)
        for u in vecs(n):
            for v in vecs(n):
                close(h @ xz(u, v) @ h, (-1) ** u.dot(v) * xz(v, u))


@identity("conj-xz-pb")
def _conj_xz_pb():
    # the phase exponent is sum_i b_i u_i; the printed sum_i u_i only agrees
    # when b covers the support of u
    for n in (1, 2, 3):
        for b in vecs(n):
            Pb = Pv(b.bits())
            for u in vecs(n):
                for v in vecs(n):
                    bu = b & u
                    close(Pb @ xz(u, v) @ inv(Pb), 1j ** bu.weight() * xz(u, v ^ bu))


@identity("conj-xz-XA")
def _conj_xz_XA():
    for n in (2, 3):
        for A in all_invertible(n):
            U = XA(A)
            AiT = invert(A).T
            for u in vecs(n):
                for v in vecs(n):
                    close(U @ xz(u, v) @ inv(U), xz(A @ u, AiT @ v))


@identity("conj-xz-ZB")
def _conj_xz_ZB():
    for n in (2, 3):
        for B in all_sym(n):
            Z = ZB(B)
            q = QuadraticForm(B)
            M = B.as_bitmat()
            for u in vecs(n):
                for v in vecs(n):
                    close(Z @ xz(u, v) @ Z, (-1) ** eval_qform(q, u) * xz(u, v ^ (M @ u)))


@pytest.mark.parametrize("name", list(IDENTITIES))
def test_identity(name):
    IDENTITIES[name]()


def test_catalogue_covers_every_label():
    assert len(IDENTITIES) >= 39


def test_printed_conj_xz_h_needs_sign():
    # X_1 Z_1 conjugated by H is -X_1 Z_1, not +X_1 Z_1
    u = v = BitVec.from_bits([1])
    assert not np.allclose(H1 @ xz(u, v) @ H1, xz(v, u))


def test_printed_conj_xz_pb_phase_is_wrong_without_b():
    # b = 0 leaves every Pauli unchanged, the printed i^{sum u_i} would not
    u = BitVec.from_bits([1])
    v = BitVec.from_bits([0])
    assert np.allclose(Pv([0]) @ xz(u, v) @ Pv([0]), xz(u, v))
    assert not np.allclose(xz(u, v), 1j * xz(u, v))


def test_single_qubit_library_gates_match_definitions():
    for n in (1, 2, 3):
        for i in range(n):
            close(_lib(Hg(i), n), local(H1, i, n))
            close(_lib(Pg(i), n), local(P1, i, n))
            for kind, M in (("X", X1), ("Y", Y1), ("Z", Z1)):
                close(_lib(Gate(kind, (i,)), n), local(M, i, n))


def test_z0_on_basis_100():
    # qubit 0 is the leftmost label bit
    close(_lib(Gate("Z", (0,)), 3) @ ket((1, 0, 0)), -ket((1, 0, 0)))
