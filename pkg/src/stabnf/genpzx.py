"""Layered normal form for arbitrary stabilizer circuits.

A circuit is folded gate by gate into the intermediate form

    H_a P_d Z_D h e^{i phi} X_u Z_v P_b Z_B X_A

(h is the Hadamard on every qubit).  Each gate left-multiplies the current
form; the merge rules push it through the layers with the conjugation
identities of :mod:`stabnf.conjrules`.  At the end X_u is moved left through
h (it becomes Z_u) and redundant Hadamard pairs are cancelled, giving

    e^{i phi} H_r Z_u P_d Z_D H_s Z_v P_b Z_B X_A.

The layers "Z_v P_b Z_B X_A" on the right form a PZX block and are updated
with the same kernels as :mod:`stabnf.pzx`.  The Z part of the Pauli block
and the Z layer of that PZX block are merged into one vector v, which is
legitimate because CNOT conjugation acts on both in the same way.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import _kernels as K
from .circuit import CZ, Circuit, Gate, H, P, PhaseOctant, Z, desugar
from .gf2core import BitMat, BitVec, SymZeroDiag, nwords
from .oracle import dense_cz, dense_h, dense_p, dense_phase, dense_x, dense_x_matrix, dense_z
from .synth import SynthMethod, synthesize, word_to_gates

# ---------------------------------------------------------------------------
# kernels; state is (a, d, D, u, v, b, B, A, ph) with ph a length-1 int64 array
# ---------------------------------------------------------------------------


@njit(cache=True)
def _clear_vertex(D, i):
    n = D.shape[0]
    for k in range(n):
        if K.mget(D, i, k):
            K.mflip(D, i, k)
            K.mflip(D, k, i)


@njit(cache=True)
def _p_into_right(i, u, v, b, ph):
    # P_i X_u Z_v P_b = i^{u_i} X_u Z_{v + u_i e_i} P_i P_b
    if K.get(u, i):
        ph[0] += 2
        K.flip(v, i)
    K.pzx_p(v, b, i)


@njit(cache=True)
def _cx_into_right(i, j, u, v, b, B, A):
    # X_[ij] X_u Z_v P_b Z_B X_A, the Z parts of the Pauli and PZX blocks
    # transform alike so v is folded straight into the PZX kernel
    K.vec_transvect(u, i, j)
    K.pzx_cx(v, b, B, A, i, j)


@njit(cache=True)
def _cz_into_right(i, j, u, v, B, ph):
    ui = K.get(u, i)
    uj = K.get(u, j)
    if ui & uj:
        ph[0] += 4
    if uj:
        K.flip(v, i)
    if ui:
        K.flip(v, j)
    K.pzx_cz(B, i, j)


@njit(cache=True)
def _merge_p(i, a, d, D, u, v, b, B, A, ph):
    n = D.shape[0]
    if not K.get(a, i):
        # P_i P_d = Z_{d_i e_i} P_{d + e_i}; the Z crosses h as an X
        if K.get(d, i):
            K.flip(u, i)
        K.flip(d, i)
        return
    if K.get(d, i):
        # P_i^h P_i = e^{i pi/4} H_i X_i P_i^h, then X_i crosses Z_D and h
        K.flip(a, i)
        K.flip(d, i)
        ui = K.get(u, i)
        for w in range(u.shape[0]):
            u[w] ^= D[i, w]
        K.flip(v, i)
        ph[0] += 1 + 4 * ui
    # now d_i = 0: push P_i^h through Z_D, each edge {i,k} turning into
    # Z_{ik} X_[ik] P_k on the left of the layer
    nw = u.shape[0]
    w1 = np.zeros(nw, dtype=np.uint64)
    d1 = np.zeros(nw, dtype=np.uint64)
    D1 = np.zeros_like(D)
    nbrs = np.empty(n, dtype=np.int64)
    cnt = 0
    for k in range(n):
        if K.mget(D, i, k):
            nbrs[cnt] = k
            cnt += 1
    for t in range(cnt):
        k = nbrs[t]
        K.pzx_p(w1, d1, k)
        K.pzx_cx_diag(w1, d1, D1, i, k)
        K.pzx_cz(D1, i, k)
    _clear_vertex(D, i)
    for r in range(n):
        for w in range(nw):
            D[r, w] ^= D1[r, w]
    # P_d Z_{w1} P_{d1} = Z_{w1 + d.d1} P_{d + d1}
    extra = w1.copy()
    for w in range(nw):
        extra[w] ^= d[w] & d1[w]
        d[w] ^= d1[w]
    # right block: P_i first, then X_M with M = prod [ki], then X_extra
    _p_into_right(i, u, v, b, ph)
    for t in range(cnt):
        _cx_into_right(nbrs[t], i, u, v, b, B, A)
    for w in range(nw):
        u[w] ^= extra[w]


@njit(cache=True)
def _merge_cx_plain(i, j, d, D, u, v, b, B, A):
    """X_[ij] in front of P_d Z_D with no Hadamard on i or j."""
    nw = u.shape[0]
    w1 = np.zeros(nw, dtype=np.uint64)
    K.pzx_cx_diag(w1, d, D, i, j)
    # X_[ij] h = h X_[ji]
    _cx_into_right(j, i, u, v, b, B, A)
    for w in range(nw):
        u[w] ^= w1[w]


@njit(cache=True)
def _swap_vec(x, i, j):
    bi = K.get(x, i)
    bj = K.get(x, j)
    if bi != bj:
        K.flip(x, i)
        K.flip(x, j)


@njit(cache=True)
def _swap_rows(M, i, j):
    for w in range(M.shape[1]):
        t = M[i, w]
        M[i, w] = M[j, w]
        M[j, w] = t


@njit(cache=True)
def _swap_sym(M, i, j):
    _swap_rows(M, i, j)
    n = M.shape[0]
    for r in range(n):
        bi = K.mget(M, r, i)
        bj = K.mget(M, r, j)
        if bi != bj:
            K.mflip(M, r, i)
            K.mflip(M, r, j)


@njit(cache=True)
def _merge_cx(i, j, a, d, D, u, v, b, B, A, ph):
    ai = K.get(a, i)
    aj = K.get(a, j)
    if ai == 0 and aj == 0:
        _merge_cx_plain(i, j, d, D, u, v, b, B, A)
        return
    if ai == 1 and aj == 1:
        # H_i H_j X_[ji] H_i H_j = X_[ij]
        _merge_cx_plain(j, i, d, D, u, v, b, B, A)
        return
    if ai == 1 and aj == 0:
        # H_i X_[ij] H_i = Z_{ij}, which commutes into Z_D
        K.pzx_cz(D, i, j)
        return
    # (0, 1): X_[ij] H_a = H_a Z_{ij}^h
    n = D.shape[0]
    nw = u.shape[0]
    if K.mget(D, i, j):
        # Z^h_{ij} Z_{ij} = Z_{ij} H_i H_j X_(ij); the swap is conjugated
        # through the rest of the form and Z_{ij} H_i H_j = H_i H_j Z^h_{ij}
        K.pzx_cz(D, i, j)
        K.flip(a, i)
        K.flip(a, j)
        _swap_vec(d, i, j)
        _swap_sym(D, i, j)
        _swap_vec(u, i, j)
        _swap_vec(v, i, j)
        _swap_vec(b, i, j)
        _swap_sym(B, i, j)
        _swap_rows(A, i, j)
    # D_ij = 0 from here.  Z^h_{ij} crosses h as Z_{ij}:
    _cz_into_right(i, j, u, v, B, ph)
    # and turns the edges at i and j into Z_{ik} X_[jk] and Z_{jk} X_[ik]
    ni = np.empty(n, dtype=np.int64)
    nj = np.empty(n, dtype=np.int64)
    ci = 0
    cj = 0
    for k in range(n):
        if K.mget(D, i, k):
            ni[ci] = k
            ci += 1
        if K.mget(D, j, k):
            nj[cj] = k
            cj += 1
    w1 = np.zeros(nw, dtype=np.uint64)
    d1 = np.zeros(nw, dtype=np.uint64)
    D1 = np.zeros_like(D)
    for t in range(ci):
        k = ni[t]
        K.pzx_cx_diag(w1, d1, D1, j, k)
        K.pzx_cz(D1, i, k)
    for t in range(cj):
        k = nj[t]
        K.pzx_cx_diag(w1, d1, D1, i, k)
        K.pzx_cz(D1, j, k)
    _clear_vertex(D, i)
    _clear_vertex(D, j)
    for r in range(n):
        for w in range(nw):
            D[r, w] ^= D1[r, w]
    for t in range(ci):
        _cx_into_right(ni[t], j, u, v, b, B, A)
    for t in range(cj):
        _cx_into_right(nj[t], i, u, v, b, B, A)
    for w in range(nw):
        u[w] ^= w1[w]
    # phase gates on i or j leave extra factors in front of the layer
    di = K.get(d, i)
    dj = K.get(d, j)
    if di == 0 and dj == 0:
        return
    saved_a = a.copy()
    for w in range(nw):
        a[w] = np.uint64(0)
    if di == 0 and dj == 1:
        # Z^h_{ij} P_j = P_i^h X_[ij] P_j Z^h_{ij}
        _merge_cx_plain(i, j, d, D, u, v, b, B, A)
        K.flip(a, i)
        _merge_p(i, a, d, D, u, v, b, B, A, ph)
        K.flip(a, i)
    elif di == 1 and dj == 0:
        _merge_cx_plain(j, i, d, D, u, v, b, B, A)
        K.flip(a, j)
        _merge_p(j, a, d, D, u, v, b, B, A, ph)
        K.flip(a, j)
    else:
        saved_d = d.copy()
        for w in range(nw):
            d[w] = np.uint64(0)
        _merge_cx_plain(j, i, d, D, u, v, b, B, A)
        K.flip(a, j)
        _merge_p(j, a, d, D, u, v, b, B, A, ph)
        K.flip(a, j)
        for k in range(n):
            if K.get(saved_d, k):
                _merge_p(k, a, d, D, u, v, b, B, A, ph)
        _merge_cx_plain(i, j, d, D, u, v, b, B, A)
        K.flip(a, i)
        _merge_p(i, a, d, D, u, v, b, B, A, ph)
        K.flip(a, i)
    for w in range(nw):
        a[w] ^= saved_a[w]


@njit(cache=True)
def _merge_run(ops, a, d, D, u, v, b, B, A, ph):
    for k in range(ops.shape[0]):
        op = ops[k, 0]
        i = ops[k, 1]
        j = ops[k, 2]
        if op == K.OP_H:
            K.flip(a, i)
        elif op == K.OP_P:
            _merge_p(i, a, d, D, u, v, b, B, A, ph)
        elif op == K.OP_CX:
            _merge_cx(i, j, a, d, D, u, v, b, B, A, ph)
        else:
            return k
        ph[0] &= 7
    return -1


# ---------------------------------------------------------------------------
# Python-side forms
# ---------------------------------------------------------------------------


@dataclass
class IntermediateForm:
    """H_a P_d Z_D h e^{i phi} X_u Z_v P_b Z_B X_A, held as packed arrays."""

    n: int
    a: np.ndarray
    d: np.ndarray
    D: np.ndarray
    phi: int
    u: np.ndarray
    v: np.ndarray
    b: np.ndarray
    B: np.ndarray
    A: np.ndarray

    @classmethod
    def base(cls, n: int) -> IntermediateForm:
        """The empty circuit, I = H_a h with a all ones."""
        nw = nwords(n)

        def vec():
            return np.zeros(nw, dtype=np.uint64)

        def mat():
            return np.zeros((n, nw), dtype=np.uint64)

        a = vec()
        for i in range(n):
            K.flip(a, i)
        A = mat()
        for i in range(n):
            K.mflip(A, i, i)
        return cls(n, a, vec(), mat(), 0, vec(), vec(), vec(), mat(), A)

    def copy(self) -> IntermediateForm:
        return IntermediateForm(
            self.n,
            self.a.copy(),
            self.d.copy(),
            self.D.copy(),
            self.phi,
            self.u.copy(),
            self.v.copy(),
            self.b.copy(),
            self.B.copy(),
            self.A.copy(),
        )

    def _state(self):
        return (self.a, self.d, self.D, self.u, self.v, self.b, self.B, self.A)

    def _run(self, ops: np.ndarray) -> int:
        ph = np.array([self.phi], dtype=np.int64)
        bad = _merge_run(ops, *self._state(), ph)
        self.phi = int(ph[0]) % 8
        return bad

    # typed views
    def vec(self, name: str) -> BitVec:
        return BitVec(self.n, getattr(self, name).copy())

    def mat(self, name: str) -> BitMat:
        return BitMat(self.n, getattr(self, name).copy())

    def sym(self, name: str) -> SymZeroDiag:
        return SymZeroDiag.from_rows(getattr(self, name))

    def key(self) -> tuple:
        return (
            self.phi,
            *(getattr(self, f).tobytes() for f in ("a", "d", "D", "u", "v", "b", "B", "A")),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntermediateForm):
            return NotImplemented
        return self.n == other.n and self.key() == other.key()

    def dense(self) -> np.ndarray:
        n = self.n
        return (
            dense_h(self.vec("a"), n)
            @ dense_p(self.vec("d"), n)
            @ dense_cz(self.sym("D"), n)
            @ dense_h([1] * n, n)
            @ dense_phase(self.phi, n)
            @ dense_x(self.vec("u"), n)
            @ dense_z(self.vec("v"), n)
            @ dense_p(self.vec("b"), n)
            @ dense_cz(self.sym("B"), n)
            @ dense_x_matrix(self.mat("A"), n)
        )

    def pretty(self) -> str:
        return " | ".join(
            [
                f"a={self.vec('a')}",
                f"d={self.vec('d')}",
                f"D={self.sym('D')}",
                f"phi={PhaseOctant(self.phi)}",
                f"u={self.vec('u')} v={self.vec('v')}",
                f"b={self.vec('b')}",
                f"B={self.sym('B')}",
                "A=" + "/".join(self.mat("A").row_strings()),
            ]
        )


def _check_qubit(f: IntermediateForm, *qs: int) -> None:
    for q in qs:
        if not 0 <= q < f.n:
            raise IndexError(f"qubit {q} out of range for {f.n} qubits")


def merge_h(i: int, f: IntermediateForm) -> IntermediateForm:
    _check_qubit(f, i)
    g = f.copy()
    K.flip(g.a, i)
    return g


def merge_p(i: int, f: IntermediateForm) -> IntermediateForm:
    _check_qubit(f, i)
    g = f.copy()
    g._run(np.array([[K.OP_P, i, -1]], dtype=np.int64))
    return g


def merge_cx(i: int, j: int, f: IntermediateForm) -> IntermediateForm:
    """Form of X_[ij] F (target i, control j)."""
    _check_qubit(f, i, j)
    if i == j:
        raise ValueError("CX needs two distinct qubits")
    g = f.copy()
    g._run(np.array([[K.OP_CX, i, j]], dtype=np.int64))
    return g


def merge_gate(g: Gate, f: IntermediateForm) -> IntermediateForm:
    """Merge any gate; sugar gates go through their generator expansion."""
    out = f
    c = desugar(Circuit(f.n, (g,)))
    for h in c.gates:
        if h.kind == "H":
            out = merge_h(h.qubits[0], out)
        elif h.kind == "P":
            out = merge_p(h.qubits[0], out)
        else:
            out = merge_cx(h.qubits[0], h.qubits[1], out)
    if c.phase:
        out = out.copy()
        out.phi = (out.phi + int(c.phase)) % 8
    return out


def fold_circuit(c: Circuit, f: IntermediateForm | None = None) -> IntermediateForm:
    """Step A: merge every gate of ``c`` (in application order) into ``f``."""
    f = IntermediateForm.base(c.n) if f is None else f.copy()
    c = desugar(c)
    ops = c.opcodes()
    bad = f._run(ops)
    if bad >= 0:
        raise ValueError(f"unexpected gate {c.gates[bad]}")
    f.phi = (f.phi + int(c.phase)) % 8
    return f


@dataclass(frozen=True)
class GenPzxForm:
    """e^{i phi} H_r Z_u P_d Z_D H_s Z_v P_b Z_B X_A."""

    phi: PhaseOctant
    r: BitVec
    u: BitVec
    d: BitVec
    D: SymZeroDiag
    s: BitVec
    v: BitVec
    b: BitVec
    B: SymZeroDiag
    A: BitMat

    @property
    def n(self) -> int:
        return self.r.n

    def dense(self) -> np.ndarray:
        n = self.n
        return (
            dense_phase(self.phi, n)
            @ dense_h(self.r, n)
            @ dense_z(self.u, n)
            @ dense_p(self.d, n)
            @ dense_cz(self.D, n)
            @ dense_h(self.s, n)
            @ dense_z(self.v, n)
            @ dense_p(self.b, n)
            @ dense_cz(self.B, n)
            @ dense_x_matrix(self.A, n)
        )

    def is_identity(self) -> bool:
        return (
            self.phi == 0
            and all(x.is_zero() for x in (self.r, self.u, self.d, self.s, self.v, self.b))
            and len(self.D) == 0
            and len(self.B) == 0
            and self.A.is_identity()
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "phase": int(self.phi),
            "r": str(self.r),
            "u": str(self.u),
            "d": str(self.d),
            "D": [list(e) for e in self.D.sorted_edges()],
            "s": str(self.s),
            "v": str(self.v),
            "b": str(self.b),
            "B": [list(e) for e in self.B.sorted_edges()],
            "A": self.A.row_strings(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def pretty(self) -> str:
        lines = [
            f"phase: {self.phi}",
            f"r: {self.r}",
            f"u: {self.u}",
            f"d: {self.d}",
            f"D: {self.D}",
            f"s: {self.s}",
            f"v: {self.v}",
            f"b: {self.b}",
            f"B: {self.B}",
            "A:",
        ]
        lines += ["  " + row for row in self.A.row_strings()]
        return "\n".join(lines)


def step_b(f: IntermediateForm) -> tuple[BitVec, BitVec, BitVec, SymZeroDiag]:
    """Move X_u left through h: returns (a, u, d, D) of H_a Z_u P_d Z_D h."""
    return f.vec("a"), f.vec("u"), f.vec("d"), f.sym("D")


def finish(f: IntermediateForm) -> GenPzxForm:
    """Steps B and C on a folded intermediate form."""
    n = f.n
    a, u, d, D = step_b(f)
    r = []
    s = []
    for i in range(n):
        busy = u[i] or d[i] or any(K.mget(f.D, i, k) for k in range(n))
        if a[i] and not busy:
            # H_i from H_a meets H_i from h with nothing in between
            r.append(0)
            s.append(0)
        else:
            r.append(a[i])
            s.append(1)
    return GenPzxForm(
        PhaseOctant(f.phi),
        BitVec.from_bits(r) if n else BitVec(0),
        u,
        d,
        D,
        BitVec.from_bits(s) if n else BitVec(0),
        f.vec("v"),
        f.vec("b"),
        f.sym("B"),
        f.mat("A"),
    )


def c_to_gpzx(c: Circuit) -> GenPzxForm:
    return finish(fold_circuit(c))


def gpzx_to_circuit(
    f: GenPzxForm, method: SynthMethod | str = SynthMethod.PMH, with_phase: bool = True
) -> Circuit:
    """Emit CX, CZ, P, Z, H, CZ, P, Z, H layers in application order.

    The global phase goes into the circuit's phase field unless
    ``with_phase`` is off.
    """
    n = f.n
    gates: list[Gate] = list(word_to_gates(synthesize(f.A, method)))
    gates += [CZ(i, j) for i, j in f.B.sorted_edges()]
    gates += [P(i) for i in f.b.support()]
    gates += [Z(i) for i in f.v.support()]
    gates += [H(i) for i in f.s.support()]
    gates += [CZ(i, j) for i, j in f.D.sorted_edges()]
    gates += [P(i) for i in f.d.support()]
    gates += [Z(i) for i in f.u.support()]
    gates += [H(i) for i in f.r.support()]
    return Circuit(n, tuple(gates), f.phi if with_phase else PhaseOctant(0))


def slot_bits(n: int) -> int:
    """Bits held by a GenPZX form: six vectors, two edge sets, A and phi."""
    return 6 * n + 2 * (n * (n - 1) // 2) + n * n + 3
