"""Normal form Z_v P_b Z_B X_A of circuits over {P, CZ, CX}.

Every such operator has exactly one form (v, b, B, A), so two circuits are
equal as unitaries iff their forms are equal as tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .circuit import CX, CZ, Circuit, Gate, P, Z, inverse
from .conjrules import UnsupportedGateError
from .gf2core import BitMat, BitVec, SymZeroDiag, Transvection
from .oracle import dense_cz, dense_p, dense_x_matrix, dense_z
from .synth import SynthMethod, synthesize, word_to_gates

PZX_KINDS = ("P", "CZ", "CX", "Z", "SWAP")


@dataclass(frozen=True)
class PzxForm:
    v: BitVec
    b: BitVec
    B: SymZeroDiag
    A: BitMat
    # transvections folded into A so far, leftmost factor first; diagnostic only
    word: tuple[Transvection, ...] = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return self.v.n

    @classmethod
    def identity(cls, n: int) -> PzxForm:
        return cls(BitVec(n), BitVec(n), SymZeroDiag(n), BitMat.identity(n))

    def is_identity(self) -> bool:
        return self.v.is_zero() and self.b.is_zero() and len(self.B) == 0 and self.A.is_identity()

    def key(self) -> tuple:
        return (self.v, self.b, self.B, self.A)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "v": str(self.v),
            "b": str(self.b),
            "B": [list(e) for e in self.B.sorted_edges()],
            "A": self.A.row_strings(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> PzxForm:
        n = int(d["n"])
        return cls(
            BitVec.from_str(d["v"]) if d["v"] else BitVec(n),
            BitVec.from_str(d["b"]) if d["b"] else BitVec(n),
            SymZeroDiag(n, [tuple(e) for e in d["B"]]),
            BitMat.from_rows(d["A"]) if n else BitMat(0),
        )

    def pretty(self) -> str:
        return "\n".join(
            [
                f"v: {self.v}",
                f"b: {self.b}",
                f"B: {self.B}",
                "A:",
                *("  " + r for r in self.A.row_strings()),
            ]
        )


def _expand(c: Circuit) -> Circuit:
    """Rewrite Z and SWAP into kernel gates; reject anything outside the group."""
    out: list[Gate] = []
    for g in c.gates:
        if g.kind in ("P", "CZ", "CX"):
            out.append(g)
        elif g.kind == "Z":
            out += [P(g.qubits[0])] * 2
        elif g.kind == "SWAP":
            i, j = g.qubits
            out += [CX(i, j), CX(j, i), CX(i, j)]
        else:
            raise UnsupportedGateError(f"{g} is not a phase, CZ or CNOT gate")
    return Circuit(c.n, tuple(out))


def c_to_pzx(c: Circuit, f_in: PzxForm | None = None, track_word: bool = True) -> PzxForm:
    """Form of C F_in.

    Gates are folded in application order, each one left-multiplying the
    running form.
    """
    n = c.n
    if f_in is None:
        f_in = PzxForm.identity(n)
    if f_in.n != n:
        raise ValueError(f"dimension mismatch: circuit has {n} qubits, form has {f_in.n}")
    if c.phase:
        raise ValueError("a PZX form carries no global phase")
    c = _expand(c)
    v = f_in.v.words.copy()
    b = f_in.b.words.copy()
    B = f_in.B.rows.copy()
    A = f_in.A.rows.copy()
    ops = c.opcodes()
    bad = K.pzx_run(ops, v, b, B, A)
    if bad >= 0:
        raise UnsupportedGateError(f"{c.gates[bad]} is not a phase, CZ or CNOT gate")
    word: tuple[Transvection, ...] = ()
    if track_word:
        new = [Transvection(g.qubits[0], g.qubits[1]) for g in reversed(c.gates) if g.kind == "CX"]
        word = tuple(new) + tuple(f_in.word)
    return PzxForm(BitVec(n, v), BitVec(n, b), SymZeroDiag.from_rows(B), BitMat(n, A), word)


def pzx_to_circuit(f: PzxForm, method: SynthMethod | str = SynthMethod.PMH, native_z: bool = True) -> Circuit:
    """Emit X_A first, then Z_B, P_b and Z_v (application order).

    With ``native_z=False`` the output uses only P, CZ and CX gates.
    """
    n = f.n
    gates: list[Gate] = list(word_to_gates(synthesize(f.A, method)))
    gates += [CZ(i, j) for i, j in f.B.sorted_edges()]
    gates += [P(i) for i in f.b.support()]
    for i in f.v.support():
        gates += [Z(i)] if native_z else [P(i), P(i)]
    return Circuit(n, tuple(gates))


def pzx_compose(f: PzxForm, g: PzxForm) -> PzxForm:
    """Form of the product F G, obtained by folding a circuit for F into G."""
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")
    return c_to_pzx(pzx_to_circuit(f, SynthMethod.GAUSS), g)


def pzx_inverse(f: PzxForm) -> PzxForm:
    """Form of F^-1, via the inverse of an emitted circuit."""
    return c_to_pzx(inverse(pzx_to_circuit(f, SynthMethod.GAUSS, native_z=False)))


def pzx_closure(n: int, limit: int = 10**6) -> int:
    """Number of distinct forms reachable from the identity by the generators."""
    gens: list[Gate] = [P(i) for i in range(n)]
    gens += [CZ(i, j) for i in range(n) for j in range(i + 1, n)]
    gens += [CX(i, j) for i in range(n) for j in range(n) if i != j]
    start = PzxForm.identity(n)
    seen = {start.key()}
    frontier = [start]
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                h = c_to_pzx(Circuit(n, (g,)), f, track_word=False)
                k = h.key()
                if k not in seen:
                    seen.add(k)
                    nxt.append(h)
                    if len(seen) > limit:
                        raise RuntimeError("closure exceeded limit")
        frontier = nxt
    return len(seen)


def pzx_order(n: int) -> int:
    """2^{n(n+1)} prod_{i=1..n} (2^i - 1)."""
    out = 1 << (n * (n + 1))
    for i in range(1, n + 1):
        out *= (1 << i) - 1
    return out


def pzx_dense(f: PzxForm) -> np.ndarray:
    """Dense unitary built layer by layer, independent of any circuit."""
    n = f.n
    return dense_z(f.v, n) @ dense_p(f.b, n) @ dense_cz(f.B, n) @ dense_x_matrix(f.A, n)

