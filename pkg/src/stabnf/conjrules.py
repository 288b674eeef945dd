"""Pauli products i^lam X_u Z_v and their conjugation rules.

The rules mirror the bit-level updates done inside the merge kernels of
:mod:`stabnf.genpzx`; the tests check both against the dense oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .circuit import CX, Gate
from .gf2core import BitMat, BitVec, DimensionError, QuadraticForm, SymZeroDiag, eval_qform, invert

# the full Hadamard layer h = H_0 H_1 ... H_{n-1}
H_LAYER = "h"


class UnsupportedGateError(ValueError):
    pass


@dataclass(frozen=True)
class PauliTerm:
    """i^lam X_u Z_v (X part on the left)."""

    lam: int
    u: BitVec
    v: BitVec

    def __post_init__(self):
        if self.u.n != self.v.n:
            raise DimensionError("u and v must have the same dimension")
        object.__setattr__(self, "lam", int(self.lam) % 4)

    @property
    def n(self) -> int:
        return self.u.n

    @classmethod
    def identity(cls, n: int) -> PauliTerm:
        return cls(0, BitVec(n), BitVec(n))

    @classmethod
    def x(cls, n: int, i: int) -> PauliTerm:
        return cls(0, BitVec.basis(n, i), BitVec(n))

    @classmethod
    def z(cls, n: int, i: int) -> PauliTerm:
        return cls(0, BitVec(n), BitVec.basis(n, i))

    def __str__(self) -> str:
        return f"i^{self.lam} X_{self.u} Z_{self.v}"


def pauli_mul(p: PauliTerm, q: PauliTerm) -> PauliTerm:
    if p.n != q.n:
        raise DimensionError(f"dimension mismatch: {p.n} vs {q.n}")
    # moving X_{u'} left past Z_v costs (-1)^{u'.v}
    sign = 2 * q.u.dot(p.v)
    return PauliTerm(p.lam + q.lam + sign, p.u ^ q.u, p.v ^ q.v)


def conj_pauli_by_gate(p: PauliTerm, g: Union[Gate, str]) -> PauliTerm:
    """g p g^-1 for g in {P_i, CX, CZ} or the full Hadamard layer."""
    n = p.n
    if isinstance(g, str):
        if g != H_LAYER:
            raise UnsupportedGateError(f"unsupported conjugator {g!r}")
        # h X_u Z_v h = Z_u X_v = (-1)^{u.v} X_v Z_u
        return PauliTerm(p.lam + 2 * p.u.dot(p.v), p.v, p.u)
    for q in g.qubits:
        if q >= n:
            raise IndexError(f"qubit {q} out of range for {n} qubits")
    if g.kind == "P":
        i = g.qubits[0]
        ui = p.u[i]
        v = p.v ^ BitVec.basis(n, i) if ui else p.v
        return PauliTerm(p.lam + ui, p.u, v)
    if g.kind == "CX":
        i, j = g.qubits
        u = p.u.copy()
        v = p.v.copy()
        if u[j]:
            u = u ^ BitVec.basis(n, i)
        if v[i]:
            v = v ^ BitVec.basis(n, j)
        return PauliTerm(p.lam, u, v)
    if g.kind == "CZ":
        i, j = g.qubits
        ui, uj = p.u[i], p.u[j]
        v = p.v
        if uj:
            v = v ^ BitVec.basis(n, i)
        if ui:
            v = v ^ BitVec.basis(n, j)
        return PauliTerm(p.lam + 2 * (ui & uj), p.u, v)
    raise UnsupportedGateError(f"no conjugation rule for {g.kind}")


def conj_pauli_by_layers(p: PauliTerm, layer: Union[BitVec, BitMat, SymZeroDiag]) -> PauliTerm:
    """Conjugate by P_b, X_A or Z_B depending on the type of ``layer``."""
    if layer.n != p.n:
        raise DimensionError(f"dimension mismatch: {p.n} vs {layer.n}")
    if isinstance(layer, BitVec):
        bu = layer & p.u
        return PauliTerm(p.lam + bu.weight(), p.u, p.v ^ bu)
    if isinstance(layer, BitMat):
        A_inv_T = invert(layer).T
        return PauliTerm(p.lam, layer @ p.u, A_inv_T @ p.v)
    if isinstance(layer, SymZeroDiag):
        q = eval_qform(QuadraticForm(layer), p.u)
        return PauliTerm(p.lam + 2 * q, p.u, p.v ^ (layer.as_bitmat() @ p.u))
    raise TypeError(f"unsupported layer type {type(layer).__name__}")


def conj_pauli_by_word(p: PauliTerm, word: Iterable[tuple[int, int]]) -> PauliTerm:
    """Conjugate by X_A for A = t_1 ... t_k, applying t_k's rule first."""
    for i, j in reversed(list(word)):
        p = conj_pauli_by_gate(p, CX(i, j))
    return p

