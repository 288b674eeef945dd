"""Dense ground truth: unitaries and state vectors in double precision.

Basis ordering: |x_0 x_1 ... x_{n-1}> sits at index sum_i x_i 2^(n-1-i), so
qubit 0 is the most significant bit.  Nothing in here uses the GF(2)
machinery of the rest of the package; layer builders act on basis labels
directly.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate

SQRT_HALF = 1 / np.sqrt(2.0)
TOL = 1e-9
DEFAULT_CAP = 12


class OracleCapExceeded(ValueError):
    pass


def oracle_cap() -> int:
    try:
        return int(os.environ.get("STABNF_ORACLE_CAP", DEFAULT_CAP))
    except ValueError:
        return DEFAULT_CAP


def _check_cap(n: int) -> None:
    cap = oracle_cap()
    if n > cap:
        raise OracleCapExceeded(f"{n} qubits exceeds the dense-oracle cap of {cap}")


def _slot(n: int, axis: int, value: int) -> tuple:
    idx = [slice(None)] * (n + 1)
    idx[axis] = value
    return tuple(idx)


def _slot2(n: int, a: int, va: int, b: int, vb: int) -> tuple:
    idx = [slice(None)] * (n + 1)
    idx[a] = va
    idx[b] = vb
    return tuple(idx)


def apply_gate(psi: np.ndarray, g: Gate, n: int) -> np.ndarray:
    """Apply ``g`` to a tensor of shape (2,)*n + (batch,).  Returns a new array."""
    psi = psi.copy()
    k = g.kind
    if k in ("H", "P", "X", "Y", "Z"):
        i = g.qubits[0]
        s0, s1 = _slot(n, i, 0), _slot(n, i, 1)
        a0, a1 = psi[s0].copy(), psi[s1].copy()
        if k == "H":
            psi[s0] = (a0 + a1) * SQRT_HALF
            psi[s1] = (a0 - a1) * SQRT_HALF
        elif k == "P":
            psi[s1] = 1j * a1
        elif k == "X":
            psi[s0], psi[s1] = a1, a0
        elif k == "Y":
            psi[s0], psi[s1] = -1j * a1, 1j * a0
        else:
            psi[s1] = -a1
        return psi
    i, j = g.qubits
    if k == "CX":
        # target i, control j
        s10, s11 = _slot2(n, j, 1, i, 0), _slot2(n, j, 1, i, 1)
        a, b = psi[s10].copy(), psi[s11].copy()
        psi[s10], psi[s11] = b, a
    elif k == "CZ":
        s = _slot2(n, i, 1, j, 1)
        psi[s] = -psi[s]
    elif k == "SWAP":
        psi = np.swapaxes(psi, i, j).copy()
    return psi


def _run(c: Circuit, psi: np.ndarray) -> np.ndarray:
    for g in c.gates:
        psi = apply_gate(psi, g, c.n)
    if c.phase:
        psi = psi * np.exp(1j * c.phase.angle())
    return psi


def build_unitary(c: Circuit) -> np.ndarray:
    _check_cap(c.n)
    dim = 1 << c.n
    psi = np.eye(dim, dtype=complex).reshape((2,) * c.n + (dim,))
    return _run(c, psi).reshape(dim, dim)


def state_of(c: Circuit) -> np.ndarray:
    """C|0...0> without building the full matrix."""
    _check_cap(c.n)
    dim = 1 << c.n
    psi = np.zeros(dim, dtype=complex)
    psi[0] = 1
    return _run(c, psi.reshape((2,) * c.n + (1,))).reshape(dim)


def equal(U: np.ndarray, V: np.ndarray, tol: float = TOL) -> bool:
    return U.shape == V.shape and bool(np.allclose(U, V, rtol=0, atol=tol))


def equal_up_to_octant_phase(U: np.ndarray, V: np.ndarray, tol: float = TOL) -> tuple[bool, int | None]:
    """Check U = e^{i k pi/4} V and return (flag, k)."""
    if U.shape != V.shape:
        return False, None
    flatV = V.reshape(-1)
    nz = np.flatnonzero(np.abs(flatV) > 1e-6)
    if nz.size == 0:
        return (bool(np.allclose(U, 0, atol=tol)), 0)
    idx = nz[0]
    r = U.reshape(-1)[idx] / flatV[idx]
    if abs(abs(r) - 1) > 1e-6:
        return False, None
    k_real = np.angle(r) / (np.pi / 4)
    k = int(round(k_real))
    if abs(k_real - k) > 1e-6:
        return False, None
    k %= 8
    ok = np.allclose(U, np.exp(1j * np.pi * k / 4) * V, rtol=0, atol=tol)
    return (True, k) if ok else (False, None)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    """Any global phase, used for state comparison."""
    ov = np.vdot(b, a)
    if abs(ov) < 1e-12:
        return bool(np.allclose(a, b, atol=tol))
    return bool(np.allclose(a, (ov / abs(ov)) * b, rtol=0, atol=tol))


def is_unitary(U: np.ndarray, tol: float = TOL) -> bool:
    return bool(np.allclose(U @ U.conj().T, np.eye(U.shape[0]), atol=tol))


# -- dense layer builders ----------------------------------------------------
# Bits are taken as plain 0/1 sequences (a BitVec iterates that way too).


def _labels(n: int) -> np.ndarray:
    """(2^n, n) array of the basis labels x_0..x_{n-1}."""
    idx = np.arange(1 << n)
    return ((idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1).astype(np.int64)


def _index(bits: np.ndarray, n: int) -> np.ndarray:
    weights = 1 << (n - 1 - np.arange(n))
    return (bits * weights).sum(axis=-1)


def _bits(v, n: int) -> np.ndarray:
    arr = np.array(list(v), dtype=np.int64).reshape(-1)
    if arr.size != n:
        raise ValueError(f"expected {n} bits, got {arr.size}")
    return arr & 1


def _edges(B) -> list[tuple[int, int]]:
    edges = getattr(B, "edges", B)
    return [tuple(e) for e in edges]


def _matrix(A, n: int) -> np.ndarray:
    if hasattr(A, "to_array"):
        return A.to_array().astype(np.int64)
    return np.array(A, dtype=np.int64).reshape(n, n) & 1


def dense_diag(values: np.ndarray) -> np.ndarray:
    return np.diag(values.astype(complex))


def dense_z(v, n: int) -> np.ndarray:
    x = _labels(n)
    return dense_diag((-1.0) ** ((x @ _bits(v, n)) & 1))


def dense_p(b, n: int) -> np.ndarray:
    x = _labels(n)
    return dense_diag(1j ** (x @ _bits(b, n)))


def dense_cz(B, n: int) -> np.ndarray:
    x = _labels(n)
    q = np.zeros(1 << n, dtype=np.int64)
    for i, j in _edges(B):
        q ^= x[:, i] & x[:, j]
    return dense_diag((-1.0) ** q)


def dense_x_matrix(A, n: int) -> np.ndarray:
    """Permutation |x> -> |Ax>."""
    M = _matrix(A, n)
    x = _labels(n)
    y = (x @ M.T) & 1
    U = np.zeros((1 << n, 1 << n), dtype=complex)
    U[_index(y, n), _index(x, n)] = 1
    return U


def dense_x(u, n: int) -> np.ndarray:
    """Pauli X_u: |x> -> |x + u>."""
    x = _labels(n)
    y = x ^ _bits(u, n)[None, :]
    U = np.zeros((1 << n, 1 << n), dtype=complex)
    U[_index(y, n), _index(x, n)] = 1
    return U


def dense_h(a, n: int) -> np.ndarray:
    U = np.array([[1.0 + 0j]])
    Hm = np.array([[1, 1], [1, -1]], dtype=complex) * SQRT_HALF
    for ai in _bits(a, n):
        U = np.kron(U, Hm if ai else np.eye(2))
    return U


def dense_pauli(lam: int, u, v, n: int) -> np.ndarray:
    return (1j ** (lam % 4)) * dense_x(u, n) @ dense_z(v, n)


def dense_phase(k: int, n: int) -> np.ndarray:
    return np.exp(1j * np.pi * (k % 8) / 4) * np.eye(1 << n, dtype=complex)


def dense_gate(g: Gate, n: int) -> np.ndarray:
    return build_unitary(Circuit(n, (g,)))


def product(*mats: np.ndarray) -> np.ndarray:
    """Left-to-right operator product."""
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def graph_state(B, n: int) -> np.ndarray:
    """Amplitudes (-1)^{q_B(x)} / 2^{n/2}."""
    x = _labels(n)
    q = np.zeros(1 << n, dtype=np.int64)
    for i, j in _edges(B):
        q ^= x[:, i] & x[:, j]
    return ((-1.0) ** q) / np.sqrt(1 << n) + 0j


def basis_state(bits: Sequence[int]) -> np.ndarray:
    n = len(bits)
    psi = np.zeros(1 << n, dtype=complex)
    psi[int(_index(np.array(bits), n))] = 1
    return psi


def dense_group_closure(generators: Sequence[np.ndarray], limit: int = 100000) -> int:
    """Size of the group generated, by BFS over dense matrices hashed on a 1e-6 grid."""

    def key(M):
        return np.round(np.stack([M.real, M.imag]) * 1e6).astype(np.int64).tobytes()

    start = np.eye(generators[0].shape[0], dtype=complex)
    seen = {key(start)}
    frontier = [start]
    while frontier:
        nxt = []
        for M in frontier:
            for g in generators:
                W = g @ M
                k = key(W)
                if k not in seen:
                    seen.add(k)
                    nxt.append(W)
                    if len(seen) > limit:
                        raise RuntimeError("closure exceeded limit")
        frontier = nxt
    return len(seen)
