"""Graph states and stabilizer states.

A graph state Z_B h|0> is rewritten as Z_v X_A Z_Bred h|0>, where Bred is a
partial matching (one CZ layer of depth 1) and A is upper triangular.  For
dense graphs the CNOT word for A plus the few CZ gates of Bred is shorter than
the |B| CZ gates of the naive preparation.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from . import _kernels as K
from .circuit import CZ, Circuit, Gate, H, Z
from .genpzx import fold_circuit, step_b
from .gf2core import BitMat, BitVec, QuadraticForm, SymZeroDiag, Transvection, invert, qform_of_matrix
from .synth import SynthMethod, synthesize, word_to_gates


@njit(cache=True)
def _reduce(B, A, steps):
    """In-place reduction; ``steps`` receives the (i, j) of every A <- A[ij].

    Returns the number of steps written.
    """
    n = B.shape[0]
    pivot = np.zeros(n, dtype=np.bool_)
    nsteps = 0
    for j in range(n - 1):
        if pivot[j]:
            continue
        p = -1
        for i in range(n):
            if K.mget(B, i, j):
                p = i
                break
        if p < 0:
            continue
        pivot[p] = True
        # step a: clear column j below the pivot
        for r in range(p + 1, n):
            if K.mget(B, r, j):
                K.sym_congruence(B, p, r)
                K.col_add(A, p, r)
                steps[nsteps, 0] = p
                steps[nsteps, 1] = r
                nsteps += 1
        # step b: clear row p right of column j
        for c in range(j + 1, n):
            if K.mget(B, p, c):
                K.sym_congruence(B, j, c)
                K.col_add(A, j, c)
                steps[nsteps, 0] = j
                steps[nsteps, 1] = c
                nsteps += 1
    return nsteps


def _reduce_with_steps(B: SymZeroDiag) -> tuple[SymZeroDiag, BitMat, list[Transvection]]:
    n = B.n
    rows = B.rows.copy()
    A = BitMat.identity(n)
    steps = np.zeros((max(n * n, 1), 2), dtype=np.int64)
    k = _reduce(rows, A.rows, steps)
    word = [Transvection(int(i), int(j)) for i, j in steps[:k]]
    return SymZeroDiag.from_rows(rows), A, word


def b_to_b_red(B: SymZeroDiag) -> tuple[SymZeroDiag, BitMat]:
    """Congruence reduction: returns (Bred, A) with A^T B A = Bred."""
    Bred, A, _ = _reduce_with_steps(B)
    return Bred, A


def elimination_word(B: SymZeroDiag) -> list[Transvection]:
    """The transvections chosen by the reduction, whose product is A."""
    return _reduce_with_steps(B)[2]


@dataclass(frozen=True)
class GraphStateForm:
    """Z_v X_A Z_Bred h|0>, with A given by its transvection word."""

    v: BitVec
    word: tuple[Transvection, ...]
    B_red: SymZeroDiag
    A: BitMat

    @property
    def n(self) -> int:
        return self.v.n

    def two_qubit_count(self) -> int:
        return len(self.word) + len(self.B_red)

    def to_circuit(self) -> Circuit:
        """Preparation circuit acting on |0...0>."""
        n = self.n
        gates: list[Gate] = [H(i) for i in range(n)]
        gates += [CZ(i, j) for i, j in self.B_red.sorted_edges()]
        gates += word_to_gates(list(self.word))
        gates += [Z(i) for i in self.v.support()]
        return Circuit(n, tuple(gates))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "v": str(self.v),
            "word": [list(t) for t in self.word],
            "B_red": [list(e) for e in self.B_red.sorted_edges()],
            "two_qubit_count": self.two_qubit_count(),
        }

    def pretty(self) -> str:
        word = "".join(str(t) for t in self.word) or "(empty)"
        z = "".join(f"Z{i}" for i in self.v.support())
        return "\n".join(
            [
                f"v: {self.v}" + (f"  ({z})" if z else ""),
                f"A word: {word}",
                f"B_red: {self.B_red}",
                f"two-qubit gates: {self.two_qubit_count()}",
            ]
        )


def naive_circuit(B: SymZeroDiag) -> Circuit:
    """Z_B h|0>: a Hadamard per qubit, then one CZ per edge."""
    gates: list[Gate] = [H(i) for i in range(B.n)]
    gates += [CZ(i, j) for i, j in B.sorted_edges()]
    return Circuit(B.n, tuple(gates))


def reduce_graph_state(B: SymZeroDiag, method: SynthMethod | str = SynthMethod.PMH) -> GraphStateForm:
    Bred, A = b_to_b_red(B)
    # Z_B = X_A Z_Bred X_A^-1 up to the Pauli layer Z_{q_Bred(A^-1)}
    v = qform_of_matrix(QuadraticForm(Bred), invert(A))
    word = tuple(synthesize(A, method))
    return GraphStateForm(v, word, Bred, A)


@dataclass(frozen=True)
class Gain:
    ell: int
    ell_prime: int
    gain: int

    @property
    def pct(self) -> float:
        return 100.0 * self.gain / self.ell if self.ell else 0.0


def gain(B: SymZeroDiag, f: GraphStateForm) -> Gain:
    ell = len(B)
    ell_prime = f.two_qubit_count()
    return Gain(ell, ell_prime, max(ell - ell_prime, 0))


def best_circuit(B: SymZeroDiag, method: SynthMethod | str = SynthMethod.PMH) -> Circuit:
    """The reduced circuit when it is shorter, otherwise the naive one."""
    f = reduce_graph_state(B, method)
    if f.two_qubit_count() < len(B):
        return f.to_circuit()
    return naive_circuit(B)


@dataclass(frozen=True)
class StabStateForm:
    """H_a Z_u P_d Z_G h|0>."""

    a: BitVec
    u: BitVec
    d: BitVec
    G: SymZeroDiag

    @property
    def n(self) -> int:
        return self.a.n

    def to_circuit(self) -> Circuit:
        n = self.n
        gates: list[Gate] = [H(i) for i in range(n)]
        gates += [CZ(i, j) for i, j in self.G.sorted_edges()]
        gates += [Gate("P", (i,)) for i in self.d.support()]
        gates += [Z(i) for i in self.u.support()]
        gates += [H(i) for i in self.a.support()]
        return Circuit(n, tuple(gates))

    def pretty(self) -> str:
        return "\n".join([f"a: {self.a}", f"u: {self.u}", f"d: {self.d}", f"G: {self.G}"])


def stab_state_form(c: Circuit) -> StabStateForm:
    """Normal form of C|0>, global phase dropped.

    The right block Z_v P_b Z_B X_A fixes |0>, up to phase, so only the
    left half of the folded form matters.
    """
    a, u, d, D = step_b(fold_circuit(c))
    return StabStateForm(a, u, d, D)


# -- random graphs and statistics -------------------------------------------


def max_edges(n: int) -> int:
    return n * (n - 1) // 2


def random_graph(n: int, ell: int, seed: int | Sequence[int]) -> SymZeroDiag:
    """Uniform over the edge sets of size exactly ``ell``."""
    total = max_edges(n)
    if not 0 <= ell <= total:
        raise ValueError(f"edge count {ell} out of range [0, {total}] for {n} vertices")
    rng = np.random.default_rng(seed)
    picks = rng.choice(total, size=ell, replace=False)
    iu, ju = np.triu_indices(n, k=1)
    return SymZeroDiag(n, zip(iu[picks].tolist(), ju[picks].tolist()))


def sample_gain(n: int, ell: int, seed: int, index: int, method: str = "pmh") -> float:
    """Signed saving (l - l')/l in percent for one seeded sample."""
    B = random_graph(n, ell, [seed, index])
    if not len(B):
        return 0.0
    f = reduce_graph_state(B, method)
    return 100.0 * (len(B) - f.two_qubit_count()) / len(B)


@dataclass(frozen=True)
class CellStats:
    n: int
    edges: int
    samples: int
    mean: float
    stddev: float
    min: float
    max: float
    seed: int


CLAMP_MODES = ("cell", "sample")


def cell_stats(
    n: int,
    ell: int,
    samples: int = 200,
    seed: int = 0,
    jobs: int = 1,
    method: str = "pmh",
    clamp: str = "cell",
) -> CellStats:
    """Average gain in percent over ``samples`` seeded random graphs.

    With ``clamp="cell"`` the signed savings are averaged and a negative
    mean is reported as 0; with ``clamp="sample"`` every sample is clamped
    first.  stddev, min and max always describe the signed savings.
    """
    if not 0 <= ell <= max_edges(n):
        raise ValueError(f"edge count {ell} out of range [0, {max_edges(n)}] for {n} vertices")
    if clamp not in CLAMP_MODES:
        raise ValueError(f"clamp must be one of {CLAMP_MODES}")
    args = ([n] * samples, [ell] * samples, [seed] * samples, range(samples), [method] * samples)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            vals = list(pool.map(sample_gain, *args))
    else:
        vals = list(map(sample_gain, *args))
    if not vals:
        return CellStats(n, ell, 0, 0.0, 0.0, 0.0, 0.0, seed)
    if clamp == "cell":
        mean = max(float(np.mean(vals)), 0.0)
    else:
        mean = float(np.mean([max(x, 0.0) for x in vals]))
    return CellStats(n, ell, samples, mean, statistics.pstdev(vals), min(vals), max(vals), seed)


def edges_for_density(n: int, density: float) -> int:
    return int(math.floor(density * max_edges(n) + 0.5))
