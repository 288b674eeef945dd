"""Bit-packed GF(2) linear algebra.

Vectors and square matrices are stored as ``uint64`` words (see
:mod:`stabnf._kernels` for the layout).  The value types below are treated as
immutable: every public operation returns a fresh object.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels as K
from ._kernels import nwords


class SingularMatrixError(ValueError):
    """Raised when an operation needs an invertible matrix over GF(2)."""


class DimensionError(ValueError):
    pass


def _check_index(i: int, n: int) -> None:
    if not 0 <= i < n:
        raise IndexError(f"index {i} out of range for dimension {n}")


class BitVec:
    """A vector of F_2^n."""

    __slots__ = ("n", "words")

    def __init__(self, n: int, words: np.ndarray | None = None):
        self.n = n
        if words is None:
            words = np.zeros(nwords(n), dtype=np.uint64)
        self.words = words

    @classmethod
    def zeros(cls, n: int) -> BitVec:
        return cls(n)

    @classmethod
    def ones(cls, n: int) -> BitVec:
        return cls.from_bits([1] * n)

    @classmethod
    def basis(cls, n: int, i: int) -> BitVec:
        _check_index(i, n)
        v = cls(n)
        K.flip(v.words, i)
        return v

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> BitVec:
        v = cls(len(bits))
        for i, x in enumerate(bits):
            if x & 1:
                K.flip(v.words, i)
        return v

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> BitVec:
        v = cls(n)
        for i in support:
            _check_index(i, n)
            K.flip(v.words, i)
        return v

    @classmethod
    def from_str(cls, s: str) -> BitVec:
        """Parse ``"0101"`` (entry 0 first)."""
        return cls.from_bits([int(ch) for ch in s.strip()])

    def __getitem__(self, i: int) -> int:
        _check_index(i, self.n)
        return K.get(self.words, i)

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.bits())

    def bits(self) -> list[int]:
        return [K.get(self.words, i) for i in range(self.n)]

    def support(self) -> list[int]:
        return [i for i in range(self.n) if K.get(self.words, i)]

    def weight(self) -> int:
        return K.popcount(self.words)

    def copy(self) -> BitVec:
        return BitVec(self.n, self.words.copy())

    def _same_dim(self, other: BitVec) -> None:
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __xor__(self, other: BitVec) -> BitVec:
        self._same_dim(other)
        return BitVec(self.n, self.words ^ other.words)

    def __and__(self, other: BitVec) -> BitVec:
        """Hadamard (entrywise) product."""
        self._same_dim(other)
        return BitVec(self.n, self.words & other.words)

    def dot(self, other: BitVec) -> int:
        self._same_dim(other)
        return K.dot(self.words, other.words)

    def is_zero(self) -> bool:
        return not self.words.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.n, self.words.tobytes()))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits())

    def __repr__(self) -> str:
        return f"BitVec('{self}')"


class Transvection(NamedTuple):
    """The elementary matrix [ij] = I + E_ij (target row i, control j)."""

    i: int
    j: int

    def check(self, n: int) -> None:
        _check_index(self.i, n)
        _check_index(self.j, n)
        if self.i == self.j:
            raise ValueError(f"transvection needs distinct indices, got [{self.i}{self.j}]")

    def transpose(self) -> Transvection:
        return Transvection(self.j, self.i)

    def __str__(self) -> str:
        sep = "" if self.i < 10 and self.j < 10 else ","
        return f"[{self.i}{sep}{self.j}]"


class BitMat:
    """A square n x n matrix over GF(2) with packed rows."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: np.ndarray | None = None):
        self.n = n
        if rows is None:
            rows = np.zeros((n, nwords(n)), dtype=np.uint64)
        self.rows = rows

    @classmethod
    def zeros(cls, n: int) -> BitMat:
        return cls(n)

    @classmethod
    def identity(cls, n: int) -> BitMat:
        M = cls(n)
        for i in range(n):
            K.mflip(M.rows, i, i)
        return M

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int] | str]) -> BitMat:
        n = len(rows)
        M = cls(n)
        for r, row in enumerate(rows):
            bits = [int(ch) for ch in row] if isinstance(row, str) else list(row)
            if len(bits) != n:
                raise DimensionError(f"row {r} has length {len(bits)}, expected {n}")
            for c, x in enumerate(bits):
                if x & 1:
                    K.mflip(M.rows, r, c)
        return M

    @classmethod
    def from_array(cls, arr) -> BitMat:
        arr = np.asarray(arr)
        return cls.from_rows(arr.astype(int).tolist())

    @classmethod
    def from_word(cls, n: int, word: Iterable[Transvection]) -> BitMat:
        """Product t_1 t_2 ... t_k of a transvection word."""
        M = cls.identity(n)
        for t in word:
            t = Transvection(*t)
            t.check(n)
            K.col_add(M.rows, t.i, t.j)
        return M

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> BitMat:
        """Matrix sending e_k to e_perm[k]."""
        n = len(perm)
        M = cls(n)
        for k, pk in enumerate(perm):
            K.mflip(M.rows, pk, k)
        return M

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        _check_index(r, self.n)
        _check_index(c, self.n)
        return K.mget(self.rows, r, c)

    def copy(self) -> BitMat:
        return BitMat(self.n, self.rows.copy())

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.uint8)
        for r in range(self.n):
            for c in range(self.n):
                out[r, c] = K.mget(self.rows, r, c)
        return out

    def row(self, r: int) -> BitVec:
        _check_index(r, self.n)
        return BitVec(self.n, self.rows[r].copy())

    def column(self, c: int) -> BitVec:
        _check_index(c, self.n)
        return BitVec.from_bits([K.mget(self.rows, r, c) for r in range(self.n)])

    def row_strings(self) -> list[str]:
        return [str(BitVec(self.n, self.rows[r])) for r in range(self.n)]

    def _same_dim(self, other) -> None:
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __matmul__(self, other):
        if isinstance(other, BitVec):
            self._same_dim(other)
            out = BitVec(self.n)
            K.mat_vec(self.rows, other.words, out.words)
            return out
        if isinstance(other, BitMat):
            self._same_dim(other)
            out = BitMat(self.n)
            K.mat_mul(self.rows, other.rows, out.rows)
            return out
        return NotImplemented

    def __xor__(self, other: BitMat) -> BitMat:
        self._same_dim(other)
        return BitMat(self.n, self.rows ^ other.rows)

    @property
    def T(self) -> BitMat:
        out = BitMat(self.n)
        K.transpose(self.rows, out.rows)
        return out

    def is_identity(self) -> bool:
        return self == BitMat.identity(self.n)

    def is_invertible(self) -> bool:
        scratch = BitMat(self.n)
        return bool(K.invert(self.rows, scratch.rows))

    def is_upper_triangular(self) -> bool:
        return all(
            K.mget(self.rows, r, c) == 0 for r in range(self.n) for c in range(r)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMat):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.rows, other.rows))

    def __hash__(self) -> int:
        return hash((self.n, self.rows.tobytes()))

    def __str__(self) -> str:
        return "\n".join(self.row_strings())

    def __repr__(self) -> str:
        return f"BitMat.from_rows({self.row_strings()!r})"


def transvect_left(M: BitMat, t: Transvection) -> BitMat:
    """Return [ij] M: row j is added into row i."""
    t = Transvection(*t)
    t.check(M.n)
    out = M.copy()
    K.row_add(out.rows, t.i, t.j)
    return out


def transvect_right(M: BitMat, t: Transvection) -> BitMat:
    """Return M [ij]: column i is added into column j."""
    t = Transvection(*t)
    t.check(M.n)
    out = M.copy()
    K.col_add(out.rows, t.i, t.j)
    return out


def invert(M: BitMat) -> BitMat:
    out = BitMat(M.n)
    if not K.invert(M.rows, out.rows):
        raise SingularMatrixError("matrix is singular over GF(2)")
    return out


def fold_word(n: int, word: Iterable[Transvection]) -> BitMat:
    """Matrix product of a transvection word, leftmost factor first."""
    return BitMat.from_word(n, word)


class SymZeroDiag:
    """A symmetric zero-diagonal matrix, i.e. an element of the power set of
    unordered pairs.  Held both as an edge set and as packed rows."""

    __slots__ = ("n", "rows", "edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        self.n = n
        self.rows = np.zeros((n, nwords(n)), dtype=np.uint64)
        canon = set()
        for i, j in edges:
            _check_index(i, n)
            _check_index(j, n)
            if i == j:
                raise ValueError(f"self-pair {{{i},{j}}} is not allowed")
            e = (min(i, j), max(i, j))
            # repeated pairs cancel, as CZ gates do
            canon ^= {e}
        for i, j in canon:
            K.mflip(self.rows, i, j)
            K.mflip(self.rows, j, i)
        self.edges = frozenset(canon)

    @classmethod
    def from_rows(cls, rows: np.ndarray) -> SymZeroDiag:
        """Adopt packed rows, checking symmetry and the zero diagonal."""
        n = rows.shape[0]
        edges = []
        for i in range(n):
            if K.mget(rows, i, i):
                raise ValueError("diagonal entry is non-zero")
            for j in range(i + 1, n):
                a = K.mget(rows, i, j)
                if a != K.mget(rows, j, i):
                    raise ValueError("matrix is not symmetric")
                if a:
                    edges.append((i, j))
        return cls(n, edges)

    @classmethod
    def from_matrix(cls, M: BitMat) -> SymZeroDiag:
        return cls.from_rows(M.rows)

    @classmethod
    def complete(cls, n: int) -> SymZeroDiag:
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def parse_edges(cls, n: int, text: str) -> SymZeroDiag:
        """Parse ``"0-3,0-5,1-2"``."""
        edges = []
        for tok in text.replace(" ", "").split(","):
            if not tok:
                continue
            a, _, b = tok.partition("-")
            edges.append((int(a), int(b)))
        return cls(n, edges)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        _check_index(r, self.n)
        _check_index(c, self.n)
        return K.mget(self.rows, r, c)

    def __len__(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> list[int]:
        return [k for k in range(self.n) if K.mget(self.rows, i, k)]

    def as_bitmat(self) -> BitMat:
        return BitMat(self.n, self.rows.copy())

    def __xor__(self, other: SymZeroDiag) -> SymZeroDiag:
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        return SymZeroDiag(self.n, self.edges ^ other.edges)

    def is_reduced(self) -> bool:
        """At most one non-zero entry per row (a partial matching)."""
        return all(K.popcount(self.rows[r]) <= 1 for r in range(self.n))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymZeroDiag):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __str__(self) -> str:
        return "{" + ",".join(f"{i}{j}" if self.n <= 10 else f"{i}-{j}" for i, j in self.sorted_edges()) + "}"

    def __repr__(self) -> str:
        return f"SymZeroDiag({self.n}, {self.sorted_edges()!r})"


class QuadraticForm:
    """q_B(x) = sum_{i<j} b_ij x_i x_j."""

    __slots__ = ("source",)

    def __init__(self, source: SymZeroDiag):
        self.source = source

    def __call__(self, x: BitVec) -> int:
        return eval_qform(self, x)


def eval_qform(q: QuadraticForm, x: BitVec) -> int:
    if x.n != q.source.n:
        raise DimensionError(f"dimension mismatch: {q.source.n} vs {x.n}")
    return K.qform(q.source.rows, x.words)


def qform_of_matrix(q: QuadraticForm, M: BitMat) -> BitVec:
    """Vector whose entry i is q evaluated on column i of M."""
    if M.n != q.source.n:
        raise DimensionError(f"dimension mismatch: {q.source.n} vs {M.n}")
    cols = M.T
    return BitVec.from_bits([K.qform(q.source.rows, cols.rows[c]) for c in range(M.n)])


def congruence(B: SymZeroDiag, A: BitMat) -> SymZeroDiag:
    """A^T B A, which stays symmetric with zero diagonal."""
    return SymZeroDiag.from_matrix(A.T @ B.as_bitmat() @ A)


def read_matrix(text: str) -> BitMat:
    """Matrix text format: a line with n, then n lines of n characters in {0,1}."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ValueError("empty matrix file")
    n = int(lines[0])
    rows = lines[1:]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, found {len(rows)}")
    for r, row in enumerate(rows):
        if len(row) != n or set(row) - {"0", "1"}:
            raise ValueError(f"row {r} must be {n} characters in {{0,1}}")
    return BitMat.from_rows(rows)


def write_matrix(M: BitMat) -> str:
    return "\n".join([str(M.n), *M.row_strings()]) + "\n"
