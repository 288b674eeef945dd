"""Clifford gates and circuits.

Conventions used throughout the package:

* ``CX i j`` is the CNOT with *target* ``i`` and *control* ``j``; it maps the
  basis state x to [ij]x.
* A :class:`Circuit` stores its gates in application order: ``gates[0]`` hits
  the ket first.  The operator of the circuit is therefore
  ``gates[-1] ... gates[1] gates[0]``.  Algorithms that left-multiply a form by
  the factors of a product walk the stored list forward.
* ``Circuit.phase`` is a global phase e^{i k pi/4}, carried as metadata so that
  normal forms can be re-emitted exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ._kernels import OP_CX, OP_CZ, OP_H, OP_P

ONE_QUBIT = ("H", "P", "X", "Y", "Z")
TWO_QUBIT = ("CX", "CZ", "SWAP")
KINDS = ONE_QUBIT + TWO_QUBIT
GENERATORS = ("H", "P", "CX")

_OPCODES = {"H": OP_H, "P": OP_P, "CX": OP_CX, "CZ": OP_CZ}


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PhaseOctant(int):
    """Global phase e^{i k pi/4}, k taken mod 8."""

    def __new__(cls, k: int = 0):
        return super().__new__(cls, int(k) % 8)

    def __add__(self, other):
        return PhaseOctant(int(self) + int(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PhaseOctant(int(self) - int(other))

    def __neg__(self):
        return PhaseOctant(-int(self))

    def angle(self) -> float:
        return np.pi * int(self) / 4

    def __str__(self) -> str:
        return f"{int(self)}·π/4"

    def __repr__(self) -> str:
        return f"PhaseOctant({int(self)})"


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        q = tuple(int(x) for x in self.qubits)
        want = 1 if self.kind in ONE_QUBIT else 2
        if len(q) != want:
            raise ValueError(f"{self.kind} takes {want} qubit(s), got {len(q)}")
        if any(x < 0 for x in q):
            raise ValueError("negative qubit index")
        if want == 2:
            if q[0] == q[1]:
                raise ValueError(f"{self.kind} needs distinct qubits, got {q[0]} twice")
            if self.kind in ("CZ", "SWAP") and q[0] > q[1]:
                q = (q[1], q[0])
        object.__setattr__(self, "qubits", q)

    @property
    def target(self) -> int:
        return self.qubits[0]

    @property
    def control(self) -> int:
        if self.kind != "CX":
            raise AttributeError("only CX has a control")
        return self.qubits[1]

    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.qubits)])


def H(i: int) -> Gate:
    return Gate("H", (i,))


def P(i: int) -> Gate:
    return Gate("P", (i,))


def X(i: int) -> Gate:
    return Gate("X", (i,))


def Y(i: int) -> Gate:
    return Gate("Y", (i,))


def Z(i: int) -> Gate:
    return Gate("Z", (i,))


def CX(target: int, control: int) -> Gate:
    return Gate("CX", (target, control))


def CZ(i: int, j: int) -> Gate:
    return Gate("CZ", (i, j))


def SWAP(i: int, j: int) -> Gate:
    return Gate("SWAP", (i, j))


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()
    phase: PhaseOctant = field(default_factory=PhaseOctant)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        gates = tuple(self.gates)
        for g in gates:
            if not isinstance(g, Gate):
                raise TypeError(f"expected Gate, got {type(g).__name__}")
            for q in g.qubits:
                if q >= self.n:
                    raise ValueError(f"qubit index {q} out of range for {self.n} qubits")
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "phase", PhaseOctant(self.phase))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        """Run ``self`` first, then ``other``."""
        if other.n != self.n:
            raise ValueError("qubit counts differ")
        return Circuit(self.n, self.gates + other.gates, self.phase + other.phase)

    def with_phase(self, k: int) -> Circuit:
        return Circuit(self.n, self.gates, PhaseOctant(k))

    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if g.is_two_qubit())

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def opcodes(self) -> np.ndarray:
        """(len, 3) int64 array for the kernels; raises on non-kernel gates."""
        ops = np.zeros((len(self.gates), 3), dtype=np.int64)
        for k, g in enumerate(self.gates):
            if g.kind not in _OPCODES:
                raise ValueError(f"gate {g} has no opcode; desugar first")
            ops[k, 0] = _OPCODES[g.kind]
            ops[k, 1] = g.qubits[0]
            ops[k, 2] = g.qubits[1] if len(g.qubits) == 2 else -1
        return ops


def parse(text: str) -> Circuit:
    n = None
    phase = 0
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if n is None:
            if head.lower() != "qubits":
                raise ParseError("missing qubits header", lineno)
            if len(toks) != 2 or not toks[1].isdigit():
                raise ParseError("header must read 'qubits <n>'", lineno)
            n = int(toks[1])
            continue
        if head.lower() == "qubits":
            raise ParseError("duplicate qubits header", lineno)
        if head.lower() == "phase":
            if len(toks) != 2:
                raise ParseError("phase line must read 'phase <k>'", lineno)
            try:
                phase += int(toks[1])
            except ValueError:
                raise ParseError(f"bad phase value {toks[1]!r}", lineno) from None
            continue
        kind = head.upper()
        if kind not in KINDS:
            raise ParseError(f"unknown mnemonic {head!r}", lineno)
        try:
            qubits = tuple(int(t) for t in toks[1:])
        except ValueError:
            raise ParseError(f"qubit indices must be integers in {line!r}", lineno) from None
        for q in qubits:
            if not 0 <= q < n:
                raise ParseError(f"qubit index {q} out of range for {n} qubits", lineno)
        try:
            gates.append(Gate(kind, qubits))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    if n is None:
        raise ParseError("missing qubits header")
    return Circuit(n, tuple(gates), PhaseOctant(phase))


def serialize(c: Circuit) -> str:
    lines = [f"qubits {c.n}"]
    if c.phase:
        lines.append(f"phase {int(c.phase)}")
    lines.extend(str(g) for g in c.gates)
    return "\n".join(lines) + "\n"


def desugar(c: Circuit) -> Circuit:
    """Rewrite over {H, P, CX} only.  Exact, including the global phase."""
    out: list[Gate] = []
    phase = int(c.phase)
    for g in c.gates:
        k = g.kind
        if k in GENERATORS:
            out.append(g)
        elif k == "Z":
            i = g.qubits[0]
            out += [P(i), P(i)]
        elif k == "X":
            i = g.qubits[0]
            out += [H(i), P(i), P(i), H(i)]
        elif k == "Y":
            # Y = i X Z, i.e. Z then X with an extra e^{i pi/2}
            i = g.qubits[0]
            out += [P(i), P(i), H(i), P(i), P(i), H(i)]
            phase += 2
        elif k == "CZ":
            i, j = g.qubits
            out += [H(i), CX(i, j), H(i)]
        elif k == "SWAP":
            i, j = g.qubits
            out += [CX(i, j), CX(j, i), CX(i, j)]
    return Circuit(c.n, tuple(out), PhaseOctant(phase))


def export_qasm(c: Circuit) -> str:
    """OpenQASM 2.0.  ``CX i j`` (target i, control j) becomes ``cx q[j],q[i]``."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    if c.phase:
        lines.append(f"// global phase: {int(c.phase)}*pi/4")
    lines.append(f"qreg q[{max(c.n, 1)}];")
    for g in c.gates:
        if g.kind == "P":
            lines.append(f"s q[{g.qubits[0]}];")
        elif g.kind in ONE_QUBIT:
            lines.append(f"{g.kind.lower()} q[{g.qubits[0]}];")
        elif g.kind == "CX":
            lines.append(f"cx q[{g.control}],q[{g.target}];")
        else:
            i, j = g.qubits
            lines.append(f"{g.kind.lower()} q[{i}],q[{j}];")
    return "\n".join(lines) + "\n"


def to_dict(c: Circuit) -> dict:
    return {
        "qubits": c.n,
        "phase": int(c.phase),
        "gates": [[g.kind, *g.qubits] for g in c.gates],
    }


def from_dict(d: dict) -> Circuit:
    gates = tuple(Gate(str(row[0]).upper(), tuple(row[1:])) for row in d.get("gates", []))
    return Circuit(int(d["qubits"]), gates, PhaseOctant(d.get("phase", 0)))


def to_json(c: Circuit) -> str:
    return json.dumps(to_dict(c))


def from_json(text: str) -> Circuit:
    return from_dict(json.loads(text))


def circuit(n: int, gates: Iterable[Gate] = (), phase: int = 0) -> Circuit:
    return Circuit(n, tuple(gates), PhaseOctant(phase))


def inverse(c: Circuit) -> Circuit:
    """Circuit of the inverse operator (P^-1 is emitted as P P P)."""
    out: list[Gate] = []
    for g in reversed(c.gates):
        if g.kind == "P":
            out += [g, g, g]
        else:
            out.append(g)
    return Circuit(c.n, tuple(out), -c.phase)

