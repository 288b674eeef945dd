"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from . import circuit as circ
from .circuit import Circuit, ParseError, PhaseOctant
from .conjrules import UnsupportedGateError
from .genpzx import IntermediateForm, c_to_gpzx, finish, gpzx_to_circuit, merge_gate
from .gf2core import SymZeroDiag, read_matrix
from .graphstate import cell_stats, edges_for_density, gain, max_edges, naive_circuit, reduce_graph_state
from .oracle import (
    OracleCapExceeded,
    build_unitary,
    equal,
    equal_up_to_octant_phase,
    equal_up_to_phase,
    graph_state,
    oracle_cap,
    state_of,
)
from .pzx import c_to_pzx, pzx_to_circuit
from .synth import SynthMethod, synthesize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_MISMATCH = 3

DEFAULT_STATS_MAX_N = 100


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_circuit(path: str) -> Circuit:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        try:
            return circ.from_json(text)
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"bad JSON circuit: {exc}") from None
    return circ.parse(text)


def _render(c: Circuit, emit: str) -> str:
    if emit == "qasm":
        return circ.export_qasm(c)
    if emit == "json":
        return circ.to_json(c) + "\n"
    return circ.serialize(c)


def _write(text: str, path: str | None, out: TextIO) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_normalize(args, out: TextIO) -> int:
    c = _read_circuit(args.input)
    if args.form == "pzx":
        try:
            f = c_to_pzx(c)
        except UnsupportedGateError as exc:
            raise UsageError(f"PZX form needs P, CZ and CX gates only: {exc}") from None
        emitted = pzx_to_circuit(f, args.synth)
    else:
        f = c_to_gpzx(c)
        emitted = gpzx_to_circuit(f, args.synth)
    if args.emit == "json":
        payload = {"form": f.to_dict(), "circuit": circ.to_dict(emitted)}
        _write(json.dumps(payload) + "\n", args.out, out)
    else:
        out.write(f.pretty() + "\n")
        out.write(f"two-qubit gates: {c.two_qubit_count()} -> {emitted.two_qubit_count()}\n")
        if args.out:
            _write(_render(emitted, args.emit), args.out, out)
        else:
            out.write("\n" + _render(emitted, args.emit))
    if args.verify:
        if c.n > oracle_cap():
            raise OracleCapExceeded(f"{c.n} qubits exceeds the dense-oracle cap of {oracle_cap()}")
        same = equal(build_unitary(c), build_unitary(emitted))
        out.write(("verify: equal\n" if same else "verify: MISMATCH\n"))
        if not same:
            return EXIT_MISMATCH
    return EXIT_OK


def _parse_edges(text: str, n: int | None) -> SymZeroDiag:
    pairs = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        a, sep, b = tok.partition("-")
        if not sep:
            raise ParseError(f"edge {tok!r} must look like i-j")
        try:
            pairs.append((int(a), int(b)))
        except ValueError:
            raise ParseError(f"edge {tok!r} must look like i-j") from None
    if n is None:
        n = 1 + max((max(p) for p in pairs), default=-1)
    try:
        return SymZeroDiag(n, pairs)
    except (ValueError, IndexError) as exc:
        raise ParseError(str(exc)) from None


def cmd_graph_reduce(args, out: TextIO) -> int:
    B = _parse_edges(args.edges, args.qubits)
    f = reduce_graph_state(B, args.synth)
    g = gain(B, f)
    out.write(f.pretty() + "\n")
    out.write(f"naive two-qubit gates: {g.ell}\n")
    out.write(f"gain: {g.gain} ({g.pct:.0f}%)\n")
    prep = f.to_circuit() if f.two_qubit_count() < len(B) or args.keep_reduced else naive_circuit(B)
    out.write("\n" + _render(prep, args.emit))
    if args.verify:
        if B.n > oracle_cap():
            raise OracleCapExceeded(f"{B.n} qubits exceeds the dense-oracle cap of {oracle_cap()}")
        same = equal(state_of(f.to_circuit()), graph_state(B, B.n))
        out.write("verify: equal\n" if same else "verify: MISMATCH\n")
        if not same:
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_synth(args, out: TextIO) -> int:
    try:
        with open(args.matrix, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.matrix}: {exc.strerror}") from None
    try:
        A = read_matrix(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    try:
        word = synthesize(A, args.method)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(("".join(str(t) for t in word) or "(empty)") + "\n")
    out.write(f"count: {len(word)}\n")
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    a = _read_circuit(args.a)
    b = _read_circuit(args.b)
    if a.n != b.n:
        out.write(f"not equal: qubit counts differ ({a.n} vs {b.n})\n")
        return EXIT_MISMATCH
    if args.state:
        same = equal_up_to_phase(state_of(a), state_of(b))
        out.write("equal (states, up to global phase)\n" if same else "not equal\n")
        return EXIT_OK if same else EXIT_MISMATCH
    same, k = equal_up_to_octant_phase(build_unitary(a), build_unitary(b))
    if same:
        out.write(f"equal, phase {PhaseOctant(k)}\n")
        return EXIT_OK
    out.write("not equal\n")
    return EXIT_MISMATCH


def cmd_stats(args, out: TextIO) -> int:
    n = args.qubits
    if n < 2:
        raise UsageError("--qubits must be at least 2")
    if n > DEFAULT_STATS_MAX_N and not args.big:
        raise UsageError(f"--qubits above {DEFAULT_STATS_MAX_N} needs --big")
    if (args.edges is None) == (args.density is None):
        raise UsageError("give exactly one of --edges and --density")
    ell = args.edges if args.edges is not None else edges_for_density(n, args.density)
    if not 0 <= ell <= max_edges(n):
        raise UsageError(f"--edges must lie in [0, {max_edges(n)}] for {n} qubits")
    s = cell_stats(n, ell, args.samples, args.seed, args.jobs, args.synth, args.clamp)
    cells = [
        str(s.n),
        str(s.edges),
        str(s.samples),
        f"{s.mean:.2f}",
        f"{s.stddev:.2f}",
        f"{s.min:.2f}",
        f"{s.max:.2f}",
        str(s.seed),
    ]
    header = ["n", "edges", "samples", "mean_gain_pct", "stddev", "min", "max", "seed"]
    if args.format == "md":
        out.write("| " + " | ".join(header) + " |\n")
        out.write("|" + "---|" * len(header) + "\n")
        out.write("| " + " | ".join(cells) + " |\n")
    else:
        out.write(",".join(header) + "\n")
        out.write(",".join(cells) + "\n")
    return EXIT_OK


REPL_HELP = """one gate per line (H 0, P 1, CX 0 1, CZ 0 1, X 0, ...)
undo      restore the previous form
show      print the current form
finish    print the final layered form
quit      leave
"""


def run_repl(n: int, inp: TextIO, out: TextIO) -> int:
    """Step-through session on a stream; each gate left-multiplies the form."""
    f = IntermediateForm.base(n)
    history: list[IntermediateForm] = []
    out.write(f"{n} qubits; type 'help' for commands\n")
    out.write(f.pretty() + "\n")
    for raw in inp:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        cmd = line.lower()
        if cmd in ("quit", "exit"):
            break
        if cmd == "help":
            out.write(REPL_HELP)
            continue
        if cmd == "show":
            out.write(f.pretty() + "\n")
            continue
        if cmd == "undo":
            if history:
                f = history.pop()
            else:
                out.write("nothing to undo\n")
            out.write(f.pretty() + "\n")
            continue
        if cmd == "finish":
            out.write(finish(f).pretty() + "\n")
            continue
        try:
            c = circ.parse(f"qubits {n}\n{line}\n")
        except ParseError as exc:
            out.write(f"error: {str(exc).split(': ', 1)[-1]}\n")
            continue
        g = c.gates[0]
        if g.kind not in circ.GENERATORS:
            d = circ.desugar(c)
            extra = f" and phase {d.phase}" if d.phase else ""
            out.write(f"{g} -> " + ", ".join(str(x) for x in d.gates) + extra + "\n")
        history.append(f)
        f = merge_gate(g, f)
        out.write(f.pretty() + "\n")
    return EXIT_OK


def cmd_repl(args, out: TextIO) -> int:
    if args.qubits < 1:
        raise UsageError("--qubits must be positive")
    return run_repl(args.qubits, sys.stdin, out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stabnf", description="Normal forms for stabilizer circuits.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    synth_choices = [m.value for m in SynthMethod]

    q = sub.add_parser("normalize", help="rewrite a circuit into a layered normal form")
    q.add_argument("--in", dest="input", required=True, help="circuit file (text or JSON)")
    q.add_argument("--form", choices=["pzx", "genpzx"], default="genpzx")
    q.add_argument("--out", help="write the emitted circuit here")
    q.add_argument("--emit", choices=["text", "qasm", "json"], default="text")
    q.add_argument("--verify", action="store_true", help="check the result with the dense oracle")
    q.add_argument("--synth", choices=synth_choices, default="pmh")
    q.set_defaults(func=cmd_normalize)

    g = sub.add_parser("graph", help="graph-state tools")
    gsub = g.add_subparsers(dest="graph_command", parser_class=_Parser)
    gsub.required = True
    r = gsub.add_parser("reduce", help="shorter preparation circuit for a graph state")
    r.add_argument("--edges", required=True, help='edge list such as "0-3,0-5,1-2"')
    r.add_argument("--qubits", type=int, help="vertex count (default: largest index + 1)")
    r.add_argument("--synth", choices=synth_choices, default="pmh")
    r.add_argument("--emit", choices=["text", "qasm", "json"], default="qasm")
    r.add_argument("--verify", action="store_true")
    r.add_argument("--keep-reduced", action="store_true", help="emit the reduced circuit even without a gain")
    r.set_defaults(func=cmd_graph_reduce)

    s = sub.add_parser("synth", help="CNOT word for an invertible matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--method", choices=synth_choices, default="pmh")
    s.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", help="compare two circuits with the dense oracle")
    v.add_argument("a")
    v.add_argument("b")
    v.add_argument("--state", action="store_true", help="compare C|0> only, up to phase")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("stats", help="average gain over random graph states")
    t.add_argument("--qubits", type=int, required=True)
    t.add_argument("--edges", type=int)
    t.add_argument("--density", type=float, help="edge count as a fraction of n(n-1)/2")
    t.add_argument("--samples", type=int, default=200)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--format", choices=["csv", "md"], default="csv")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--synth", choices=["pmh", "gauss"], default="pmh")
    t.add_argument("--clamp", choices=["cell", "sample"], default="cell")
    t.add_argument("--big", action="store_true", help=f"allow more than {DEFAULT_STATS_MAX_N} qubits")
    t.set_defaults(func=cmd_stats)

    e = sub.add_parser("repl", help="merge gates one at a time and watch the form")
    e.add_argument("--qubits", type=int, required=True)
    e.set_defaults(func=cmd_repl)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, OracleCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
