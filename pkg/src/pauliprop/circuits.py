"""Plain-text circuit format: parsing and tensor execution.

One instruction per line, '#' starts a comment.  A circuit declares its
dimension and register size first, then instructions:

    D 3
    QUDITS 2
    F q0                  # Fourier gate
    M 2 q0                # multiply-by-2 gate
    PAULI x1 z2 q0        # Pauli gate (identity on the error statistics)
    CX q0 q1              # controlled-X, optional power: CX^2 q0 q1
    CZ^2 q0 q1
    DEP 0.05 q0 q1        # depolarizing on the listed qudits
    DEPX 0.1 q0           # X-axis mixing
    DEPZ 0.1 q0           # Z-axis mixing
    MEASX q0              # X-basis measurement; qudit leaves the register
    DISCARD q1            # trace out
    COSET_REDUCE 1,0:0,1 0,1:1,0   # stabilizer generators as rvec:svec

After MEASX/DISCARD the remaining qudits are renumbered consecutively,
preserving order.  COSET_REDUCE, if present, must be the last instruction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import channels, clifford, ept
from .errors import IllegalInstruction, ParseError
from .modarith import is_unit
from .pauli import PauliLabel

_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class Instruction:
    kind: str
    qudits: tuple[int, ...] = ()
    power: int = 1
    strength: float = 0.0
    x_exp: int = 0
    z_exp: int = 0
    generators: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()
    line: int = 0


@dataclass
class CircuitProgram:
    D: int
    n: int
    instructions: list[Instruction] = field(default_factory=list)


def _tokens(line: str):
    code = line.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(code)]


def _parse_qudit(tok: str, col: int, line_no: int, n: int) -> int:
    if not tok.startswith("q") or not tok[1:].isdigit():
        raise ParseError(f"expected qudit like q0, got {tok!r}", line_no, col)
    q = int(tok[1:])
    if q >= n:
        raise ParseError(f"qudit q{q} outside register of size {n}", line_no, col)
    return q


def _parse_int(tok: str, col: int, line_no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected {what}, got {tok!r}", line_no, col) from None


def _parse_prob(tok: str, col: int, line_no: int) -> float:
    try:
        value = float(tok)
    except ValueError:
        raise ParseError(f"expected a probability, got {tok!r}", line_no, col) from None
    if not 0.0 <= value <= 1.0:
        raise ParseError(f"probability {value} outside [0, 1]", line_no, col)
    return value


def parse_circuit(text: str) -> CircuitProgram:
    """Parse the circuit format; errors carry line and column."""
    program: CircuitProgram | None = None
    n_qudits: int | None = None
    D: int | None = None
    n_current = 0
    reduced = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        (head, col0), rest = toks[0], toks[1:]
        if reduced:
            raise ParseError("no instructions allowed after COSET_REDUCE", line_no, col0)
        if D is None:
            if head != "D":
                raise ParseError("circuit must start with a 'D <dimension>' line", line_no, col0)
            if len(rest) != 1:
                raise ParseError("'D' takes exactly one value", line_no, col0)
            D = _parse_int(rest[0][0], rest[0][1], line_no, "an integer dimension")
            if D < 2:
                raise ParseError(f"dimension must be >= 2, got {D}", line_no, rest[0][1])
            continue
        if n_qudits is None:
            if head != "QUDITS":
                raise ParseError("expected 'QUDITS <count>' after the D line", line_no, col0)
            if len(rest) != 1:
                raise ParseError("'QUDITS' takes exactly one value", line_no, col0)
            n_qudits = _parse_int(rest[0][0], rest[0][1], line_no, "a qudit count")
            if n_qudits < 1:
                raise ParseError(f"need at least one qudit, got {n_qudits}", line_no, rest[0][1])
            n_current = n_qudits
            program = CircuitProgram(D, n_qudits)
            continue

        base, _, power_text = head.partition("^")
        power = 1
        if power_text:
            if base not in ("CX", "CZ"):
                raise ParseError(f"only CX/CZ take a power, got {head!r}", line_no, col0)
            power = _parse_int(power_text, col0 + len(base) + 1, line_no, "a gate power")

        if base == "F":
            if len(rest) != 1:
                raise ParseError("'F' takes exactly one qudit", line_no, col0)
            q = _parse_qudit(rest[0][0], rest[0][1], line_no, n_current)
            program.instructions.append(Instruction("F", (q,), line=line_no))
        elif base == "M":
            if len(rest) != 2:
                raise ParseError("'M' takes a multiplier and a qudit", line_no, col0)
            mult = _parse_int(rest[0][0], rest[0][1], line_no, "a multiplier")
            if not is_unit(mult, D):
                raise ParseError(f"multiplier {mult} is not a unit mod {D}", line_no, rest[0][1])
            q = _parse_qudit(rest[1][0], rest[1][1], line_no, n_current)
            program.instructions.append(Instruction("M", (q,), power=mult, line=line_no))
        elif base == "PAULI":
            if len(rest) != 3 or not rest[0][0].startswith("x") or not rest[1][0].startswith("z"):
                raise ParseError("'PAULI' takes x<r> z<s> q<i>", line_no, col0)
            x = _parse_int(rest[0][0][1:], rest[0][1], line_no, "an x exponent")
            z = _parse_int(rest[1][0][1:], rest[1][1], line_no, "a z exponent")
            q = _parse_qudit(rest[2][0], rest[2][1], line_no, n_current)
            program.instructions.append(
                Instruction("PAULI", (q,), x_exp=x % D, z_exp=z % D, line=line_no)
            )
        elif base in ("CX", "CZ"):
            if len(rest) != 2:
                raise ParseError(f"'{base}' takes control and target qudits", line_no, col0)
            c = _parse_qudit(rest[0][0], rest[0][1], line_no, n_current)
            t = _parse_qudit(rest[1][0], rest[1][1], line_no, n_current)
            if c == t:
                raise ParseError("control and target must differ", line_no, rest[1][1])
            program.instructions.append(Instruction(base, (c, t), power=power % D, line=line_no))
        elif base in ("DEP", "DEPX", "DEPZ"):
            if len(rest) < 2:
                raise ParseError(f"'{base}' takes a strength and at least one qudit", line_no, col0)
            strength = _parse_prob(rest[0][0], rest[0][1], line_no)
            quds = tuple(_parse_qudit(t, c, line_no, n_current) for t, c in rest[1:])
            if len(set(quds)) != len(quds):
                raise ParseError("repeated qudit", line_no, rest[1][1])
            if base != "DEP" and len(quds) != 1:
                raise ParseError(f"'{base}' acts on exactly one qudit", line_no, col0)
            program.instructions.append(Instruction(base, quds, strength=strength, line=line_no))
        elif base == "MEASX":
            if len(rest) != 1:
                raise ParseError("'MEASX' takes exactly one qudit", line_no, col0)
            q = _parse_qudit(rest[0][0], rest[0][1], line_no, n_current)
            if n_current == 1:
                raise ParseError("cannot measure away the last qudit", line_no, col0)
            program.instructions.append(Instruction("MEASX", (q,), line=line_no))
            n_current -= 1
        elif base == "DISCARD":
            if not rest:
                raise ParseError("'DISCARD' takes at least one qudit", line_no, col0)
            quds = tuple(_parse_qudit(t, c, line_no, n_current) for t, c in rest)
            if len(set(quds)) != len(quds):
                raise ParseError("repeated qudit", line_no, rest[0][1])
            if len(quds) >= n_current:
                raise ParseError("cannot discard the whole register", line_no, col0)
            program.instructions.append(Instruction("DISCARD", quds, line=line_no))
            n_current -= len(quds)
        elif base == "COSET_REDUCE":
            if not rest:
                raise ParseError("'COSET_REDUCE' takes at least one generator", line_no, col0)
            gens = []
            for tok, col in rest:
                parts = tok.split(":")
                if len(parts) != 2:
                    raise ParseError(f"generator must look like rvec:svec, got {tok!r}", line_no, col)
                try:
                    xv = tuple(int(v) % D for v in parts[0].split(","))
                    zv = tuple(int(v) % D for v in parts[1].split(","))
                except ValueError:
                    raise ParseError(f"bad generator {tok!r}", line_no, col) from None
                if len(xv) != n_current or len(zv) != n_current:
                    raise ParseError(
                        f"generator length {len(xv)}/{len(zv)} != register size {n_current}",
                        line_no, col,
                    )
                gens.append((xv, zv))
            program.instructions.append(Instruction("COSET_REDUCE", generators=tuple(gens), line=line_no))
            reduced = True
        else:
            raise ParseError(f"unknown instruction {head!r}", line_no, col0)
    if program is None:
        raise ParseError("empty circuit: need 'D' and 'QUDITS' lines", 1, 1)
    if n_qudits is None:
        raise ParseError("missing 'QUDITS' line", 1, 1)
    return program


@dataclass
class RunResult:
    """Final tensor (or reduced table) plus per-measurement flip statistics."""

    tensor: ept.ErrorProbabilityTensor | None
    reduction: ept.CosetReduction | None
    measurements: list[tuple[int, np.ndarray]]


def run_program(program: CircuitProgram) -> RunResult:
    """Propagate the identity tensor through the program's instructions."""
    D = program.D
    tensor = ept.ErrorProbabilityTensor.identity(D, program.n)
    measurements: list[tuple[int, np.ndarray]] = []
    reduction = None
    for instr in program.instructions:
        n = tensor.n
        if instr.kind == "F":
            auto = clifford.automorphism_of(clifford.fourier(instr.qudits[0]), n, D)
            tensor = tensor.apply_clifford(auto)
        elif instr.kind == "M":
            auto = clifford.automorphism_of(clifford.multiply(instr.power, instr.qudits[0]), n, D)
            tensor = tensor.apply_clifford(auto)
        elif instr.kind == "PAULI":
            label = PauliLabel.single(D, n, instr.qudits[0], instr.x_exp, instr.z_exp)
            auto = clifford.automorphism_of(clifford.pauli_gate(label), n, D)
            tensor = tensor.apply_clifford(auto)
        elif instr.kind in ("CX", "CZ"):
            maker = clifford.cx if instr.kind == "CX" else clifford.cz
            auto = clifford.automorphism_of(maker(*instr.qudits, power=instr.power), n, D)
            tensor = tensor.apply_clifford(auto)
        elif instr.kind == "DEP":
            table = channels.depolarizing(instr.strength, D, len(instr.qudits))
            tensor = tensor.apply_channel(channels.embed(table, n, instr.qudits))
        elif instr.kind in ("DEPX", "DEPZ"):
            axis = channels.Axis.X_ONLY if instr.kind == "DEPX" else channels.Axis.Z_ONLY
            table = channels.axis_depolarizing(instr.strength, axis, D)
            tensor = tensor.apply_channel(channels.embed(table, n, instr.qudits))
        elif instr.kind == "MEASX":
            q = instr.qudits[0]
            auto = clifford.automorphism_of(clifford.fourier(q), n, D)
            measured = tensor.apply_clifford(auto).measure(q)
            measurements.append((q, measured.flip_marginal()))
            tensor = measured.tensor()
        elif instr.kind == "DISCARD":
            tensor = tensor.marginalize(instr.qudits)
        elif instr.kind == "COSET_REDUCE":
            basis = ept.StabilizerBasis(
                tuple(PauliLabel(xv, zv, D) for xv, zv in instr.generators), D, tensor.n
            )
            reduction = ept.coset_reduce(tensor, basis)
            tensor = None
        else:  # pragma: no cover - parse guarantees the kind set
            raise IllegalInstruction(f"unhandled instruction {instr.kind}")
    return RunResult(tensor, reduction, measurements)


def csv_lines(result: RunResult, D: int):
    """Tensor dump: columns r_1..r_n, s_1..s_n, probability, sorted
    lexicographically; only nonzero entries are emitted."""
    if result.reduction is not None:
        n = result.reduction.n
        items = result.reduction.items()
    else:
        n = result.tensor.n
        items = result.tensor.support_items()
    header = [f"r_{i+1}" for i in range(n)] + [f"s_{i+1}" for i in range(n)] + ["probability"]
    yield ",".join(header)
    for key, p in items:
        yield ",".join(str(v) for v in key) + f",{p:.17g}"
