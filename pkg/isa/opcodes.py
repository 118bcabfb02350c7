"""Opcode table of the implemented instruction set."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Format(str, Enum):
    R = "R"
    I = "I"  # noqa: E741
    J = "J"


class LatencyClass(str, Enum):
    """Groups used by the cycle-count report (ALU, memory transfer, control)."""

    ALU = "r"
    MEMORY = "i"
    CONTROL = "j"


class Syntax(str, Enum):
    """Operand layouts accepted by the assembler."""

    RD_RS_RT = "rd, rs, rt"
    RD_RT_SHAMT = "rd, rt, shamt"
    RT_RS_IMM = "rt, rs, imm"
    RS_RT_LABEL = "rs, rt, label"
    RT_OFFSET_RS = "rt, offset(rs)"
    RS = "rs"
    TARGET = "target"
    FLAG = "flag"


@dataclass(frozen=True)
class Mnemonic:
    name: str
    format: Format
    opcode: int
    funct: int | None
    base_cycles: int
    syntax: Syntax
    latency_class: LatencyClass

    @property
    def key(self) -> tuple[int, int | None]:
        return (self.opcode, self.funct)


def _alu_r(name: str, funct: int) -> Mnemonic:
    return Mnemonic(name, Format.R, 0, funct, 4, Syntax.RD_RS_RT, LatencyClass.ALU)


def _alu_i(name: str, opcode: int) -> Mnemonic:
    return Mnemonic(name, Format.I, opcode, None, 4, Syntax.RT_RS_IMM, LatencyClass.ALU)


def _shift(name: str, funct: int) -> Mnemonic:
    return Mnemonic(name, Format.R, 0, funct, 4, Syntax.RD_RT_SHAMT, LatencyClass.ALU)


def _transfer(name: str, opcode: int, cycles: int) -> Mnemonic:
    return Mnemonic(
        name, Format.I, opcode, None, cycles, Syntax.RT_OFFSET_RS, LatencyClass.MEMORY
    )


_TABLE: tuple[Mnemonic, ...] = (
    _alu_r("add", 0x20),
    _alu_r("sub", 0x22),
    _alu_r("and", 0x24),
    _alu_r("or", 0x25),
    _alu_r("nor", 0x27),
    _alu_r("slt", 0x2A),
    _alu_i("addi", 0b001000),
    _alu_i("subi", 0b011000),
    _alu_i("slti", 0b001010),
    _alu_i("ori", 0b001101),
    _alu_i("andi", 0b001100),
    _alu_i("nori", 0b011001),
    _shift("sll", 0b000000),
    _shift("srl", 0b000010),
    Mnemonic("beq", Format.I, 0b000100, None, 3, Syntax.RS_RT_LABEL, LatencyClass.CONTROL),
    Mnemonic("bne", Format.I, 0b000101, None, 3, Syntax.RS_RT_LABEL, LatencyClass.CONTROL),
    Mnemonic("jr", Format.R, 0, 0b001000, 3, Syntax.RS, LatencyClass.CONTROL),
    Mnemonic("jal", Format.J, 0b000011, None, 3, Syntax.TARGET, LatencyClass.CONTROL),
    Mnemonic("j", Format.J, 0b000010, None, 3, Syntax.TARGET, LatencyClass.CONTROL),
    Mnemonic("crypt", Format.J, 0b111111, None, 3, Syntax.FLAG, LatencyClass.CONTROL),
    _transfer("lw", 0b100011, 5),
    _transfer("sw", 0b101011, 4),
    _transfer("lkuw", 0b111110, 5),
    _transfer("lklw", 0b111100, 5),
)

MNEMONICS: dict[str, Mnemonic] = {m.name: m for m in _TABLE}
BY_ENCODING: dict[tuple[int, int | None], Mnemonic] = {m.key: m for m in _TABLE}

if len(BY_ENCODING) != len(_TABLE):
    raise RuntimeError("opcode table maps two mnemonics to one encoding")

ALU_R = frozenset({"add", "sub", "and", "or", "nor", "slt"})
ALU_I = frozenset({"addi", "subi", "slti", "ori", "andi", "nori"})
ZERO_EXTENDED = frozenset({"ori", "andi", "nori"})
SHIFTS = frozenset({"sll", "srl"})
BRANCHES = frozenset({"beq", "bne"})
JUMPS = frozenset({"j", "jal", "jr"})
LOADS = frozenset({"lw"})
KEY_LOADS = frozenset({"lkuw", "lklw"})
STORES = frozenset({"sw"})


def lookup(opcode: int, funct: int) -> Mnemonic | None:
    if opcode == 0:
        return BY_ENCODING.get((0, funct))
    return BY_ENCODING.get((opcode, None))
