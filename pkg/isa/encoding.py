"""32-bit instruction encoding and decoding.

Field layout (bit ranges inclusive):

    R-type  op[31:26] rs[25:21] rt[20:16] rd[15:11] shamt[10:6] funct[5:0]
    I-type  op[31:26] rs[25:21] rt[20:16] immediate[15:0]
    J-type  op[31:26] target[25:0]

Fields that do not belong to the active format are zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from isa.opcodes import Format, Mnemonic, lookup
from services.errors import EncodingError, IllegalInstructionError

WORD_MASK = 0xFFFFFFFF


@dataclass(frozen=True)
class Instruction:
    format: Format
    opcode: int = 0
    rs: int = 0
    rt: int = 0
    rd: int = 0
    shamt: int = 0
    funct: int = 0
    immediate: int = 0
    target: int = 0

    @property
    def mnemonic(self) -> Mnemonic:
        found = lookup(self.opcode, self.funct)
        if found is None:
            raise IllegalInstructionError(encode(self))
        return found

    @property
    def is_nop(self) -> bool:
        return self == NOP

    @property
    def name(self) -> str:
        return "nop" if self.is_nop else self.mnemonic.name


NOP = Instruction(Format.R)


def sign_extend16(value: int) -> int:
    value &= 0xFFFF
    return value - 0x10000 if value & 0x8000 else value


def _check(field: str, value: int, low: int, high: int) -> None:
    if not low <= value <= high:
        raise EncodingError(field, value, high)


def encode(instr: Instruction) -> int:
    """Pack an instruction into its 32-bit word."""
    _check("opcode", instr.opcode, 0, 63)
    word = instr.opcode << 26

    if instr.format is Format.R:
        _check("rs", instr.rs, 0, 31)
        _check("rt", instr.rt, 0, 31)
        _check("rd", instr.rd, 0, 31)
        _check("shamt", instr.shamt, 0, 31)
        _check("funct", instr.funct, 0, 63)
        return (
            word
            | instr.rs << 21
            | instr.rt << 16
            | instr.rd << 11
            | instr.shamt << 6
            | instr.funct
        )

    if instr.format is Format.I:
        _check("rs", instr.rs, 0, 31)
        _check("rt", instr.rt, 0, 31)
        _check("immediate", instr.immediate, -0x8000, 0x7FFF)
        return word | instr.rs << 21 | instr.rt << 16 | (instr.immediate & 0xFFFF)

    _check("target", instr.target, 0, (1 << 26) - 1)
    return word | instr.target


def decode(word: int, pc: int | None = None) -> Instruction:
    """Unpack a word of the implemented subset; anything else is illegal."""
    word &= WORD_MASK
    opcode = word >> 26
    funct = word & 0x3F
    mnemonic = lookup(opcode, funct)
    if mnemonic is None:
        raise IllegalInstructionError(word, pc=pc)

    if mnemonic.format is Format.R:
        return Instruction(
            Format.R,
            opcode=opcode,
            rs=(word >> 21) & 0x1F,
            rt=(word >> 16) & 0x1F,
            rd=(word >> 11) & 0x1F,
            shamt=(word >> 6) & 0x1F,
            funct=funct,
        )

    if mnemonic.format is Format.I:
        return Instruction(
            Format.I,
            opcode=opcode,
            rs=(word >> 21) & 0x1F,
            rt=(word >> 16) & 0x1F,
            immediate=sign_extend16(word),
        )

    target = word & 0x3FFFFFF
    # CRYPT carries a single flag bit.
    if mnemonic.name == "crypt" and target > 1:
        raise IllegalInstructionError(word, pc=pc)
    return Instruction(Format.J, opcode=opcode, target=target)
