"""Instruction set: opcode table, encoding, assembler."""

from isa.assembler import AssembledProgram, assemble, disassemble
from isa.encoding import NOP, Instruction, decode, encode
from isa.opcodes import MNEMONICS, Format, LatencyClass, Mnemonic

__all__ = [
    "AssembledProgram",
    "Format",
    "Instruction",
    "LatencyClass",
    "MNEMONICS",
    "Mnemonic",
    "NOP",
    "assemble",
    "decode",
    "disassemble",
    "encode",
]
