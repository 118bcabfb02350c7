"""Pipeline registers between the five stages.

Only the physical fields are packed by `to_bits` and so count towards
switching activity. Sequence numbers, cycle stamps and stall counts are
bookkeeping for the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntFlag

from isa.encoding import NOP, Instruction
from isa.opcodes import BRANCHES, JUMPS, KEY_LOADS, LOADS, STORES
from isa.semantics import destination_register, key_slot

LATCH_NAMES = ("IF/ID", "ID/EX", "EX/MEM", "MEM/WB")


class Control(IntFlag):
    NONE = 0
    REG_WRITE = 1 << 0
    MEM_READ = 1 << 1
    MEM_WRITE = 1 << 2
    BRANCH = 1 << 3
    JUMP = 1 << 4
    CRYPT = 1 << 5
    KEY_WRITE = 1 << 6


CONTROL_BITS = len(Control.__members__) - 1

# valid + word + pc + a + b + result + dest + control + crypt
LATCH_BITS = 1 + 32 + 32 + 32 + 32 + 32 + 5 + CONTROL_BITS + 1


def control_for(instr: Instruction) -> Control:
    name = instr.name
    control = Control.NONE
    if destination_register(instr):
        control |= Control.REG_WRITE
    if name in LOADS:
        control |= Control.MEM_READ
    elif name in KEY_LOADS:
        control |= Control.MEM_READ | Control.KEY_WRITE
    elif name in STORES:
        control |= Control.MEM_WRITE
    elif name in BRANCHES:
        control |= Control.BRANCH
    elif name in JUMPS:
        control |= Control.JUMP
    elif name == "crypt":
        control |= Control.CRYPT
    return control


def dest_for(instr: Instruction) -> int:
    """General register written, or the key slot for key loads."""
    if instr.name in KEY_LOADS:
        return key_slot(instr)
    return destination_register(instr)


@dataclass
class StageLatch:
    valid: bool = False
    word: int = 0
    pc: int = 0
    a: int = 0
    b: int = 0
    result: int = 0
    dest: int = 0
    control: Control = Control.NONE
    crypt: bool = False

    instr: Instruction = NOP
    fault: bool = False
    gate: bool = False
    seq: int = 0
    fetch_cycle: int = 0
    complete_cycle: int = 0
    stall_cycles: int = 0
    mem_address: int | None = None

    @property
    def writes_register(self) -> bool:
        return self.valid and bool(self.control & Control.REG_WRITE) and self.dest != 0

    @property
    def is_load(self) -> bool:
        return self.writes_register and bool(self.control & Control.MEM_READ)

    def to_bits(self) -> int:
        if not self.valid:
            return 0
        bits = 1
        for value, width in (
            (self.word, 32),
            (self.pc, 32),
            (self.a, 32),
            (self.b, 32),
            (self.result, 32),
            (self.dest, 5),
            (int(self.control), CONTROL_BITS),
            (int(self.crypt), 1),
        ):
            bits = (bits << width) | (value & ((1 << width) - 1))
        return bits

    def evolve(self, **changes) -> "StageLatch":
        return replace(self, **changes)


def bubble(gate: bool = False) -> StageLatch:
    return StageLatch(gate=gate)
