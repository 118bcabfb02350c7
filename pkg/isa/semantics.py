"""Instruction arithmetic shared by the pipelined and sequential executors."""

from __future__ import annotations

from isa.encoding import Instruction, WORD_MASK
from isa.opcodes import ALU_I, ALU_R, KEY_LOADS, LOADS, SHIFTS, STORES, ZERO_EXTENDED


def to_signed32(value: int) -> int:
    value &= WORD_MASK
    return value - 0x100000000 if value & 0x80000000 else value


def immediate_operand(instr: Instruction) -> int:
    """Immediate as the ALU sees it: zero-extended for logical ops."""
    if instr.name in ZERO_EXTENDED:
        return instr.immediate & 0xFFFF
    return instr.immediate & WORD_MASK


def alu(instr: Instruction, a: int, b: int) -> int:
    """Result of an ALU instruction given rs (`a`) and rt (`b`) values."""
    name = instr.name
    if name == "nop":
        return 0
    if name in ALU_R:
        rhs = b
    elif name in ALU_I:
        rhs = immediate_operand(instr)
    elif name == "sll":
        return (b << instr.shamt) & WORD_MASK
    elif name == "srl":
        return (b & WORD_MASK) >> instr.shamt
    else:
        raise ValueError(f"{name} is not an ALU instruction")

    op = name.removesuffix("i") if name in ALU_I else name
    if op == "add":
        return (a + rhs) & WORD_MASK
    if op == "sub":
        return (a - rhs) & WORD_MASK
    if op == "and":
        return a & rhs
    if op == "or":
        return a | rhs
    if op == "nor":
        return ~(a | rhs) & WORD_MASK
    if op == "slt":
        return int(to_signed32(a) < to_signed32(rhs))
    raise ValueError(f"unhandled ALU op {name}")


def effective_address(instr: Instruction, base: int) -> int:
    return (base + instr.immediate) & WORD_MASK


def operand_registers(instr: Instruction) -> tuple[bool, bool]:
    """Whether the instruction reads its rs field and its rt field."""
    name = instr.name
    if name == "nop":
        return False, False
    if name in ALU_R or name in STORES or name in ("beq", "bne"):
        return True, True
    if name in SHIFTS:
        return False, True
    if name in ALU_I or name in LOADS or name in KEY_LOADS or name == "jr":
        return True, False
    return False, False


def source_registers(instr: Instruction) -> tuple[int, ...]:
    """Registers read by an instruction; $0 is never a dependency."""
    reads_rs, reads_rt = operand_registers(instr)
    regs = ((instr.rs,) if reads_rs else ()) + ((instr.rt,) if reads_rt else ())
    return tuple(reg for reg in regs if reg != 0)


def destination_register(instr: Instruction) -> int:
    """Register written at write-back, 0 when none."""
    name = instr.name
    if name == "nop":
        return 0
    if name in ALU_R or name in SHIFTS:
        return instr.rd
    if name in ALU_I or name in LOADS:
        return instr.rt
    if name == "jal":
        return 31
    return 0


def key_slot(instr: Instruction) -> int:
    """Key-register slot targeted by LKLW (pair 0) or LKUW (pair 2)."""
    base = 0 if instr.name == "lklw" else 2
    return base + (instr.rt & 1)


def branch_target(instr: Instruction, pc: int) -> int:
    return (pc + 4 + (instr.immediate << 2)) & WORD_MASK


def jump_target(instr: Instruction) -> int:
    return instr.target << 2


def is_halt(instr: Instruction, pc: int) -> bool:
    """A J whose target is its own address stops the machine."""
    return instr.name == "j" and jump_target(instr) == pc
