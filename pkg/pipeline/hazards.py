"""Forwarding, load-use detection and ID-stage control-flow resolution."""

from __future__ import annotations

from dataclasses import dataclass

from isa.encoding import Instruction
from isa.semantics import branch_target, is_halt, jump_target, source_registers
from pipeline.latches import Control, StageLatch


def forward(reg: int, fallback: int, ex_mem: StageLatch, mem_wb: StageLatch) -> int:
    """Newest in-flight value of `reg`: EX/MEM, then MEM/WB, then `fallback`."""
    if reg == 0:
        return 0
    if ex_mem.writes_register and not ex_mem.is_load and ex_mem.dest == reg:
        return ex_mem.result
    if mem_wb.writes_register and mem_wb.dest == reg:
        return mem_wb.result
    return fallback


def hazard_detect(instr: Instruction, id_ex: StageLatch) -> bool:
    """Stall when the instruction in EX is a load feeding one of `instr`'s sources."""
    return id_ex.is_load and id_ex.dest in source_registers(instr)


@dataclass(frozen=True)
class ControlDecision:
    redirect: int | None = None
    halt: bool = False
    crypt: bool | None = None

    @property
    def flush(self) -> bool:
        return self.redirect is not None or self.halt


NOT_TAKEN = ControlDecision()


def resolve_branch(instr: Instruction, pc: int, control: Control, a: int, b: int) -> ControlDecision:
    """Static not-taken: anything that leaves the fall-through path flushes one fetch."""
    name = instr.name
    if control & Control.BRANCH:
        taken = (a == b) if name == "beq" else (a != b)
        return ControlDecision(redirect=branch_target(instr, pc)) if taken else NOT_TAKEN
    if control & Control.CRYPT:
        return ControlDecision(redirect=pc + 4, crypt=instr.target != 0)
    if control & Control.JUMP:
        if is_halt(instr, pc):
            return ControlDecision(halt=True)
        if name == "jr":
            return ControlDecision(redirect=a)
        return ControlDecision(redirect=jump_target(instr))
    return NOT_TAKEN
