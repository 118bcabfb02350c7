"""One-instruction-at-a-time interpreter over the same ISA and machine modules."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from isa.encoding import WORD_MASK, decode
from isa.opcodes import ALU_I, ALU_R, KEY_LOADS, LOADS, SHIFTS, STORES
from isa.semantics import (
    alu,
    branch_target,
    destination_register,
    effective_address,
    is_halt,
    jump_target,
    key_slot,
)
from machine.state import MachineMode, MachineState
from models.schemas import RetiredInstruction, RunStatus
from services.errors import MemoryFaultError, ProtocolError, SimulationFault

logger = logging.getLogger(__name__)

_ALU_NAMES = ALU_R | ALU_I | SHIFTS | {"nop"}


@dataclass
class ReferenceResult:
    status: RunStatus
    steps: int
    retired: list[RetiredInstruction] = field(default_factory=list)

    def architectural(self) -> list[tuple]:
        return [record.architectural() for record in self.retired]


class ReferenceInterpreter:
    def __init__(self, machine: MachineState, decrypt_ifetch: bool = False):
        self.machine = machine
        self.decrypt_ifetch = decrypt_ifetch

    def run(self, max_steps: int) -> ReferenceResult:
        machine = self.machine
        if machine.mode is not MachineMode.RUNNING:
            raise ProtocolError("machine must be started before running")

        result = ReferenceResult(status=RunStatus.HALTED, steps=0)
        if machine.image_words == 0:
            return result

        while True:
            if result.steps >= max_steps:
                result.status = RunStatus.CYCLE_CAP
                return result
            pc = machine.pc
            try:
                halted = self._execute_one(pc, result)
            except SimulationFault as exc:
                exc.annotate(pc=pc, cycle=result.steps + 1)
                raise
            result.steps += 1
            if halted:
                logger.debug("Reference run halted steps=%s", result.steps)
                return result

    def _execute_one(self, pc: int, result: ReferenceResult) -> bool:
        machine = self.machine
        if pc % 4 or not machine.in_image(pc):
            raise MemoryFaultError(
                f"instruction fetch at 0x{pc:x} outside the loaded image", address=pc, pc=pc
            )
        word = machine.fetch_word(pc, decrypt=self.decrypt_ifetch)
        instr = decode(word, pc=pc)
        name = instr.name
        mnemonic = instr.mnemonic
        rf = machine.rf
        a, b = rf.read(instr.rs), rf.read(instr.rt)
        crypt = machine.crypt_enabled

        record = RetiredInstruction(
            seq=len(result.retired),
            pc=pc,
            word=word,
            name=name,
            format=instr.format.value,
            latency_class=mnemonic.latency_class.value,
        )
        next_pc = (pc + 4) & WORD_MASK
        halted = False

        if name in _ALU_NAMES:
            self._write_reg(record, destination_register(instr), alu(instr, a, b))
        elif name in LOADS:
            value = machine.encrypted_load_word(effective_address(instr, a), crypt=crypt)
            self._write_reg(record, instr.rt, value)
        elif name in STORES:
            address = effective_address(instr, a)
            machine.encrypted_store_word(address, b, crypt=crypt)
            record.mem_address = address
            record.mem_value = b
        elif name in KEY_LOADS:
            slot = key_slot(instr)
            value = machine.load_plain_word(effective_address(instr, a))
            machine.load_key_word(slot, value)
            record.key_slot = slot
            record.key_value = value
        elif name == "beq":
            if a == b:
                next_pc = branch_target(instr, pc)
        elif name == "bne":
            if a != b:
                next_pc = branch_target(instr, pc)
        elif name == "crypt":
            machine.crypt_enabled = instr.target != 0
        elif name == "jr":
            next_pc = a
        elif name == "jal":
            self._write_reg(record, 31, (pc + 4) & WORD_MASK)
            next_pc = jump_target(instr)
        elif name == "j":
            halted = is_halt(instr, pc)
            next_pc = pc if halted else jump_target(instr)

        result.retired.append(record)
        machine.pc = next_pc
        return halted

    def _write_reg(self, record: RetiredInstruction, reg: int, value: int) -> None:
        if reg == 0:
            return
        self.machine.rf.write(reg, value)
        record.reg = reg
        record.reg_value = value & WORD_MASK
