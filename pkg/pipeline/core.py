"""Cycle-stepped five-stage pipeline with fetch decryption and memory encryption.

Within one `step` the stages are evaluated back to front (WB, MEM, EX, ID,
IF). Each stage consumes the latch values from the start of the cycle, so
write-back lands in the register file before decode reads it. Branches,
jumps and CRYPT resolve in ID and squash the one fetch issued in the same
cycle.

A fetch charged with the crypto latency occupies IF for
`1 + crypto_block_cycles` cycles before the instruction enters IF/ID.
"""

from __future__ import annotations

import logging

from isa.encoding import WORD_MASK, decode
from isa.opcodes import ALU_I, ALU_R, SHIFTS
from isa.semantics import alu, effective_address, operand_registers
from machine.state import MachineMode, MachineState
from metrics.activity import ActivityCounters, record_cycle
from models.schemas import (
    CycleRecord,
    PipelineConfig,
    RetiredInstruction,
    RunStatus,
    TraceSummary,
)
from pipeline.hazards import NOT_TAKEN, ControlDecision, forward, hazard_detect, resolve_branch
from pipeline.latches import (
    LATCH_BITS,
    LATCH_NAMES,
    Control,
    StageLatch,
    bubble,
    control_for,
    dest_for,
)
from pipeline.trace import RunTrace
from services.errors import (
    IllegalInstructionError,
    MemoryFaultError,
    ProtocolError,
    SimulationFault,
    UsageError,
)

logger = logging.getLogger(__name__)

STAGE_EX = 3
STAGE_MEM = 4
STAGE_WB = 5

_ALU_NAMES = ALU_R | ALU_I | SHIFTS | {"nop"}
_GATE_SETTERS = Control.MEM_WRITE | Control.BRANCH | Control.JUMP | Control.CRYPT
_MEMORY_OPS = Control.MEM_READ | Control.MEM_WRITE


def _label(latch: StageLatch) -> str:
    if not latch.valid:
        return "-"
    if latch.fault:
        return "fault"
    try:
        return decode(latch.word).name
    except IllegalInstructionError:
        return "????"


class PipelineSimulator:
    """Owns one started `MachineState` and steps it a clock cycle at a time."""

    def __init__(
        self,
        machine: MachineState,
        config: PipelineConfig | None = None,
        keep_cycles: bool = False,
    ):
        self.machine = machine
        self.config = config or PipelineConfig(cipher=machine.cipher_kind)
        if self.config.cipher is not machine.cipher_kind:
            raise UsageError(
                f"pipeline cipher {self.config.cipher.value} does not match "
                f"machine cipher {machine.cipher_kind.value}"
            )
        self.keep_cycles = keep_cycles

        self.if_id = bubble()
        self.id_ex = bubble()
        self.ex_mem = bubble()
        self.mem_wb = bubble()

        self.cycle = 0
        self.halting = False
        self.halted = machine.image_words == 0
        self.gate_mode = False
        self.stalls = 0
        self.flushes = 0

        self._fetch: StageLatch | None = None
        self._fetch_wait = 0
        self._last_block: int | None = None
        self._seq = 0
        self._halt_pc: int | None = None

        self.counters = ActivityCounters(LATCH_NAMES, LATCH_BITS)
        self._physical = [0] * len(self.counters.latch_names)
        self.retired: list[RetiredInstruction] = []
        self.cycle_records: list[CycleRecord] = []

    # ------------------------------------------------------------------
    # Public API
    # ------------------------------------------------------------------

    def crypt_toggle(self, enabled: bool) -> None:
        if self.machine.crypt_enabled != enabled:
            logger.info("Crypt mode changed enabled=%s cycle=%s", enabled, self.cycle)
        self.machine.crypt_enabled = enabled

    def step(self) -> None:
        if self.machine.mode is not MachineMode.RUNNING:
            raise ProtocolError("machine must be started before stepping")
        if self.halted:
            raise ProtocolError("pipeline has already halted")

        cycle = self.cycle + 1
        stage_labels = {
            "ID": _label(self.if_id),
            "EX": _label(self.id_ex),
            "MEM": _label(self.ex_mem),
            "WB": _label(self.mem_wb),
        }
        try:
            self._write_back(cycle)
            new_mem_wb = self._memory(cycle)
            new_ex_mem = self._execute(cycle)
            new_id_ex, hold, decision = self._decode(cycle, new_ex_mem, new_mem_wb)
            new_if_id, if_label = self._fetch_stage(cycle, hold, decision)
        except SimulationFault as exc:
            exc.annotate(cycle=cycle)
            logger.warning("Pipeline fault cycle=%s error=%s", cycle, exc)
            raise

        gated_ex = self.config.gating_enabled and new_ex_mem.gate
        physical = [
            new_if_id.to_bits(),
            new_id_ex.to_bits(),
            self._physical[2] if gated_ex else new_ex_mem.to_bits(),
            new_mem_wb.to_bits(),
        ]
        toggles = record_cycle(
            self.counters, self._physical, physical, [False, False, gated_ex, False]
        )
        self._physical = physical

        if self.keep_cycles:
            self.cycle_records.append(
                CycleRecord(
                    cycle=cycle,
                    stages={"IF": if_label, **stage_labels},
                    stall=hold,
                    flush=decision.flush,
                    crypt=self.machine.crypt_enabled,
                    gated=gated_ex,
                    toggles=toggles,
                )
            )

        self.if_id = new_if_id
        self.id_ex = new_id_ex
        self.ex_mem = new_ex_mem
        self.mem_wb = new_mem_wb
        self.cycle = cycle

        if self.halting and self._drained():
            self.halted = True
            if self._halt_pc is not None:
                self.machine.pc = self._halt_pc
            logger.info("Pipeline halted cycles=%s retired=%s", cycle, len(self.retired))

    def run(self, max_cycles: int) -> RunTrace:
        """Step until the halt convention drains the pipeline or `max_cycles` elapse."""
        status = RunStatus.HALTED
        while not self.halted:
            if self.cycle >= max_cycles:
                status = RunStatus.CYCLE_CAP
                logger.warning("Cycle cap reached max_cycles=%s", max_cycles)
                break
            self.step()
        return self.trace(status)

    def trace(self, status: RunStatus) -> RunTrace:
        return RunTrace(
            summary=self._summary(status),
            retired=list(self.retired),
            cycles=list(self.cycle_records),
        )

    # ------------------------------------------------------------------
    # Stages
    # ------------------------------------------------------------------

    def _drained(self) -> bool:
        return self._fetch is None and not any(
            latch.valid for latch in (self.if_id, self.id_ex, self.ex_mem, self.mem_wb)
        )

    def _complete(self, latch: StageLatch, stage: int, cycle: int) -> None:
        if latch.instr.mnemonic.base_cycles == stage:
            latch.complete_cycle = cycle

    def _write_back(self, cycle: int) -> None:
        latch = self.mem_wb
        if not latch.valid:
            return
        self._complete(latch, STAGE_WB, cycle)
        instr = latch.instr
        mnemonic = instr.mnemonic
        record = RetiredInstruction(
            seq=latch.seq,
            pc=latch.pc,
            word=latch.word,
            name=instr.name,
            format=instr.format.value,
            latency_class=mnemonic.latency_class.value,
            fetch_cycle=latch.fetch_cycle,
            complete_cycle=latch.complete_cycle,
            stall_cycles=latch.stall_cycles,
            latency=latch.complete_cycle - latch.fetch_cycle + 1 - latch.stall_cycles,
        )
        if latch.writes_register:
            self.machine.rf.write(latch.dest, latch.result)
            record.reg = latch.dest
            record.reg_value = latch.result & WORD_MASK
        if latch.control & Control.KEY_WRITE:
            self.machine.load_key_word(latch.dest, latch.result)
            record.key_slot = latch.dest
            record.key_value = latch.result & WORD_MASK
        if latch.control & Control.MEM_WRITE:
            record.mem_address = latch.mem_address
            record.mem_value = latch.b & WORD_MASK
        self.retired.append(record)

    def _memory(self, cycle: int) -> StageLatch:
        latch = self.ex_mem
        if not latch.valid:
            return bubble(latch.gate)
        out = latch.evolve()
        address = latch.result
        try:
            if latch.control & Control.MEM_WRITE:
                self.machine.encrypted_store_word(address, latch.b, crypt=latch.crypt)
                out.mem_address = address
            elif latch.control & Control.KEY_WRITE:
                out.result = self.machine.load_plain_word(address)
                out.mem_address = address
            elif latch.control & Control.MEM_READ:
                out.result = self.machine.encrypted_load_word(address, crypt=latch.crypt)
                out.mem_address = address
        except SimulationFault as exc:
            raise exc.annotate(pc=latch.pc)
        self._complete(out, STAGE_MEM, cycle)
        return out

    def _execute(self, cycle: int) -> StageLatch:
        latch = self.id_ex
        if not latch.valid:
            return bubble(latch.gate)
        instr = latch.instr
        reads_rs, reads_rt = operand_registers(instr)
        a = forward(instr.rs, latch.a, self.ex_mem, self.mem_wb) if reads_rs else latch.a
        b = forward(instr.rt, latch.b, self.ex_mem, self.mem_wb) if reads_rt else latch.b

        if instr.name in _ALU_NAMES:
            result = alu(instr, a, b)
        elif latch.control & _MEMORY_OPS:
            result = effective_address(instr, a)
        else:
            result = latch.result
        out = latch.evolve(a=a, b=b, result=result)
        self._complete(out, STAGE_EX, cycle)
        return out

    def _decode(
        self,
        cycle: int,
        new_ex_mem: StageLatch,
        new_mem_wb: StageLatch,
    ) -> tuple[StageLatch, bool, ControlDecision]:
        latch = self.if_id
        gating = self.config.gating_enabled
        if not latch.valid:
            return bubble(gating and self.gate_mode), False, NOT_TAKEN
        if latch.fault:
            raise MemoryFaultError(
                f"instruction fetch at 0x{latch.pc:x} outside the loaded image",
                address=latch.pc,
                pc=latch.pc,
            )

        instr = decode(latch.word, pc=latch.pc)
        if hazard_detect(instr, self.id_ex):
            latch.stall_cycles += 1
            self.stalls += 1
            logger.debug("Load-use stall cycle=%s pc=0x%x", cycle, latch.pc)
            return bubble(gating and self.gate_mode), True, NOT_TAKEN

        rf = self.machine.rf
        a, b = rf.read(instr.rs), rf.read(instr.rt)
        control = control_for(instr)
        crypt_snapshot = self.machine.crypt_enabled
        result = 0

        decision = NOT_TAKEN
        if control & (Control.BRANCH | Control.JUMP | Control.CRYPT):
            a = forward(instr.rs, a, new_ex_mem, new_mem_wb)
            b = forward(instr.rt, b, new_ex_mem, new_mem_wb)
            decision = resolve_branch(instr, latch.pc, control, a, b)
            if instr.name == "jal":
                result = (latch.pc + 4) & WORD_MASK
            if decision.crypt is not None:
                self.crypt_toggle(decision.crypt)
            if decision.halt:
                self.halting = True
                self._halt_pc = latch.pc
                logger.info("Halt decoded pc=0x%x cycle=%s", latch.pc, cycle)

        if control & _GATE_SETTERS:
            self.gate_mode = True
        elif control & Control.MEM_READ:
            self.gate_mode = False

        out = latch.evolve(
            instr=instr,
            a=a,
            b=b,
            result=result,
            dest=dest_for(instr),
            control=control,
            crypt=crypt_snapshot,
            gate=gating and self.gate_mode and not control & _MEMORY_OPS,
            seq=self._seq,
        )
        self._seq += 1
        return out, False, decision

    def _fetch_stage(
        self,
        cycle: int,
        hold: bool,
        decision: ControlDecision,
    ) -> tuple[StageLatch, str]:
        if decision.flush:
            self._fetch = None
            self._fetch_wait = 0
            if decision.redirect is not None:
                self.flushes += 1
                self.machine.pc = decision.redirect & WORD_MASK
            return bubble(), "-"
        if self.halting:
            return bubble(), "-"

        if hold:
            if self._fetch is not None:
                if self._fetch_wait > 0:
                    self._fetch_wait -= 1
                if self._fetch_wait == 0:
                    self._fetch.stall_cycles += 1
                return self.if_id, _label(self._fetch)
            return self.if_id, "-"

        if self._fetch is None:
            self._start_fetch(cycle)
        elif self._fetch_wait > 0:
            self._fetch_wait -= 1

        pending = self._fetch
        label = _label(pending)
        if self._fetch_wait == 0:
            self._fetch = None
            return pending, label
        return bubble(), label

    def _start_fetch(self, cycle: int) -> None:
        machine = self.machine
        pc = machine.pc
        machine.pc = (pc + 4) & WORD_MASK
        if pc % 4 or not machine.in_image(pc):
            self._fetch = StageLatch(valid=True, fault=True, pc=pc, fetch_cycle=cycle)
            self._fetch_wait = 0
            return
        word = machine.fetch_word(pc, decrypt=self.config.decrypt_ifetch)
        self._fetch = StageLatch(valid=True, word=word, pc=pc, fetch_cycle=cycle)
        self._fetch_wait = self._fetch_charge(pc)

    def _fetch_charge(self, pc: int) -> int:
        if not (self.machine.crypt_enabled or self.config.decrypt_ifetch):
            self._last_block = None
            return 0
        if not self.config.per_instruction_crypto_charge:
            block = self.machine.fetch_block_address(pc)
            if block == self._last_block:
                return 0
            self._last_block = block
        return self.config.crypto_block_cycles

    # ------------------------------------------------------------------
    # Summary
    # ------------------------------------------------------------------

    def _summary(self, status: RunStatus) -> TraceSummary:
        retired = {"R": 0, "I": 0, "J": 0}
        latency = {"r": 0, "i": 0, "j": 0}
        for record in self.retired:
            retired[record.format] += 1
            latency[record.latency_class] = max(latency[record.latency_class], record.latency)
        return TraceSummary(
            status=status,
            cipher=self.config.cipher,
            gating=self.config.gating_enabled,
            crypto_block_cycles=self.config.crypto_block_cycles,
            cycles=self.cycle,
            retired_r=retired["R"],
            retired_i=retired["I"],
            retired_j=retired["J"],
            latency_r=latency["r"],
            latency_i=latency["i"],
            latency_j=latency["j"],
            toggles=self.counters.total_toggles,
            latch_bits=self.counters.total_bits,
            gated_cycles=self.counters.gated_cycles,
            stalls=self.stalls,
            flushes=self.flushes,
            pc=self.machine.pc,
            registers=list(self.machine.rf.snapshot()),
        )
