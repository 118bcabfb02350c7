"""Unit tests for pipeline/hazards.py and pipeline/latches.py."""

from __future__ import annotations

from isa.assembler import assemble
from isa.encoding import decode
from pipeline.hazards import NOT_TAKEN, forward, hazard_detect, resolve_branch
from pipeline.latches import LATCH_BITS, Control, StageLatch, bubble, control_for, dest_for


def _instr(text: str):
    return decode(assemble(text).words[0])


def _writer(dest: int, result: int, load: bool = False) -> StageLatch:
    control = Control.REG_WRITE | (Control.MEM_READ if load else Control.NONE)
    return StageLatch(valid=True, dest=dest, result=result, control=control)


# ---------------------------------------------------------------------------
# forward
# ---------------------------------------------------------------------------

def test_forward_prefers_ex_mem():
    assert forward(4, 0, _writer(4, 11), _writer(4, 22)) == 11


def test_forward_falls_back_to_mem_wb():
    assert forward(4, 0, _writer(5, 11), _writer(4, 22)) == 22


def test_forward_uses_register_file_value_when_nothing_in_flight():
    assert forward(4, 99, bubble(), bubble()) == 99


def test_forward_never_touches_register_zero():
    assert forward(0, 0, _writer(0, 11), _writer(0, 22)) == 0


def test_forward_skips_load_still_in_ex_mem():
    assert forward(4, 7, _writer(4, 0x40, load=True), bubble()) == 7


def test_forward_ignores_invalid_latches():
    stale = _writer(4, 11)
    stale.valid = False
    assert forward(4, 3, stale, bubble()) == 3


# ---------------------------------------------------------------------------
# hazard_detect
# ---------------------------------------------------------------------------

def test_hazard_detect_load_feeding_rs():
    assert hazard_detect(_instr("add $3, $2, $1"), _writer(2, 0, load=True))


def test_hazard_detect_load_feeding_store_data():
    assert hazard_detect(_instr("sw $2, 0($0)"), _writer(2, 0, load=True))


def test_hazard_detect_ignores_alu_producer():
    assert not hazard_detect(_instr("add $3, $2, $1"), _writer(2, 0))


def test_hazard_detect_ignores_unrelated_register():
    assert not hazard_detect(_instr("add $3, $4, $5"), _writer(2, 0, load=True))


def test_hazard_detect_shift_reads_rt():
    assert hazard_detect(_instr("sll $3, $4, 2"), _writer(4, 0, load=True))


def test_hazard_detect_ignores_immediate_destination():
    # addi writes rt rather than reading it
    assert not hazard_detect(_instr("addi $3, $5, 1"), _writer(3, 0, load=True))


# ---------------------------------------------------------------------------
# resolve_branch
# ---------------------------------------------------------------------------

def test_resolve_taken_beq_redirects():
    instr = _instr("beq $1, $2, 3")
    decision = resolve_branch(instr, 0x10, control_for(instr), 5, 5)
    assert decision.redirect == 0x10 + 4 + 12
    assert decision.flush


def test_resolve_untaken_bne_falls_through():
    instr = _instr("bne $1, $2, 3")
    assert resolve_branch(instr, 0, control_for(instr), 5, 5) is NOT_TAKEN
    assert not NOT_TAKEN.flush


def test_resolve_crypt_sets_mode_and_refetches_next():
    instr = _instr("crypt 1")
    decision = resolve_branch(instr, 8, control_for(instr), 0, 0)
    assert decision.crypt is True
    assert decision.redirect == 12


def test_resolve_self_jump_halts():
    instr = _instr("j 2")
    decision = resolve_branch(instr, 8, control_for(instr), 0, 0)
    assert decision.halt
    assert decision.redirect is None


def test_resolve_jr_uses_register_value():
    instr = _instr("jr $31")
    assert resolve_branch(instr, 0, control_for(instr), 0x24, 0).redirect == 0x24


# ---------------------------------------------------------------------------
# latches
# ---------------------------------------------------------------------------

def test_control_for_key_load():
    control = control_for(_instr("lkuw $1, 0($0)"))
    assert control & Control.KEY_WRITE
    assert control & Control.MEM_READ
    assert not control & Control.REG_WRITE


def test_dest_for_key_load_is_slot():
    assert dest_for(_instr("lkuw $1, 0($0)")) == 3
    assert dest_for(_instr("add $7, $1, $2")) == 7


def test_bubble_packs_to_zero():
    assert bubble().to_bits() == 0
    assert not bubble().writes_register


def test_latch_bits_fit_width():
    latch = StageLatch(
        valid=True,
        word=0xFFFFFFFF,
        pc=0xFFFFFFFF,
        a=0xFFFFFFFF,
        b=0xFFFFFFFF,
        result=0xFFFFFFFF,
        dest=31,
        control=Control(0x7F),
        crypt=True,
    )
    assert latch.to_bits() == (1 << LATCH_BITS) - 1


def test_latch_bits_ignore_bookkeeping():
    base = StageLatch(valid=True, word=5, pc=4)
    assert base.to_bits() == base.evolve(seq=9, fetch_cycle=3, stall_cycles=2, gate=True).to_bits()
