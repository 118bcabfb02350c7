"""Unit tests for isa/assembler.py.

Covers label resolution, operand forms, error reporting with line numbers,
and that disassembly reassembles to the same words for every corpus program.
"""

from __future__ import annotations

import random

import pytest

from conftest import CORPUS
from isa.assembler import assemble, bytes_to_words, disassemble, disassemble_word, words_to_bytes
from isa.encoding import decode
from isa.opcodes import MNEMONICS
from services.errors import AssemblyError


# ---------------------------------------------------------------------------
# assemble
# ---------------------------------------------------------------------------

def test_assemble_resolves_forward_branch():
    program = assemble(
        """
        beq $1, $2, done
        addi $3, $0, 1
done:   j done
        """
    )
    assert program.symbols == {"done": 8}
    assert decode(program.words[0]).immediate == 1
    assert decode(program.words[2]).target == 2


def test_assemble_resolves_backward_branch():
    program = assemble("loop: addi $1, $1, -1\n bne $1, $0, loop\n")
    assert decode(program.words[1]).immediate == -2


def test_assemble_multiple_labels_on_one_line():
    program = assemble("a: b: nop\n")
    assert program.symbols == {"a": 0, "b": 0}
    assert program.words == [0]


def test_assemble_memory_operand_forms():
    program = assemble("lw $1, -4($2)\nsw $3, ($4)\nlkuw $1, 0x10($0)\n")
    load, store, key = (decode(word) for word in program.words)
    assert (load.name, load.rt, load.rs, load.immediate) == ("lw", 1, 2, -4)
    assert (store.name, store.rt, store.rs, store.immediate) == ("sw", 3, 4, 0)
    assert (key.name, key.immediate) == ("lkuw", 16)


def test_assemble_logical_immediate_accepts_unsigned():
    program = assemble("ori $1, $0, 0xFFFF\n")
    assert program.words[0] & 0xFFFF == 0xFFFF


def test_assemble_word_directive_and_comments():
    program = assemble("# header\n.word 0xDEADBEEF  # raw\n.word -1\n")
    assert program.words == [0xDEADBEEF, 0xFFFFFFFF]


def test_assemble_crypt_flag_normalises():
    program = assemble("crypt 5\ncrypt 0\n")
    assert [decode(word).target for word in program.words] == [1, 0]


def test_assemble_base_offsets_labels():
    program = assemble("start: j start\n", base=0x20)
    assert program.symbols["start"] == 0x20
    assert decode(program.words[0]).target == 8


def test_to_bytes_is_big_endian():
    assert assemble("addi $1, $0, 1\n").to_bytes() == bytes.fromhex("20010001")


@pytest.mark.parametrize(
    ("source", "message"),
    [
        ("frob $1, $2\n", "unknown mnemonic"),
        ("add $1, $2\n", "expects 3 operand"),
        ("add $1, $2, $32\n", "bad register"),
        ("addi $1, $0, 0x8000\n", "out of 16-bit range"),
        ("j nowhere\n", "undefined label"),
        ("x: nop\nx: nop\n", "duplicate label"),
        ("sll $1, $2, 32\n", "shift amount"),
        ("lw $1, 4[$2]\n", "bad memory operand"),
        ("addi $1, $0, twelve\n", "undefined label|bad number"),
    ],
)
def test_assemble_errors(source, message):
    with pytest.raises(AssemblyError, match=message):
        assemble(source)


def test_assemble_error_carries_line_number():
    with pytest.raises(AssemblyError) as info:
        assemble("nop\nnop\nbogus\n")
    assert info.value.line == 3
    assert info.value.exit_code == 2


def test_assemble_capacity_overflow():
    with pytest.raises(AssemblyError, match="image overflow: 5 words do not fit 16-byte"):
        assemble("nop\n" * 5, capacity_bytes=16)


def test_assemble_rejects_unaligned_base():
    with pytest.raises(AssemblyError, match="not word aligned"):
        assemble("nop\n", base=2)


# ---------------------------------------------------------------------------
# disassemble
# ---------------------------------------------------------------------------

def test_disassemble_word_renders_operands():
    assert disassemble_word(0x00221820) == "add $3, $1, $2"
    assert disassemble_word(0x8C41FFFC) == "lw $1, -4($2)"
    assert disassemble_word(0) == "nop"


def test_disassemble_word_falls_back_to_raw():
    assert disassemble_word(0xDEADBEEF) == ".word 0xdeadbeef"
    # add with a non-zero shamt has no assembler spelling
    assert disassemble_word(0x00221860).startswith(".word")


def test_bytes_to_words_rejects_ragged_image():
    with pytest.raises(AssemblyError, match="multiple of 4"):
        bytes_to_words(b"\x00" * 6)


def test_words_bytes_inverse():
    words = [0x01234567, 0x89ABCDEF]
    assert bytes_to_words(words_to_bytes(words)) == words


@pytest.mark.parametrize("path", CORPUS, ids=lambda path: path.stem)
def test_corpus_disassembly_reassembles(path):
    words = assemble(path.read_text(encoding="utf-8")).words
    assert assemble(disassemble(words)).words == words


def _legal_word(rng: random.Random) -> int:
    mnemonic = MNEMONICS[rng.choice(sorted(MNEMONICS))]
    if mnemonic.opcode == 0:
        return rng.getrandbits(20) << 6 | mnemonic.funct
    if mnemonic.name == "crypt":
        return mnemonic.opcode << 26 | rng.randrange(2)
    return mnemonic.opcode << 26 | rng.getrandbits(26)


@pytest.mark.parametrize("seed", range(5))
def test_random_words_disassemble_and_reassemble(seed):
    rng = random.Random(seed)
    words = [
        _legal_word(rng) if rng.random() < 0.7 else rng.getrandbits(32)
        for _ in range(400)
    ]
    assert assemble(disassemble(words)).words == words
