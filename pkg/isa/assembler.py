"""Two-pass assembler and disassembler for the crypto-processor ISA.

Grammar: one instruction per line, `name:` labels (several may share a line
with an instruction), registers `$0`-`$31`, decimal or `0x` immediates,
`#` comments, memory operands `offset($rs)`, and a `.word` directive for
raw data. Branch immediates are word offsets from the next instruction;
jump targets are absolute word addresses.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from isa.encoding import Instruction, NOP, decode, encode, sign_extend16
from isa.opcodes import MNEMONICS, ZERO_EXTENDED, Format, Mnemonic, Syntax
from services.errors import AssemblyError, EncodingError, IllegalInstructionError

logger = logging.getLogger(__name__)

WORD_BYTES = 4

_LABEL_RE = re.compile(r"^\s*([A-Za-z_.][\w.]*)\s*:")
_REGISTER_RE = re.compile(r"^\$(\d{1,2})$")
_MEMORY_RE = re.compile(r"^(.*)\(\s*(\$\d{1,2})\s*\)$")
_LABEL_NAME_RE = re.compile(r"^[A-Za-z_.][\w.]*$")


@dataclass(frozen=True)
class AssembledProgram:
    words: list[int]
    symbols: dict[str, int] = field(default_factory=dict)

    def to_bytes(self) -> bytes:
        return words_to_bytes(self.words)


@dataclass
class _SourceLine:
    number: int
    mnemonic: str
    operands: list[str]
    address: int


def words_to_bytes(words: list[int]) -> bytes:
    return b"".join(word.to_bytes(4, "big") for word in words)


def bytes_to_words(data: bytes) -> list[int]:
    if len(data) % WORD_BYTES:
        raise AssemblyError(f"image length {len(data)} is not a multiple of 4 bytes")
    return [
        int.from_bytes(data[offset : offset + 4], "big")
        for offset in range(0, len(data), WORD_BYTES)
    ]


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_int(token: str, line: int) -> int:
    text = token.strip().lower()
    try:
        if text.startswith(("0x", "-0x", "+0x")):
            return int(text, 16)
        return int(text, 10)
    except ValueError:
        raise AssemblyError(f"bad number {token!r}", line) from None


def _parse_register(token: str, line: int) -> int:
    match = _REGISTER_RE.match(token.strip())
    if not match or int(match.group(1)) > 31:
        raise AssemblyError(f"bad register {token!r}", line)
    return int(match.group(1))


def _immediate16(value: int, mnemonic: Mnemonic, line: int) -> int:
    """Accept signed 16-bit values, and unsigned ones for logical immediates."""
    upper = 0xFFFF if mnemonic.name in ZERO_EXTENDED else 0x7FFF
    if not -0x8000 <= value <= upper:
        raise AssemblyError(f"immediate {value} out of 16-bit range", line)
    return sign_extend16(value)


def _resolve(token: str, symbols: dict[str, int], line: int) -> int:
    token = token.strip()
    if _LABEL_NAME_RE.match(token):
        if token not in symbols:
            raise AssemblyError(f"undefined label {token!r}", line)
        return symbols[token]
    return _parse_int(token, line)


def _expect(operands: list[str], count: int, mnemonic: str, line: int) -> None:
    if len(operands) != count:
        raise AssemblyError(
            f"{mnemonic} expects {count} operand(s), got {len(operands)}", line
        )


def _build(source: _SourceLine, symbols: dict[str, int]) -> Instruction:
    name, ops, line = source.mnemonic, source.operands, source.number
    if name == "nop":
        _expect(ops, 0, name, line)
        return NOP

    mnemonic = MNEMONICS[name]
    syntax = mnemonic.syntax

    if syntax is Syntax.RD_RS_RT:
        _expect(ops, 3, name, line)
        return Instruction(
            Format.R,
            rd=_parse_register(ops[0], line),
            rs=_parse_register(ops[1], line),
            rt=_parse_register(ops[2], line),
            funct=mnemonic.funct,
        )

    if syntax is Syntax.RD_RT_SHAMT:
        _expect(ops, 3, name, line)
        shamt = _parse_int(ops[2], line)
        if not 0 <= shamt <= 31:
            raise AssemblyError(f"shift amount {shamt} out of range", line)
        return Instruction(
            Format.R,
            rd=_parse_register(ops[0], line),
            rt=_parse_register(ops[1], line),
            shamt=shamt,
            funct=mnemonic.funct,
        )

    if syntax is Syntax.RS:
        _expect(ops, 1, name, line)
        return Instruction(Format.R, rs=_parse_register(ops[0], line), funct=mnemonic.funct)

    if syntax is Syntax.RT_RS_IMM:
        _expect(ops, 3, name, line)
        return Instruction(
            Format.I,
            opcode=mnemonic.opcode,
            rt=_parse_register(ops[0], line),
            rs=_parse_register(ops[1], line),
            immediate=_immediate16(_parse_int(ops[2], line), mnemonic, line),
        )

    if syntax is Syntax.RT_OFFSET_RS:
        _expect(ops, 2, name, line)
        match = _MEMORY_RE.match(ops[1].strip())
        if not match:
            raise AssemblyError(f"bad memory operand {ops[1]!r}", line)
        offset_text = match.group(1).strip() or "0"
        return Instruction(
            Format.I,
            opcode=mnemonic.opcode,
            rt=_parse_register(ops[0], line),
            rs=_parse_register(match.group(2), line),
            immediate=_immediate16(_parse_int(offset_text, line), mnemonic, line),
        )

    if syntax is Syntax.RS_RT_LABEL:
        _expect(ops, 3, name, line)
        target = ops[2].strip()
        if _LABEL_NAME_RE.match(target):
            offset = (_resolve(target, symbols, line) - (source.address + 4)) >> 2
        else:
            offset = _parse_int(target, line)
        if not -0x8000 <= offset <= 0x7FFF:
            raise AssemblyError(f"branch offset {offset} out of 16-bit range", line)
        return Instruction(
            Format.I,
            opcode=mnemonic.opcode,
            rs=_parse_register(ops[0], line),
            rt=_parse_register(ops[1], line),
            immediate=offset,
        )

    if syntax is Syntax.TARGET:
        _expect(ops, 1, name, line)
        token = ops[0].strip()
        if _LABEL_NAME_RE.match(token):
            target = _resolve(token, symbols, line) >> 2
        else:
            target = _parse_int(token, line)
        if not 0 <= target < 1 << 26:
            raise AssemblyError(f"jump target {target} out of 26-bit range", line)
        return Instruction(Format.J, opcode=mnemonic.opcode, target=target)

    _expect(ops, 1, name, line)
    flag = 1 if _parse_int(ops[0], line) != 0 else 0
    return Instruction(Format.J, opcode=mnemonic.opcode, target=flag)


def _split_operands(text: str) -> list[str]:
    if not text.strip():
        return []
    return [part.strip() for part in text.split(",")]


def assemble(
    source: str,
    base: int = 0,
    capacity_bytes: int | None = None,
) -> AssembledProgram:
    """Assemble source text into big-endian-ready words plus a symbol table."""
    if base % WORD_BYTES:
        raise AssemblyError(f"base address 0x{base:x} is not word aligned")

    symbols: dict[str, int] = {}
    lines: list[_SourceLine] = []
    address = base

    for number, raw in enumerate(source.splitlines(), start=1):
        text = _strip_comment(raw)
        while True:
            match = _LABEL_RE.match(text)
            if not match:
                break
            label = match.group(1)
            if label in symbols:
                raise AssemblyError(f"duplicate label {label!r}", number)
            symbols[label] = address
            text = text[match.end() :].strip()
        if not text:
            continue

        head, *tail = text.split(None, 1)
        rest = tail[0] if tail else ""
        mnemonic = head.lower()
        if mnemonic != ".word" and mnemonic != "nop" and mnemonic not in MNEMONICS:
            raise AssemblyError(f"unknown mnemonic {head!r}", number)
        lines.append(_SourceLine(number, mnemonic, _split_operands(rest), address))
        address += WORD_BYTES

    words: list[int] = []
    for source_line in lines:
        if source_line.mnemonic == ".word":
            _expect(source_line.operands, 1, ".word", source_line.number)
            value = _parse_int(source_line.operands[0], source_line.number)
            if not -0x80000000 <= value <= 0xFFFFFFFF:
                raise AssemblyError(f".word value {value} out of range", source_line.number)
            words.append(value & 0xFFFFFFFF)
            continue
        try:
            words.append(encode(_build(source_line, symbols)))
        except EncodingError as exc:
            raise AssemblyError(exc.detail, source_line.number) from exc

    if capacity_bytes is not None and base + len(words) * WORD_BYTES > capacity_bytes:
        raise AssemblyError(
            f"image overflow: {len(words)} words do not fit "
            f"{capacity_bytes}-byte instruction memory"
        )

    logger.debug("Assembled words=%s labels=%s", len(words), len(symbols))
    return AssembledProgram(words=words, symbols=symbols)


def _format_immediate(instr: Instruction) -> str:
    if instr.name in ZERO_EXTENDED:
        return str(instr.immediate & 0xFFFF)
    return str(instr.immediate)


def _render(instr: Instruction) -> str | None:
    """Canonical text, or None when the word carries bits the syntax cannot express."""
    if instr.is_nop:
        return "nop"

    mnemonic = instr.mnemonic
    name = mnemonic.name
    syntax = mnemonic.syntax

    if syntax is Syntax.RD_RS_RT:
        if instr.shamt:
            return None
        return f"{name} ${instr.rd}, ${instr.rs}, ${instr.rt}"
    if syntax is Syntax.RD_RT_SHAMT:
        if instr.rs:
            return None
        return f"{name} ${instr.rd}, ${instr.rt}, {instr.shamt}"
    if syntax is Syntax.RS:
        if instr.rt or instr.rd or instr.shamt:
            return None
        return f"{name} ${instr.rs}"
    if syntax is Syntax.RT_RS_IMM:
        return f"{name} ${instr.rt}, ${instr.rs}, {_format_immediate(instr)}"
    if syntax is Syntax.RT_OFFSET_RS:
        return f"{name} ${instr.rt}, {instr.immediate}(${instr.rs})"
    if syntax is Syntax.RS_RT_LABEL:
        return f"{name} ${instr.rs}, ${instr.rt}, {instr.immediate}"
    if syntax is Syntax.TARGET:
        return f"{name} {instr.target}"
    return f"{name} {instr.target}"


def disassemble_word(word: int) -> str:
    try:
        text = _render(decode(word))
    except IllegalInstructionError:
        text = None
    return text if text is not None else f".word 0x{word:08x}"


def disassemble(words: list[int]) -> str:
    """Render words one per line; undecodable words become `.word 0x...`."""
    return "\n".join(disassemble_word(word) for word in words)
