"""Shared simulator exceptions."""

from __future__ import annotations


class SimulatorError(Exception):
    """Base class for failures that map to a process exit status."""

    exit_code = 3

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class UsageError(SimulatorError):
    exit_code = 1


class KeyFormatError(UsageError):
    pass


class ReportError(SimulatorError):
    exit_code = 1


class AssemblyError(SimulatorError):
    exit_code = 2

    def __init__(self, detail: str, line: int | None = None):
        super().__init__(f"line {line}: {detail}" if line is not None else detail)
        self.line = line


class EncodingError(SimulatorError):
    exit_code = 2

    def __init__(self, field: str, value: int, limit: int):
        super().__init__(f"field {field}={value} out of range (limit {limit})")
        self.field = field
        self.value = value


class SimulationFault(SimulatorError):
    """A fault raised while the machine runs; carries pc and cycle context."""

    exit_code = 3

    def __init__(self, detail: str, pc: int | None = None, cycle: int | None = None):
        super().__init__(detail)
        self.pc = pc
        self.cycle = cycle

    def annotate(self, pc: int | None = None, cycle: int | None = None) -> "SimulationFault":
        if self.pc is None:
            self.pc = pc
        if self.cycle is None:
            self.cycle = cycle
        return self

    def __str__(self) -> str:
        context = []
        if self.pc is not None:
            context.append(f"pc=0x{self.pc:08x}")
        if self.cycle is not None:
            context.append(f"cycle={self.cycle}")
        if not context:
            return self.detail
        return f"{self.detail} ({' '.join(context)})"


class IllegalInstructionError(SimulationFault):
    def __init__(self, word: int, pc: int | None = None, cycle: int | None = None):
        super().__init__(f"illegal instruction 0x{word:08x}", pc=pc, cycle=cycle)
        self.word = word


class MemoryFaultError(SimulationFault):
    def __init__(
        self,
        detail: str,
        address: int | None = None,
        pc: int | None = None,
        cycle: int | None = None,
    ):
        super().__init__(detail, pc=pc, cycle=cycle)
        self.address = address


class ProtocolError(SimulationFault):
    """Reset/run protocol misuse (loading while running, double start)."""
