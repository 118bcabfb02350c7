"""Architectural machine state."""

from machine.memory import Memory
from machine.state import KeyRegister, MachineMode, MachineState, RegisterFile

__all__ = ["KeyRegister", "MachineMode", "MachineState", "Memory", "RegisterFile"]
