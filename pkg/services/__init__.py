"""Error types shared by the assembler, simulator and CLI."""
