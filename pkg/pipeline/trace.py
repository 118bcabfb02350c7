"""Run traces and their text / JSON-lines serializations."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from pydantic import ValidationError

from models.schemas import CycleRecord, RetiredInstruction, TraceSummary
from services.errors import ReportError

logger = logging.getLogger(__name__)

STAGE_ORDER = ("IF", "ID", "EX", "MEM", "WB")


@dataclass
class RunTrace:
    summary: TraceSummary
    retired: list[RetiredInstruction] = field(default_factory=list)
    cycles: list[CycleRecord] = field(default_factory=list)

    @property
    def status(self):
        return self.summary.status

    def architectural(self) -> list[tuple]:
        return [record.architectural() for record in self.retired]

    def to_text(self) -> str:
        lines = []
        for record in self.cycles:
            stages = " ".join(f"{name}={record.stages.get(name, '-'):<6}" for name in STAGE_ORDER)
            flags = "".join(
                flag
                for flag, active in (
                    ("S", record.stall),
                    ("F", record.flush),
                    ("C", record.crypt),
                    ("G", record.gated),
                )
                if active
            )
            lines.append(
                f"cycle={record.cycle:<6} {stages} flags={flags or '-'} toggles={record.toggles}"
            )
        for record in self.retired:
            lines.append(
                f"retire seq={record.seq} pc=0x{record.pc:08x} word=0x{record.word:08x} "
                f"{record.name} class={record.latency_class} latency={record.latency}"
            )
        summary = self.summary
        lines.append(
            f"summary status={summary.status.value} cycles={summary.cycles} "
            f"retired={summary.retired} toggles={summary.toggles}"
        )
        return "\n".join(lines) + "\n"

    def to_jsonl(self) -> str:
        rows = [{"kind": "cycle", **record.model_dump(mode="json")} for record in self.cycles]
        rows += [{"kind": "retire", **record.model_dump(mode="json")} for record in self.retired]
        rows.append({"kind": "summary", **self.summary.model_dump(mode="json")})
        return "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)

    @classmethod
    def from_jsonl(cls, text: str) -> "RunTrace":
        summary: TraceSummary | None = None
        retired: list[RetiredInstruction] = []
        cycles: list[CycleRecord] = []
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                kind = row.pop("kind")
                if kind == "cycle":
                    cycles.append(CycleRecord(**row))
                elif kind == "retire":
                    retired.append(RetiredInstruction(**row))
                elif kind == "summary":
                    summary = TraceSummary(**row)
                else:
                    raise ReportError(f"trace line {number}: unknown record kind {kind!r}")
            except (json.JSONDecodeError, KeyError, AttributeError, ValidationError) as exc:
                raise ReportError(f"trace line {number}: {exc}") from exc
        if summary is None:
            raise ReportError("trace has no summary record")
        return cls(summary=summary, retired=retired, cycles=cycles)

    def write(self, path: str | Path) -> None:
        """`.txt` paths get the line-oriented form, anything else JSON lines."""
        target = Path(path)
        content = self.to_text() if target.suffix == ".txt" else self.to_jsonl()
        target.write_text(content, encoding="utf-8")
        logger.info("Trace written path=%s records=%s", target, len(self.cycles) + len(self.retired))
