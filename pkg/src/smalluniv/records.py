"""Persisted run records (JSON)."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

from . import __version__


@dataclass
class RunRecord:
    command: str
    flags: dict[str, Any] = field(default_factory=dict)
    seeds: list[int] = field(default_factory=list)
    family: str = ""
    stats: dict[str, Any] = field(default_factory=dict)
    results: list[str] = field(default_factory=list)
    wall_seconds: float = 0.0
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> RunRecord:
        data = json.loads(text)
        return cls(**data)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> RunRecord:
        return cls.from_json(Path(path).read_text())


def sibling_json(path: Optional[str | Path], default_name: str) -> Path:
    """Where the record for an output file goes (``out.g6`` -> ``out.json``)."""
    if path is None or str(path) == "-":
        return Path(default_name)
    return Path(path).with_suffix(".json")
