"""Run configuration: defaults, ``key = value`` config files, flag overrides."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Optional


@dataclass(frozen=True)
class Config:
    arithmetic_mode: Optional[str] = None  # None: exact for integer input, else float
    depth: int = 50
    r_max: float = 1000.0
    precision: int = 200  # bits, for the mpmath inequality checks
    output_format: str = "csv"
    deterministic: bool = True

    def __post_init__(self):
        if self.arithmetic_mode not in (None, "exact", "float"):
            raise ValueError(f"arithmetic_mode must be exact or float, not {self.arithmetic_mode!r}")
        if self.depth < 1:
            raise ValueError("depth must be positive")
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")
        if self.precision < 53:
            raise ValueError("precision below 53 bits is not supported")
        if self.output_format not in ("csv", "jsonl", "svg"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    @property
    def dps(self) -> int:
        """Decimal digits matching ``precision`` bits."""
        return max(15, int(self.precision * math.log10(2)))

    def override(self, **kw) -> "Config":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _coerce(name: str, raw: str):
    if name == "deterministic":
        low = raw.strip().lower()
        if low not in ("true", "false", "1", "0", "yes", "no"):
            raise ValueError(f"bad boolean {raw!r}")
        return low in ("true", "1", "yes")
    if name in ("depth", "precision"):
        return int(raw)
    if name == "r_max":
        return float(raw)
    if name == "arithmetic_mode" and raw.strip().lower() in ("auto", "none", ""):
        return None
    return raw.strip()


def parse_config(text: str) -> Config:
    """Parse ``key = value`` lines; '#' starts a comment."""
    known = {f.name for f in fields(Config)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, val)
    return Config(**values)


def load_config(path: Optional[str]) -> Config:
    if path is None:
        return Config()
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
