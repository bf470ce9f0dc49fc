"""Pass/fail records shared by every verification routine."""
from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional


@dataclass
class VerificationReport:
    check: str
    status: str  # "pass" | "fail" | "error"
    witness: Optional[str] = None
    millis: float = 0.0
    params: Dict[str, Any] = field(default_factory=dict)
    details: List["VerificationReport"] = field(default_factory=list)

    def __post_init__(self):
        if self.status not in ("pass", "fail", "error"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status != "pass" and not self.witness:
            raise ValueError("a failing report must carry a witness")

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    @classmethod
    def passed(cls, check: str, params: Optional[dict] = None, **kw) -> "VerificationReport":
        return cls(check, "pass", params=dict(params or {}), **kw)

    @classmethod
    def failed(cls, check: str, witness: str, params: Optional[dict] = None, **kw) -> "VerificationReport":
        return cls(check, "fail", witness=witness, params=dict(params or {}), **kw)

    @classmethod
    def errored(cls, check: str, witness: str, params: Optional[dict] = None) -> "VerificationReport":
        return cls(check, "error", witness=witness, params=dict(params or {}))

    @classmethod
    def merge(cls, check: str, parts: Iterable["VerificationReport"],
              params: Optional[dict] = None) -> "VerificationReport":
        parts = list(parts)
        bad = [p for p in parts if not p.ok]
        status = "pass"
        if any(p.status == "error" for p in bad):
            status = "error"
        elif bad:
            status = "fail"
        witness = f"{bad[0].check}: {bad[0].witness}" if bad else None
        return cls(check, status, witness=witness, params=dict(params or {}),
                   millis=sum(p.millis for p in parts), details=parts)

    def to_json(self) -> dict:
        out: Dict[str, Any] = {"check": self.check, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        out["millis"] = round(self.millis, 3)
        out["params"] = self.params
        if self.details:
            out["details"] = [d.to_json() for d in self.details]
        return out

    def lines(self, indent: int = 0) -> List[str]:
        pad = "  " * indent
        head = f"{pad}[{self.status.upper():5}] {self.check}"
        if self.params:
            head += " " + " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        out = [head]
        if self.witness and not self.details:
            out.append(f"{pad}        witness: {self.witness}")
        for d in self.details:
            out.extend(d.lines(indent + 1))
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def timed(fn):
    """Fill in ``millis`` on the report returned by ``fn``."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.millis = (time.perf_counter() - t0) * 1000.0
        return rep

    return wrapper
