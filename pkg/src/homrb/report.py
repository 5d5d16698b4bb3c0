from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Witness:
    indices: tuple[int, ...]
    defect: tuple  # tuple[FieldElem, ...]
    equation: str = ""

    def to_dict(self, labels=None) -> dict[str, Any]:
        out: dict[str, Any] = {
            "indices": list(self.indices),
            "defect": [str(c) for c in self.defect],
        }
        if labels is not None:
            out["labels"] = [labels[i] for i in self.indices]
        if self.equation:
            out["equation"] = self.equation
        return out


@dataclass(frozen=True)
class CheckReport:
    """Verdict of one identity check.

    A failing report always carries the first failing basis tuple (in
    lexicographic index order) together with its nonzero defect.
    """

    identity: str
    passed: bool
    witness: Witness | None = None
    checked: int = 0
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("a failing report needs a witness")
        if self.witness is not None and all(c.is_zero() for c in self.witness.defect):
            raise ValueError("witness defect must be nonzero")

    def __bool__(self) -> bool:
        return self.passed

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self, labels=None) -> dict[str, Any]:
        out: dict[str, Any] = {
            "identity": self.identity,
            "verdict": self.verdict,
            "checked": self.checked,
        }
        if self.params:
            out["params"] = {k: str(v) for k, v in self.params.items()}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict(labels)
        return out

    def __str__(self) -> str:
        head = f"{self.identity}: {self.verdict}"
        if self.witness is None:
            return head
        w = self.witness
        eq = f" [{w.equation}]" if w.equation else ""
        return f"{head} at {w.indices}{eq}, defect ({', '.join(str(c) for c in w.defect)})"
