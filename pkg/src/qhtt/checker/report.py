"""Obligations, steps and per-declaration reports."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..props.semantics import Verdict

CONSQ, CALLPRE, POSTCHECK, FRAMESEP = "Consq", "CallPre", "PostCheck", "FrameSep"


def _span_dict(span):
    return None if span is None else span.to_dict()


@dataclass(frozen=True)
class QVal:
    reg: str


@dataclass(frozen=True)
class BVal:
    kind: str  # lit | link | unknown
    value: object = None  # bit for lit, register name for link


@dataclass(frozen=True)
class PairV:
    left: object
    right: object


@dataclass(frozen=True)
class FuncV:
    name: str  # const0 | const1 | id | not
    table: tuple


@dataclass(frozen=True)
class GateV:
    name: str


@dataclass(frozen=True)
class CalleeV:
    name: str
    type: object
    opaque: bool = False


UNIT_V = ("unit",)


@dataclass
class Snapshot:
    """Frozen copy of the symbolic state after a statement."""

    layout: object
    vector: object  # SymVector or None in prop mode
    spaces: object  # list[Subspace] in prop mode
    points: object
    vars: dict
    consumed: dict


@dataclass
class Step:
    index: int
    span: object
    text: str
    snapshot: Snapshot
    prop: str = ""
    notes: list = field(default_factory=list)  # extra "⇔" lines

    def to_dict(self):
        out = {"index": self.index, "span": _span_dict(self.span), "statement": self.text, "state": self.prop}
        if self.notes:
            out["equivalent"] = list(self.notes)
        return out


@dataclass
class Obligation:
    rule: str
    span: object
    before: str
    after: str
    verdict: Verdict
    message: str = ""

    @property
    def holds(self):
        return self.verdict.holds

    def to_dict(self):
        out = {
            "rule": self.rule,
            "span": _span_dict(self.span),
            "propositionBefore": self.before,
            "propositionAfter": self.after,
            "verdict": "pass" if self.holds else "fail",
            "mode": self.verdict.mode,
        }
        cx = self.verdict.to_dict().get("counterexample")
        if cx is not None:
            out["counterexample"] = cx
        if self.message:
            out["message"] = self.message
        if self.verdict.detail:
            out["detail"] = self.verdict.detail
        return out


@dataclass
class Failure:
    kind: str  # exception class name
    message: str
    span: object = None
    type_error: bool = False

    def to_dict(self):
        return {"kind": self.kind, "message": self.message, "span": _span_dict(self.span)}

    def __str__(self):
        where = f"{self.span.line}:{self.span.col}: " if self.span is not None else ""
        return f"{where}{self.kind}: {self.message}"


@dataclass
class CaseReport:
    label: str
    steps: list = field(default_factory=list)
    obligations: list = field(default_factory=list)
    initial: Snapshot | None = None
    initial_prop: str = ""
    error: Failure | None = None
    mode: str = "state"  # state | prop
    inputs: dict = field(default_factory=dict)  # classical inputs fixed for this case

    @property
    def passed(self):
        return self.error is None and all(o.holds for o in self.obligations)

    def to_dict(self):
        out = {
            "case": self.label,
            "verdict": "pass" if self.passed else "fail",
            "mode": self.mode,
            "initial": self.initial_prop,
            "steps": [s.to_dict() for s in self.steps],
            "obligations": [o.to_dict() for o in self.obligations],
        }
        if self.error is not None:
            out["error"] = self.error.to_dict()
        return out


@dataclass
class DeclReport:
    name: str
    span: object = None
    cases: list = field(default_factory=list)
    error: Failure | None = None
    seconds: float = 0.0

    @property
    def passed(self):
        return self.error is None and all(c.passed for c in self.cases)

    @property
    def verdict(self):
        return "pass" if self.passed else "fail"

    @property
    def obligations(self):
        return [o for c in self.cases for o in c.obligations]

    @property
    def type_error(self):
        return self.error is not None and self.error.type_error

    def failures(self):
        """Human-readable reasons this declaration failed."""
        out = []
        if self.error is not None:
            out.append(str(self.error))
        for c in self.cases:
            prefix = f"[{c.label}] " if c.label else ""
            if c.error is not None:
                out.append(prefix + str(c.error))
            for o in c.obligations:
                if not o.holds:
                    where = f"{o.span.line}:{o.span.col}: " if o.span is not None else ""
                    msg = o.message or f"{o.after} not established"
                    out.append(f"{prefix}{where}{o.rule}: {msg}")
        return out

    def to_dict(self):
        out = {
            "name": self.name,
            "verdict": self.verdict,
            "span": _span_dict(self.span),
            "cases": [c.to_dict() for c in self.cases],
            "obligations": [dict(o.to_dict(), case=c.label) for c in self.cases for o in c.obligations],
            "timings": {"seconds": round(self.seconds, 6)},
        }
        if self.error is not None:
            out["error"] = self.error.to_dict()
        return out
