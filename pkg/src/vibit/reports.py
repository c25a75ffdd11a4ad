"""Structured analysis reports with lossless JSON round-tripping."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .contextuality import Contradiction, Fixpoint, TraceStep


@dataclass(frozen=True)
class AnalysisReport:
    subject: str
    query: str
    result: dict
    trace: tuple = ()
    timings: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "subject": self.subject,
            "query": self.query,
            "result": self.result,
            "trace": [list(step) for step in self.trace],
            "timings": self.timings,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        data = json.loads(text)
        return cls(
            subject=data["subject"],
            query=data["query"],
            result=data["result"],
            trace=tuple(tuple(step) for step in data["trace"]),
            timings=data["timings"],
        )


def _trace_rows(steps: tuple[TraceStep, ...]) -> tuple:
    return tuple(
        (s.rule, list(s.context) if s.context else None, s.vertex, s.value)
        for s in steps
    )


def propagation_report(subject: str, outcome, seconds: float) -> AnalysisReport:
    if isinstance(outcome, Fixpoint):
        result = {
            "kind": "fixpoint",
            "assignment": {k: outcome.assignment[k] for k in sorted(outcome.assignment)},
        }
        trace = _trace_rows(outcome.trace)
    elif isinstance(outcome, Contradiction):
        result = {
            "kind": "contradiction",
            "context": list(outcome.context),
            "violation": outcome.kind,
            "assignment": {k: outcome.assignment[k] for k in sorted(outcome.assignment)},
        }
        trace = _trace_rows(outcome.trace)
    else:
        raise TypeError(f"not a propagation outcome: {type(outcome).__name__}")
    return AnalysisReport(subject, "propagate", result, trace, {"seconds": seconds})


def enumeration_report(subject: str, states: list[dict], seconds: float) -> AnalysisReport:
    result = {
        "kind": "enumeration",
        "count": len(states),
        "states": [{k: s[k] for k in sorted(s)} for s in states],
    }
    return AnalysisReport(subject, "enumerate", result, (), {"seconds": seconds})


def gadget_report(subject: str, given: str, target: str, klass, seconds: float) -> AnalysisReport:
    result = {"kind": "gadget", "given": given, "target": target, "class": klass.value}
    return AnalysisReport(subject, "gadget", result, (), {"seconds": seconds})


def unital_report(subject: str, flag: bool, witness: dict, seconds: float) -> AnalysisReport:
    result = {
        "kind": "unital",
        "unital": flag,
        "witness": {k: witness[k] for k in sorted(witness)},
    }
    return AnalysisReport(subject, "unital", result, (), {"seconds": seconds})
