"""Loading and validation of JSON model description files.

A model file is a JSON object::

    {
      "initial_state": "s1",                  # optional
      "variables": ["TryCount", "ReqQos"],    # optional context-variable order
      "domains": [{"variable": "qos", "low": 0, "high": 2}],   # optional
      "notes": "...",                         # optional, ignored
      "transitions": [
        {"name": "t3", "head_state": "s2", "tail_state": "s3",
         "input_event": "?U.CONreq(qos);", "guard": "qos <= 1",
         "action": "ReqQos = qos;", "output_event": "!U.connect(ReqQos);"}
      ]
    }

A bare JSON array is accepted as shorthand for ``{"transitions": [...]}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any

from .errors import DuplicateTransitionName, EmptyModel, MalformedJson, MissingKey

TRANSITION_KEYS = (
    "name",
    "head_state",
    "tail_state",
    "input_event",
    "guard",
    "action",
    "output_event",
)

IDENTIFIER_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class TransitionSpec:
    name: str
    head_state: str
    tail_state: str
    input_event: str = ""
    guard: str = ""
    action: str = ""
    output_event: str = ""


@dataclass(frozen=True)
class VariableDomain:
    variable: str
    low: int
    high: int


@dataclass(frozen=True)
class ModelDocument:
    transitions: tuple[TransitionSpec, ...]
    domains: tuple[VariableDomain, ...] = ()
    initial_state: str | None = None
    variables: tuple[str, ...] = ()
    notes: Any = None


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    code: str
    location: str  # transition name, or "document"
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.location}: {self.code}: {self.message}"

    def to_dict(self) -> dict[str, str]:
        return {
            "severity": self.severity,
            "code": self.code,
            "location": self.location,
            "message": self.message,
        }


def _require_str(value: Any, index: int, key: str) -> str:
    if not isinstance(value, str):
        raise MalformedJson(f"transition #{index}: {key!r} must be a string")
    return value


def _require_int(value: Any, where: str) -> int:
    # bool is an int subclass; reject it explicitly
    if not isinstance(value, int) or isinstance(value, bool):
        raise MalformedJson(f"{where} must be an integer")
    return value


def parse_document(text: str | bytes) -> ModelDocument:
    """Build a ModelDocument from JSON text without semantic checks.

    Duplicate names are kept so that :func:`validate_document` can report them.
    """
    try:
        raw = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedJson(f"not valid JSON: {exc}") from exc

    if isinstance(raw, list):
        raw = {"transitions": raw}
    if not isinstance(raw, dict):
        raise MalformedJson("top level must be an object or an array of transitions")
    items = raw.get("transitions")
    if not isinstance(items, list):
        raise MalformedJson("'transitions' must be an array")
    if not items:
        raise EmptyModel()

    transitions = []
    for index, item in enumerate(items):
        if not isinstance(item, dict):
            raise MalformedJson(f"transition #{index} must be an object")
        for key in TRANSITION_KEYS:
            if key not in item:
                raise MissingKey(index, key)
        transitions.append(
            TransitionSpec(*(_require_str(item[key], index, key) for key in TRANSITION_KEYS))
        )

    domains = []
    for i, entry in enumerate(raw.get("domains") or []):
        if not isinstance(entry, dict):
            raise MalformedJson(f"domains[{i}] must be an object")
        for key in ("variable", "low", "high"):
            if key not in entry:
                raise MalformedJson(f"domains[{i}] is missing {key!r}")
        if not isinstance(entry["variable"], str):
            raise MalformedJson(f"domains[{i}].variable must be a string")
        domains.append(
            VariableDomain(
                entry["variable"],
                _require_int(entry["low"], f"domains[{i}].low"),
                _require_int(entry["high"], f"domains[{i}].high"),
            )
        )

    initial = raw.get("initial_state")
    if initial is not None and not isinstance(initial, str):
        raise MalformedJson("'initial_state' must be a string")
    variables = raw.get("variables") or []
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise MalformedJson("'variables' must be an array of names")

    return ModelDocument(
        transitions=tuple(transitions),
        domains=tuple(domains),
        initial_state=initial,
        variables=tuple(variables),
        notes=raw.get("notes"),
    )


def load_document(text: str | bytes) -> ModelDocument:
    """Parse a model description, rejecting duplicate transition names."""
    doc = parse_document(text)
    seen: set[str] = set()
    for spec in doc.transitions:
        if spec.name in seen:
            raise DuplicateTransitionName(spec.name)
        seen.add(spec.name)
    return doc


def load_file(path) -> ModelDocument:
    with open(path, "rb") as fh:
        return load_document(fh.read())


def document_to_dict(doc: ModelDocument) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if doc.initial_state is not None:
        out["initial_state"] = doc.initial_state
    if doc.variables:
        out["variables"] = list(doc.variables)
    if doc.domains:
        out["domains"] = [
            {"variable": d.variable, "low": d.low, "high": d.high} for d in doc.domains
        ]
    if doc.notes is not None:
        out["notes"] = doc.notes
    out["transitions"] = [
        {key: getattr(spec, key) for key in TRANSITION_KEYS} for spec in doc.transitions
    ]
    return out


def dump_document(doc: ModelDocument) -> str:
    return json.dumps(document_to_dict(doc), indent=2, ensure_ascii=False) + "\n"


def resolve_initial_state(doc: ModelDocument) -> str:
    """Explicit initial state, else "s1" if some transition leaves it, else the first head."""
    if doc.initial_state is not None:
        return doc.initial_state
    heads = [spec.head_state for spec in doc.transitions]
    return "s1" if "s1" in heads else heads[0]


def validate_document(doc: ModelDocument) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def error(code: str, location: str, message: str) -> None:
        diags.append(Diagnostic("error", code, location, message))

    if not doc.transitions:
        error("EmptyModel", "document", "model has no transitions")

    seen: set[str] = set()
    for index, spec in enumerate(doc.transitions):
        loc = spec.name or f"transition #{index}"
        if not IDENTIFIER_RE.match(spec.name):
            error("InvalidIdentifier", loc, f"transition name {spec.name!r} is not an identifier")
        if spec.name in seen:
            error("DuplicateTransitionName", loc, f"transition name {spec.name!r} is used more than once")
        seen.add(spec.name)
        for key in ("head_state", "tail_state"):
            value = getattr(spec, key)
            if not IDENTIFIER_RE.match(value):
                error("InvalidStateName", loc, f"{key} {value!r} is not an identifier")

    domain_seen: set[str] = set()
    for d in doc.domains:
        loc = f"domain {d.variable}"
        if not IDENTIFIER_RE.match(d.variable):
            error("InvalidIdentifier", loc, f"{d.variable!r} is not an identifier")
        if d.low > d.high:
            error("InvertedDomain", loc, f"low {d.low} exceeds high {d.high}")
        if d.variable in domain_seen:
            error("DuplicateDomain", loc, f"domain for {d.variable!r} given twice")
        domain_seen.add(d.variable)

    for name in doc.variables:
        if not IDENTIFIER_RE.match(name):
            error("InvalidIdentifier", "document", f"variable {name!r} is not an identifier")

    if doc.initial_state is not None:
        heads = {spec.head_state for spec in doc.transitions}
        if doc.initial_state not in heads:
            error(
                "UnknownInitialState",
                "document",
                f"initial_state {doc.initial_state!r} is not the head of any transition",
            )
    return diags


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diags)
