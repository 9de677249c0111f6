"""Executable EFSM: compilation, guard evaluation and simulation.

Configurations are immutable values, so callers can branch a search from any
configuration without copying.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from . import expr as ex
from .errors import (
    CompileError,
    DivisionByZero,
    EvaluationError,
    EvaluationTypeError,
    ExprError,
    ExpressionSyntaxError,
    GuardViolated,
    HeadStateMismatch,
    InputBindingError,
    InvalidModel,
    NonAdjacent,
    UnknownDomainVariable,
    UnknownState,
    UnknownTransition,
    VariableClash,
)
from .expr import EMPTY, ExprNode, NodeKind, StatementKind
from .model import ModelDocument, VariableDomain, has_errors, resolve_initial_state, validate_document

DEFAULT_DOMAIN = (0, 2)

Value = int | bool


@dataclass(frozen=True)
class CompiledTransition:
    name: str
    head: str
    tail: str
    input_event: ExprNode = EMPTY
    guard: ExprNode = EMPTY
    actions: ExprNode = ExprNode(NodeKind.ACTION_LIST)
    output_event: ExprNode = EMPTY
    input_params: tuple[str, ...] = ()
    defs: frozenset[str] = frozenset()
    c_uses: frozenset[str] = frozenset()
    p_uses: frozenset[str] = frozenset()


@dataclass(frozen=True)
class StateConfiguration:
    """Current state plus one integer per model variable, in model order."""

    state: str
    items: tuple[tuple[str, int], ...] = ()

    @property
    def values(self) -> dict[str, int]:
        return dict(self.items)

    def __getitem__(self, name: str) -> int:
        for key, value in self.items:
            if key == name:
                return value
        raise KeyError(name)

    def as_tuple(self) -> tuple:
        return (self.state, *(value for _, value in self.items))

    def render(self) -> str:
        """Render as ``('s2', 0, 2, 0, 2)``."""
        return "(" + ", ".join([repr(self.state), *(str(v) for _, v in self.items)]) + ")"

    def to_dict(self) -> dict[str, Any]:
        return {"state": self.state, "values": dict(self.items)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "StateConfiguration":
        return cls(data["state"], tuple((k, int(v)) for k, v in data["values"].items()))


@dataclass(frozen=True)
class StepResult:
    transition: str
    configuration: StateConfiguration
    output: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "transition": self.transition,
            "configuration": self.configuration.to_dict(),
            "output": self.output,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "StepResult":
        return cls(
            data["transition"],
            StateConfiguration.from_dict(data["configuration"]),
            data.get("output"),
        )


@dataclass(frozen=True)
class CompiledEfsm:
    states: tuple[str, ...]
    initial_state: str
    transitions: tuple[CompiledTransition, ...]
    context_vars: tuple[str, ...]
    input_vars: tuple[str, ...]
    initial_values: Mapping[str, int] = field(default_factory=dict)
    domains: Mapping[str, VariableDomain] = field(default_factory=dict)
    adjacency: Mapping[str, Mapping[str, tuple[CompiledTransition, ...]]] = field(
        default_factory=dict
    )

    @property
    def variables(self) -> tuple[str, ...]:
        return self.context_vars + self.input_vars

    def transition(self, name: str) -> CompiledTransition:
        for t in self.transitions:
            if t.name == name:
                return t
        raise UnknownTransition(name)


# -- compilation ------------------------------------------------------------------


def _parse_field(spec_name: str, field_name: str, kind: StatementKind, text: str) -> ExprNode:
    try:
        return ex.parse(kind, text)
    except ExprError as exc:
        raise ExpressionSyntaxError(spec_name, field_name, exc) from exc


def compile_model(doc: ModelDocument) -> CompiledEfsm:
    diags = validate_document(doc)
    if has_errors(diags):
        raise InvalidModel([d for d in diags if d.severity == "error"])

    transitions: list[CompiledTransition] = []
    first_seen: dict[str, None] = {}
    inputs: dict[str, None] = {}
    assigned: set[str] = set()

    for spec in doc.transitions:
        inp = _parse_field(spec.name, "input_event", StatementKind.INPUT_EVENT, spec.input_event)
        guard = _parse_field(spec.name, "guard", StatementKind.GUARD, spec.guard)
        actions = _parse_field(spec.name, "action", StatementKind.ACTION_LIST, spec.action)
        if actions.is_empty:
            actions = ExprNode(NodeKind.ACTION_LIST)
        out = _parse_field(spec.name, "output_event", StatementKind.OUTPUT_EVENT, spec.output_event)

        for node in (inp, guard, actions, out):
            for role, name in ex.variable_refs(node):
                first_seen.setdefault(name)
                if role == "input":
                    inputs.setdefault(name)
                elif role == "assign":
                    assigned.add(name)

        action_ids = ex.identifiers(actions)
        transitions.append(
            CompiledTransition(
                name=spec.name,
                head=spec.head_state,
                tail=spec.tail_state,
                input_event=inp,
                guard=guard,
                actions=actions,
                output_event=out,
                input_params=ex.input_params(inp),
                defs=action_ids.assigned,
                c_uses=action_ids.used | ex.identifiers(out).used,
                p_uses=ex.identifiers(guard).used,
            )
        )

    for name in inputs:
        if name in assigned:
            raise VariableClash(name)

    context: list[str] = []
    for name in doc.variables:
        if name in inputs:
            raise CompileError(f"{name!r} is listed under 'variables' but is an input variable")
        if name not in context:
            context.append(name)
    context.extend(n for n in first_seen if n not in inputs and n not in context)

    domains: dict[str, VariableDomain] = {}
    for d in doc.domains:
        if d.variable not in inputs:
            raise UnknownDomainVariable(d.variable)
        domains[d.variable] = d
    for name in inputs:
        domains.setdefault(name, VariableDomain(name, *DEFAULT_DOMAIN))

    initial = resolve_initial_state(doc)
    states: dict[str, None] = {initial: None}
    for spec in doc.transitions:
        states.setdefault(spec.head_state)
        states.setdefault(spec.tail_state)
    adjacency = {h: {t: [] for t in states} for h in states}
    for t in transitions:
        adjacency[t.head][t.tail].append(t)

    all_vars = tuple(context) + tuple(inputs)
    return CompiledEfsm(
        states=tuple(states),
        initial_state=initial,
        transitions=tuple(transitions),
        context_vars=tuple(context),
        input_vars=tuple(inputs),
        initial_values={name: 0 for name in all_vars},
        domains={name: domains[name] for name in inputs},
        adjacency={h: {t: tuple(cell) for t, cell in row.items()} for h, row in adjacency.items()},
    )


# -- evaluation --------------------------------------------------------------------


def _int(value: Value, what: str) -> int:
    if type(value) is not int:
        raise EvaluationTypeError(f"{what} needs an integer operand, got {_sort(value)}")
    return value


def _bool(value: Value, what: str) -> bool:
    if type(value) is not bool:
        raise EvaluationTypeError(f"{what} needs a boolean operand, got {_sort(value)}")
    return value


def _sort(value: Value) -> str:
    return "boolean" if type(value) is bool else "integer"


def _trunc_div(a: int, b: int) -> int:
    if b == 0:
        raise DivisionByZero()
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


_COMPARE = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def evaluate(node: ExprNode, env: Mapping[str, int]) -> Value:
    """Evaluate an expression tree.

    ``&&`` and ``||`` short-circuit; ``/`` truncates toward zero and ``%``
    takes the sign of the dividend.
    """
    kind = node.kind
    if kind is NodeKind.INT:
        return node.value
    if kind is NodeKind.VAR:
        try:
            return env[node.value]
        except KeyError:
            raise EvaluationError(f"variable {node.value!r} has no value") from None
    if kind is NodeKind.AND:
        if not _bool(evaluate(node.children[0], env), "&&"):
            return False
        return _bool(evaluate(node.children[1], env), "&&")
    if kind is NodeKind.OR:
        if _bool(evaluate(node.children[0], env), "||"):
            return True
        return _bool(evaluate(node.children[1], env), "||")
    if kind is NodeKind.NOT:
        return not _bool(evaluate(node.children[0], env), "!")
    if kind is NodeKind.NEG:
        return -_int(evaluate(node.children[0], env), "unary -")
    if kind is NodeKind.COMPARE:
        op = node.value
        left = evaluate(node.children[0], env)
        right = evaluate(node.children[1], env)
        if op in ("==", "!="):
            if type(left) is not type(right):
                raise EvaluationTypeError(f"{op} compares {_sort(left)} with {_sort(right)}")
        else:
            _int(left, op)
            _int(right, op)
        return _COMPARE[op](left, right)

    a = _int(evaluate(node.children[0], env), kind.value)
    b = _int(evaluate(node.children[1], env), kind.value)
    if kind is NodeKind.ADD:
        return a + b
    if kind is NodeKind.SUB:
        return a - b
    if kind is NodeKind.MUL:
        return a * b
    if kind is NodeKind.DIV:
        return _trunc_div(a, b)
    if kind is NodeKind.MOD:
        return a - b * _trunc_div(a, b)
    raise EvaluationError(f"cannot evaluate a {kind.value} node")


def evaluate_guard(guard: ExprNode, env: Mapping[str, int]) -> bool:
    if guard.is_empty:
        return True
    result = evaluate(guard, env)
    if type(result) is not bool:
        raise EvaluationTypeError("guard evaluated to an integer")
    return result


def render_output(event: ExprNode, env: Mapping[str, int]) -> str | None:
    """Output event text with every argument replaced by its integer value."""
    if event.is_empty:
        return None
    port, func = event.children
    args = [str(_int(evaluate(p, env), "output argument")) for p in func.children[0].children]
    return f"!{port.value}.{func.value}({', '.join(args)});"


# -- simulation ---------------------------------------------------------------------


def initial_configuration(efsm: CompiledEfsm) -> StateConfiguration:
    return StateConfiguration(
        efsm.initial_state, tuple((name, efsm.initial_values[name]) for name in efsm.variables)
    )


def outgoing(efsm: CompiledEfsm, state: str) -> list[CompiledTransition]:
    if state not in efsm.adjacency:
        raise UnknownState(state)
    return [t for t in efsm.transitions if t.head == state]


def _bind(transition: CompiledTransition, sc: StateConfiguration, inputs: Mapping[str, int]) -> dict[str, int]:
    if sc.state != transition.head:
        raise HeadStateMismatch(transition.name, transition.head, sc.state)
    if set(inputs) != set(transition.input_params):
        raise InputBindingError(transition.name, transition.input_params, list(inputs))
    env = sc.values
    for name, value in inputs.items():
        env[name] = _int(value, f"input {name}")
    return env


def is_feasible(
    efsm: CompiledEfsm,
    transition: CompiledTransition,
    sc: StateConfiguration,
    inputs: Mapping[str, int] | None = None,
) -> bool:
    env = _bind(transition, sc, inputs or {})
    return evaluate_guard(transition.guard, env)


def fire(
    efsm: CompiledEfsm,
    transition: CompiledTransition,
    sc: StateConfiguration,
    inputs: Mapping[str, int] | None = None,
) -> StepResult:
    env = _bind(transition, sc, inputs or {})
    if not evaluate_guard(transition.guard, env):
        raise GuardViolated(None, transition.name)
    for assignment in transition.actions.children:
        target, value_node = assignment.children
        env[target.value] = _int(evaluate(value_node, env), f"assignment to {target.value}")
    output = render_output(transition.output_event, env)
    config = StateConfiguration(transition.tail, tuple((name, env[name]) for name in efsm.variables))
    return StepResult(transition.name, config, output)


def simulate_path(
    efsm: CompiledEfsm,
    path: Sequence[str],
    data: Sequence[Mapping[str, int]] | None = None,
    start: StateConfiguration | None = None,
) -> list[StepResult]:
    """Replay ``path`` step by step; error step indices are 0-based."""
    if data is None:
        data = [{} for _ in path]
    if len(data) != len(path):
        raise ValueError(f"path has {len(path)} steps but {len(data)} input maps were given")
    sc = start if start is not None else initial_configuration(efsm)
    trace: list[StepResult] = []
    for step, (name, inputs) in enumerate(zip(path, data)):
        try:
            transition = efsm.transition(name)
        except UnknownTransition:
            raise UnknownTransition(name, step) from None
        if transition.head != sc.state:
            raise NonAdjacent(step, name, sc.state, trace)
        if not is_feasible(efsm, transition, sc, inputs):
            raise GuardViolated(step, name, trace)
        result = fire(efsm, transition, sc, inputs)
        trace.append(result)
        sc = result.configuration
    return trace


# -- model information -------------------------------------------------------------


def def_use(efsm: CompiledEfsm, transition: CompiledTransition | str):
    """Return ``(defs, c_uses, p_uses)`` for a transition."""
    if isinstance(transition, str):
        transition = efsm.transition(transition)
    return transition.defs, transition.c_uses, transition.p_uses


@dataclass(frozen=True)
class VariableInfo:
    name: str
    kind: str  # "context" or "input"
    initial: int
    domain: tuple[int, int] | None = None


@dataclass(frozen=True)
class InfoReport:
    states: tuple[str, ...]
    initial_state: str
    transitions: tuple[tuple[str, str, str], ...]  # (name, head, tail)
    variables: tuple[VariableInfo, ...]
    def_use: tuple[tuple[str, tuple[str, ...], tuple[str, ...], tuple[str, ...]], ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "states": list(self.states),
            "initial_state": self.initial_state,
            "transitions": [
                {"name": n, "head": h, "tail": t} for n, h, t in self.transitions
            ],
            "variables": [
                {
                    "name": v.name,
                    "kind": v.kind,
                    "initial": v.initial,
                    "domain": list(v.domain) if v.domain else None,
                }
                for v in self.variables
            ],
            "def_use": [
                {"transition": n, "defs": list(d), "c_uses": list(c), "p_uses": list(p)}
                for n, d, c, p in self.def_use
            ],
        }


def model_info(efsm: CompiledEfsm) -> InfoReport:
    variables = [VariableInfo(n, "context", efsm.initial_values[n]) for n in efsm.context_vars]
    for name in efsm.input_vars:
        d = efsm.domains[name]
        variables.append(VariableInfo(name, "input", efsm.initial_values[name], (d.low, d.high)))
    return InfoReport(
        states=efsm.states,
        initial_state=efsm.initial_state,
        transitions=tuple((t.name, t.head, t.tail) for t in efsm.transitions),
        variables=tuple(variables),
        def_use=tuple(
            (t.name, tuple(sorted(t.defs)), tuple(sorted(t.c_uses)), tuple(sorted(t.p_uses)))
            for t in efsm.transitions
        ),
    )

