"""Coverage-directed test generation by breadth-first search.

The search keeps a FIFO worklist of ``(path, data, trace, configuration)``
nodes starting from the empty path at the initial configuration.  Each node is
expanded over its outgoing transitions in declaration order and, per
transition, over every boundary-value input map.  Infeasible children are
dropped; a feasible child that reaches an uncovered target becomes a test case.
"""

from __future__ import annotations

import enum
import itertools
import json
from collections import deque
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .core import (
    CompiledEfsm,
    CompiledTransition,
    StateConfiguration,
    StepResult,
    fire,
    initial_configuration,
    is_feasible,
    outgoing,
    simulate_path,
)
from .errors import InfeasibleCase, NoTargets, SimulationError
from .model import VariableDomain

DEFAULT_MAX_DEPTH = 10
DEFAULT_SAFETY_LIMIT = 100_000


class CoverageCriterion(enum.Enum):
    ALL_STATES = "all-states"
    ALL_TRANSITIONS = "all-transitions"


@dataclass(frozen=True)
class GenerationOptions:
    criterion: CoverageCriterion = CoverageCriterion.ALL_STATES
    max_depth: int = DEFAULT_MAX_DEPTH
    data_strategy: str = "boundary"
    tie_break: str = "declaration"
    prune_repeated: bool = False
    safety_limit: int = DEFAULT_SAFETY_LIMIT

    def __post_init__(self) -> None:
        object.__setattr__(self, "criterion", CoverageCriterion(self.criterion))
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.safety_limit < 1:
            raise ValueError("safety_limit must be at least 1")
        if self.data_strategy != "boundary":
            raise ValueError(f"unknown data strategy {self.data_strategy!r}")
        if self.tie_break != "declaration":
            raise ValueError(f"unknown tie-break rule {self.tie_break!r}")


@dataclass(frozen=True)
class TestCase:
    path: tuple[str, ...]
    data: tuple[Mapping[str, int], ...]
    trace: tuple[StepResult, ...]
    covered: tuple[str, ...] = ()

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict[str, Any]:
        return {
            "path": list(self.path),
            "data": [dict(d) for d in self.data],
            "covers": list(self.covered),
            "trace": [step.to_dict() for step in self.trace],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TestCase":
        return cls(
            tuple(data["path"]),
            tuple(dict(d) for d in data["data"]),
            tuple(StepResult.from_dict(s) for s in data.get("trace", ())),
            tuple(data.get("covers", ())),
        )


@dataclass(frozen=True)
class CoverageReport:
    criterion: CoverageCriterion
    covered: tuple[str, ...]
    uncovered: tuple[str, ...]

    @property
    def total(self) -> int:
        return len(self.covered) + len(self.uncovered)

    @property
    def fraction(self) -> float:
        return len(self.covered) / self.total if self.total else 0.0

    def summary(self) -> str:
        return f"{len(self.covered)}/{self.total}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "covered": len(self.covered),
            "total": self.total,
            "fraction": self.fraction,
            "covered_targets": list(self.covered),
            "uncovered_targets": list(self.uncovered),
        }


@dataclass(frozen=True)
class TestSuite:
    criterion: CoverageCriterion
    targets: tuple[str, ...]
    cases: tuple[TestCase, ...]
    exhausted: bool
    diagnostics: tuple[str, ...] = ()

    __test__ = False

    @property
    def coverage(self) -> CoverageReport:
        covered = {t for case in self.cases for t in case.covered}
        return CoverageReport(
            self.criterion,
            tuple(t for t in self.targets if t in covered),
            tuple(t for t in self.targets if t not in covered),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "criterion": self.criterion.value,
            "coverage": self.coverage.to_dict(),
            "exhausted": self.exhausted,
            "cases": [case.to_dict() for case in self.cases],
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TestSuite":
        cov = data["coverage"]
        return cls(
            CoverageCriterion(data["criterion"]),
            tuple(cov["covered_targets"]) + tuple(cov["uncovered_targets"]),
            tuple(TestCase.from_dict(c) for c in data["cases"]),
            bool(data["exhausted"]),
            tuple(data.get("diagnostics", ())),
        )


def boundary_candidates(domain: VariableDomain | tuple[int, int]) -> tuple[int, ...]:
    """Deduplicated ascending subset of {low, low+1, mid, high-1, high} inside the domain."""
    low, high = (domain.low, domain.high) if isinstance(domain, VariableDomain) else domain
    if low > high:
        raise ValueError(f"empty domain [{low}, {high}]")
    points = {low, low + 1, (low + high) // 2, high - 1, high}
    return tuple(sorted(p for p in points if low <= p <= high))


def step_inputs(efsm: CompiledEfsm, transition: CompiledTransition) -> list[dict[str, int]]:
    params = transition.input_params
    pools = [boundary_candidates(efsm.domains[p]) for p in params]
    return [dict(zip(params, combo)) for combo in itertools.product(*pools)]


def targets(efsm: CompiledEfsm, criterion: CoverageCriterion | str) -> tuple[str, ...]:
    criterion = CoverageCriterion(criterion)
    if criterion is CoverageCriterion.ALL_STATES:
        return efsm.states
    return tuple(t.name for t in efsm.transitions)


@dataclass(frozen=True)
class _Node:
    path: tuple[str, ...]
    data: tuple[Mapping[str, int], ...]
    trace: tuple[StepResult, ...]
    config: StateConfiguration


def _reached(criterion: CoverageCriterion, step: StepResult) -> str:
    if criterion is CoverageCriterion.ALL_STATES:
        return step.configuration.state
    return step.transition


def _expand(efsm: CompiledEfsm, node: _Node) -> Iterator[_Node]:
    """Feasible children of ``node`` in transition order, then input-map order."""
    for transition in outgoing(efsm, node.config.state):
        for inputs in step_inputs(efsm, transition):
            if not is_feasible(efsm, transition, node.config, inputs):
                continue
            step = fire(efsm, transition, node.config, inputs)
            yield _Node(
                node.path + (transition.name,),
                node.data + (inputs,),
                node.trace + (step,),
                step.configuration,
            )


def generate(efsm: CompiledEfsm, options: GenerationOptions | None = None) -> TestSuite:
    options = options or GenerationOptions()
    criterion = options.criterion
    goal = targets(efsm, criterion)
    if not goal:
        raise NoTargets()

    uncovered = set(goal)
    cases: list[TestCase] = []
    diagnostics: list[str] = []

    root = _Node((), (), (), initial_configuration(efsm))
    if criterion is CoverageCriterion.ALL_STATES:
        # the initial state counts as covered without taking a step
        uncovered.discard(root.config.state)
        cases.append(TestCase((), (), (), (root.config.state,)))

    queue: deque[_Node] = deque([root])
    seen = {root.config}
    created = 1
    while queue and uncovered:
        node = queue.popleft()
        if len(node.path) >= options.max_depth:
            continue
        for child in _expand(efsm, node):
            target = _reached(criterion, child.trace[-1])
            if target in uncovered:
                uncovered.discard(target)
                cases.append(TestCase(child.path, child.data, child.trace, (target,)))
                if not uncovered:
                    break
            if options.prune_repeated:
                if child.config in seen:
                    continue
                seen.add(child.config)
            if created >= options.safety_limit:
                diagnostics.append(
                    f"SafetyLimitExceeded: search stopped after {options.safety_limit} nodes"
                )
                queue.clear()
                break
            created += 1
            queue.append(child)

    return TestSuite(criterion, goal, tuple(cases), bool(uncovered), tuple(diagnostics))


def coverage_of(
    efsm: CompiledEfsm,
    suite: TestSuite | Iterable[TestCase],
    criterion: CoverageCriterion | str | None = None,
) -> CoverageReport:
    """Recompute coverage by replaying every case; recorded traces are only compared."""
    if isinstance(suite, TestSuite):
        criterion = suite.criterion if criterion is None else criterion
        cases: Sequence[TestCase] = suite.cases
    else:
        cases = list(suite)
    criterion = CoverageCriterion(criterion or CoverageCriterion.ALL_STATES)
    goal = targets(efsm, criterion)

    covered: set[str] = set()
    for index, case in enumerate(cases):
        try:
            trace = simulate_path(efsm, case.path, case.data)
        except SimulationError as exc:
            raise InfeasibleCase(index, exc) from exc
        if case.trace and tuple(trace) != tuple(case.trace):
            raise InfeasibleCase(index, ValueError("recorded trace differs from replay"))
        if criterion is CoverageCriterion.ALL_STATES:
            covered.add(efsm.initial_state)
        covered.update(_reached(criterion, step) for step in trace)

    return CoverageReport(
        criterion,
        tuple(t for t in goal if t in covered),
        tuple(t for t in goal if t not in covered),
    )
