"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations

from typing import Any, Sequence


class EfsmError(Exception):
    """Base class for all errors raised by efsmgen."""


# -- model description ------------------------------------------------------


class ModelError(EfsmError):
    """The model description file cannot be turned into a document."""


class MalformedJson(ModelError):
    pass


class MissingKey(ModelError):
    def __init__(self, index: int, key: str) -> None:
        self.index = index
        self.key = key
        super().__init__(f"transition #{index}: missing key {key!r}")


class DuplicateTransitionName(ModelError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"duplicate transition name {name!r}")


class EmptyModel(ModelError):
    def __init__(self) -> None:
        super().__init__("model has no transitions")


# -- expression language ------------------------------------------------------


class ExprError(EfsmError):
    """Lexical, syntactic or shape error in an expression string."""


class UnknownCharacter(ExprError):
    def __init__(self, offset: int, char: str) -> None:
        self.offset = offset
        self.char = char
        super().__init__(f"unknown character {char!r} at offset {offset}")


class ExprSyntaxError(ExprError):
    def __init__(self, offset: int, expected: Sequence[str], found: str = "") -> None:
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        self.found = found
        what = f"found {found!r}" if found else "found end of input"
        super().__init__(
            f"syntax error at offset {offset}: expected one of "
            f"{', '.join(self.expected)}; {what}"
        )


class TypeShapeError(ExprError):
    def __init__(self, message: str, offset: int = 0) -> None:
        self.offset = offset
        super().__init__(message)


# -- compilation ----------------------------------------------------------------


class CompileError(EfsmError):
    """The document is well-formed JSON but does not denote a valid EFSM."""


class ExpressionSyntaxError(CompileError):
    def __init__(self, transition: str, field: str, cause: ExprError) -> None:
        self.transition = transition
        self.field = field
        self.offset = getattr(cause, "offset", 0)
        self.cause = cause
        super().__init__(f"transition {transition!r}, field {field!r}: {cause}")


class VariableClash(CompileError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(
            f"variable {name!r} is declared as an input and also assigned by an action"
        )


class UnknownDomainVariable(CompileError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"domain given for {name!r}, which is not an input variable")


class InvalidModel(CompileError):
    """Raised by compile when validation reports error diagnostics."""

    def __init__(self, diagnostics: Sequence[Any]) -> None:
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


# -- simulation -------------------------------------------------------------------


class SimulationError(EfsmError):
    pass


class UnknownState(SimulationError):
    def __init__(self, state: str) -> None:
        self.state = state
        super().__init__(f"unknown state {state!r}")


class UnknownTransition(SimulationError):
    def __init__(self, name: str, step: int | None = None) -> None:
        self.name = name
        self.step = step
        super().__init__(f"unknown transition {name!r}")


class HeadStateMismatch(SimulationError):
    def __init__(self, transition: str, head: str, state: str) -> None:
        self.transition = transition
        super().__init__(
            f"transition {transition!r} leaves {head!r} but configuration is in {state!r}"
        )


class InputBindingError(SimulationError):
    def __init__(self, transition: str, expected: Sequence[str], got: Sequence[str]) -> None:
        self.transition = transition
        super().__init__(
            f"transition {transition!r} takes inputs {sorted(expected)}, got {sorted(got)}"
        )


class EvaluationError(SimulationError):
    pass


class EvaluationTypeError(EvaluationError):
    pass


class DivisionByZero(EvaluationError):
    def __init__(self) -> None:
        super().__init__("division by zero")


class PathError(SimulationError):
    """A path step could not be executed; ``trace`` holds the steps that did."""

    def __init__(self, step: int | None, message: str, trace: Sequence[Any] = ()) -> None:
        self.step = step
        self.trace = list(trace)
        super().__init__(message)


class NonAdjacent(PathError):
    def __init__(self, step: int, transition: str, state: str, trace: Sequence[Any] = ()) -> None:
        self.transition = transition
        super().__init__(
            step, f"step {step}: {transition!r} does not leave state {state!r}", trace
        )


class GuardViolated(PathError):
    def __init__(self, step: int | None, transition: str, trace: Sequence[Any] = ()) -> None:
        self.transition = transition
        where = "" if step is None else f"step {step}: "
        super().__init__(step, f"{where}guard of {transition!r} does not hold", trace)


# -- generation --------------------------------------------------------------------


class GenerationError(EfsmError):
    pass


class NoTargets(GenerationError):
    def __init__(self) -> None:
        super().__init__("coverage criterion has no targets in this model")


class InfeasibleCase(GenerationError):
    def __init__(self, index: int, cause: Exception | None = None) -> None:
        self.index = index
        self.cause = cause
        super().__init__(f"test case {index} does not replay: {cause}")
