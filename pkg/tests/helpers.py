"""Test-only helpers: a minimal unparser, random tree generators and an
independent guard evaluator used as an oracle."""

from __future__ import annotations

import json
import random

from efsmgen import compile_model, load_document
from efsmgen.expr import ExprNode, NodeKind, StatementKind

BINARY_TEXT = {
    NodeKind.OR: "||",
    NodeKind.AND: "&&",
    NodeKind.ADD: "+",
    NodeKind.SUB: "-",
    NodeKind.MUL: "*",
    NodeKind.DIV: "/",
    NodeKind.MOD: "%",
}


def render_source(node: ExprNode) -> str:
    """Fully parenthesised source text for a parse tree."""
    kind = node.kind
    if kind is NodeKind.EMPTY:
        return ""
    if kind in (NodeKind.INPUT_EVENT, NodeKind.OUTPUT_EVENT):
        port, func = node.children
        marker = "?" if kind is NodeKind.INPUT_EVENT else "!"
        params = ", ".join(render_source(p) for p in func.children[0].children)
        return f"{marker}{port.value}.{func.value}({params});"
    if kind is NodeKind.ACTION_LIST:
        return " ".join(render_source(a) for a in node.children)
    if kind is NodeKind.ASSIGNMENT:
        target, value = node.children
        return f"{target.value} = {render_source(value)};"
    if kind is NodeKind.INT:
        return str(node.value)
    if kind is NodeKind.VAR:
        return node.value
    if kind is NodeKind.NOT:
        return f"(!({render_source(node.children[0])}))"
    if kind is NodeKind.NEG:
        return f"-({render_source(node.children[0])})"
    if kind is NodeKind.COMPARE:
        left, right = node.children
        return f"({render_source(left)} {node.value} {render_source(right)})"
    left, right = node.children
    return f"({render_source(left)} {BINARY_TEXT[kind]} {render_source(right)})"


# -- random parse trees ------------------------------------------------------------

NAMES = ["a", "b", "c", "qos", "ReqQos", "x_1", "Try2"]
RELOPS = ["==", "!=", "<", "<=", ">", ">="]
ARITH = [NodeKind.ADD, NodeKind.SUB, NodeKind.MUL, NodeKind.DIV, NodeKind.MOD]


def random_int_expr(rng: random.Random, depth: int) -> ExprNode:
    roll = rng.random()
    if depth <= 0 or roll < 0.3:
        if rng.random() < 0.5:
            return ExprNode(NodeKind.INT, value=rng.randint(0, 99))
        return ExprNode(NodeKind.VAR, value=rng.choice(NAMES))
    if roll < 0.4:
        return ExprNode(NodeKind.NEG, (random_int_expr(rng, depth - 1),))
    return ExprNode(
        rng.choice(ARITH), (random_int_expr(rng, depth - 1), random_int_expr(rng, depth - 1))
    )


def random_bool_expr(rng: random.Random, depth: int) -> ExprNode:
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        return ExprNode(
            NodeKind.COMPARE,
            (random_int_expr(rng, depth - 1), random_int_expr(rng, depth - 1)),
            rng.choice(RELOPS),
        )
    if roll < 0.5:
        return ExprNode(NodeKind.NOT, (random_bool_expr(rng, depth - 1),))
    if roll < 0.6:
        return ExprNode(
            NodeKind.COMPARE,
            (random_bool_expr(rng, depth - 1), random_bool_expr(rng, depth - 1)),
            rng.choice(["==", "!="]),
        )
    kind = rng.choice([NodeKind.AND, NodeKind.OR])
    return ExprNode(kind, (random_bool_expr(rng, depth - 1), random_bool_expr(rng, depth - 1)))


def _event(rng: random.Random, kind: NodeKind) -> ExprNode:
    if kind is NodeKind.INPUT_EVENT:
        names = rng.sample(NAMES, rng.randint(0, 3))
        params = tuple(ExprNode(NodeKind.VAR, value=n) for n in names)
    else:
        params = tuple(random_int_expr(rng, 2) for _ in range(rng.randint(0, 3)))
    port = ExprNode(NodeKind.PORT, value=rng.choice(["U", "L", "P0"]))
    func = ExprNode(
        NodeKind.FUNCTION_EXPR,
        (ExprNode(NodeKind.PARAM_LIST, params),),
        rng.choice(["connect", "CONreq", "data_1"]),
    )
    return ExprNode(kind, (port, func))


def random_tree(rng: random.Random) -> tuple[StatementKind, ExprNode]:
    kind = rng.choice(list(StatementKind))
    if kind is StatementKind.GUARD:
        return kind, random_bool_expr(rng, rng.randint(0, 4))
    if kind is StatementKind.ACTION_LIST:
        assignments = tuple(
            ExprNode(
                NodeKind.ASSIGNMENT,
                (ExprNode(NodeKind.VAR, value=rng.choice(NAMES)), random_int_expr(rng, 3)),
            )
            for _ in range(rng.randint(1, 3))
        )
        return kind, ExprNode(NodeKind.ACTION_LIST, assignments)
    if kind is StatementKind.INPUT_EVENT:
        return kind, _event(rng, NodeKind.INPUT_EVENT)
    return kind, _event(rng, NodeKind.OUTPUT_EVENT)


# -- naive oracle over tuple-shaped guards ----------------------------------------
#
# Guards are built here as nested tuples, printed to text by ``guard_text`` and
# evaluated by ``naive_eval``; none of this touches the package's parser or
# evaluator.

VARS = ("a", "b", "c")


def random_guard(rng: random.Random, names, depth: int):
    def int_term(d):
        roll = rng.random()
        if d <= 0 or roll < 0.35:
            return ("lit", rng.randint(0, 3)) if rng.random() < 0.4 else ("var", rng.choice(names))
        if roll < 0.45:
            return ("neg", int_term(d - 1))
        return (rng.choice(["+", "-", "*", "/", "%"]), int_term(d - 1), int_term(d - 1))

    def bool_term(d):
        roll = rng.random()
        if d <= 0 or roll < 0.45:
            return (rng.choice(RELOPS), int_term(d - 1), int_term(d - 1))
        if roll < 0.6:
            return ("!", bool_term(d - 1))
        if roll < 0.67:
            return (rng.choice(["==", "!="]), bool_term(d - 1), bool_term(d - 1))
        return (rng.choice(["&&", "||"]), bool_term(d - 1), bool_term(d - 1))

    return bool_term(depth)


def guard_text(g) -> str:
    tag = g[0]
    if tag == "lit":
        return str(g[1])
    if tag == "var":
        return g[1]
    if tag == "neg":
        return f"-({guard_text(g[1])})"
    if tag == "!":
        return f"(!({guard_text(g[1])}))"
    return f"({guard_text(g[1])} {tag} {guard_text(g[2])})"


class Div0(Exception):
    pass


class BadType(Exception):
    pass


def naive_eval(g, env):
    tag = g[0]
    if tag == "lit":
        return g[1]
    if tag == "var":
        return env[g[1]]
    if tag == "neg":
        v = naive_eval(g[1], env)
        if isinstance(v, bool):
            raise BadType
        return -v
    if tag == "!":
        v = naive_eval(g[1], env)
        if not isinstance(v, bool):
            raise BadType
        return not v
    if tag in ("&&", "||"):
        left = naive_eval(g[1], env)
        if not isinstance(left, bool):
            raise BadType
        if tag == "&&" and left is False:
            return False
        if tag == "||" and left is True:
            return True
        right = naive_eval(g[2], env)
        if not isinstance(right, bool):
            raise BadType
        return right
    left, right = naive_eval(g[1], env), naive_eval(g[2], env)
    if tag in ("==", "!="):
        if isinstance(left, bool) != isinstance(right, bool):
            raise BadType
        return (left == right) if tag == "==" else (left != right)
    if isinstance(left, bool) or isinstance(right, bool):
        raise BadType
    if tag == "<":
        return left < right
    if tag == "<=":
        return left <= right
    if tag == ">":
        return left > right
    if tag == ">=":
        return left >= right
    if tag == "+":
        return left + right
    if tag == "-":
        return left - right
    if tag == "*":
        return left * right
    if right == 0:
        raise Div0
    # operands stay tiny here, so float division is exact enough to truncate
    quotient = int(left / right)
    return quotient if tag == "/" else left - right * quotient


# -- model construction --------------------------------------------------------------


def transition(name, head, tail, input_event="", guard="", action="", output_event=""):
    return {
        "name": name,
        "head_state": head,
        "tail_state": tail,
        "input_event": input_event,
        "guard": guard,
        "action": action,
        "output_event": output_event,
    }


def model_text(transitions, **extra) -> str:
    return json.dumps({**extra, "transitions": transitions})


def build(transitions, **extra):
    return compile_model(load_document(model_text(transitions, **extra)))


# -- small synthetic models ---------------------------------------------------------

SELF_LOOP = [transition("tick", "s1", "s1", "?P.tick(x);", "x > 0", "n = n + x;", "!P.count(n);")]

INFEASIBLE = [
    transition("go", "s1", "s2", "?P.go(x);", "x >= 0"),
    transition("never", "s2", "s3", "", "1 == 2"),
    transition("back", "s2", "s1", "", "x == 1", "", "!P.back(x);"),
]

COUNTER = [
    transition("inc", "s1", "s1", "", "c < 3", "c = c + 1;", "!P.inc(c);"),
    transition("done", "s1", "s2", "", "c == 3", "", "!P.done(c);"),
    transition("reset", "s2", "s1", "", "", "c = 0;"),
]

TWO_INPUTS = [
    transition("pair", "s1", "s2", "?P.pair(x, y);", "x + y == 2", "sum = x * 10 + y;", "!P.ok(sum);"),
    transition("neg", "s2", "s3", "", "x * y < 0"),
    transition("div", "s2", "s4", "?P.d(z);", "10 / (z + 1) == 5", "", "!P.q(10 % (z + 1));"),
]

CORPUS = {
    "self_loop": (SELF_LOOP, {"domains": [{"variable": "x", "low": -1, "high": 2}]}),
    "infeasible_guard": (INFEASIBLE, {}),
    "counter": (COUNTER, {}),
    "two_inputs": (
        TWO_INPUTS,
        {"domains": [
            {"variable": "x", "low": 0, "high": 3},
            {"variable": "y", "low": -1, "high": 1},
            {"variable": "z", "low": 0, "high": 4},
        ]},
    ),
}
