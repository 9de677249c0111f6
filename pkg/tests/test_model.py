import json

import pytest
from hypothesis import given, strategies as st

from efsmgen.errors import DuplicateTransitionName, EmptyModel, MalformedJson, MissingKey
from efsmgen.model import (
    ModelDocument,
    TransitionSpec,
    VariableDomain,
    dump_document,
    load_document,
    parse_document,
    resolve_initial_state,
    validate_document,
)

from helpers import model_text, transition

# transition 4 of the SCP model in the seven-key shape
T4 = transition("t4", "s3", "s3", "?L.refuse();", "TryCount != 2", "TryCount = TryCount + 1;", "!U.connect(ReqQos);")


def test_single_transition_document():
    doc = load_document(model_text([T4]))
    assert len(doc.transitions) == 1
    assert doc.transitions[0] == TransitionSpec(
        "t4", "s3", "s3", "?L.refuse();", "TryCount != 2", "TryCount = TryCount + 1;", "!U.connect(ReqQos);"
    )
    assert doc.domains == ()
    assert doc.initial_state is None


def test_bare_array_is_accepted():
    doc = load_document(json.dumps([T4]))
    assert doc.transitions[0].name == "t4"


def test_empty_model():
    with pytest.raises(EmptyModel):
        load_document('{"transitions": []}')


def test_scp_t1_has_empty_guard(scp_doc):
    t1 = scp_doc.transitions[0]
    assert t1.name == "t1"
    assert t1.guard == ""
    assert (t1.input_event, t1.action, t1.output_event) == ("", "", "")


@pytest.mark.parametrize("text", ["{", "not json", "[1, 2", b"\xff\xfe"])
def test_malformed_json(text):
    with pytest.raises(MalformedJson):
        load_document(text)


def test_missing_key_reports_index_and_key():
    broken = dict(T4)
    del broken["guard"]
    with pytest.raises(MissingKey) as info:
        load_document(model_text([transition("t1", "s1", "s3"), broken]))
    assert (info.value.index, info.value.key) == (1, "guard")


def test_duplicate_name_rejected_by_loader():
    with pytest.raises(DuplicateTransitionName) as info:
        load_document(model_text([transition("t1", "s1", "s2"), transition("t1", "s2", "s1")]))
    assert info.value.name == "t1"


@pytest.mark.parametrize(
    "payload",
    [
        {"transitions": [dict(T4, guard=3)]},
        {"transitions": [T4], "domains": [{"variable": "qos", "low": "0", "high": 2}]},
        {"transitions": [T4], "domains": [{"variable": "qos", "low": 0}]},
        {"transitions": [T4], "initial_state": 1},
        {"transitions": "t1"},
        "just a string",
    ],
)
def test_wrongly_typed_fields(payload):
    with pytest.raises(MalformedJson):
        load_document(json.dumps(payload))


def test_bundled_scp_validates(scp_doc):
    assert validate_document(scp_doc) == []


def test_duplicate_name_diagnostic():
    doc = parse_document(model_text([transition("t1", "s1", "s2"), transition("t1", "s2", "s1")]))
    diags = validate_document(doc)
    assert [d.code for d in diags] == ["DuplicateTransitionName"]
    assert diags[0].severity == "error"
    assert diags[0].location == "t1"


def test_inverted_domain_diagnostic():
    doc = parse_document(
        model_text([T4], domains=[{"variable": "qos", "low": 5, "high": 2}])
    )
    diags = validate_document(doc)
    assert [d.code for d in diags] == ["InvertedDomain"]


def test_bad_state_names_and_initial_state():
    doc = ModelDocument(
        transitions=(TransitionSpec("t1", "", "2bad"),),
        initial_state="s9",
    )
    codes = [d.code for d in validate_document(doc)]
    assert codes == ["InvalidStateName", "InvalidStateName", "UnknownInitialState"]
    assert all(d.location for d in validate_document(doc))


def test_initial_state_defaults():
    with_s1 = parse_document(model_text([transition("a", "s0", "s1"), transition("b", "s1", "s0")]))
    assert resolve_initial_state(with_s1) == "s1"
    without_s1 = parse_document(model_text([transition("a", "p", "q")]))
    assert resolve_initial_state(without_s1) == "p"


def test_round_trip_of_bundled_model(scp_doc):
    again = load_document(dump_document(scp_doc))
    assert again == scp_doc


identifier = st.from_regex(r"[A-Za-z][A-Za-z0-9_]{0,6}", fullmatch=True)
field_text = st.text(max_size=12)


@st.composite
def documents(draw):
    names = draw(st.lists(identifier, min_size=1, max_size=5, unique=True))
    specs = tuple(
        TransitionSpec(n, draw(identifier), draw(identifier), *draw(st.tuples(field_text, field_text, field_text, field_text)))
        for n in names
    )
    lows = draw(st.lists(st.integers(-50, 50), max_size=3))
    domains = tuple(VariableDomain(f"v{i}", low, low + draw(st.integers(0, 5))) for i, low in enumerate(lows))
    initial = draw(st.none() | st.sampled_from([s.head_state for s in specs]))
    return ModelDocument(specs, domains, initial)


@given(documents())
def test_round_trip_property(doc):
    text = dump_document(doc)
    assert load_document(text) == doc
    # pure function of its input bytes
    assert load_document(text.encode()) == load_document(text)
