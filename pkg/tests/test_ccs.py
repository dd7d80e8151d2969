from __future__ import annotations

import pytest
from ccs_corpus import MULTI_TYPE_CASES, PARSE_CASES
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import ccs_messages

from commitforge.ccs import (
    COMMIT_TYPES,
    NON_COMPLIANCE_REASONS,
    CcsMessage,
    CommitType,
    NonCompliant,
    detect_multi_type,
    format_message,
    parse_message,
)


def _expected(fields: dict) -> CcsMessage:
    return CcsMessage(
        type=CommitType(fields["type"]),
        description=fields["description"],
        scope=fields.get("scope"),
        breaking=fields.get("breaking", False),
        body=fields.get("body"),
        footers=tuple(fields.get("footers", ())),
    )


def test_corpus_size():
    assert len(PARSE_CASES) == 50


@pytest.mark.parametrize("raw,expected", PARSE_CASES, ids=[repr(r)[:40] for r, _ in PARSE_CASES])
def test_parse_corpus(raw, expected):
    if isinstance(expected, str):
        with pytest.raises(NonCompliant) as info:
            parse_message(raw)
        assert info.value.reason == expected
    else:
        assert parse_message(raw) == _expected(expected)


@pytest.mark.parametrize("raw,status,types", MULTI_TYPE_CASES)
def test_multi_type_corpus(raw, status, types):
    v = detect_multi_type(raw)
    assert v.status == status
    assert [t.value for t in v.matched_types] == types


def test_non_compliant_verdict_carries_reason():
    v = detect_multi_type("feature: add cache")
    assert v.status == "non_compliant" and v.reason == "unknown-type"


def test_format_examples():
    assert format_message(CcsMessage(CommitType.FEAT, "add lookahead", scope="parser")) == "feat(parser): add lookahead"
    assert format_message(CcsMessage(CommitType.CHORE, "bump deps")) == "chore: bump deps"


def test_ten_types():
    assert [t.value for t in COMMIT_TYPES] == [
        "feat", "fix", "perf", "style", "refactor", "docs", "test", "ci", "build", "chore",
    ]


def test_reason_must_be_known():
    with pytest.raises(AssertionError):
        NonCompliant("weird")


@settings(max_examples=1000, deadline=None)
@given(ccs_messages)
def test_round_trip(msg):
    assert parse_message(format_message(msg)) == msg


@settings(max_examples=300, deadline=None)
@given(ccs_messages)
def test_dict_round_trip(msg):
    assert CcsMessage.from_dict(msg.to_dict()) == msg


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=80))
def test_parse_total_and_closed(raw):
    # any text either parses into one of the ten types or yields a known reason
    try:
        m = parse_message(raw)
    except NonCompliant as e:
        assert e.reason in NON_COMPLIANCE_REASONS
    else:
        assert m.type in COMMIT_TYPES
        assert m.description == m.description.strip() and "\n" not in m.description
        assert m.scope is None or m.scope
        assert parse_message(raw) == m


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(COMMIT_TYPES), min_size=2, max_size=4))
def test_stacked_headers_are_multi_type(types):
    raw = "\n".join(f"{t.value}: change {i}" for i, t in enumerate(types))
    v = detect_multi_type(raw)
    assert v.status == "multi_type"
    assert list(v.matched_types) == types
