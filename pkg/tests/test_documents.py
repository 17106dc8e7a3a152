"""Document schema: parsing, validation context, shorthand expansion, round trip."""

import json

import pytest

from stonecheck.documents import (
    document_digest,
    parse_document,
    powerset_labels,
    render_document,
)
from stonecheck.errors import ParseError, UnknownName, ValidationError


def test_minimal_powerset_document():
    doc = parse_document('{"algebras":[{"name":"B2","powerset":1}]}')
    assert doc.algebra("B2").size == 2
    assert doc.labels["B2"] == ("{}", "{0}")


def test_three_element_abstract_algebra_fails_validation():
    text = json.dumps(
        {
            "algebras": [
                {
                    "name": "bad",
                    "carrier": ["a", "b", "c"],
                    "leq": [["a", "b"], ["b", "c"]],
                    "complement": [["a", "c"], ["b", "b"], ["c", "a"]],
                }
            ]
        }
    )
    with pytest.raises(ValidationError) as exc:
        parse_document(text)
    assert "algebras[0]" in str(exc.value)


def test_atom_shorthand_expands_to_direct_table():
    text = json.dumps(
        {
            "algebras": [
                {"name": "four", "powerset": 2},
                {"name": "two", "powerset": 1},
            ],
            "homs": [
                {
                    "name": "shorthand",
                    "source": "four",
                    "target": "two",
                    "atom_map": [["{0}", "{0}"]],
                },
                {
                    "name": "direct",
                    "source": "four",
                    "target": "two",
                    "map": [["{}", "{}"], ["{0}", "{0}"], ["{1}", "{}"], ["{0,1}", "{0}"]],
                },
            ],
        }
    )
    doc = parse_document(text)
    assert doc.hom("shorthand").table == doc.hom("direct").table


def test_ref_alias_points_at_same_algebra():
    doc = parse_document(
        '{"algebras":[{"name":"a","powerset":2},{"name":"b","ref":"a"}]}'
    )
    assert doc.algebra("a") is doc.algebra("b")


def test_duplicate_names_rejected():
    with pytest.raises(ValidationError):
        parse_document(
            '{"algebras":[{"name":"a","powerset":1},{"name":"a","powerset":1}]}'
        )


def test_unknown_names_raise():
    doc = parse_document('{"algebras":[{"name":"a","powerset":1}]}')
    with pytest.raises(UnknownName):
        doc.algebra("missing")
    with pytest.raises(UnknownName):
        doc.hom("missing")


def test_malformed_json_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_document("{not json")
    with pytest.raises(ParseError):
        parse_document('{"unexpected": []}')
    with pytest.raises(ParseError):
        parse_document('{"algebras": [{"powerset": 1}]}')


def test_total_map_required():
    text = json.dumps(
        {
            "algebras": [{"name": "two", "powerset": 1}],
            "homs": [
                {
                    "name": "partial",
                    "source": "two",
                    "target": "two",
                    "map": [["{}", "{}"]],
                }
            ],
        }
    )
    with pytest.raises(ValidationError) as exc:
        parse_document(text)
    assert "no image" in str(exc.value)


def test_render_parse_round_trip_is_stable():
    original = json.dumps(
        {
            "algebras": [
                {"name": "four", "powerset": 2},
                {
                    "name": "abs",
                    "carrier": ["bot", "x", "y", "top"],
                    "leq": [["bot", "x"], ["bot", "y"], ["x", "top"], ["y", "top"]],
                    "complement": [
                        ["bot", "top"],
                        ["x", "y"],
                        ["y", "x"],
                        ["top", "bot"],
                    ],
                },
            ],
            "homs": [
                {
                    "name": "pick",
                    "source": "four",
                    "target": "four",
                    "atom_map": [["{0}", "{1}"], ["{1}", "{0}"]],
                }
            ],
        }
    )
    doc = parse_document(original)
    rendered = render_document(doc)
    doc2 = parse_document(rendered)
    assert doc2.algebra_order == doc.algebra_order
    assert doc2.hom_order == doc.hom_order
    for name in doc.algebra_order:
        assert doc2.algebra(name).atom_mask == doc.algebra(name).atom_mask
    for name in doc.hom_order:
        assert doc2.hom(name).table == doc.hom(name).table
    # rendering is idempotent byte-for-byte
    assert render_document(doc2) == rendered


def test_powerset_labels_shape():
    assert powerset_labels(2) == ("{}", "{0}", "{1}", "{0,1}")


def test_digest_is_stable():
    assert document_digest("x") == document_digest("x")
    assert document_digest("x") != document_digest("y")
