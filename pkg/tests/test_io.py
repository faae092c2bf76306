import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from metricjets import DocumentError
from metricjets.io import JetDocument, dumps, load, loads, save, to_dict
from metricjets.jet import JetScalar
from metricjets.metric import MetricJet
from metricjets.sampling import random_h, random_metric


def metric_text(coefficients, dim=2, order=2, **extra):
    doc = {"format": "metricjets.jet", "version": 1, "kind": "metric", "dim": dim, "order": order,
           "coefficients": coefficients}
    doc.update(extra)
    return json.dumps(doc)


FLAT2 = {"1,1": {"0,0": "1"}, "1,2": {}, "2,2": {"0,0": "1"}}


def test_flat_document():
    doc = loads(metric_text(FLAT2))
    assert doc.kind == "metric" and doc.value == MetricJet.flat(2, 2)


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_round_trip_is_byte_identical(seed):
    rng = random.Random(seed)
    if rng.random() < 0.5:
        doc = JetDocument.from_metric(random_metric(rng, rng.randint(1, 3), rng.randint(0, 4)), label="sample")
    else:
        doc = JetDocument.from_h(random_h(rng, rng.randint(0, 4)))
    text = dumps(doc)
    again = loads(text)
    assert again.value == doc.value and again.metadata == doc.metadata
    assert dumps(again) == text


def test_save_load(tmp_path):
    doc = JetDocument.from_h(JetScalar(2, 2, {(1, 0): Fraction(-2, 7), (0, 2): 3}))
    path = tmp_path / "h.json"
    save(doc, path)
    text = path.read_text()
    assert '"1,0": "-2/7"' in text and text.endswith("\n")
    assert dumps(load(path)) == text


def test_keys_are_written_in_graded_lex_order():
    h = JetScalar(2, 3, {(0, 3): 1, (1, 0): 2, (0, 1): 3, (2, 1): 4})
    assert list(to_dict(JetDocument.from_h(h))["coefficients"]) == ["1,0", "0,1", "2,1", "0,3"]


def test_non_canonical_rational_names_the_key():
    bad = dict(FLAT2, **{"1,1": {"0,0": "1", "0,2": "2/4"}})
    with pytest.raises(DocumentError) as err:
        loads(metric_text(bad))
    assert 'coefficients["1,1"]["0,2"]' in str(err.value) and "'1/2'" in str(err.value)


@pytest.mark.parametrize("value,fragment", [
    ("1.5", "malformed"),
    ("abc", "malformed"),
    ("-0", "non-canonical"),
    ("0", "omitted"),
    ("3/1", "non-canonical"),
])
def test_malformed_rationals(value, fragment):
    with pytest.raises(DocumentError, match=fragment):
        loads(metric_text(dict(FLAT2, **{"1,2": {"1,1": value}})))


def test_numbers_must_be_strings():
    with pytest.raises(DocumentError, match="must be a string"):
        loads(metric_text(dict(FLAT2, **{"1,2": {"1,1": 0.5}})))


def test_duplicate_keys():
    text = metric_text(FLAT2).replace('"1,2": {}', '"1,2": {"1,0": "1", "1,0": "2"}')
    with pytest.raises(DocumentError, match='duplicate key "1,0"'):
        loads(text)


def test_degree_above_order():
    with pytest.raises(DocumentError, match=r'coefficients\["1,2"\]\["2,1"\]: degree 3'):
        loads(metric_text(dict(FLAT2, **{"1,2": {"2,1": "1"}})))


def test_asymmetric_entries():
    bad = dict(FLAT2, **{"2,1": {"1,1": "1"}})
    with pytest.raises(DocumentError, match="asymmetric"):
        loads(metric_text(bad))
    same = dict(FLAT2, **{"1,2": {"1,1": "1"}, "2,1": {"1,1": "1"}})
    assert loads(metric_text(same)).value[0, 1] == JetScalar(2, 2, {(1, 1): 1})


@pytest.mark.parametrize("mutate,fragment", [
    (lambda d: d.pop("1,2"), "missing metric entries"),
    (lambda d: d.update({"3,1": {}}), "out of range"),
    (lambda d: d.update({"1,1": {"0,0": "-1"}}), "positive definite"),
    (lambda d: d.update({"1,2": {"1": "1"}}), "needs 2 entries"),
])
def test_structural_errors(mutate, fragment):
    table = json.loads(json.dumps(FLAT2))
    mutate(table)
    with pytest.raises(DocumentError, match=fragment):
        loads(metric_text(table))


@pytest.mark.parametrize("text,fragment", [
    ('{"format": "other"}', "format"),
    (metric_text(FLAT2).replace('"version": 1', '"version": 9'), "version"),
    (metric_text(FLAT2).replace('"metric"', '"tensor"'), "kind"),
    (metric_text(FLAT2, extra=1), "unknown top-level"),
    ("[1, 2", "line 1"),
])
def test_header_errors(text, fragment):
    with pytest.raises(DocumentError, match=fragment):
        loads(text)


def test_load_prefixes_the_path(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{}")
    with pytest.raises(DocumentError, match="bad.json"):
        load(path)
