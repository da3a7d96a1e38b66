import json

import pytest

from cdo import ConstraintSet, LinearConstraint, Outcome, StructuralError
from cdo.domains import Graph, encode_spanning_tree
from cdo.io import (
    FORMAT,
    format_graph,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    load_outcomes,
    load_schedule,
    outcomes_to_dict,
    parse_graph,
    save_instance,
)


def test_instance_round_trip(quad, tmp_path):
    path = tmp_path / "i.json"
    save_instance(quad, path)
    assert load_instance(path) == quad
    assert json.loads(path.read_text())["format"] == FORMAT


def test_instance_with_aux_round_trips(kite):
    from cdo import CdoInstance, Profile

    agenda, cs = encode_spanning_tree(kite)
    inst = CdoInstance(agenda, Profile([(1, 0, 1, 0, 1)]), cs)
    assert instance_from_dict(json.loads(json.dumps(instance_to_dict(inst)))) == inst


def test_bare_constraint_list_and_missing_fields():
    doc = {"format": FORMAT, "agenda": [{"id": "a"}, {"id": "b", "weight": 2}],
           "feasibility": [{"terms": {"a": 1, "b": 1}, "sense": "<=", "rhs": 1}],
           "profile": [[1, 1]]}
    inst = instance_from_dict(doc)
    assert inst.agenda.weights == (1, 2)
    assert inst.feasibility == ConstraintSet([LinearConstraint({"a": 1, "b": 1}, "<=", 1)])
    with pytest.raises(StructuralError):
        instance_from_dict({**doc, "format": "cdo/0"})
    with pytest.raises(StructuralError):
        instance_from_dict({**doc, "feasibility": [{"terms": {}, "sense": "<="}]})
    with pytest.raises(StructuralError):
        instance_from_dict({**doc, "agenda": [{"name": "a"}]})


def test_outcomes(tmp_path):
    doc = outcomes_to_dict([Outcome((1, 0), 3), Outcome((0, 1))], rule="sum:simple")
    path = tmp_path / "o.json"
    path.write_text(json.dumps(doc))
    assert load_outcomes(path) == [Outcome((1, 0), 3), Outcome((0, 1))]


def test_graph_text_round_trip():
    g = Graph([1, 2, 3], [(1, 2), (2, 3)], [4, 5])
    assert parse_graph(format_graph(g)) == g
    g2 = parse_graph("# demo\n3\n1 2\n2 3 7  # heavy\n")
    assert g2.costs == (1, 7)
    for bad in ("", "x\n", "3\n1 2 3 4\n"):
        with pytest.raises(StructuralError):
            parse_graph(bad)


def test_schedule_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"jobs": ["p1", "p2"], "durations": [1, 2],
                                "voters": [{"before": [["p1", "p2"]], "first": ["p1"]}]}))
    spec, voters = load_schedule(path)
    assert spec.jobs == ("p1", "p2") and voters[0]["first"] == ["p1"]
    path.write_text(json.dumps({"jobs": ["p1"]}))
    with pytest.raises(StructuralError):
        load_schedule(path)
