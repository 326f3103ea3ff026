import json

import pytest

import untangle


def test_strategies_listed():
    names = untangle.strategies()
    assert "baseline_noclice" in names
    assert len(names) == 12


def test_generate_and_untangle_convex():
    inst = untangle.generate("convex", "matching", n=24, seed=3)
    assert inst.n == 24
    assert inst.geometry_class == "convex"
    trace = untangle.untangle("convex_removal", inst)
    assert trace.verdict == "valid"
    assert untangle.validate(trace) == (True, 0, "")
    for e in trace.events:
        assert e["tag"].startswith("convex_removal/")
        assert len(e["removed"]) == 2 and len(e["inserted"]) == 2


def test_trace_json_round_trip():
    inst = untangle.generate("one_T_point", "multigraph", n=12, t=3, seed=2)
    trace = untangle.untangle("one_point_removal", inst, snapshots=True)
    text = trace.to_json()
    doc = json.loads(text)
    assert len(doc["snapshots"]) == len(trace) + 1
    back = untangle.load_trace(text)
    assert back.to_json() == text


def test_instance_document():
    doc = {
        "points": [
            {"id": 0, "x": 0, "y": 0},
            {"id": 1, "x": 4, "y": 0},
            {"id": 2, "x": 4, "y": 4},
            {"id": 3, "x": 0, "y": 4},
        ],
        "segments": [[0, 2], [1, 3]],
        "property": "matching",
    }
    inst = untangle.load_instance(json.dumps(doc))
    assert inst.crossing_count() == 1
    assert untangle.min_flips(inst) == 1
    assert len(untangle.untangle("baseline_noclice", inst)) == 1


def test_errors_are_value_errors():
    with pytest.raises(untangle.UntangleError):
        untangle.load_instance('{"points": []')
    inst = untangle.generate("convex", "matching", n=8, seed=1)
    with pytest.raises(ValueError, match="precondition|geometry"):
        untangle.untangle("two_inside_removal", inst)
