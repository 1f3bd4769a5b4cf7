import json
import os
import pathlib
import urllib.error
import urllib.request

import jsonschema
import pytest
import referencing

import vizblend

ROOT = pathlib.Path(os.environ.get("VIZBLEND_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
MINI8 = (ROOT / "tests" / "data" / "mini8.csv").read_text()


def _registry():
    resources = []
    for path in sorted((ROOT / "docs" / "schema").glob("*.json")):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], referencing.Resource.from_contents(doc)))
    return referencing.Registry().with_resources(resources)


REGISTRY = _registry()


def validate(instance, name):
    schema = REGISTRY.contents(f"urn:vizblend:{name}")
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(instance)


@pytest.fixture
def engine():
    return vizblend.Engine()


@pytest.fixture
def session(engine):
    sid = engine.create_session(csv=MINI8, dataset_id="mini8")["session_id"]
    engine.op(sid, "set_axis", channel="X", attribute="Horsepower")
    engine.op(sid, "set_axis", channel="Y", attribute="MPG")
    return sid


def test_ops_and_view(engine, session):
    view = engine.get(session, "view")
    assert view["visible_rows"] == 8
    assert {m["row"] for m in view["marks"]} == set(range(8))
    validate(engine.get(session, "spec"), "vis_spec")
    validate(view, "view_model")

    r = engine.op(session, "filter", attribute="Origin")
    assert r["committed"] and r["revision"] == 3
    rule = r["spec"]["filters"][0]
    r = engine.op(session, "update_filter", rule_id=rule["id"], checked=["J", "U"])
    assert r["view"]["visible_rows"] == 6


def test_errors_carry_codes(engine, session):
    with pytest.raises(vizblend.EngineError) as e:
        engine.op(session, "set_axis", expected_revision=0, channel="X", attribute="MPG")
    assert e.value.code == "StaleRevision"
    with pytest.raises(vizblend.EngineError) as e:
        engine.op(session, "set_axis", channel="X", attribute="Weight")
    assert e.value.code == "UnknownAttribute"
    with pytest.raises(vizblend.EngineError) as e:
        engine.get("nope", "spec")
    assert e.value.code == "UnknownSession"
    with pytest.raises(vizblend.EngineError) as e:
        engine.create_session(csv="a,b\n1\n")
    assert e.value.code == "MalformedCsv"


def test_demonstrate_preview_accept(engine, session):
    demo = {"type": "DragOutToFilter", "selection": {"row_ids": [0, 1], "origin": "lasso"}}
    validate(demo, "demonstration")
    recs = engine.demonstrate(session, demo)
    validate(recs, "recommendation_set")
    filters = next(d for d in recs["divisions"] if d["name"] == "Recommended Filters")
    assert filters["total"] > 0
    top = filters["recommendations"][0]

    before = engine.get(session, "spec")
    preview = engine.preview(top["rec_id"])
    validate(preview, "view_model")
    assert preview["visible_rows"] == 6
    assert engine.get(session, "spec") == before

    accepted = engine.accept(top["rec_id"])
    assert accepted["revision"] == before["revision"] + 1
    assert accepted["spec"]["filters"][-1]["provenance"] == "vbd"
    with pytest.raises(vizblend.EngineError) as e:
        engine.accept(top["rec_id"])
    assert e.value.code in ("Expired", "IllegalChange")


def test_recolor_then_undo(engine, session):
    recs = engine.demonstrate(session, {
        "type": "Recolor",
        "groups": [
            {"color": "#d62728", "selection": [0, 1]},
            {"color": "#1f77b4", "selection": [5, 6]},
        ],
    })
    enc = next(d for d in recs["divisions"] if d["name"] == "Recommended Encodings")
    assert [r["evidence"]["attribute"] for r in enc["recommendations"][:2]] == ["Cylinders", "Origin"]
    engine.accept(enc["recommendations"][0]["rec_id"])
    assert engine.get(session, "spec")["bindings"]["Color"]["attribute"] == "Cylinders"
    engine.op(session, "undo")
    assert "Color" not in engine.get(session, "spec")["bindings"]


def test_snapshot_restore(engine, session):
    engine.op(session, "switch", vis_type="BarChart")
    engine.op(session, "set_axis", channel="X", attribute="Origin")
    engine.op(session, "sort", direction="ascending")
    snap = engine.get(session, "snapshot")
    validate(snap, "snapshot")

    with pytest.raises(vizblend.EngineError) as e:
        engine.restore_session(snap)  # uploaded data has no path
    assert e.value.code == "InvalidRequest"
    restored = engine.restore_session(snap, csv=MINI8)
    sid = restored["session_id"]
    assert sid != session
    strip = lambda s: {k: v for k, v in s.items() if k != "revision"}
    assert strip(engine.get(sid, "spec")) == strip(engine.get(session, "spec"))
    assert engine.get(sid, "view") == engine.get(session, "view")
    assert engine.delete_session(sid)

    fresh = vizblend.Engine()
    sid = fresh.restore_session(snap, csv=MINI8)["session_id"]
    assert sid == session
    assert fresh.get(sid, "snapshot") == snap


def test_scripts_validate():
    paths = [*(ROOT / "scripts").glob("*.json"), ROOT / "tests" / "cli" / "empty.json", ROOT / "tests" / "cli" / "failing.json"]
    for path in paths:
        validate(json.loads(path.read_text()), "script")
    with pytest.raises(jsonschema.ValidationError):
        validate({"steps": [{"do": "set_axis", "expect": {"marks": 3}}]}, "script")


def test_walkthrough_matches_golden():
    engine = vizblend.Engine(str(ROOT / "data"))
    script = json.loads((ROOT / "scripts" / "walkthrough.json").read_text())
    golden = json.loads((ROOT / "tests" / "golden" / "walkthrough.assert.json").read_text())
    result = vizblend.run_script(engine, script)
    assert result["ok"], [s for s in result["steps"] if not s.get("ok", True)]
    assert result["spec"] == golden["spec"]
    assert result["view"] == golden["view"]
    validate(result["spec"], "vis_spec")
    validate(result["view"], "view_model")
    validate(result["recommendations"], "recommendation_set")


def _http(method, url, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(url, data=data, method=method, headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req, timeout=10) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as e:
        return e.code, json.loads(e.read())


def test_http_server(engine):
    with vizblend.Server(engine) as server:
        status, created = _http("POST", server.url + "/sessions", {"csv": MINI8})
        assert status == 201
        sid = created["session_id"]
        status, r = _http("POST", f"{server.url}/sessions/{sid}/ops/set_axis", {"channel": "X", "attribute": "MPG"})
        assert status == 200 and r["revision"] == 1
        status, spec = _http("GET", f"{server.url}/sessions/{sid}/spec")
        assert status == 200
        assert spec == engine.get(sid, "spec")
        status, err = _http("GET", f"{server.url}/sessions/missing/spec")
        assert status == 404 and err["error"]["code"] == "UnknownSession"
