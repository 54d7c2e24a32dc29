import json

import pytest

from fdhopf import interchange
from fdhopf.interchange import InterchangeError

from helpers import group, small_bundle, taft_alg


@pytest.mark.parametrize("H", small_bundle(), ids=lambda H: H.name)
def test_round_trip(H):
    text = interchange.dumps(H)
    H2 = interchange.loads(text)
    assert H2.same_structure(H) and H2.name == H.name
    assert interchange.dumps(H2) == text


def test_layout_is_deterministic_and_readable():
    text = interchange.dumps(taft_alg(2))
    doc = json.loads(text)
    assert list(doc) == ["name", "dim", "cyclotomic_order", "unit", "counit", "mult", "comult", "antipode"]
    assert doc["mult"] == sorted(doc["mult"], key=lambda e: e[:3])
    assert all(isinstance(v, str) for v in doc["antipode"])
    assert "    [0, 0, 0, \"1\"]," in text.splitlines()


def test_antipode_is_optional(tmp_path):
    H = group(3).with_antipode(None)
    path = tmp_path / "h.json"
    interchange.write(H, path)
    assert "antipode" not in json.loads(path.read_text())
    assert interchange.read(path).antipode is None


def _doc():
    return json.loads(interchange.dumps(group(2)))


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d.update(extra=1), "unknown fields"),
    (lambda d: d.pop("comult"), "missing fields"),
    (lambda d: d["mult"].append(list(d["mult"][0])), "duplicate"),
    (lambda d: d["mult"].append([0, 0, 2, "1"]), "out of range"),
    (lambda d: d["unit"].__setitem__(0, "1 +"), r"unit\[0\]"),
    (lambda d: d["unit"].__setitem__(0, 1), "must be a string"),
    (lambda d: d.update(dim=0), "dim"),
    (lambda d: d.update(antipode=["1"]), "antipode"),
    (lambda d: d.update(name=3), "name"),
])
def test_rejections(mutate, message):
    d = _doc()
    mutate(d)
    with pytest.raises(InterchangeError, match=message):
        interchange.loads(json.dumps(d))


def test_invalid_json():
    with pytest.raises(InterchangeError, match="invalid JSON"):
        interchange.loads("{")
    with pytest.raises(InterchangeError):
        interchange.loads("[]")
