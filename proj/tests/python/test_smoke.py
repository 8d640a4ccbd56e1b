import json
import pathlib

import pytest

import phrg

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "fixtures"


def fixture(name):
    return FIXTURES / f"{name}.json"


def test_membership():
    assert phrg.is_member(fixture("pow2"), "aaaa")
    assert not phrg.is_member(fixture("pow2"), "aaa")
    assert phrg.is_member(fixture("anbn"), "a a b b")


def test_emptiness():
    assert not phrg.is_empty(fixture("fbt"))
    assert phrg.is_empty(fixture("dead"))


def test_box_edge_counts():
    graphs, truncated = phrg.enumerate(fixture("pow2-box"), max_edges=16)
    assert sorted(len(g["edges"]) for g in graphs) == [1, 2, 4, 8, 16]
    assert truncated


def test_words_and_dicts():
    g = json.loads(fixture("pow2").read_text())
    words, _ = phrg.words(g, max_len=8)
    assert words == ["a", "aa", "aaaa", "aaaaaaaa"]
    assert phrg.load(g) == g


def test_transform_sync():
    synced = phrg.transform("sync", fixture("fbt"))
    assert phrg.validate(synced)["synchronised"]
    assert not phrg.validate(fixture("fbt"))["synchronised"]


def test_intersect():
    cut = phrg.intersect(fixture("pow2"), fixture("a-upto-5-dfa"))
    assert phrg.words(cut, max_len=8)[0] == ["a", "aa", "aaaa"]


def test_et0l_import():
    assert phrg.is_member(fixture("abc-et0l"), "aabbcc")
    assert not phrg.is_member(fixture("abc-et0l"), "aabbc")


def test_canonical_form_ignores_numbering():
    a = {"nodes": [0, 1, 2], "edges": [{"label": "a", "att": [0, 1]}, {"label": "b", "att": [1, 2]}], "ext": [0, 2]}
    b = {"nodes": [5, 3, 9], "edges": [{"label": "b", "att": [3, 9]}, {"label": "a", "att": [5, 3]}], "ext": [5, 9]}
    assert phrg.canonical_form(a) == phrg.canonical_form(b)


def test_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "a": [1,\n')
    with pytest.raises(phrg.ParseError, match="line 3"):
        phrg.validate(bad)
    with pytest.raises(phrg.UnsupportedShape):
        phrg.export_et0l(fixture("sierpinski"))


def test_cli_run():
    code, out, _ = phrg.run("validate", fixture("pow2"))
    assert code == 0
    assert "ok: yes" in out
