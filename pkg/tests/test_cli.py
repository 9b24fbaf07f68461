import json

import jsonschema
import pytest

from linkmotion.catalog import builtin_piece, htrivial, unlink
from linkmotion.cli import main
from linkmotion.errors import InvalidSpec, ParseError, UnknownGenerator
from linkmotion.grammar import parse_element
from linkmotion.motion import MotionGroup
from linkmotion.specio import dump_spec, load_schema, load_spec, spec_from_document


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def unlink1(tmp_path):
    path = tmp_path / "unlink1.json"
    path.write_text(json.dumps({"pieces": [{"builtin": "unknot"}]}), encoding="utf-8")
    return str(path)


def test_probe_unlink1(capsys, unlink1):
    code, out, _ = run(capsys, "probe", "--spec", unlink1, "--mode", "r3")
    assert code == 0 and out.strip() == "Closed order=2"


def test_probe_exceeded_exit_code(capsys):
    code, out, _ = run(capsys, "probe", "--spec", "unlink:2", "--bound", "50")
    assert code == 1 and "ExceededBound" in out


def test_ltrees(capsys):
    code, out, _ = run(capsys, "ltrees", "--n", "1")
    assert code == 0 and out.splitlines() == ["count: 1", "(root:1)"]
    code, out, _ = run(capsys, "ltrees", "--n", "2", "--json")
    assert json.loads(out)["count"] == 3


def test_eq_and_exit_codes(capsys):
    code, out, _ = run(capsys, "eq", "--spec", "unlink:2", "P(1 2) X(a1,2) P(1 2)", "X(a2,1)")
    assert (code, out.strip()) == (0, "true")
    code, out, _ = run(capsys, "eq", "--spec", "unlink:2", "X(a1,2)", "1")
    assert (code, out.strip()) == (1, "false")
    code, _, err = run(capsys, "eq", "--spec", "unlink:2", "X(a1,2", "1")
    assert code == 2 and "position" in err
    code, _, _ = run(capsys, "eq", "--spec", "unlink:2", "X(zz,2)", "1")
    assert code == 2


def test_eq_s3(capsys):
    args = ("eq-s3", "--spec", "unlink:3", "--self-conjugation", "trivial")
    code, out, _ = run(capsys, *args, "X(a1,2) X(a1,3)", "1")
    assert (code, out.strip()) == (0, "true")
    code, out, _ = run(capsys, *args, "X(a1,2)", "1")
    assert (code, out.strip()) == (1, "false")
    code, _, err = run(capsys, "eq-s3", "--spec", "unlink:3", "X(a1,2)", "1")
    assert code == 2 and "self_conjugation" in err


def test_mul_and_dahm(capsys):
    code, out, _ = run(capsys, "mul", "--spec", "unlink:2", "G[1]:t", "X(a1,2)", "G[1]:t")
    assert code == 0 and out.strip() == "X(a1,2)^-1"
    code, out, _ = run(capsys, "dahm", "--spec", "unlink:2", "X(a1,2)", "--json")
    doc = json.loads(out)
    assert doc["images"] == {"a1": "a1", "a2": "a1*a2*a1^-1"}
    assert doc["inner"] == "a1"


def test_tree_gens(capsys):
    code, out, _ = run(capsys, "tree-gens", "--spec", "unlink:2", "--tree", "(root:1 (2))")
    assert code == 0 and out.splitlines() == ["X(a1,2)", "G[1]:t", "G[2]:t"]
    code, _, _ = run(capsys, "tree-gens", "--spec", "unlink:2", "--tree", "(root:1 (1))")
    assert code == 2


def test_present_json_matches_schema(capsys):
    code, out, _ = run(capsys, "present", "--spec", "htrivial:2,1", "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema("presentation"))
    assert code == 0 and doc["metadata"]["complete"]


def test_present_text(capsys):
    code, out, _ = run(capsys, "present", "--spec", "unlink:1")
    assert out == "gen: G[1]:t\nrel: G[1]:t^2\ncompleteness: complete\n"


def test_relators_reparse(capsys):
    M = MotionGroup(htrivial(1, 1))
    code, out, _ = run(capsys, "present", "--spec", "htrivial:1,1")
    rels = [line[5:] for line in out.splitlines() if line.startswith("rel: ")]
    assert rels and all(M.equals(parse_element(r, M), M.identity()) for r in rels)


def test_output_is_byte_stable(capsys):
    for argv in (("present", "--spec", "htrivial:2,1", "--json"), ("ltrees", "--n", "3")):
        first = run(capsys, *argv)
        assert run(capsys, *argv) == first


def test_validate_and_invalid_specs(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", "--spec", "htrivial:1,1")
    assert (code, out.strip()) == (0, "ok")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"pieces": [{"builtin": "unknot", "self_conjugation": {"a1": "t"}}]}))
    code, out, _ = run(capsys, "validate", "--spec", str(bad))
    assert code == 3 and "self_conjugation" in out
    code, _, _ = run(capsys, "probe", "--spec", str(bad))
    assert code == 3
    broken = tmp_path / "broken.json"
    broken.write_text('{"pieces": [{"builtin": "trefoil"}]}')
    assert run(capsys, "validate", "--spec", str(broken))[0] == 3
    broken.write_text("{not json")
    assert run(capsys, "validate", "--spec", str(broken))[0] == 3
    assert run(capsys, "validate", "--spec", str(tmp_path / "missing.json"))[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "probe")[0] == 2
    assert run(capsys, "ltrees", "--n", "0")[0] == 2


def test_spec_document_round_trip(tmp_path):
    for spec in (unlink(2, "trivial"), htrivial(1, 2)):
        path = tmp_path / "spec.json"
        path.write_text(dump_spec(spec), encoding="utf-8")
        again = load_spec(path)
        assert again == spec
        assert dump_spec(again) == dump_spec(spec)


def test_explicit_spec_document():
    doc = {
        "pieces": [
            {
                "id": "k",
                "isotopy_class": "unknot",
                "complement": {"kind": "free", "generators": ["a"]},
                "motion": {"kind": "finite", "table": [[0, 1], [1, 0]], "generators": {"t": 1}},
                "dahm_action": {"t": {"images": ["a^-1"]}},
                "self_conjugation": {"a": "1"},
            },
            {"builtin": "hopf", "self_conjugation": "trivial"},
        ]
    }
    spec = spec_from_document(doc)
    assert spec.pieces[0].complement.generator_names == ("a",)
    assert spec.pieces[1].complement.generator_names == ("a2", "b2")
    assert spec.has_self_conjugation
    with pytest.raises(InvalidSpec):
        spec_from_document({"pieces": []})
    with pytest.raises(InvalidSpec):
        spec_from_document({"pieces": [dict(doc["pieces"][0], dahm_action={"t": {"matrix": [[-1]]}})]})


def test_parse_errors():
    M = MotionGroup(unlink(2))
    with pytest.raises(UnknownGenerator):
        parse_element("X(b7,2)", M)
    with pytest.raises(ParseError):
        parse_element("X(a1,1)", M)
    with pytest.raises(ParseError):
        parse_element("Q(1)", M)
    with pytest.raises(ParseError):
        parse_element("P(1 3)", MotionGroup(htrivial(2, 1)))
    assert M.equals(parse_element("X(a1,2) X(a1,2)^-1", M), M.identity())
    assert M.equals(parse_element("X(a1,2)", M), M.chi(M.product.element(0, (1,)), 1))


def test_builtin_generator_names_follow_position():
    assert builtin_piece("hopf", "3").complement.generator_names == ("a3", "b3")
