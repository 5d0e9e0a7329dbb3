import json
from pathlib import Path
from typing import Any

import pytest

from confalg.errors import SpecFileError
from confalg.exactpoly import LAMBDA, PARTIAL, Poly, Var
from confalg.spec_file import dump_spec, parse_document, parse_spec, parse_spec_text, write_spec

SHIPPED = ["final_zinbiel.json", "zero.json", "virasoro.json", "current_deformation.json"]

@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_specs_parse(specs: Path, name: str):
    spec = parse_spec(specs / name)
    assert spec.name
    text = dump_spec(spec)
    assert dump_spec(parse_spec_text(text)) == text

def test_final_zinbiel(specs: Path):
    spec = parse_spec(specs / "final_zinbiel.json")
    fin = spec.require_fin()
    assert spec.params == ("alpha",)
    assert fin.dim == 3
    assert fin.linmap("D")[(0, 1)] == Poly.var(Var.param("alpha"))
    assert spec.conf is None
    with pytest.raises(SpecFileError):
        spec.require_conf()

def test_virasoro(specs: Path):
    conf = parse_spec(specs / "virasoro.json").require_conf()
    assert conf.names == ("b",)
    assert conf.op("bracket")[(0, 0, 0)] == Poly.var(PARTIAL) + 2 * Poly.var(LAMBDA)

def test_write_and_read(specs: Path, tmp_path: Path):
    spec = parse_spec(specs / "current_deformation.json")
    out = tmp_path / "copy.json"
    write_spec(spec, out)
    again = parse_spec(out)
    assert again.require_conf().ops == spec.require_conf().ops
    assert again.require_deform()[0].corrections == spec.require_deform()[0].corrections

@pytest.mark.parametrize("text", ["", "   \n", "{}"])
def test_empty_documents(text: str):
    with pytest.raises(SpecFileError, match="no sections"):
        parse_spec_text(text)

def test_invalid_json():
    with pytest.raises(SpecFileError, match="Invalid JSON at line 1"):
        parse_spec_text("{")

def conf_doc(**conf: Any) -> Any:
    return {"conf": {"rank": 1, **conf}}

@pytest.mark.parametrize("document,path", [
    (conf_doc(ops={"bracket": [[1, 1, 1, "1/0"]]}), "conf.ops.bracket[0]"),
    (conf_doc(ops={"bracket": [[1, 1, 2, "1"]]}), "conf.ops.bracket[0]"),
    (conf_doc(ops={"bracket": [[1, 1, "1"]]}), "conf.ops.bracket[0]"),
    (conf_doc(ops={"bracket": [[1, 1, 1, "x"]]}), "conf.ops.bracket[0]"),
    (conf_doc(ops={"bracket": [[1, 1, 1, "1"], [1, 1, 1, "l"]]}), "conf.ops.bracket[1]"),
    (conf_doc(ops={"bracket": [[1, 1, 1, 1.5]]}), "conf.ops.bracket[0]"),
    (conf_doc(ops={"bracket": [[1, 1, 1, "d1"]]}), "conf"),
    (conf_doc(rank=0), "conf.rank"),
    (conf_doc(rank="2"), "conf.rank"),
    (conf_doc(shape=[]), "conf"),
    ({"conf": {"ops": {}}}, "conf"),
    ({"params": ["l"], "conf": {"rank": 1}}, "params[0]"),
    ({"name": 3, "conf": {"rank": 1}}, "name"),
    ({"rmatrix": [[1, 1, "d1"]]}, "rmatrix"),
    ({"conf": {"rank": 1}, "deform": {"base": "fin", "order": 3}}, "deform.base"),
    ({"fin": {"dim": 2, "linmaps": {"D": [[1, 3, "1"]]}}}, "fin.linmaps.D[0]"),
])
def test_schema_errors(document: Any, path: str):
    with pytest.raises(SpecFileError) as info:
        parse_document(document)
    assert info.value.path == path

def test_unknown_top_level_key():
    with pytest.raises(SpecFileError, match="Unknown key 'algebra'"):
        parse_document({"algebra": {}})

def test_parameters_are_declared():
    doc = {"params": ["q"], "conf": {"rank": 1, "ops": {"mul": [[1, 1, 1, "q*l"]]}}}
    spec = parse_document(doc)
    assert spec.require_conf().params == ("q",)
    assert json.loads(dump_spec(spec))["params"] == ["q"]
