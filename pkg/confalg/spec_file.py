"""
Reading and writing spec files, the JSON documents that carry structures in and out of the CLI.

Every section is optional, but a document needs at least one of them. Indices are 1-based and coefficients are
polynomial strings in the text grammar of [`parse_poly`][confalg.exactpoly.parse_poly]:

```json
{
  "name": "zinbiel",
  "params": ["alpha"],
  "fin": {"dim": 3, "ops": {"succ": [[1, 1, 2, "1"]]}, "linmaps": {"D": [[1, 2, "alpha"]]}},
  "conf": {"rank": 1, "ops": {"bracket": [[1, 1, 1, "d + 2*l"]]}, "coops": {"delta": []}},
  "rep": {"rank": 1, "actions": {"bracket": [[1, 1, 1, "l"]]}},
  "form": [[1, 1, "1"]],
  "rmatrix": [[1, 1, "d1 - d2"]],
  "deform": {"base": "conf", "order": 3, "mul": [[[1, 1, 1, "1"]], []], "Delta": [[], []]}
}
```
"""
from __future__ import annotations
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union
import json
import logging

from typing_extensions import NotRequired, TypedDict

from confalg.conformal import ConfAlgebra, ConfBilinearForm, ConfRep, validate_table
from confalg.deform import TruncatedCoDeformation, TruncatedDeformation
from confalg.errors import ConfalgError, SpecFileError
from confalg.exactpoly import D1, D2, Poly, Var, parse_poly, serialize
from confalg.findim import FinStructure
from confalg.tensor import Tensor

logger = logging.getLogger(__name__)

Row = List[Union[int, str]]

class FinSection(TypedDict):
    dim: int
    names: NotRequired[List[str]]
    ops: NotRequired[Dict[str, List[Row]]]
    coops: NotRequired[Dict[str, List[Row]]]
    linmaps: NotRequired[Dict[str, List[Row]]]

class ConfSection(TypedDict):
    rank: int
    names: NotRequired[List[str]]
    ops: NotRequired[Dict[str, List[Row]]]
    coops: NotRequired[Dict[str, List[Row]]]

class RepSection(TypedDict):
    rank: int
    names: NotRequired[List[str]]
    actions: NotRequired[Dict[str, List[Row]]]

class DeformSection(TypedDict):
    base: NotRequired[str]
    order: int
    mul: NotRequired[List[List[Row]]]
    Delta: NotRequired[List[List[Row]]]

class SpecDocument(TypedDict, total=False):
    name: str
    description: str
    params: List[str]
    fin: FinSection
    conf: ConfSection
    rep: RepSection
    form: List[Row]
    rmatrix: List[Row]
    deform: DeformSection

#: The keys of a document that hold structures
SECTIONS = ("fin", "conf", "rep", "form", "rmatrix", "deform")
_TOP_KEYS = ("name", "description", "params", *SECTIONS)

@dataclass(frozen=True)
class SpecFile:
    """
    The parsed contents of a spec file. Sections absent from the document are `None`.
    """
    name: str = ""
    description: str = ""
    params: Tuple[str, ...] = ()
    fin: Optional[FinStructure] = None
    conf: Optional[ConfAlgebra] = None
    rep: Optional[ConfRep] = None
    "A representation of `conf`"
    form: Optional[ConfBilinearForm] = None
    "A bilinear form on `conf`"
    rmatrix: Optional[Tensor] = None
    "An element of `conf ⊗ conf`, keyed `(i, j)` with coefficients in `d1, d2`"
    deformation: Optional[TruncatedDeformation] = None
    codeformation: Optional[TruncatedCoDeformation] = None

    def require_fin(self) -> FinStructure:
        if self.fin is None:
            raise SpecFileError("This command needs a 'fin' section")
        return self.fin

    def require_conf(self) -> ConfAlgebra:
        if self.conf is None:
            raise SpecFileError("This command needs a 'conf' section")
        return self.conf

    def require_rmatrix(self) -> Tensor:
        if self.rmatrix is None:
            raise SpecFileError("This command needs an 'rmatrix' section")
        return self.rmatrix

    def require_deform(self) -> Tuple[TruncatedDeformation, TruncatedCoDeformation]:
        if self.deformation is None or self.codeformation is None:
            raise SpecFileError("This command needs a 'deform' section")
        return self.deformation, self.codeformation

class _Reader:
    """
    Turns the JSON values of one document into tensors, keeping track of where each value came from
    """
    def __init__(self, params: Sequence[str]):
        self.params = tuple(params)

    def mapping(self, value: Any, path: str, allowed: Sequence[str], required: Sequence[str] = ()) -> Dict[str, Any]:
        if not isinstance(value, dict):
            raise SpecFileError("Expected an object", path)
        for key in value:
            if key not in allowed:
                raise SpecFileError(f"Unknown key {key!r}; expected one of {', '.join(allowed)}", path)
        for key in required:
            if key not in value:
                raise SpecFileError(f"Missing key {key!r}", path)
        return value

    def sequence(self, value: Any, path: str) -> List[Any]:
        if not isinstance(value, list):
            raise SpecFileError("Expected a list", path)
        return value

    def integer(self, value: Any, path: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SpecFileError(f"Expected an integer, not {value!r}", path)
        return value

    def names(self, value: Any, path: str) -> Tuple[str, ...]:
        names = self.sequence(value, path)
        for i, name in enumerate(names):
            if not isinstance(name, str) or not name:
                raise SpecFileError(f"Expected a basis name, not {name!r}", f"{path}[{i}]")
        return tuple(names)

    def poly(self, value: Any, path: str) -> Poly:
        if isinstance(value, int) and not isinstance(value, bool):
            return Poly.constant(value)
        if not isinstance(value, str):
            raise SpecFileError(f"Expected a polynomial string, not {value!r}", path)
        try:
            return parse_poly(value, self.params)
        except ConfalgError as e:
            raise SpecFileError(str(e), path) from e

    def rows(self, value: Any, path: str, bounds: Tuple[int, ...]) -> Tensor:
        """
        Reads a sparse list of `[index, ..., coefficient]` rows; indices are checked against `bounds`
        """
        data: Dict[Tuple[int, ...], Poly] = {}
        for n, row in enumerate(self.sequence(value, path)):
            where = f"{path}[{n}]"
            row = self.sequence(row, where)
            if len(row) != len(bounds) + 1:
                raise SpecFileError(f"Expected {len(bounds)} indices and a coefficient, not {len(row)} values", where)
            key: List[int] = []
            for i, bound in zip(row[:-1], bounds):
                index = self.integer(i, where)
                if not 1 <= index <= bound:
                    raise SpecFileError(f"Index {index} is outside 1 ... {bound}", where)
                key.append(index - 1)
            if tuple(key) in data:
                raise SpecFileError(f"Duplicate entry for indices {tuple(i + 1 for i in key)}", where)
            data[tuple(key)] = self.poly(row[-1], where)
        return Tensor(data, len(bounds))

    def tables(self, value: Any, path: str, bounds: Tuple[int, ...]) -> Dict[str, Tensor]:
        if not isinstance(value, dict):
            raise SpecFileError("Expected an object of named tables", path)
        return {name: self.rows(rows, f"{path}.{name}", bounds) for name, rows in value.items()}

def _build(section: str, make: Any) -> Any:
    """
    Runs a constructor, reporting its validation errors against the section they came from
    """
    try:
        return make()
    except SpecFileError:
        raise
    except ConfalgError as e:
        raise SpecFileError(str(e), section) from e

def _read_fin(reader: _Reader, value: Any) -> FinStructure:
    section = reader.mapping(value, "fin", ("dim", "names", "ops", "coops", "linmaps"), ("dim",))
    dim = reader.integer(section["dim"], "fin.dim")
    if dim < 1:
        raise SpecFileError(f"Dimension must be positive, not {dim}", "fin.dim")
    names = reader.names(section.get("names", []), "fin.names")
    ops = reader.tables(section.get("ops", {}), "fin.ops", (dim,) * 3)
    coops = reader.tables(section.get("coops", {}), "fin.coops", (dim,) * 3)
    linmaps = reader.tables(section.get("linmaps", {}), "fin.linmaps", (dim,) * 2)
    return _build("fin", lambda: FinStructure(
        dim=dim, ops=ops, coops=coops, linmaps=linmaps, names=names, params=reader.params,
    ))

def _read_conf(reader: _Reader, value: Any) -> ConfAlgebra:
    section = reader.mapping(value, "conf", ("rank", "names", "ops", "coops"), ("rank",))
    rank = reader.integer(section["rank"], "conf.rank")
    if rank < 1:
        raise SpecFileError(f"Rank must be positive, not {rank}", "conf.rank")
    names = reader.names(section.get("names", []), "conf.names")
    ops = reader.tables(section.get("ops", {}), "conf.ops", (rank,) * 3)
    coops = reader.tables(section.get("coops", {}), "conf.coops", (rank,) * 3)
    return _build("conf", lambda: ConfAlgebra(rank=rank, ops=ops, coops=coops, names=names, params=reader.params))

def _read_rep(reader: _Reader, value: Any, conf: ConfAlgebra) -> ConfRep:
    section = reader.mapping(value, "rep", ("rank", "names", "actions"), ("rank",))
    rank = reader.integer(section["rank"], "rep.rank")
    if rank < 1:
        raise SpecFileError(f"Rank must be positive, not {rank}", "rep.rank")
    names = reader.names(section.get("names", []), "rep.names")
    actions = reader.tables(section.get("actions", {}), "rep.actions", (conf.rank, rank, rank))
    return _build("rep", lambda: ConfRep(
        acting_rank=conf.rank, rank=rank, actions=actions, names=names, params=reader.params,
    ))

def _read_deform(reader: _Reader, value: Any, conf: ConfAlgebra) -> Tuple[TruncatedDeformation, TruncatedCoDeformation]:
    section = reader.mapping(value, "deform", ("base", "order", "mul", "Delta"), ("order",))
    if section.get("base", "conf") != "conf":
        raise SpecFileError(f"Only the 'conf' section can be deformed, not {section['base']!r}", "deform.base")
    order = reader.integer(section["order"], "deform.order")
    bounds = (conf.rank,) * 3
    products = tuple(
        reader.rows(block, f"deform.mul[{i}]", bounds)
        for i, block in enumerate(reader.sequence(section.get("mul", []), "deform.mul"))
    )
    coproducts = tuple(
        reader.rows(block, f"deform.Delta[{i}]", bounds)
        for i, block in enumerate(reader.sequence(section.get("Delta", []), "deform.Delta"))
    )
    return _build("deform", lambda: (
        TruncatedDeformation(conf, order, products),
        TruncatedCoDeformation(conf, order, coproducts),
    ))

def parse_document(document: Any) -> SpecFile:
    """
    Builds a spec file from an already decoded JSON value

    Raises:
        SpecFileError: naming the path of the first value that does not follow the schema
    """
    if not isinstance(document, dict) or not document:
        raise SpecFileError("The spec file has no sections")
    reader = _Reader(())
    doc = reader.mapping(document, "", _TOP_KEYS)
    if not any(key in doc for key in SECTIONS):
        raise SpecFileError(f"The spec file has no sections; expected at least one of {', '.join(SECTIONS)}")
    for key in ("name", "description"):
        if not isinstance(doc.get(key, ""), str):
            raise SpecFileError("Expected a string", key)
    params = reader.names(doc.get("params", []), "params")
    for i, name in enumerate(params):
        try:
            Var.param(name)
        except ConfalgError as e:
            raise SpecFileError(str(e), f"params[{i}]") from e
    reader = _Reader(params)

    fin = _read_fin(reader, doc["fin"]) if "fin" in doc else None
    conf = _read_conf(reader, doc["conf"]) if "conf" in doc else None
    for key in ("rep", "form", "rmatrix", "deform"):
        if key in doc and conf is None:
            raise SpecFileError("This section needs a 'conf' section to refer to", key)

    rep: Optional[ConfRep] = None
    form: Optional[ConfBilinearForm] = None
    rmatrix: Optional[Tensor] = None
    deformation: Optional[TruncatedDeformation] = None
    codeformation: Optional[TruncatedCoDeformation] = None
    if conf is not None:
        if "rep" in doc:
            rep = _read_rep(reader, doc["rep"], conf)
        if "form" in doc:
            matrix = reader.rows(doc["form"], "form", (conf.rank,) * 2)
            form = _build("form", lambda: ConfBilinearForm(conf.rank, matrix))
        if "rmatrix" in doc:
            rmatrix = reader.rows(doc["rmatrix"], "rmatrix", (conf.rank,) * 2)
            _build("rmatrix", lambda: validate_table("rmatrix", rmatrix, (conf.rank,) * 2, (D1, D2)))
        if "deform" in doc:
            deformation, codeformation = _read_deform(reader, doc["deform"], conf)

    return SpecFile(
        name=doc.get("name", ""),
        description=doc.get("description", ""),
        params=params,
        fin=fin,
        conf=conf,
        rep=rep,
        form=form,
        rmatrix=rmatrix,
        deformation=deformation,
        codeformation=codeformation,
    )

def parse_spec_text(text: str) -> SpecFile:
    if not text.strip():
        raise SpecFileError("The spec file has no sections")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecFileError(f"Invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    return parse_document(document)

def parse_spec(path: Path) -> SpecFile:
    """
    Reads a spec file from disk

    Raises:
        SpecFileError: if the file does not follow the schema
        OSError: if the file cannot be read
    """
    logger.debug(f"Reading spec file {path}")
    return parse_spec_text(Path(path).read_text(encoding="utf-8"))

def _rows(t: Tensor) -> List[Row]:
    return [[*(i + 1 for i in key), serialize(value)] for key, value in sorted(t.items())]

def _tables(tables: Mapping[str, Tensor]) -> Dict[str, List[Row]]:
    return {name: _rows(tables[name]) for name in sorted(tables)}

def _params(spec: SpecFile) -> List[str]:
    found = set(spec.params)
    for owner in (spec.fin, spec.conf, spec.rep):
        if owner is not None:
            found |= set(owner.params)
    for t in (spec.rmatrix, spec.form.matrix if spec.form else None):
        if t is not None:
            found |= {v.name for v in t.variables() if v.is_param}
    return sorted(found)

def to_document(spec: SpecFile) -> SpecDocument:
    """
    The JSON value of a spec file, with entries in canonical order
    """
    doc: SpecDocument = {}
    if spec.name:
        doc["name"] = spec.name
    if spec.description:
        doc["description"] = spec.description
    params = _params(spec)
    if params:
        doc["params"] = params
    if spec.fin is not None:
        fin: FinSection = {"dim": spec.fin.dim, "names": list(spec.fin.names)}
        if spec.fin.ops:
            fin["ops"] = _tables(spec.fin.ops)
        if spec.fin.coops:
            fin["coops"] = _tables(spec.fin.coops)
        if spec.fin.linmaps:
            fin["linmaps"] = _tables(spec.fin.linmaps)
        doc["fin"] = fin
    if spec.conf is not None:
        conf: ConfSection = {"rank": spec.conf.rank, "names": list(spec.conf.names)}
        if spec.conf.ops:
            conf["ops"] = _tables(spec.conf.ops)
        if spec.conf.coops:
            conf["coops"] = _tables(spec.conf.coops)
        doc["conf"] = conf
    if spec.rep is not None:
        doc["rep"] = {"rank": spec.rep.rank, "names": list(spec.rep.names), "actions": _tables(spec.rep.actions)}
    if spec.form is not None:
        doc["form"] = _rows(spec.form.matrix)
    if spec.rmatrix is not None:
        doc["rmatrix"] = _rows(spec.rmatrix)
    if spec.deformation is not None and spec.codeformation is not None:
        doc["deform"] = {
            "base": "conf",
            "order": spec.deformation.order,
            "mul": [_rows(t) for t in spec.deformation.corrections],
            "Delta": [_rows(t) for t in spec.codeformation.corrections],
        }
    return doc

def dump_spec(spec: SpecFile) -> str:
    """
    Canonical text of a spec file; `dump_spec(parse_spec_text(dump_spec(s))) == dump_spec(s)`
    """
    return json.dumps(to_document(spec), indent=2, ensure_ascii=False) + "\n"

def write_spec(spec: SpecFile, path: Path) -> None:
    Path(path).write_text(dump_spec(spec), encoding="utf-8")
    logger.debug(f"Wrote spec file {path}")
