from confalg.conformal import ConfAlgebra, ConfBilinearForm, ConfRep
from confalg.exactpoly import Poly, parse_poly, serialize
from confalg.findim import FinStructure
from confalg.report import CheckReport, Report
from confalg.spec_file import SpecFile, parse_spec
from confalg.tensor import Tensor
__all__ = [
    "CheckReport",
    "ConfAlgebra",
    "ConfBilinearForm",
    "ConfRep",
    "FinStructure",
    "Poly",
    "Report",
    "SpecFile",
    "Tensor",
    "parse_poly",
    "parse_spec",
    "serialize",
]
