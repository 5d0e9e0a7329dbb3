from pathlib import Path

import pytest

from confalg.bridges import FinalExample, full_pipeline_final_example
from confalg.builtins import final_example_zinbiel, polyx, virasoro_type
from confalg.conformal import ConfAlgebra
from confalg.findim import FinStructure
from confalg.tensor import Tensor

#: The shipped spec files
SPECS = Path(__file__).parent.parent / "specs"

@pytest.fixture(scope="session")
def specs() -> Path:
    return SPECS

@pytest.fixture(scope="session")
def final_example() -> FinalExample:
    """
    The whole final example with α kept symbolic. Building it runs every check once, so it is shared.
    """
    return full_pipeline_final_example("sym")

@pytest.fixture(scope="session")
def zinbiel() -> FinStructure:
    return final_example_zinbiel("sym")

@pytest.fixture(scope="session")
def polyx_window() -> FinStructure:
    """
    The polynomial family at symbolic q, with a window small enough for unit tests
    """
    return polyx("sym", 3)

@pytest.fixture
def virasoro() -> ConfAlgebra:
    return virasoro_type(2)

@pytest.fixture
def zero_conf() -> ConfAlgebra:
    zero = Tensor.zero(3)
    return ConfAlgebra(rank=2, ops={"mul": zero, "bracket": zero}, coops={"Delta": zero, "delta": zero})
