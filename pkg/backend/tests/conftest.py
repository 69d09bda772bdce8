import json
from pathlib import Path

import pytest

from app.models.documents import AlgebraDocument
from app.models.structures import ResiduatedLattice
from app.services.algebra import (
    build_boolean,
    build_goedel_chain,
    build_lukasiewicz_chain,
    from_tables,
)
from app.services.catalog import AlgebraCatalog, generate_up_to


@pytest.fixture(scope="session")
def g2() -> ResiduatedLattice:
    return build_goedel_chain(2)


@pytest.fixture(scope="session")
def g3() -> ResiduatedLattice:
    return build_goedel_chain(3)


@pytest.fixture(scope="session")
def g4() -> ResiduatedLattice:
    return build_goedel_chain(4)


@pytest.fixture(scope="session")
def l3() -> ResiduatedLattice:
    return build_lukasiewicz_chain(3)


@pytest.fixture(scope="session")
def b4() -> ResiduatedLattice:
    return build_boolean(2)


@pytest.fixture(scope="session")
def h5() -> ResiduatedLattice:
    """Heyting algebra 0 < d < a, b < 1 with a and b incomparable: indecomposable, not irreducible."""
    return from_tables(
        5,
        meet=[
            [0, 0, 0, 0, 0],
            [0, 1, 1, 1, 1],
            [0, 1, 2, 1, 2],
            [0, 1, 1, 3, 3],
            [0, 1, 2, 3, 4],
        ],
        join=[
            [0, 1, 2, 3, 4],
            [1, 1, 2, 3, 4],
            [2, 2, 2, 4, 4],
            [3, 3, 4, 3, 4],
            [4, 4, 4, 4, 4],
        ],
        mono=[
            [0, 0, 0, 0, 0],
            [0, 1, 1, 1, 1],
            [0, 1, 2, 1, 2],
            [0, 1, 1, 3, 3],
            [0, 1, 2, 3, 4],
        ],
        impl=[
            [4, 4, 4, 4, 4],
            [0, 4, 4, 4, 4],
            [0, 3, 4, 3, 4],
            [0, 2, 2, 4, 4],
            [0, 1, 2, 3, 4],
        ],
        bottom=0,
        top=4,
        name="H5",
    )


@pytest.fixture(scope="session")
def small_catalog() -> AlgebraCatalog:
    return generate_up_to(4)


@pytest.fixture
def write_algebra(tmp_path: Path):
    def write(algebra: ResiduatedLattice, name: str = "algebra.json") -> Path:
        path = tmp_path / name
        document = AlgebraDocument.from_algebra(algebra, algebra.name)
        path.write_text(json.dumps(document.model_dump(exclude_none=True)), encoding="utf-8")
        return path

    return write
