from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from app.models.reports import StructureReport
from app.models.structures import OPERATIONS, FiniteTopology, ResiduatedLattice
from app.services.algebra import from_tables


CATALOG_FORMAT = "rlw-catalog"
CATALOG_VERSION = 1


class AlgebraDocument(BaseModel):
    """Interchange form of a finite residuated lattice."""

    model_config = ConfigDict(extra="forbid")

    size: int
    meet: list[list[int]]
    join: list[list[int]]
    mono: list[list[int]]
    impl: list[list[int]]
    bottom: int
    top: int
    name: str | None = None

    def to_algebra(self, normalized: bool = True) -> ResiduatedLattice:
        return from_tables(
            self.size,
            meet=self.meet,
            join=self.join,
            mono=self.mono,
            impl=self.impl,
            bottom=self.bottom,
            top=self.top,
            name=self.name,
            normalized=normalized,
        )

    @classmethod
    def from_algebra(cls, algebra: ResiduatedLattice, name: str | None = None) -> "AlgebraDocument":
        tables = {op: [list(row) for row in algebra.table(op)] for op in OPERATIONS}
        return cls(
            size=algebra.size,
            bottom=algebra.bottom,
            top=algebra.top,
            name=name,
            **tables,
        )


class TopologyDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int
    min_nbhd: list[list[int]]

    def to_topology(self) -> FiniteTopology:
        return FiniteTopology(self.n, tuple(frozenset(nbhd) for nbhd in self.min_nbhd))

    @classmethod
    def from_topology(cls, topology: FiniteTopology) -> "TopologyDocument":
        return cls(n=topology.n, min_nbhd=topology.to_lists())


class PosetDocument(BaseModel):
    elements: list[str]
    # [i, j] reads i <= j
    leq: list[tuple[str, str]] = Field(default_factory=list)


class TransitionDocument(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    source: str = Field(alias="from")
    target: str = Field(alias="to")
    map: list[int]


class InverseSystemDocument(BaseModel):
    poset: PosetDocument
    algebras: dict[str, AlgebraDocument]
    transitions: list[TransitionDocument] = Field(default_factory=list)


class LimitDocument(BaseModel):
    algebra: AlgebraDocument
    indices: list[str]
    threads: list[list[int]]


class SizeStatistics(BaseModel):
    size: int
    lattices: int = 0
    mono_candidates: int = 0
    accepted: int = 0
    duplicates: int = 0


class CatalogHeader(BaseModel):
    format: Literal["rlw-catalog"] = CATALOG_FORMAT
    version: int = CATALOG_VERSION
    size_bound: int
    count: int
    statistics: list[SizeStatistics] = Field(default_factory=list)


class CatalogEntry(AlgebraDocument):
    """An algebra line of a catalog file: the algebra JSON plus its key, tags and report."""

    key: str
    tags: list[str] = Field(default_factory=list)
    structure: StructureReport
