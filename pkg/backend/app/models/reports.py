from typing import Any, Literal

from pydantic import BaseModel, Field


class AxiomViolation(BaseModel):
    axiom: str
    witness: list[int]


class ValidationReport(BaseModel):
    ok: bool
    size: int
    trivial: bool = False
    structural_errors: list[str] = Field(default_factory=list)
    violations: list[AxiomViolation] = Field(default_factory=list)


class ContinuityReport(BaseModel):
    ok: bool
    operation: str | None = None
    witness: list[int] | None = None

    def __bool__(self) -> bool:
        return self.ok


class SeparationReport(BaseModel):
    t0: bool
    t1: bool
    t2: bool
    separation_class: Literal["T2", "T1", "T0", "none"]


class FilterTopologyReport(BaseModel):
    open: bool
    closed: bool
    cosets_open: bool
    cosets_closed: bool


class SubdirectReport(BaseModel):
    injective: bool
    components_surjective: bool
    image_size: int
    product_size: int
    collision: list[int] | None = None


class CertificateReport(BaseModel):
    found: bool
    filters: list[list[int]] = Field(default_factory=list)
    refutation: list[int] | None = None
    hausdorff: bool
    discrete: bool
    residually_finite: bool
    subdirect_injective: bool | None = None


class StructureReport(BaseModel):
    algebra_id: str
    size: int
    trivial: bool
    is_simple: bool
    is_subdirectly_irreducible: bool
    is_directly_indecomposable: bool
    monolith: list[int] | None = None
    dimension: int
    factor_pairs: list[tuple[list[list[int]], list[list[int]]]] = Field(default_factory=list)


class IndecomposabilityReport(BaseModel):
    verdict: bool
    global_system_directed: bool
    no_trivial_finite_intersection: bool
    no_factor_congruences: bool
    no_product_decomposition: bool
    factor_pair: tuple[list[int], list[int]] | None = None
    factor_pairs: list[tuple[list[list[int]], list[list[int]]]] = Field(default_factory=list)


class GlobalSystemVerdict(BaseModel):
    applicable: bool
    reason: str | None = None
    subdirectly_irreducible: bool | None = None
    global_topology: list[list[int]] | None = None
    non_discrete: bool | None = None
    largest_non_discrete: list[list[int]] | None = None
    maximal_non_discrete_count: int | None = None


class HausdorffVerdict(BaseModel):
    skipped: bool = False
    note: str | None = None
    zltrl_count: int = 0
    hausdorff_count: int = 0
    nontrivial_hausdorff_count: int = 0
    finite_index_discrete: bool | None = None
    finitely_approximable: bool | None = None
    global_system_compact_hausdorff: bool | None = None


class ConditionResult(BaseModel):
    passed: bool
    witness: list[Any] | None = None


class UniformBaseReport(BaseModel):
    ok: bool
    diagonal: ConditionResult
    intersection: ConditionResult
    symmetry: ConditionResult
    composition: ConditionResult


class PermutabilityReport(BaseModel):
    ok: bool
    witness: tuple[list[list[int]], list[list[int]]] | None = None

    def __bool__(self) -> bool:
        return self.ok


class FamilyDccEntry(BaseModel):
    family: list[list[int]]
    is_chain: bool
    chain_length: int | None = None
    down_directed: bool
    minimum: list[int] | None = None
    minimal: list[list[int]]


class DccReport(BaseModel):
    ok: bool
    longest_descending_chain: int
    minimal_condition: bool
    systems_have_minimum: bool
    families: list[FamilyDccEntry] = Field(default_factory=list)


class TheoremCheck(BaseModel):
    suite: str
    name: str
    status: Literal["pass", "fail", "out-of-scope"]
    checked: int = 0
    failures: list[dict[str, Any]] = Field(default_factory=list)
    note: str | None = None


class SuiteReport(BaseModel):
    suite: str
    size_max: int
    algebra_count: int
    seed: int
    checks: list[TheoremCheck] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.status != "fail" for check in self.checks)
