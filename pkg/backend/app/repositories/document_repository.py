import json
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ValidationError

from app.core.errors import InputError, InvalidSystemError
from app.models.documents import (
    AlgebraDocument,
    InverseSystemDocument,
    LimitDocument,
    TopologyDocument,
)
from app.models.structures import (
    FiniteTopology,
    Homomorphism,
    InverseLimit,
    InverseSystem,
    ResiduatedLattice,
)
from app.services.algebra import validate
from app.services.limits import build_poset, make_inverse_system


DocumentT = TypeVar("DocumentT", bound=BaseModel)


def _read_json(path: Path) -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"Cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _parse(model: type[DocumentT], payload: Any, source: str) -> DocumentT:
    try:
        return model.model_validate(payload)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "document"
        raise InputError(f"{source}: {location}: {first['msg']}") from exc


def dumps_document(document: BaseModel) -> str:
    return json.dumps(document.model_dump(mode="json", by_alias=True, exclude_none=True), sort_keys=True) + "\n"


def algebra_from_payload(payload: Any, source: str = "algebra") -> ResiduatedLattice:
    return _parse(AlgebraDocument, payload, source).to_algebra()


def load_algebra(path: Path) -> ResiduatedLattice:
    algebra = algebra_from_payload(_read_json(path), str(path))
    if algebra.name is None:
        return ResiduatedLattice(
            size=algebra.size,
            meet=algebra.meet,
            join=algebra.join,
            mono=algebra.mono,
            impl=algebra.impl,
            bottom=algebra.bottom,
            top=algebra.top,
            name=path.stem,
        )
    return algebra


def save_algebra(algebra: ResiduatedLattice, path: Path) -> Path:
    path.write_text(dumps_document(AlgebraDocument.from_algebra(algebra, algebra.name)), encoding="utf-8")
    return path


def load_topology(path: Path) -> FiniteTopology:
    return _parse(TopologyDocument, _read_json(path), str(path)).to_topology()


def system_from_document(document: InverseSystemDocument) -> InverseSystem:
    index = build_poset(document.poset.elements, document.poset.leq)
    # Index maps refer to the tables as given, so no renormalization here.
    algebras = {name: doc.to_algebra(normalized=False) for name, doc in document.algebras.items()}
    missing = sorted(set(index.elements) - set(algebras))
    if missing:
        raise InputError(f"Indices without an algebra: {missing}")
    for name, algebra in algebras.items():
        report = validate(algebra)
        if not report.ok:
            raise InvalidSystemError(
                f"Algebra {name} is not a residuated lattice",
                witness=[v.model_dump() for v in report.violations],
            )

    transitions = {}
    for transition in document.transitions:
        for name in (transition.source, transition.target):
            if name not in algebras:
                raise InputError(f"Transition names unknown index {name}")
        transitions[(transition.source, transition.target)] = Homomorphism(
            algebras[transition.source],
            algebras[transition.target],
            tuple(transition.map),
        )
    return make_inverse_system(index, algebras, transitions)


def load_inverse_system(path: Path) -> InverseSystem:
    document = _parse(InverseSystemDocument, _read_json(path), str(path))
    return system_from_document(document)


def limit_document(limit: InverseLimit) -> LimitDocument:
    return LimitDocument(
        algebra=AlgebraDocument.from_algebra(limit.algebra),
        indices=list(limit.order),
        threads=[list(thread) for thread in limit.threads],
    )
