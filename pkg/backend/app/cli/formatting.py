from collections.abc import Iterable, Sequence

from app.models.reports import SuiteReport, ValidationReport


def fmt_set(members: Iterable[int]) -> str:
    return "{" + ",".join(str(x) for x in sorted(members)) + "}"


def fmt_family(family: Iterable[Iterable[int]]) -> str:
    return "; ".join(fmt_set(members) for members in family)


def fmt_bool(value: bool | None) -> str:
    if value is None:
        return "n/a"
    return "yes" if value else "no"


def key_value_block(title: str, rows: Sequence[tuple[str, object]]) -> str:
    width = max((len(label) for label, _ in rows), default=0)
    lines = [title]
    lines.extend(f"  {label.ljust(width)}  {value}" for label, value in rows)
    return "\n".join(lines)


def render_validation(label: str, report: ValidationReport) -> str:
    if report.structural_errors:
        return "\n".join([f"{label}: malformed", *(f"  {e}" for e in report.structural_errors)])
    if report.ok:
        suffix = " (trivial)" if report.trivial else ""
        return f"{label}: residuated lattice of size {report.size}{suffix}"
    lines = [f"{label}: {len(report.violations)} axiom(s) fail"]
    lines.extend(f"  {v.axiom} at {tuple(v.witness)}" for v in report.violations)
    return "\n".join(lines)


def render_topology(nbhds: Sequence[Sequence[int]]) -> list[str]:
    return [f"  N({x}) = {fmt_set(nbhd)}" for x, nbhd in enumerate(nbhds)]


def render_suite(report: SuiteReport) -> str:
    header = (
        f"suite {report.suite}: {report.algebra_count} algebras up to size {report.size_max}, "
        f"seed {report.seed}"
    )
    width = max((len(check.name) for check in report.checks), default=0)
    lines = [header]
    for check in report.checks:
        status = check.status.upper()
        line = f"  {status:<12} {check.name.ljust(width)}  checked {check.checked}"
        if check.note:
            line += f"  ({check.note})"
        lines.append(line)
        for failure in check.failures:
            lines.append(f"      witness: {failure}")
    return "\n".join(lines)
