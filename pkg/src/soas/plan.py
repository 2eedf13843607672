"""Compile a semantic frame into an executable query plan.

The plan is a small operator tree the store runs natively:

    SelectHits(Limit(n, Sort?(Rank(terms, phrases, Filter?(Scan)))))
    CountAggregate(Filter?(Scan))
    FetchById(id)

Rank appears only for search intent, CountAggregate only for count, and
FetchById only for describe.  ``render_sql`` produces the SQL-style text
shown in digital responses and traces; it is a display artifact and is
never executed against anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .frames import Intent, SemanticFrame
from .parser import Comparator, FilterExpr, Literal, Num, SortDirection, Str, format_number


@dataclass(frozen=True, slots=True)
class Cmp:
    field: str
    comparator: Comparator
    value: Literal


@dataclass(frozen=True, slots=True)
class FieldContains:
    field: str
    substring: str


Condition = Union[Cmp, FieldContains]


@dataclass(frozen=True, slots=True)
class And:
    conditions: tuple[Condition, ...]


@dataclass(frozen=True, slots=True)
class Scan:
    pass


@dataclass(frozen=True, slots=True)
class Filter:
    predicate: And
    source: Scan


@dataclass(frozen=True, slots=True)
class Rank:
    terms: tuple[str, ...]
    phrase_groups: tuple[tuple[str, ...], ...]
    source: Union[Filter, Scan]


@dataclass(frozen=True, slots=True)
class Sort:
    field: str
    direction: SortDirection
    source: Rank


@dataclass(frozen=True, slots=True)
class Limit:
    count: int
    source: Union[Sort, Rank]


@dataclass(frozen=True, slots=True)
class SelectHits:
    source: Limit


@dataclass(frozen=True, slots=True)
class CountAggregate:
    source: Union[Filter, Scan]


@dataclass(frozen=True, slots=True)
class FetchById:
    doc_id: str


StructuredQuery = Union[SelectHits, CountAggregate, FetchById]


def _condition(constraint: FilterExpr) -> Condition:
    if constraint.comparator is Comparator.CONTAINS:
        assert isinstance(constraint.value, Str)  # parser guarantees string value
        return FieldContains(constraint.field, constraint.value.value)
    return Cmp(constraint.field, constraint.comparator, constraint.value)


def _filtered_scan(frame: SemanticFrame) -> Union[Filter, Scan]:
    scan = Scan()
    if not frame.constraints:
        return scan
    return Filter(And(tuple(_condition(c) for c in frame.constraints)), scan)


def generate(frame: SemanticFrame) -> StructuredQuery:
    """Map a frame onto its operator tree; total for valid frames."""
    if frame.intent is Intent.DESCRIBE:
        return FetchById(frame.subject_terms[0])
    if frame.intent is Intent.COUNT:
        return CountAggregate(_filtered_scan(frame))
    ranked = Rank(frame.subject_terms, frame.phrase_groups, _filtered_scan(frame))
    ordered: Union[Sort, Rank] = (
        Sort(frame.sort.field, frame.sort.direction, ranked) if frame.sort else ranked
    )
    return SelectHits(Limit(frame.limit, ordered))


_SQL_OPS = {
    Comparator.EQ: "=",
    Comparator.NE: "<>",
    Comparator.LT: "<",
    Comparator.GT: ">",
    Comparator.LE: "<=",
    Comparator.GE: ">=",
}


def _sql_string(value: str) -> str:
    return "'" + value.replace("'", "''") + "'"


def _render_condition(condition: Condition) -> str:
    if isinstance(condition, FieldContains):
        return f"{condition.field} LIKE {_sql_string('%' + condition.substring + '%')}"
    op = _SQL_OPS[condition.comparator]
    if isinstance(condition.value, Num):
        rendered = format_number(condition.value.value)
    else:
        rendered = _sql_string(condition.value.value)
    return f"{condition.field} {op} {rendered}"


def _where_clause(source: Union[Filter, Scan]) -> str:
    if isinstance(source, Scan):
        return ""
    joined = " AND ".join(_render_condition(c) for c in source.predicate.conditions)
    return f" WHERE {joined}"


def render_sql(query: StructuredQuery) -> str:
    """Deterministic single-line SQL-style text for a query plan."""
    if isinstance(query, FetchById):
        return f"SELECT * FROM documents WHERE id = {_sql_string(query.doc_id)}"
    if isinstance(query, CountAggregate):
        return f"SELECT COUNT(*) FROM documents{_where_clause(query.source)}"
    limit = query.source
    if isinstance(limit.source, Sort):
        order = f"{limit.source.field} {limit.source.direction.name}"
        rank = limit.source.source
    else:
        order = "score DESC"
        rank = limit.source
    where = _where_clause(rank.source)
    return (
        f"SELECT id, score FROM documents{where} ORDER BY {order} LIMIT {limit.count}"
    )
