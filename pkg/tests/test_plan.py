import pytest

from soas.frames import build_frame
from soas.lexer import tokenize
from soas.parser import Comparator, Num, Str, parse_statement
from soas.plan import (
    And,
    Cmp,
    CountAggregate,
    FetchById,
    FieldContains,
    Filter,
    Limit,
    Rank,
    Scan,
    SelectHits,
    Sort,
    generate,
    render_sql,
)


def plan_for(text):
    frame = build_frame(parse_statement(tokenize(text)), 0, source_text=text)
    return generate(frame)


def sql_for(text):
    return render_sql(plan_for(text))


class TestTreeShapes:
    def test_plain_search(self):
        plan = plan_for("find pumps")
        assert isinstance(plan, SelectHits)
        assert isinstance(plan.source, Limit)
        assert plan.source.count == 10
        rank = plan.source.source
        assert isinstance(rank, Rank)
        assert rank.terms == ("pumps",)
        assert rank.phrase_groups == ()
        assert isinstance(rank.source, Scan)

    def test_filtered_search(self):
        plan = plan_for("find pumps where year >= 2007 limit 5")
        rank = plan.source.source
        assert isinstance(rank.source, Filter)
        assert rank.source.predicate == And(
            (Cmp("year", Comparator.GE, Num(2007)),)
        )
        assert isinstance(rank.source.source, Scan)
        assert plan.source.count == 5

    def test_sorted_search_wraps_rank(self):
        plan = plan_for("find pumps sort by year desc")
        sort = plan.source.source
        assert isinstance(sort, Sort)
        assert sort.field == "year"
        assert sort.direction.value == "desc"
        assert isinstance(sort.source, Rank)

    def test_phrase_groups_reach_rank(self):
        plan = plan_for('find "wear ring" pumps')
        rank = plan.source.source
        assert rank.terms == ("pumps",)
        assert rank.phrase_groups == (("wear", "ring"),)

    def test_count_has_no_rank(self):
        plan = plan_for("count pumps where year >= 2007")
        assert isinstance(plan, CountAggregate)
        assert isinstance(plan.source, Filter)
        # count never ranks, so subject terms do not appear anywhere
        assert "Rank" not in repr(plan)

    def test_bare_count_scans(self):
        plan = plan_for("count")
        assert plan == CountAggregate(Scan())

    def test_describe_fetches_by_id(self):
        assert plan_for("describe pump1") == FetchById("pump1")

    def test_contains_becomes_fieldcontains(self):
        plan = plan_for("find pumps where note contains wear")
        condition = plan.source.source.source.predicate.conditions[0]
        assert condition == FieldContains("note", "wear")

    def test_multiple_filters_keep_order(self):
        plan = plan_for("find pumps where year >= 2007 and material = steel")
        conditions = plan.source.source.source.predicate.conditions
        assert conditions == (
            Cmp("year", Comparator.GE, Num(2007)),
            Cmp("material", Comparator.EQ, Str("steel")),
        )


class TestRenderSql:
    @pytest.mark.parametrize(
        "text,sql",
        [
            (
                "find pumps where year >= 2007 limit 5",
                "SELECT id, score FROM documents WHERE year >= 2007 ORDER BY score DESC LIMIT 5",
            ),
            (
                "find pumps",
                "SELECT id, score FROM documents ORDER BY score DESC LIMIT 10",
            ),
            ("count", "SELECT COUNT(*) FROM documents"),
            (
                "count pumps where year < 1990",
                "SELECT COUNT(*) FROM documents WHERE year < 1990",
            ),
            (
                "describe pump1",
                "SELECT * FROM documents WHERE id = 'pump1'",
            ),
            (
                "find pumps where material != steel",
                "SELECT id, score FROM documents WHERE material <> 'steel' ORDER BY score DESC LIMIT 10",
            ),
            (
                "find pumps where note contains wear",
                "SELECT id, score FROM documents WHERE note LIKE '%wear%' ORDER BY score DESC LIMIT 10",
            ),
            (
                "find pumps limit 3 sort by year asc",
                "SELECT id, score FROM documents ORDER BY year ASC LIMIT 3",
            ),
            (
                "find pumps where year <= 2007 and rating > 4.5 sort by rating desc",
                "SELECT id, score FROM documents WHERE year <= 2007 AND rating > 4.5 ORDER BY rating DESC LIMIT 10",
            ),
        ],
    )
    def test_sql_goldens(self, text, sql):
        assert sql_for(text) == sql

    def test_quotes_doubled_in_string_literals(self):
        assert sql_for('find pumps where material = "o\'ring"') == (
            "SELECT id, score FROM documents WHERE material = 'o''ring' "
            "ORDER BY score DESC LIMIT 10"
        )

    def test_quotes_doubled_in_contains(self):
        assert sql_for('find pumps where note contains "o\'ring"') == (
            "SELECT id, score FROM documents WHERE note LIKE '%o''ring%' "
            "ORDER BY score DESC LIMIT 10"
        )

    def test_describe_id_quoted(self):
        assert render_sql(FetchById("o'ring")) == (
            "SELECT * FROM documents WHERE id = 'o''ring'"
        )

    def test_integer_literal_renders_bare(self):
        assert "year >= 2007" in sql_for("find x where year >= 2007")

    def test_float_literal_renders_bare(self):
        assert "rating > 4.5" in sql_for("find x where rating > 4.5")

    def test_string_number_lookalike_is_quoted(self):
        # a quoted value is a string even when it looks numeric
        assert "year = '2007'" in sql_for('find x where year = "2007"')

    def test_sql_is_single_line(self):
        sql = sql_for("find pumps where note contains wear sort by year desc")
        assert "\n" not in sql


class TestDeterminism:
    def test_same_text_same_plan(self):
        a = plan_for("find pumps where year >= 2007 limit 5")
        b = plan_for("find pumps where year >= 2007 limit 5")
        assert a == b
        assert render_sql(a) == render_sql(b)
