#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "taxminer/Csv.h"
#include "taxminer/Errors.h"
#include "taxminer/Generator.h"
#include "taxminer/Prepare.h"
#include "taxminer/Relation.h"

#include "helpers.h"

using namespace taxminer;
using helpers::cat;
using helpers::catAttr;
using helpers::contAttr;
using helpers::nul;
using helpers::num;
using helpers::textAttr;
using helpers::throwsWith;

namespace {

Relation tinyRelation() {
    std::vector<AttributeSchema> schema{contAttr("age"), catAttr("color", {"red", "blue"})};
    std::vector<Record> records{{num(30), cat("red")}, {num(41), cat("blue")}};
    return Relation(std::move(schema), std::move(records));
}

}

TEST_SUITE("dataset") {

TEST_CASE("value payloads are typed and finite") {
    CHECK(Value::null().isNull());
    CHECK(Value::number(2.5).asNumber() == 2.5);
    CHECK(Value::text("SI").asText() == "SI");
    CHECK(throwsWith<DataError>([] { Value::number(std::nan("")); }, "non-finite"));
    CHECK(throwsWith<DataError>([] { Value::number(1.0 / 0.0); }, "non-finite"));
    CHECK(throwsWith<DataError>([] { Value::text("x").asNumber(); }, "not numeric"));
    CHECK(throwsWith<DataError>([] { Value::number(1).asText(); }, "not textual"));
}

TEST_CASE("relation construction validates schema") {
    CHECK(throwsWith<DataError>(
        [] {
            Relation({contAttr("a"), contAttr("a")}, {});
        },
        "duplicate attribute name 'a'"));
    CHECK(throwsWith<DataError>(
        [] {
            Relation({contAttr("")}, {});
        },
        "empty name"));
    CHECK(throwsWith<DataError>(
        [] {
            Relation({catAttr("c", {})}, {});
        },
        "has no levels"));
    CHECK(throwsWith<DataError>(
        [] {
            Relation({catAttr("c", {"x", "x"})}, {});
        },
        "duplicate levels"));
}

TEST_CASE("relation construction validates every cell") {
    std::vector<AttributeSchema> schema{contAttr("age"), catAttr("color", {"red", "blue"}, false)};
    CHECK(throwsWith<DataError>(
        [&] {
            Relation(schema, {{num(1)}});
        },
        "row 1 has 1 cells"));
    CHECK(throwsWith<DataError>(
        [&] {
            Relation(schema, {{num(1), cat("red")}, {num(2), nul()}});
        },
        "row 2, column 'color'"));
    CHECK(throwsWith<DataError>(
        [&] {
            Relation(schema, {{cat("x"), cat("red")}});
        },
        "non-numeric value in row 1, column 'age'"));
    CHECK(throwsWith<DataError>(
        [&] {
            Relation(schema, {{num(1), cat("green")}});
        },
        "outside level list in row 1, column 'color'"));
}

TEST_CASE("column lookup and mining columns") {
    std::vector<AttributeSchema> schema{textAttr("id"), contAttr("age"),
                                        catAttr("color", {"red", "blue"})};
    Relation rel(schema, {});
    CHECK(rel.hasColumn("age"));
    CHECK_FALSE(rel.hasColumn("AGE"));
    CHECK(rel.columnIndex("color") == 2);
    CHECK(throwsWith<DataError>([&] { rel.columnIndex("nope"); }, "no attribute named 'nope'"));
    CHECK(rel.miningColumns() == std::vector<std::size_t>{1, 2});
}

TEST_CASE("load_csv accepts a header-only file") {
    std::istringstream in("age,color\n");
    const auto rel = loadCsv(in, tinyRelation().schema());
    CHECK(rel.rowCount() == 0);
    CHECK(rel.columnCount() == 2);
}

TEST_CASE("load_csv parses values, nulls and flags bad numbers") {
    const auto schema = tinyRelation().schema();
    {
        std::istringstream in("age,color\n30,red\n,?\n");
        const auto rel = loadCsv(in, schema);
        REQUIRE(rel.rowCount() == 2);
        CHECK(rel.at(0, 0).asNumber() == 30.0);
        CHECK(rel.at(1, 0).isNull());
        CHECK(rel.at(1, 1).isNull());
    }
    {
        std::istringstream in("age,color\nabc,red\n");
        CHECK(throwsWith<DataError>([&] { loadCsv(in, schema); },
                                    "cannot parse 'abc' as a number in row 1, column 'age'"));
    }
    {
        std::istringstream in("color,age\n");
        CHECK(throwsWith<DataError>([&] { loadCsv(in, schema); }, "header mismatch at column 1"));
    }
    {
        std::istringstream in("age,color\n30\n");
        CHECK(throwsWith<DataError>([&] { loadCsv(in, schema); }, "row 1 has 1 fields"));
    }
    {
        std::istringstream in("age,color\n30,\"red\n");
        CHECK(throwsWith<DataError>([&] { loadCsv(in, schema); }, "unterminated quoted field"));
    }
}

TEST_CASE("load_csv reads the 114-row contribuyentes file back") {
    const auto generated = generateContribuyentes(1, 114, caseStudyPatterns());
    CHECK(generated.rowCount() == 114);
    CHECK(generated.columnCount() == 24);

    helpers::TempDir dir("csv114");
    const auto path = dir.str() + "/contribuyentes.csv";
    writeCsvFile(generated, path);
    const auto loaded = loadCsvFile(path, generated.schema());
    REQUIRE(loaded.rowCount() == 114);
    CHECK(loaded.records() == generated.records());
}

TEST_CASE("csv escaping survives quotes, commas and newlines") {
    std::vector<AttributeSchema> schema{textAttr("note"), contAttr("x")};
    std::vector<Record> records{
        {cat("plain"), num(1)},
        {cat("comma, inside"), num(2)},
        {cat("quote \" inside"), num(3)},
        {cat("line\nbreak"), num(4)},
        {nul(), num(5)},
    };
    Relation rel(schema, records);
    const auto text = writeCsv(rel);
    std::istringstream in(text);
    const auto back = loadCsv(in, schema);
    CHECK(back.records() == rel.records());
}

TEST_CASE("write_csv uses lf endings and trailing newline") {
    const auto text = writeCsv(tinyRelation());
    CHECK(text == "age,color\n30,red\n41,blue\n");
}

TEST_CASE("prepare leaves a null-free relation untouched") {
    const auto rel = tinyRelation();
    CHECK(prepare(rel, NullPolicy::DropRows).records() == rel.records());
    CHECK(prepare(rel, NullPolicy::Impute).records() == rel.records());
}

TEST_CASE("impute fills the continuous median") {
    std::vector<AttributeSchema> schema{contAttr("x")};
    Relation rel(schema, {{num(1)}, {num(2)}, {num(3)}, {nul()}});
    const auto out = prepare(rel, NullPolicy::Impute);
    REQUIRE(out.rowCount() == 4);
    CHECK(out.at(3, 0).asNumber() == 2.0);
}

TEST_CASE("impute fills the categorical mode, ties to the earlier level") {
    std::vector<AttributeSchema> schema{catAttr("c", {"a", "b"})};
    Relation rel(schema, {{cat("a")}, {cat("b")}, {nul()}});
    const auto out = prepare(rel, NullPolicy::Impute);
    CHECK(out.at(2, 0).asText() == "a");
}

TEST_CASE("drop policy removes rows with any mining null") {
    std::vector<AttributeSchema> schema{contAttr("x"), catAttr("c", {"a", "b"})};
    Relation rel(schema, {{num(1), cat("a")},
                          {nul(), nul()},
                          {num(3), cat("b")},
                          {num(4), cat("a")}});
    const auto out = prepare(rel, NullPolicy::DropRows);
    REQUIRE(out.rowCount() == 3);
    CHECK(out.at(0, 0).asNumber() == 1.0);
    CHECK(out.at(1, 0).asNumber() == 3.0);
    CHECK(out.at(2, 0).asNumber() == 4.0);
}

TEST_CASE("impute refuses an entirely null column") {
    std::vector<AttributeSchema> schema{contAttr("gone")};
    Relation rel(schema, {{nul()}, {nul()}});
    CHECK(throwsWith<DataError>([&] { prepare(rel, NullPolicy::Impute); },
                                "column 'gone' is entirely null"));
}

TEST_CASE("prepare ignores identifier and text columns") {
    std::vector<AttributeSchema> schema{textAttr("name"), contAttr("x")};
    Relation rel(schema, {{nul(), num(1)}, {cat("z"), num(2)}});
    const auto dropped = prepare(rel, NullPolicy::DropRows);
    CHECK(dropped.rowCount() == 2);
    const auto imputed = prepare(rel, NullPolicy::Impute);
    CHECK(imputed.at(0, 0).isNull());
}

TEST_CASE("name parsers for policies and methods") {
    CHECK(nullPolicyFromName("drop") == NullPolicy::DropRows);
    CHECK(nullPolicyFromName("impute") == NullPolicy::Impute);
    CHECK(throwsWith<UsageError>([] { nullPolicyFromName("zap"); }, "unknown null policy"));
    CHECK(binMethodFromName("width") == BinMethod::EqualWidth);
    CHECK(binMethodFromName("frequency") == BinMethod::EqualFrequency);
    CHECK(throwsWith<UsageError>([] { binMethodFromName("magic"); }, "unknown bin method"));
}

TEST_CASE("equal-width discretize on {0,1,2,3} with k=2") {
    std::vector<AttributeSchema> schema{contAttr("x")};
    Relation rel(schema, {{num(0)}, {num(1)}, {num(2)}, {num(3)}});
    const auto result = discretize(rel, "x", 2, BinMethod::EqualWidth);
    CHECK(result.edges == std::vector<double>{0.0, 1.5, 3.0});
    CHECK(result.labels == std::vector<std::string>{"[0,1.5)", "[1.5,3]"});
    CHECK(result.relation.schema()[0].kind == AttrKind::Categorical);
    CHECK(result.relation.at(0, 0).asText() == "[0,1.5)");
    CHECK(result.relation.at(1, 0).asText() == "[0,1.5)");
    CHECK(result.relation.at(2, 0).asText() == "[1.5,3]");
    CHECK(result.relation.at(3, 0).asText() == "[1.5,3]");
}

TEST_CASE("discretize collapses a constant column to one bin") {
    std::vector<AttributeSchema> schema{contAttr("x")};
    Relation rel(schema, {{num(7)}, {num(7)}, {num(7)}});
    const auto result = discretize(rel, "x", 5, BinMethod::EqualWidth);
    REQUIRE(result.labels.size() == 1);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(result.relation.at(r, 0).asText() == result.labels[0]);
    }
}

TEST_CASE("equal-frequency discretize splits 1..8 into four pairs") {
    std::vector<AttributeSchema> schema{contAttr("x")};
    std::vector<Record> records;
    for (int i = 1; i <= 8; ++i) records.push_back({num(i)});
    Relation rel(schema, std::move(records));
    const auto result = discretize(rel, "x", 4, BinMethod::EqualFrequency);
    REQUIRE(result.labels.size() == 4);
    std::vector<std::size_t> counts(4, 0);
    for (std::size_t r = 0; r < 8; ++r) {
        const auto& label = result.relation.at(r, 0).asText();
        for (std::size_t b = 0; b < 4; ++b) {
            if (label == result.labels[b]) ++counts[b];
        }
    }
    CHECK(counts == std::vector<std::size_t>{2, 2, 2, 2});
}

TEST_CASE("discretize rejects bad arguments and keeps nulls") {
    std::vector<AttributeSchema> schema{contAttr("x"), catAttr("c", {"a"})};
    Relation rel(schema, {{num(1), cat("a")}, {nul(), cat("a")}, {num(5), cat("a")}});
    CHECK(throwsWith<UsageError>([&] { discretize(rel, "x", 1, BinMethod::EqualWidth); },
                                 "at least 2 bins"));
    CHECK(throwsWith<DataError>([&] { discretize(rel, "c", 2, BinMethod::EqualWidth); },
                                "'c' is not continuous"));
    const auto result = discretize(rel, "x", 2, BinMethod::EqualWidth);
    CHECK(result.relation.at(1, 0).isNull());
}

TEST_CASE("min_max_normalize maps the documented column") {
    std::vector<AttributeSchema> schema{contAttr("fechanac")};
    Relation rel(schema, {{num(1972)}, {num(1980)}, {num(1990)}});
    const auto result = minMaxNormalize(rel, {"fechanac"});
    CHECK(result.relation.at(0, 0).asNumber() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(result.relation.at(1, 0).asNumber() == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
    CHECK(result.relation.at(2, 0).asNumber() == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(result.scaler.ranges.size() == 1);
    CHECK(result.scaler.ranges[0].min == 1972.0);
    CHECK(result.scaler.ranges[0].max == 1990.0);
}

TEST_CASE("min_max_normalize is idempotent on {0,1} and zeros a constant") {
    std::vector<AttributeSchema> schema{contAttr("a"), contAttr("b")};
    Relation rel(schema, {{num(0), num(5)}, {num(1), num(5)}, {num(0), num(5)}});
    const auto result = minMaxNormalize(rel, {"a", "b"});
    CHECK(result.relation.at(0, 0).asNumber() == 0.0);
    CHECK(result.relation.at(1, 0).asNumber() == 1.0);
    for (std::size_t r = 0; r < 3; ++r) CHECK(result.relation.at(r, 1).asNumber() == 0.0);
}

TEST_CASE("min_max_normalize rejects nulls and non-continuous columns") {
    std::vector<AttributeSchema> schema{contAttr("x"), catAttr("c", {"a"})};
    Relation rel(schema, {{nul(), cat("a")}});
    CHECK(throwsWith<DataError>([&] { minMaxNormalize(rel, {"x"}); },
                                "null encountered in 'x'"));
    CHECK(throwsWith<DataError>([&] { minMaxNormalize(rel, {"c"}); }, "'c' is not continuous"));
}

TEST_CASE("normalization stays in unit range and inverts") {
    helpers::TestRand rand(77);
    for (int round = 0; round < 20; ++round) {
        std::vector<AttributeSchema> schema{contAttr("x")};
        std::vector<Record> records;
        const int rows = rand.intIn(2, 30);
        for (int r = 0; r < rows; ++r) records.push_back({num(rand.uniform(-1e4, 1e4))});
        Relation rel(schema, std::move(records));
        const auto result = minMaxNormalize(rel, {"x"});
        const auto& range = result.scaler.ranges[0];
        for (int r = 0; r < rows; ++r) {
            const double y = result.relation.at(r, 0).asNumber();
            CHECK(y >= 0.0);
            CHECK(y <= 1.0);
            if (range.max > range.min) {
                CHECK(denormalizeValue(y, range) ==
                      doctest::Approx(rel.at(r, 0).asNumber()).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("append_attribute grows the contribuyentes relation to 25 columns") {
    const auto rel = generateContribuyentes(1, 114, caseStudyPatterns());
    std::vector<Value> labels(114, cat("CSOM_11"));
    const auto out =
        appendAttribute(rel, catAttr("CSOM", {"CSOM_11"}, false), labels);
    CHECK(out.columnCount() == 25);
    CHECK(out.schema().back().name == "CSOM");
    for (std::size_t r = 0; r < rel.rowCount(); ++r) {
        for (std::size_t c = 0; c < rel.columnCount(); ++c) {
            CHECK(out.at(r, c) == rel.at(r, c));
        }
    }
}

TEST_CASE("append_attribute edge cases") {
    Relation empty({contAttr("x")}, {});
    const auto grown = appendAttribute(empty, contAttr("y"), {});
    CHECK(grown.columnCount() == 2);
    CHECK(grown.rowCount() == 0);

    const auto rel = tinyRelation();
    CHECK(throwsWith<DataError>(
        [&] { appendAttribute(rel, contAttr("age"), {num(1), num(2)}); },
        "'age' already exists"));
    CHECK(throwsWith<DataError>([&] { appendAttribute(rel, contAttr("y"), {num(1)}); },
                                "appended column has 1 values"));
}

TEST_CASE("generator emits the documented shape deterministically") {
    const auto a = generateContribuyentes(1, 114, caseStudyPatterns());
    const auto b = generateContribuyentes(1, 114, caseStudyPatterns());
    CHECK(a.rowCount() == 114);
    CHECK(a.columnCount() == 24);
    CHECK(writeCsv(a) == writeCsv(b));

    const auto c = generateContribuyentes(2, 114, caseStudyPatterns());
    CHECK(writeCsv(a) != writeCsv(c));
}

TEST_CASE("generator covers documented value ranges") {
    const auto rel = generateContribuyentes(7, 200, {});
    const auto fechanac = rel.columnIndex("fechanac");
    const auto nroemple = rel.columnIndex("nroemple");
    const auto liquidez = rel.columnIndex("liquidez");
    for (std::size_t r = 0; r < rel.rowCount(); ++r) {
        const double birth = rel.at(r, fechanac).asNumber();
        CHECK(birth >= 1940.0);
        CHECK(birth <= 1995.0);
        CHECK(rel.at(r, nroemple).asNumber() >= 0.0);
        const auto& level = rel.at(r, liquidez).asText();
        CHECK((level == "Baja" || level == "Media" || level == "Alta"));
    }
}

TEST_CASE("generator assigns unique cuit identifiers") {
    const auto rel = generateContribuyentes(1, 114, caseStudyPatterns());
    const auto cuit = rel.columnIndex("CUIT");
    std::set<std::string> seen;
    for (std::size_t r = 0; r < rel.rowCount(); ++r) {
        CHECK(seen.insert(rel.at(r, cuit).asText()).second);
    }
}

TEST_CASE("a planted 20 percent pattern lands within one record") {
    PatternCondition condition;
    condition.attr = "asinpresdj";
    condition.isInterval = true;
    condition.lo = 2;
    condition.hi = 6;
    const std::vector<Pattern> patterns{Pattern{"frequent-absentee", 0.20, {condition}}};
    const auto rel = generateContribuyentes(5, 114, patterns);
    const auto col = rel.columnIndex("asinpresdj");
    std::size_t hits = 0;
    for (std::size_t r = 0; r < rel.rowCount(); ++r) {
        if (rel.at(r, col).asNumber() >= 2.0) ++hits;
    }
    const double expected = 0.20 * 114.0;
    CHECK(std::abs(static_cast<double>(hits) - expected) <= 1.0);
}

TEST_CASE("case study patterns are embedded exactly") {
    const auto patterns = caseStudyPatterns();
    const auto rel = generateContribuyentes(1, 114, patterns);
    const auto fechanac = rel.columnIndex("fechanac");
    const auto asin = rel.columnIndex("asinpresdj");
    const auto emple = rel.columnIndex("nroemple");
    const auto denuncias = rel.columnIndex("nrodenuncias");
    const auto cant = rel.columnIndex("cantcau");
    const auto jur = rel.columnIndex("supdompjur");

    auto inRange = [&](std::size_t r, std::size_t c, double lo, double hi) {
        const double x = rel.at(r, c).asNumber();
        return x >= lo && x <= hi;
    };
    std::vector<std::size_t> hits(patterns.size(), 0);
    for (std::size_t r = 0; r < rel.rowCount(); ++r) {
        const bool young = inRange(r, fechanac, 1977, 1995);
        const bool old = inRange(r, fechanac, 1940, 1968);
        const bool jurSi = rel.at(r, jur).asText() == "SI";
        if (young && inRange(r, asin, 0, 1) && inRange(r, emple, 0, 15) &&
            inRange(r, denuncias, 0, 1) && inRange(r, cant, 0, 1) && !jurSi) {
            ++hits[0];
        }
        if (young && inRange(r, asin, 2, 6) && inRange(r, emple, 0, 15) &&
            inRange(r, denuncias, 2, 5) && inRange(r, cant, 2, 5) && jurSi) {
            ++hits[1];
        }
        if (old && inRange(r, asin, 0, 1) && inRange(r, emple, 0, 15) &&
            inRange(r, denuncias, 0, 1) && inRange(r, cant, 0, 1) && !jurSi) {
            ++hits[2];
        }
        if (old && inRange(r, asin, 0, 1) && inRange(r, emple, 16, 18) &&
            inRange(r, denuncias, 0, 1) && inRange(r, cant, 4, 8) && !jurSi) {
            ++hits[3];
        }
    }
    for (std::size_t p = 0; p < patterns.size(); ++p) {
        const double expected = patterns[p].fraction * 114.0;
        CHECK(std::abs(static_cast<double>(hits[p]) - expected) <= 1.0);
    }
}

TEST_CASE("null planting keeps the underlying draw stream intact") {
    const auto clean = generateContribuyentes(11, 60, {});
    const auto holed = generateContribuyentes(11, 60, {}, 0.3);
    REQUIRE(clean.rowCount() == holed.rowCount());
    std::size_t nulls = 0;
    for (std::size_t r = 0; r < clean.rowCount(); ++r) {
        for (std::size_t c = 0; c < clean.columnCount(); ++c) {
            if (holed.at(r, c).isNull() && !clean.at(r, c).isNull()) {
                ++nulls;
            } else {
                CHECK(holed.at(r, c) == clean.at(r, c));
            }
        }
    }
    CHECK(nulls > 0);
}

TEST_CASE("generator argument validation") {
    CHECK(throwsWith<UsageError>([] { generateContribuyentes(1, 0, {}); },
                                 "row count must be positive"));
    CHECK(throwsWith<UsageError>([] { generateContribuyentes(1, 5, {}, 1.0); },
                                 "null fraction"));

    PatternCondition unknown;
    unknown.attr = "nope";
    unknown.isInterval = true;
    CHECK(throwsWith<DataError>(
        [&] { generateContribuyentes(1, 5, {Pattern{"p", 0.1, {unknown}}}); },
        "unknown attribute 'nope'"));

    PatternCondition impossible;
    impossible.attr = "nroemple";
    impossible.isInterval = true;
    impossible.lo = 100;
    impossible.hi = 200;
    CHECK(throwsWith<DataError>(
        [&] { generateContribuyentes(1, 5, {Pattern{"p", 0.1, {impossible}}}); },
        "impossible condition on 'nroemple'"));

    PatternCondition badLevel;
    badLevel.attr = "liquidez";
    badLevel.level = "Enorme";
    CHECK(throwsWith<DataError>(
        [&] { generateContribuyentes(1, 5, {Pattern{"p", 0.1, {badLevel}}}); },
        "unknown level 'Enorme'"));

    PatternCondition ok;
    ok.attr = "liquidez";
    ok.level = "Alta";
    CHECK(throwsWith<DataError>(
        [&] { generateContribuyentes(1, 5, {Pattern{"p", 0.9, {ok}}, Pattern{"q", 0.2, {ok}}}); },
        "fractions sum beyond 1"));
    CHECK(throwsWith<DataError>(
        [&] { generateContribuyentes(1, 5, {Pattern{"p", -0.1, {ok}}}); },
        "negative fraction"));
}

TEST_CASE("patterns survive a json round trip") {
    const auto patterns = caseStudyPatterns();
    const auto doc = patternsToJson(patterns);
    const auto back = patternsFromJson(doc);
    REQUIRE(back.size() == patterns.size());
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        CHECK(back[i].name == patterns[i].name);
        CHECK(back[i].fraction == patterns[i].fraction);
        REQUIRE(back[i].conditions.size() == patterns[i].conditions.size());
        for (std::size_t c = 0; c < patterns[i].conditions.size(); ++c) {
            CHECK(back[i].conditions[c].attr == patterns[i].conditions[c].attr);
            CHECK(back[i].conditions[c].isInterval == patterns[i].conditions[c].isInterval);
            CHECK(back[i].conditions[c].lo == patterns[i].conditions[c].lo);
            CHECK(back[i].conditions[c].hi == patterns[i].conditions[c].hi);
            CHECK(back[i].conditions[c].level == patterns[i].conditions[c].level);
        }
    }
    const auto same = writeCsv(generateContribuyentes(1, 50, patterns));
    CHECK(writeCsv(generateContribuyentes(1, 50, back)) == same);
}

TEST_CASE("pattern json rejects malformed documents") {
    CHECK(throwsWith<DataError>([] { patternsFromJson(nlohmann::json::array()); },
                                "'patterns' array"));
    CHECK(throwsWith<DataError>(
        [] {
            patternsFromJson(nlohmann::json{{"patterns", {{{"name", "p"}}}}});
        },
        "missing 'fraction'"));
    CHECK(throwsWith<DataError>(
        [] {
            patternsFromJson(nlohmann::json{
                {"patterns", {{{"fraction", 0.5}, {"conditions", {{{"attr", "x"}}}}}}}});
        },
        "needs 'equals', 'between', 'ge' or 'le'"));
}

TEST_CASE("ge and le conditions clamp to the attribute domain") {
    const auto patterns = patternsFromJson(nlohmann::json{
        {"patterns",
         {{{"name", "big-employer"},
           {"fraction", 0.5},
           {"conditions", {{{"attr", "nroemple"}, {"ge", 16}}}}}}}});
    const auto rel = generateContribuyentes(3, 40, patterns);
    const auto col = rel.columnIndex("nroemple");
    std::size_t hits = 0;
    for (std::size_t r = 0; r < rel.rowCount(); ++r) {
        if (rel.at(r, col).asNumber() >= 16.0) ++hits;
    }
    CHECK(hits == 20);
}

TEST_CASE("schema json round trips through files") {
    const auto schema = contribuyentesSchema();
    const auto doc = schemaToJson(schema);
    const auto back = schemaFromJson(doc);
    REQUIRE(back.size() == schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i) {
        CHECK(back[i].name == schema[i].name);
        CHECK(back[i].kind == schema[i].kind);
        CHECK(back[i].levels == schema[i].levels);
        CHECK(back[i].nullable == schema[i].nullable);
    }

    helpers::TempDir dir("schema");
    const auto path = dir.str() + "/schema.json";
    writeSchemaFile(schema, path);
    const auto loaded = loadSchemaFile(path);
    CHECK(loaded.size() == schema.size());
    CHECK(loaded[2].name == "perfil");
    CHECK(loaded[2].levels.size() == 5);
}

TEST_CASE("schema json rejects malformed documents") {
    CHECK(throwsWith<DataError>([] { schemaFromJson(nlohmann::json::object()); },
                                "must be a JSON array"));
    CHECK(throwsWith<DataError>(
        [] {
            schemaFromJson(nlohmann::json::array({{{"name", "x"}}}));
        },
        "missing 'name' or 'kind'"));
    CHECK(throwsWith<DataError>(
        [] {
            schemaFromJson(nlohmann::json::array({{{"name", "x"}, {"kind", "categorical"}}}));
        },
        "missing 'levels'"));
}

TEST_CASE("attribute kind names round trip") {
    for (const auto kind : {AttrKind::Continuous, AttrKind::Categorical, AttrKind::Identifier,
                            AttrKind::Text}) {
        CHECK(attrKindFromName(attrKindName(kind)) == kind);
    }
    CHECK(throwsWith<DataError>([] { attrKindFromName("fuzzy"); }, "unknown attribute kind"));
}

TEST_CASE("format_number gives stable short forms") {
    CHECK(formatNumber(3.0) == "3");
    CHECK(formatNumber(1972.5) == "1972.5");
    CHECK(formatNumber(-0.25) == "-0.25");
    CHECK(formatNumber(4.0 / 9.0) == "0.444444444444");
    CHECK(formatNumber(1e-9) == "1e-09");
}

TEST_CASE("scaler lookup finds recorded attributes") {
    ScalerParams scaler;
    scaler.ranges.push_back(AttributeRange{"x", 0.0, 2.0});
    REQUIRE(scaler.find("x") != nullptr);
    CHECK(scaler.find("x")->max == 2.0);
    CHECK(scaler.find("y") == nullptr);
}

}
