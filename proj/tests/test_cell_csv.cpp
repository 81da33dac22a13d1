#include "doctest.h"
#include "helpers.hpp"
#include "tabtree/csv.hpp"

using namespace tabtree;
using namespace tabtree::testing;

TEST_CASE("missing never equals any number, including zero") {
    CellValue missing = CellValue::missing();
    CHECK(missing != CellValue::number(0.0));
    CHECK(missing != CellValue::number(-0.0));
    CHECK(missing != CellValue::text(""));
    CHECK(missing == CellValue::missing());
}

TEST_CASE("numeric view parses full-string numbers only") {
    CHECK(CellValue::text("1.5").as_number() == 1.5);
    CHECK(CellValue::text("-3e2").as_number() == -300.0);
    CHECK(!CellValue::text("1.5x").as_number());
    CHECK(!CellValue::text("").as_number());
    CHECK(!CellValue::missing().as_number());
    CHECK(CellValue::number(2.0).as_number() == 2.0);
}

TEST_CASE("number formatting is stable and exact") {
    for (double v : {0.1, 1.0 / 3.0, 1e300, -2.5e-17, 0.0, -0.0, 123456789.123456789}) {
        std::string s = format_number(v);
        auto back = parse_number(s);
        REQUIRE(back);
        CHECK(*back == v);
        CHECK(format_number(*back) == s);
    }
}

TEST_CASE("csv round trips bytes under fixed formatting") {
    std::string content =
        "a,b,c\n"
        "1,hello,3.5\n"
        ",\"with,comma\",x\n"
        "2,\"quote\"\"inside\",\n"
        "3,\"line\nbreak\",0.25\n";
    Table t = parse_csv(content);
    REQUIRE(t.columns.size() == 3);
    CHECK(t.columns[0].cells[1].is_missing());
    CHECK(t.columns[1].cells[1].text_value() == "with,comma");
    CHECK(t.columns[1].cells[2].text_value() == "quote\"inside");
    CHECK(t.columns[1].cells[3].text_value() == "line\nbreak");
    CHECK(t.columns[2].cells[2].is_missing());

    std::string emitted = format_csv(t);
    CHECK(emitted == content);
    Table again = parse_csv(emitted);
    CHECK(again == t);
}

TEST_CASE("csv reads UTF-8 text untouched") {
    std::string content = "name\n\xC3\xA9l\xC3\xA8ve\n";
    Table t = parse_csv(content);
    CHECK(t.columns[0].cells[0].text_value() == "\xC3\xA9l\xC3\xA8ve");
    CHECK(format_csv(t) == content);
}

TEST_CASE("NaN tokens read as missing by default, literal when disabled") {
    std::string content = "x\nNaN\nnan\n1\n";
    Table t = parse_csv(content);
    CHECK(t.columns[0].cells[0].is_missing());
    CHECK(t.columns[0].cells[1].is_missing());
    CHECK(!t.columns[0].cells[2].is_missing());

    CsvOptions keep;
    keep.nan_as_missing = false;
    Table kept = parse_csv(content, keep);
    CHECK(kept.columns[0].cells[0].text_value() == "NaN");
}

TEST_CASE("quoted empty fields stay text, bare empties are missing") {
    Table t = parse_csv("x,y\n\"\",\n");
    CHECK(t.columns[0].cells[0].is_text());
    CHECK(t.columns[0].cells[0].text_value().empty());
    CHECK(t.columns[1].cells[0].is_missing());
}

TEST_CASE("ragged rows and unterminated quotes are errors") {
    CHECK_THROWS(parse_csv("a,b\n1\n"));
    CHECK_THROWS(parse_csv("a\n\"oops\n"));
}

TEST_CASE("number cells write with 17 significant digits") {
    Table t;
    t.columns.push_back(num_col("x", {0.1, 1.0 / 3.0}));
    std::string emitted = format_csv(t);
    Table back = parse_csv(emitted);
    CHECK(back.columns[0].cells[0].as_number() == 0.1);
    CHECK(back.columns[0].cells[1].as_number() == 1.0 / 3.0);
}
