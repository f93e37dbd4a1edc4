#include "nonlocal/error.hpp"
#include "nonlocal/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace nonlocal;

TEST_CASE("csv round trip with awkward fields") {
    std::ostringstream os;
    {
        CsvWriter w(os, {"a", "b"}, "v-test");
        w.row({"plain", "with, comma"});
        w.row({"quote \"q\"", "two\nlines"});
    }
    std::istringstream is(os.str());
    auto t = read_csv(is, "v-test");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == "with, comma");
    CHECK(t.rows[1][0] == "quote \"q\"");
    CHECK(t.rows[1][1] == "two\nlines");
    CHECK(t.column("b") == 1);
    CHECK_THROWS_AS(t.column("c"), InvalidArgument);
}

TEST_CASE("csv version and shape are enforced") {
    std::istringstream wrong("#other\na,b\n1,2\n");
    CHECK_THROWS_AS(read_csv(wrong, "v-test"), InvalidArgument);
    std::istringstream ragged("#v-test\na,b\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(ragged, "v-test"), InvalidArgument);
    std::istringstream none("a,b\n");
    CHECK_THROWS_AS(read_csv(none, "v-test"), InvalidArgument);
}

TEST_CASE("numbers keep 17 significant digits") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(-1.0 / 3.0) == "-0.33333333333333331");
    CHECK(std::stod(format_number(2.0 / 7.0)) == 2.0 / 7.0);
}

TEST_CASE("domain json") {
    auto d = domain_from_json(Json::parse(R"({"kind":"interval","params":{"a":-1,"b":2}})"));
    CHECK(d.kind() == "interval");
    CHECK(domain_to_json(d)["params"]["b"] == 2.0);
    CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"kind":"torus"})")), InvalidArgument);
    CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"kind":"disk","params":{"r":1}})")), InvalidArgument);
    CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"kind":"interval","params":{"a":1,"b":0}})")), InvalidArgument);
}

TEST_CASE("measure json") {
    auto m = measure_from_json(Json::parse(R"({"preset":"axis_atoms","dim":2,"weights":[1,2,3,4]})"), 1.1);
    CHECK(m.alpha() == 1.1);
    CHECK(m.atoms().size() == 4);
    auto e = measure_from_json(Json::parse(R"({"alpha":0.5,"dim":2,"atoms":[{"dir":[1,0],"w":2}],"density":{"kind":"uniform","mass":1}})"));
    CHECK(e.has_density());
    CHECK(measure_to_json(e)["atoms"].size() == 1);
    CHECK_THROWS_AS(measure_from_json(Json::parse(R"({"preset":"raw"})")), DomainError);
    CHECK_THROWS_AS(measure_from_json(Json::parse(R"({"preset":"raw","alpha":1,"colour":1})")), InvalidArgument);
}

TEST_CASE("quadrature controls json") {
    auto c = controls_from_json(Json::parse(R"({"panel_points":30,"tail_growth":0.5})"), {});
    CHECK(c.panel_points == 30);
    CHECK(c.tail_growth.value() == 0.5);
    CHECK_THROWS_AS(controls_from_json(Json::parse(R"({"panel":3})"), {}), InvalidArgument);
}
