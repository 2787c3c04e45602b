#include <random>

#include "doctest.h"
#include "fglab/errors.hpp"
#include "fglab/json_io.hpp"

using namespace fglab;

TEST_CASE("rational serialization is bit-exact") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long> num(-100000, 100000), den(1, 100000);
    for (int t = 0; t < 300; ++t) {
        Rat r(num(rng), den(rng));
        CHECK(Rat::parse(r.str()) == r);
    }
}

TEST_CASE("series JSON round-trip, terms sorted lexicographically") {
    Series s({"x", "y"}, 5);
    s.set_term({2, 1}, Rat(3, 7));
    s.set_term({0, 1}, Rat(-1));
    s.set_term({1, 0}, Rat(5));
    json j = series_to_json(s);
    // lexicographic order of exponent vectors
    REQUIRE(j["terms"].size() == 3);
    CHECK(j["terms"][0]["exp"] == json::array({0, 1}));
    CHECK(j["terms"][1]["exp"] == json::array({1, 0}));
    CHECK(j["terms"][2]["exp"] == json::array({2, 1}));
    Series back = series_from_json(j);
    CHECK(back == s);
}

TEST_CASE("FGL specs parse for every kind") {
    json morava_spec = {{"p", 2}, {"kind", "morava"}, {"n", 1}, {"a", {"1", "1", "1"}}};
    FormalGroupLaw F = fgl_from_json(morava_spec, 8);
    CHECK(F.p() == 2);
    CHECK(height_mod_p(F).k == 1);

    // unspecified a_i default to the last given value
    json short_a = {{"p", 3}, {"kind", "morava"}, {"n", 1}, {"a", {"1"}}};
    FormalGroupLaw G = fgl_from_json(short_a, 28);
    CHECK(G.log().coeff1(27) == Rat(1, 27));

    json mult = {{"p", 2}, {"kind", "multiplicative"}, {"beta", "-1"}};
    FormalGroupLaw M = fgl_from_json(mult, 6);
    CHECK(M.F().coefficient({1, 1}) == Rat(-1));

    json add = {{"p", 5}, {"kind", "additive"}};
    CHECK(fgl_from_json(add, 6).log() == Series::variable({"x"}, 6, 0));

    json bylog = {{"p", 2}, {"kind", "log"},
                  {"coeffs", json::array({json::array({"1", "1"}), json::array({"2", "1/2"})})}};
    FormalGroupLaw L = fgl_from_json(bylog, 6);
    CHECK(L.log().coeff1(2) == Rat(1, 2));

    json bad = {{"p", 2}, {"kind", "frobnitz"}};
    CHECK_THROWS_AS(fgl_from_json(bad, 4), input_error);
}

TEST_CASE("operation lambda table schema") {
    FormalGroupLaw F = morava({2, 1, {Rat(1)}}, 8);
    SolveResult r = solve_generator(F, F, 1, 2, 6, 8);
    REQUIRE(r.ok);
    json j = operation_to_json(r.op);
    CHECK(j["lead"] == 2);
    CHECK(j["p"] == 2);
    CHECK(j["n"] == 1);
    CHECK(j["caps"]["arity"] == 6);
    CHECK(j["caps"]["degree"] == 8);
    CHECK(j["leading_valuation"] == 1);
    CHECK(j["lambda"].contains("0"));
    CHECK(Rat::parse(j["lambda"]["0"].get<std::string>()) == r.op.leading_coefficient());
}

TEST_CASE("variety JSON round-trip and validation") {
    CellularModule mod = pfister(1);
    json j = module_to_json(mod);
    CellularModule back = module_from_json(j);
    CHECK(back.cells.size() == mod.cells.size());
    CHECK(back.dimension() == 6);
    CHECK(back.iso_flag == mod.iso_flag);
    const ProductRule* r = back.rule("h1", "l3");
    REQUIRE(r != nullptr);
    CHECK(r->lead_cell == "l2");

    // invariant violations rejected
    json broken = j;
    broken["cells"][0]["codim"] = 1;  // removes the unit cell
    CHECK_THROWS_AS(module_from_json(broken), input_error);
}

TEST_CASE("spec example literal: variety JSON fragment") {
    json j = json::parse(R"({
        "p": 2, "n": 1,
        "cells": [
            {"name": "one", "codim": 0, "grading": 0, "subvariety": false},
            {"name": "h1", "codim": 1, "grading": 0, "subvariety": false},
            {"name": "l3", "codim": 3, "grading": 0, "subvariety": true},
            {"name": "l2", "codim": 4, "grading": 0, "subvariety": true}
        ],
        "products": [
            {"a": "h1", "b": "l3", "lead": {"coef": "1", "cell": "l2"}, "tail": "unknown"}
        ],
        "iso_flag": true})");
    CellularModule mod = module_from_json(j);
    CHECK(mod.iso_flag);
    CHECK(mod.cell("l3").subvariety);
    const ProductRule* r = mod.rule("h1", "l3");
    REQUIRE(r != nullptr);
    CHECK(r->lead_coeff == Rat(1));
    CHECK(r->unknown_tail);
}

TEST_CASE("report JSON schema") {
    CellularModule mod = pfister(1);
    FormalGroupLaw src = morava({2, 1, {Rat(1)}}, 8);
    ChernTower tower = build_tower(src, 1, src, 2, 6, 6);
    ConstantsTable table = compute_constants(tower, 5);
    std::vector<DegreeReport> reports = graded_report(mod, table, 2);
    json j = reports_to_json(reports);
    REQUIRE(j.size() == 3);
    CHECK(j[2]["free_rank"] == 1);
    CHECK(j[2]["torsion"] == json::array({"2"}));
    CHECK(j[2].contains("generators_used"));
}
