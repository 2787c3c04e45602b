#include <random>
#include <set>

#include "doctest.h"
#include "fglab/errors.hpp"
#include "fglab/gamma.hpp"

using namespace fglab;

namespace {

ConstantsTable table_for(long p, int n, int max_codim) {
    int pn = static_cast<int>(int_pow(p, n));
    int caps = max_codim;
    FormalGroupLaw src = morava({p, n, {Rat(1)}}, caps + 2);
    ChernTower tower = build_tower(src, n, src, pn, caps, caps);
    int per = pn - 1;
    int j_max = per > 0 ? (max_codim - 1) / per : max_codim - 1;
    return compute_constants(tower, j_max);
}

CellularModule toy_module() {
    // three cells x (codim 1), y (codim 2), unit; n=1 so all gradings 0
    CellularModule mod;
    mod.p = 2;
    mod.n = 1;
    mod.cells.push_back({"one", 0, 0, false});
    mod.cells.push_back({"x", 1, 0, true});
    mod.cells.push_back({"y", 2, 0, true});
    mod.validate();
    return mod;
}

}  // namespace

TEST_CASE("pfister module shapes") {
    CellularModule m1 = pfister(1);
    CHECK(m1.cells.size() == 8);  // 4 h-cells, 4 l-cells
    CHECK(m1.dimension() == 6);
    CHECK(m1.cell("l3").tau_codim == 3);
    CHECK(m1.cell("l3").grading == 0);  // n=1: single grading
    CHECK(m1.cell("h1").tau_codim == 1);

    CellularModule m2 = pfister(2);
    CHECK(m2.cells.size() == 16);
    CHECK(m2.dimension() == 14);
    CHECK(m2.cell("l7").tau_codim == 7);
    CHECK(m2.cell("l7").grading == 1);  // 7 = 1 mod 3
    CHECK(m2.cell("h1").grading == 1);
    const ProductRule* r = m2.rule("h1", "l7");
    REQUIRE(r != nullptr);
    CHECK(r->lead_cell == "l6");
    CHECK(r->lead_coeff == Rat(1));
}

TEST_CASE("guaranteed_span: unit pivots eliminate unknowns, non-units do not") {
    CellularModule mod = toy_module();
    SUBCASE("single fully-known vector spans its Z_(p)-multiples") {
        ParametricVector v;
        v.entries["x"].known = Rat(6);
        v.grading = 0;
        ZpLattice lat = guaranteed_span(mod, {v});
        CHECK(lat.contains({{"x", Rat(6)}}));
        CHECK(lat.contains({{"x", Rat(2)}}));   // 6 = 2 * unit over Z_(2)
        CHECK_FALSE(lat.contains({{"x", Rat(1)}}));
    }
    SUBCASE("{e x + u y, e' y} with unit e, e' spans x and y") {
        ParametricVector v1, v2;
        v1.entries["x"].known = Rat(1);
        v1.entries["y"].unknowns["u"] = Rat(1);
        v2.entries["y"].known = Rat(3);
        ZpLattice lat = guaranteed_span(mod, {v1, v2});
        CHECK(lat.contains_cell("x"));
        CHECK(lat.contains_cell("y"));
    }
    SUBCASE("{2x + u y} alone guarantees nothing at x") {
        ParametricVector v;
        v.entries["x"].known = Rat(2);
        v.entries["y"].unknowns["u"] = Rat(1);
        ZpLattice lat = guaranteed_span(mod, {v});
        CHECK(lat.rank() == 0);
    }
}

TEST_CASE("guaranteed_span soundness under random instantiation") {
    CellularModule mod = toy_module();
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<long> small(-4, 4);
    for (int trial = 0; trial < 60; ++trial) {
        // random parametric vectors over cells {x, y} with params q0..q2
        std::vector<ParametricVector> vecs;
        std::vector<std::string> params = {"q0", "q1", "q2"};
        for (int v = 0; v < 3; ++v) {
            ParametricVector pv;
            for (const char* cell : {"x", "y"}) {
                Affine a;
                a.known = Rat(small(rng));
                if (rng() % 2) a.unknowns[params[rng() % 3]] = Rat(small(rng));
                if (!a.is_zero()) pv.entries[cell] = a;
            }
            vecs.push_back(pv);
        }
        ZpLattice lat = guaranteed_span(mod, vecs);
        for (int inst = 0; inst < 4; ++inst) {
            // random p-integral values for the parameters
            std::map<std::string, Rat> val;
            for (const auto& q : params) val[q] = Rat(small(rng), 1 + 2 * (rng() % 3));
            // instantiated exact span
            ZpLattice exact(2, {"one", "x", "y"});
            for (const auto& pv : vecs) {
                std::map<std::string, Rat> row;
                for (const auto& [cell, a] : pv.entries) {
                    Rat total = a.known;
                    for (const auto& [u, cc] : a.unknowns) total += cc * val[u];
                    if (!total.is_zero()) row[cell] = total;
                }
                if (!row.empty()) exact.add_row(row);
            }
            for (const auto& row : lat.rows()) CHECK(exact.contains(row));
        }
    }
}

TEST_CASE("smith valuations over Z_(p)") {
    // diag(1, 2, 8) shuffled by row operations
    std::vector<std::vector<Rat>> m = {
        {Rat(1), Rat(1), Rat(0)},
        {Rat(1), Rat(3), Rat(4)},
        {Rat(1), Rat(1), Rat(8)},
    };
    std::vector<int> dv = smith_valuations(m, 2);
    REQUIRE(dv.size() == 3);
    CHECK(dv[0] == 0);
    CHECK(dv[1] == 1);
    CHECK(dv[2] == 3);
    // rank-deficient
    std::vector<std::vector<Rat>> m2 = {{Rat(2), Rat(4)}, {Rat(1), Rat(2)}};
    std::vector<int> dv2 = smith_valuations(m2, 2);
    REQUIRE(dv2.size() == 1);
    CHECK(dv2[0] == 0);
}

TEST_CASE("op_value on the Pfister module") {
    CellularModule mod = pfister(1);
    ConstantsTable table = table_for(2, 1, 6);
    ParamGen gen;
    SUBCASE("c_2(l3) = e_2 l3 + unknowns at higher codims") {
        ParametricVector v = op_value(mod, table, "l3", {OpKind::Chern, 2}, gen);
        CHECK(v.weight == 2);
        REQUIRE(v.entries.count("l3"));
        CHECK(v.entries.at("l3").is_known());
        CHECK(is_p_unit(v.entries.at("l3").known, 2));  // e_2 unit
        REQUIRE(v.entries.count("l2"));
        CHECK_FALSE(v.entries.at("l2").is_known());
        REQUIRE(v.entries.count("l1"));
        CHECK_FALSE(v.entries.at("l1").is_known());
    }
    SUBCASE("chi(l3) has leading coefficient h_2 with v_2 = 1") {
        ParametricVector v = op_value(mod, table, "l3", {OpKind::Chi, 0}, gen);
        CHECK(v.weight == 3);  // 2 p^n - 1
        REQUIRE(v.entries.count("l3"));
        CHECK(vp(v.entries.at("l3").known, 2) == 1);
    }
    SUBCASE("operations require subvariety classes") {
        CHECK_THROWS_AS(op_value(mod, table, "h1", {OpKind::Chern, 1}, gen), input_error);
    }
}

TEST_CASE("gamma pfister n=1: free rank 1 below 2, gr^2 bounded by Z + Z/2") {
    CellularModule mod = pfister(1);
    ConstantsTable table = table_for(2, 1, 6);
    std::vector<DegreeReport> reports = graded_report(mod, table, 2);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].free_rank == 1);
    CHECK(reports[0].torsion.empty());
    CHECK(reports[1].free_rank == 1);
    CHECK(reports[1].torsion.empty());
    CHECK(reports[2].free_rank == 1);
    REQUIRE(reports[2].torsion.size() == 1);
    CHECK(reports[2].torsion[0] == "2");
    CHECK_FALSE(reports[2].coarse);
}

TEST_CASE("fully known module with unit constants has no torsion") {
    // module with exact products and a lone subvariety cell; all generators known
    CellularModule mod = toy_module();
    mod.products[{"x", "x"}] = {Rat(1), "y", false};
    mod.validate();
    ConstantsTable table = table_for(2, 1, 3);
    std::vector<DegreeReport> reports = graded_report(mod, table, 1);
    for (const auto& r : reports) CHECK(r.torsion.empty());
}

TEST_CASE("gamma generator lists are monotone in the weight bound") {
    CellularModule mod = pfister(1);
    ConstantsTable table = table_for(2, 1, 6);
    ParamGen gen;
    auto labels = [&](int m) {
        std::multiset<std::string> out;
        for (const auto& v : gamma_generators(mod, table, m, mod.dimension(), gen))
            out.insert(v.label);
        return out;
    };
    auto g1 = labels(1), g2 = labels(2), g3 = labels(3);
    // every generator admitted at weight m+1 is admitted at weight m
    for (const auto& l : g3) CHECK(g2.count(l) >= 1);
    for (const auto& l : g2) CHECK(g1.count(l) >= 1);
}

TEST_CASE("op_value kills the unit cell; m = 0 generators span everything") {
    CellularModule mod = toy_module();
    mod.cells[0].subvariety = true;  // make the unit a subvariety class
    mod.validate();
    ConstantsTable table = table_for(2, 1, 3);
    ParamGen gen;
    ParametricVector v = op_value(mod, table, "one", {OpKind::Chern, 1}, gen);
    CHECK(v.is_zero());
    CHECK(v.weight == 1);
    std::vector<ParametricVector> all = gamma_generators(mod, table, 0, 3, gen);
    CHECK(all.size() == mod.cells.size());
}

TEST_CASE("ZpLattice rank agrees with rational rank; members reduce to zero") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<long> val(-6, 6);
    std::vector<std::string> basis = {"a", "b", "c", "d"};
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<std::vector<Rat>> rows;
        ZpLattice lat(2, basis);
        for (int r = 0; r < 5; ++r) {
            std::vector<Rat> row;
            std::map<std::string, Rat> named;
            for (size_t c = 0; c < basis.size(); ++c) {
                Rat v(val(rng));
                row.push_back(v);
                if (!v.is_zero()) named[basis[c]] = v;
            }
            rows.push_back(row);
            if (!named.empty()) lat.add_row(named);
        }
        // rational rank by Gaussian elimination
        size_t rank = 0;
        std::vector<std::vector<Rat>> m = rows;
        for (size_t c = 0; c < basis.size(); ++c) {
            size_t piv = rank;
            while (piv < m.size() && m[piv][c].is_zero()) ++piv;
            if (piv == m.size()) continue;
            std::swap(m[rank], m[piv]);
            for (size_t r = 0; r < m.size(); ++r) {
                if (r == rank || m[r][c].is_zero()) continue;
                Rat mult = m[r][c] / m[rank][c];
                for (size_t cc = 0; cc < basis.size(); ++cc) m[r][cc] -= mult * m[rank][cc];
            }
            ++rank;
        }
        CHECK(lat.rank() == rank);
        // every original row and every Z_(2)-combination of two rows is a member
        for (const auto& row : rows) {
            std::map<std::string, Rat> named;
            for (size_t c = 0; c < basis.size(); ++c)
                if (!row[c].is_zero()) named[basis[c]] = row[c];
            if (!named.empty()) CHECK(lat.contains(named));
        }
        Rat k(val(rng));
        std::map<std::string, Rat> combo;
        for (size_t c = 0; c < basis.size(); ++c) {
            Rat v = rows[0][c] * Rat(3) + rows[1][c] * k;
            if (!v.is_zero()) combo[basis[c]] = v;
        }
        if (!combo.empty()) CHECK(lat.contains(combo));
    }
}

TEST_CASE("module products with exact rules associate on known parts") {
    CellularModule mod;
    mod.p = 2;
    mod.n = 1;
    mod.cells.push_back({"one", 0, 0, false});
    mod.cells.push_back({"x", 1, 0, true});
    mod.cells.push_back({"y", 2, 0, false});
    mod.cells.push_back({"z", 3, 0, false});
    mod.products[{"x", "x"}] = {Rat(1), "y", false};
    mod.products[{"x", "y"}] = {Rat(2), "z", false};
    mod.validate();
    ParamGen gen;
    ParametricVector vx;
    vx.entries["x"].known = Rat(1);
    vx.grading = 0;
    ParametricVector xy = module_product(mod, vx, vx, gen);          // = y
    ParametricVector left = module_product(mod, xy, vx, gen);        // (xx)x = 2z
    ParametricVector right = module_product(mod, vx, xy, gen);       // x(xx) = 2z
    REQUIRE(left.entries.count("z"));
    REQUIRE(right.entries.count("z"));
    CHECK(left.entries.at("z").known == Rat(2));
    CHECK(right.entries.at("z").known == Rat(2));
    CHECK(left.entries.size() == 1);
}
