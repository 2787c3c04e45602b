#include "fglab/json_io.hpp"

#include <fstream>

#include "fglab/errors.hpp"

namespace fglab {

json series_to_json(const Series& s) {
    json terms = json::array();
    for (const auto& [e, c] : s.terms()) {
        json t;
        t["exp"] = e;
        t["coef"] = c.str();
        terms.push_back(t);
    }
    json j;
    j["vars"] = s.vars();
    j["cap"] = s.cap();
    j["terms"] = terms;
    return j;
}

Series series_from_json(const json& j) {
    std::vector<std::string> vars = j.at("vars").get<std::vector<std::string>>();
    int cap = j.at("cap").get<int>();
    Series s(vars, cap);
    for (const auto& t : j.at("terms")) {
        ExpVec e = t.at("exp").get<ExpVec>();
        s.add_term(e, Rat::parse(t.at("coef").get<std::string>()));
    }
    return s;
}

FormalGroupLaw fgl_from_json(const json& j, int cap) {
    if (!j.contains("kind")) throw input_error("FGL spec needs a \"kind\"");
    std::string kind = j.at("kind").get<std::string>();
    long p = j.value("p", 2L);
    if (kind == "morava") {
        MoravaSpec spec;
        spec.p = p;
        spec.n = j.value("n", 1);
        for (const auto& a : j.at("a")) spec.a.push_back(Rat::parse(a.get<std::string>()));
        return morava(spec, cap);
    }
    if (kind == "multiplicative") {
        Rat beta = j.contains("beta") ? Rat::parse(j.at("beta").get<std::string>()) : Rat(-1);
        return multiplicative_fgl(p, beta, cap);
    }
    if (kind == "additive") return additive_fgl(p, cap);
    if (kind == "log") {
        std::vector<std::pair<unsigned, Rat>> coeffs;
        for (const auto& pair : j.at("coeffs")) {
            unsigned e = static_cast<unsigned>(std::stoul(pair.at(0).get<std::string>()));
            coeffs.push_back({e, Rat::parse(pair.at(1).get<std::string>())});
        }
        return fgl_from_log_coeffs(p, coeffs, cap);
    }
    if (kind == "araki") {
        std::vector<Rat> units;
        for (const auto& a : j.at("units")) units.push_back(Rat::parse(a.get<std::string>()));
        return fgl_from_araki_units(p, j.value("n", 1), units, cap);
    }
    throw input_error("unknown FGL kind: " + kind);
}

json fgl_show_json(const FormalGroupLaw& F) {
    json j;
    j["p"] = F.p();
    j["cap"] = F.cap();
    j["name"] = F.name();
    j["log"] = series_to_json(F.log());
    j["exp"] = series_to_json(F.exp());
    j["F"] = series_to_json(F.F());
    HeightResult h = height_mod_p(F);
    j["height"] = h.finite() ? json(h.k) : json("infinity(cap-limited)");
    j["p_typical"] = is_p_typical(F);
    return j;
}

json operation_to_json(const DiagonalOperation& op) {
    json j;
    j["lead"] = op.lead;
    j["p"] = op.p();
    j["n"] = op.n_source;
    json lam = json::object();
    for (const auto& [s, v] : op.lambda) lam[std::to_string(s)] = v.str();
    j["lambda"] = lam;
    j["caps"] = {{"arity", op.cap_arity}, {"degree", op.cap_degree}};
    j["leading_valuation"] = op.leading_valuation();
    return j;
}

CellularModule module_from_json(const json& j) {
    CellularModule mod;
    mod.p = j.at("p").get<long>();
    mod.n = j.at("n").get<int>();
    mod.iso_flag = j.value("iso_flag", false);
    for (const auto& c : j.at("cells")) {
        Cell cell;
        cell.name = c.at("name").get<std::string>();
        cell.tau_codim = c.at("codim").get<int>();
        cell.grading = c.at("grading").get<int>();
        cell.subvariety = c.value("subvariety", false);
        mod.cells.push_back(cell);
    }
    if (j.contains("products")) {
        for (const auto& pr : j.at("products")) {
            std::string a = pr.at("a").get<std::string>();
            std::string b = pr.at("b").get<std::string>();
            ProductRule rule;
            if (pr.contains("lead") && !pr.at("lead").is_null()) {
                rule.lead_coeff = Rat::parse(pr.at("lead").at("coef").get<std::string>());
                rule.lead_cell = pr.at("lead").at("cell").get<std::string>();
            }
            rule.unknown_tail = pr.value("tail", std::string("unknown")) == "unknown";
            auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
            mod.products[key] = rule;
        }
    }
    mod.validate();
    return mod;
}

json module_to_json(const CellularModule& mod) {
    json cells = json::array();
    for (const Cell& c : mod.cells) {
        cells.push_back({{"name", c.name},
                         {"codim", c.tau_codim},
                         {"grading", c.grading},
                         {"subvariety", c.subvariety}});
    }
    json products = json::array();
    for (const auto& [key, rule] : mod.products) {
        json pr;
        pr["a"] = key.first;
        pr["b"] = key.second;
        if (!rule.lead_cell.empty())
            pr["lead"] = {{"coef", rule.lead_coeff.str()}, {"cell", rule.lead_cell}};
        pr["tail"] = rule.unknown_tail ? "unknown" : "none";
        products.push_back(pr);
    }
    json j;
    j["p"] = mod.p;
    j["n"] = mod.n;
    j["iso_flag"] = mod.iso_flag;
    j["cells"] = cells;
    j["products"] = products;
    return j;
}

json reports_to_json(const std::vector<DegreeReport>& reports) {
    json out = json::array();
    for (const auto& r : reports) {
        json j;
        j["degree"] = r.degree;
        j["free_rank"] = r.free_rank;
        j["torsion"] = r.torsion;
        j["generators_used"] = r.generators_used;
        j["tau_window_cells"] = r.tau_window_cells;
        if (r.coarse) j["coarse"] = true;
        out.push_back(j);
    }
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace fglab
