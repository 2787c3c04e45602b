#include "fglab/series.hpp"

namespace fglab {

Series reverse_series(const Series& f) {
    if (f.nvars() != 1) throw input_error("reverse needs a univariate series");
    if (!f.constant_term().is_zero()) throw input_error("reverse needs f(0) = 0");
    Rat lin = f.coeff1(1);
    if (lin.is_zero()) throw input_error("reverse needs invertible linear coefficient");
    const int cap = f.cap();
    Series g(f.vars(), cap);
    g.set_coeff1(1, lin.inverse());
    // Solve f(g) = x term by term: the x^k coefficient of f(g) is linear in g_k.
    for (int k = 2; k <= cap; ++k) {
        Series fg = compose1(f.truncated(k), g.truncated(k));
        Rat defect = fg.coeff1(static_cast<unsigned>(k));
        if (!defect.is_zero()) g.set_coeff1(static_cast<unsigned>(k), -defect / lin);
    }
    // Verify both compositions close.
    Series x = Series::variable(f.vars(), cap, 0);
    if (!(compose1(f, g) == x) || !(compose1(g, f) == x))
        throw claim_error("series reversion failed to verify");
    return g;
}

Series symmetric_product_expand(const Series& f, int l, unsigned D) {
    if (f.nvars() != 1) throw input_error("symmetric_product_expand needs univariate f");
    if (!f.constant_term().is_zero()) throw input_error("f(0) must be 0");
    if (l < 1) throw input_error("arity must be >= 1");
    if (D > static_cast<unsigned>(f.cap()))
        throw cap_error("requested degree exceeds the series cap");
    std::vector<std::string> zvars;
    for (int j = 1; j <= l; ++j) zvars.push_back("z" + std::to_string(j));
    Series out(zvars, static_cast<int>(D));
    // Choose one exponent of f per variable; keep tuples of total degree D.
    std::vector<std::pair<unsigned, Rat>> supp;
    for (const auto& [e, c] : f.terms()) supp.push_back({e[0], c});
    ExpVec pick(static_cast<size_t>(l), 0);
    std::function<void(int, unsigned, Rat)> rec = [&](int var, unsigned left, Rat acc) {
        if (var == l) {
            if (left == 0) out.add_term(pick, acc);
            return;
        }
        unsigned remaining_min = static_cast<unsigned>(l - var - 1);  // each later factor >= degree 1
        for (const auto& [d, c] : supp) {
            if (d > left || left - d < remaining_min) continue;
            pick[static_cast<size_t>(var)] = d;
            rec(var + 1, left - d, acc * c);
        }
        pick[static_cast<size_t>(var)] = 0;
    };
    rec(0, D, Rat(1));
    return out;
}

}  // namespace fglab
