#include "fglab/graded_poly.hpp"

#include <sstream>

#include "fglab/errors.hpp"

namespace fglab {

GeneratorSet GeneratorSet::araki(long p, int m) {
    GeneratorSet g;
    Rat pw = 1;
    for (int j = 1; j <= m; ++j) {
        g.names.push_back("v" + std::to_string(j));
        mpz_class pj;
        mpz_ui_pow_ui(pj.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(j));
        g.degrees.push_back(1 - pj.get_si());
    }
    return g;
}

GradedPolynomial GradedPolynomial::constant(GeneratorSet gens, const Rat& c) {
    GradedPolynomial r(std::move(gens));
    if (!c.is_zero()) r.terms_[Exp(r.gens_.size(), 0)] = c;
    return r;
}

GradedPolynomial GradedPolynomial::generator(GeneratorSet gens, size_t index) {
    GradedPolynomial r(std::move(gens));
    if (index >= r.gens_.size()) throw input_error("generator index out of range");
    Exp e(r.gens_.size(), 0);
    e[index] = 1;
    r.terms_[e] = Rat(1);
    return r;
}

void GradedPolynomial::add_term(const Exp& e, const Rat& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

GradedPolynomial GradedPolynomial::operator-() const {
    GradedPolynomial r(gens_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

GradedPolynomial& GradedPolynomial::operator+=(const GradedPolynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

GradedPolynomial& GradedPolynomial::operator-=(const GradedPolynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b) {
    GradedPolynomial r(a.gens_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            GradedPolynomial::Exp e(ea.size());
            for (size_t i = 0; i < ea.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

GradedPolynomial GradedPolynomial::scaled(const Rat& c) const {
    GradedPolynomial r(gens_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) r.terms_[e] = v * c;
    return r;
}

GradedPolynomial GradedPolynomial::pow(unsigned k) const {
    GradedPolynomial r = constant(gens_, Rat(1));
    GradedPolynomial base = *this;
    while (k) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

long GradedPolynomial::monomial_degree(const Exp& e) const {
    long d = 0;
    for (size_t i = 0; i < e.size(); ++i) d += static_cast<long>(e[i]) * gens_.degrees[i];
    return d;
}

std::optional<long> GradedPolynomial::homogeneous_degree() const {
    if (terms_.empty()) return 0;
    std::optional<long> deg;
    for (const auto& [e, c] : terms_) {
        long d = monomial_degree(e);
        if (!deg) deg = d;
        else if (*deg != d) return std::nullopt;
    }
    return deg;
}

GradedPolynomial GradedPolynomial::kill_generators(const std::vector<size_t>& indices) const {
    std::vector<bool> kill(gens_.size(), false);
    for (size_t i : indices) kill.at(i) = true;
    GradedPolynomial r(gens_);
    for (const auto& [e, c] : terms_) {
        bool dead = false;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0 && kill[i]) { dead = true; break; }
        if (!dead) r.add_term(e, c);
    }
    return r;
}

std::string GradedPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << "*" << gens_.names[i];
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

}  // namespace fglab
