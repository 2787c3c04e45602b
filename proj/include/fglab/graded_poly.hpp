#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fglab/rational.hpp"

namespace fglab {

// Variable names with integer degrees shared by a family of polynomials.
struct GeneratorSet {
    std::vector<std::string> names;
    std::vector<long> degrees;

    size_t size() const { return names.size(); }
    bool operator==(const GeneratorSet&) const = default;

    // v_1..v_m with the topologist convention deg v_j = 1 - p^j.
    static GeneratorSet araki(long p, int m);
};

// Sparse polynomial in named generators over Rat.  No explicit zeros stored.
class GradedPolynomial {
public:
    using Exp = std::vector<unsigned>;

    GradedPolynomial() = default;
    explicit GradedPolynomial(GeneratorSet gens) : gens_(std::move(gens)) {}

    static GradedPolynomial constant(GeneratorSet gens, const Rat& c);
    static GradedPolynomial generator(GeneratorSet gens, size_t index);

    const GeneratorSet& gens() const { return gens_; }
    const std::map<Exp, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exp& e, const Rat& c);

    GradedPolynomial operator-() const;
    GradedPolynomial& operator+=(const GradedPolynomial& o);
    GradedPolynomial& operator-=(const GradedPolynomial& o);
    friend GradedPolynomial operator+(GradedPolynomial a, const GradedPolynomial& b) { return a += b; }
    friend GradedPolynomial operator-(GradedPolynomial a, const GradedPolynomial& b) { return a -= b; }
    friend GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b);
    GradedPolynomial& operator*=(const GradedPolynomial& o) { return *this = *this * o; }

    GradedPolynomial scaled(const Rat& c) const;
    GradedPolynomial pow(unsigned k) const;

    bool operator==(const GradedPolynomial& o) const {
        return gens_ == o.gens_ && terms_ == o.terms_;
    }

    // Generator-degree of one monomial.
    long monomial_degree(const Exp& e) const;

    // Degree when homogeneous, nullopt otherwise (zero polynomial: degree 0).
    std::optional<long> homogeneous_degree() const;

    // Image under sending the listed generators to zero.
    GradedPolynomial kill_generators(const std::vector<size_t>& indices) const;

    std::string str() const;

private:
    GeneratorSet gens_;
    std::map<Exp, Rat> terms_;
};

}  // namespace fglab
