#pragma once

#include <optional>
#include <vector>

#include "fglab/rational.hpp"

namespace fglab {

// The set { x : v_p(x - center) >= radius_exponent }.  Two balls are either
// disjoint or nested, so finite intersections are again balls (or empty).
struct PadicBall {
    Rat center;
    long radius_exponent = 0;

    bool contains(const Rat& x, long p) const {
        return vp(x - center, p) >= radius_exponent;
    }
};

// Exact intersection of a nonempty family; nullopt when inconsistent.
std::optional<PadicBall> ball_intersect(const std::vector<PadicBall>& balls, long p);

std::optional<PadicBall> ball_intersect(const std::optional<PadicBall>& a,
                                        const PadicBall& b, long p);

// Deterministic representative: the truncation of the p-adic expansion of the
// center strictly below the radius exponent, i.e. the unique member of the
// form sum_{nu <= j < k} c_j p^j with digits in [0, p).  Returns 0 when the
// ball contains 0.
Rat canonical_pick(const PadicBall& ball, long p);

}  // namespace fglab
