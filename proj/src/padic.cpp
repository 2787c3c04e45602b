#include "fglab/padic.hpp"

#include "fglab/errors.hpp"

namespace fglab {

std::optional<PadicBall> ball_intersect(const std::optional<PadicBall>& a,
                                        const PadicBall& b, long p) {
    if (!a) return std::nullopt;
    // Order so that b has the larger (tighter) radius exponent.
    const PadicBall& outer = (a->radius_exponent <= b.radius_exponent) ? *a : b;
    const PadicBall& inner = (a->radius_exponent <= b.radius_exponent) ? b : *a;
    if (outer.contains(inner.center, p)) return inner;
    return std::nullopt;
}

std::optional<PadicBall> ball_intersect(const std::vector<PadicBall>& balls, long p) {
    if (balls.empty()) throw input_error("ball_intersect on empty family");
    std::optional<PadicBall> acc = balls.front();
    for (size_t i = 1; i < balls.size() && acc; ++i) acc = ball_intersect(acc, balls[i], p);
    return acc;
}

Rat canonical_pick(const PadicBall& ball, long p) {
    require_prime(p);
    const long k = ball.radius_exponent;
    long nu = vp(ball.center, p);
    if (nu >= k) return Rat(0);  // 0 is in the ball
    Rat r = ball.center;
    Rat y = 0;
    for (long j = nu; j < k; ++j) {
        if (r.is_zero()) break;
        long d = residue_mod_p(r * p_power(p, -j), p);
        if (d != 0) {
            Rat term = Rat(d) * p_power(p, j);
            y += term;
            r -= term;
        }
    }
    return y;
}

}  // namespace fglab
