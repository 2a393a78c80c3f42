#include "ellipt/rotation.hpp"

#include "ellipt/errors.hpp"

#include <cmath>

namespace ellipt {

RationalRotation::RationalRotation() : c(1), s(0) {}

RationalRotation::RationalRotation(Rational cos_part, Rational sin_part)
    : c(std::move(cos_part)), s(std::move(sin_part)) {
    if (c * c + s * s != 1)
        throw error("rotation off the unit circle: (" + format_rational(c) + ", " +
                    format_rational(s) + ")");
}

RationalRotation rot_compose(const RationalRotation& a, const RationalRotation& b) {
    return RationalRotation(a.c * b.c - a.s * b.s, a.s * b.c + a.c * b.s);
}

RationalRotation rot_inverse(const RationalRotation& r) {
    return RationalRotation(r.c, -r.s);
}

RationalRotation rot_power(const RationalRotation& r, std::int64_t t) {
    RationalRotation base = t < 0 ? rot_inverse(r) : r;
    std::uint64_t e = t < 0 ? -static_cast<std::uint64_t>(t) : static_cast<std::uint64_t>(t);
    RationalRotation acc; // identity
    while (e > 0) {
        if (e & 1) acc = rot_compose(acc, base);
        base = rot_compose(base, base);
        e >>= 1;
    }
    return acc;
}

double rotation_angle(const RationalRotation& r) {
    double a = std::atan2(to_double(r.s), to_double(r.c));
    if (a < 0) a += 2.0 * M_PI;
    return a;
}

} // namespace ellipt
