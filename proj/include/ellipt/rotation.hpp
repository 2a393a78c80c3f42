#pragma once

#include "ellipt/rational.hpp"

#include <cstdint>

namespace ellipt {

// A point on the rational unit circle, i.e. a plane rotation with rational
// cosine and sine. The circle identity c*c + s*s == 1 is enforced on
// construction and preserved exactly by composition, inversion and powers.
struct RationalRotation {
    Rational c; // cosine component
    Rational s; // sine component

    RationalRotation(); // identity (1, 0)
    RationalRotation(Rational cos_part, Rational sin_part);

    bool is_identity() const { return c == 1 && s == 0; }

    bool operator==(const RationalRotation& o) const = default;
};

// Angle addition: (c1 c2 - s1 s2, s1 c2 + c1 s2).
RationalRotation rot_compose(const RationalRotation& a, const RationalRotation& b);

// Rotation by the negated angle.
RationalRotation rot_inverse(const RationalRotation& r);

// t-fold composition by binary exponentiation; negative t inverts first.
RationalRotation rot_power(const RationalRotation& r, std::int64_t t);

// Angle in [0, 2*pi) as a double (0 <= result < 2*pi up to rounding).
double rotation_angle(const RationalRotation& r);

} // namespace ellipt
