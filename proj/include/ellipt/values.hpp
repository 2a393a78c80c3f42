#pragma once

#include "ellipt/graph.hpp"
#include "ellipt/rational.hpp"
#include "ellipt/rotation.hpp"

#include <vector>

namespace ellipt {

// Per-edge rational data aligned with a graph's edge list. Cosine mode keeps
// values in [-1, 1]; distance mode keeps squared distances >= 0.
struct PartialVector {
    enum class Mode { Cosine, Distance };
    Mode mode = Mode::Cosine;
    std::vector<Rational> values;
};

// Validates range and length against g; throws on violation.
void validate_partial_vector(const Graph& g, const PartialVector& x);

// Per-edge arc length in units of pi, each in [0, 1]. This is the coordinate
// system of the cycle inequalities; x = cos(pi * a) recovers the cosine.
struct AngleVector {
    std::vector<double> a;
};

AngleVector angles_from_cosines(const Graph& g, const PartialVector& x);
AngleVector angles_from_rotations(const std::vector<RationalRotation>& rot);

// Per-edge angle or length weights for the signing testers. Exact rotations
// carry (cos d, sin d) on the rational unit circle; exact lengths carry the
// weight itself as a rational; float carries doubles (radians or lengths,
// depending on the consumer).
struct EdgeAngles {
    enum class Mode { ExactRotation, ExactLength, Float };
    Mode mode = Mode::Float;
    std::vector<RationalRotation> rotations;
    std::vector<Rational> lengths;
    std::vector<double> values;

    int size() const {
        switch (mode) {
            case Mode::ExactRotation: return static_cast<int>(rotations.size());
            case Mode::ExactLength: return static_cast<int>(lengths.size());
            default: return static_cast<int>(values.size());
        }
    }

    static EdgeAngles from_rotations(std::vector<RationalRotation> r) {
        EdgeAngles d;
        d.mode = Mode::ExactRotation;
        d.rotations = std::move(r);
        return d;
    }
    static EdgeAngles from_lengths(std::vector<Rational> l) {
        EdgeAngles d;
        d.mode = Mode::ExactLength;
        d.lengths = std::move(l);
        return d;
    }
    static EdgeAngles from_floats(std::vector<double> v) {
        EdgeAngles d;
        d.mode = Mode::Float;
        d.values = std::move(v);
        return d;
    }
};

void validate_edge_angles(const Graph& g, const EdgeAngles& d);

// +1/-1 per edge, aligned with the edge list.
struct SignVector {
    std::vector<int> sign;
};

} // namespace ellipt
