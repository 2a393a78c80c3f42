#pragma once

#include <stdexcept>
#include <string>

namespace ellipt {

// Base for all domain errors so callers can catch one thing.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct not_in_elliptope : error {
    explicit not_in_elliptope(const std::string& msg) : error(msg) {}
};

struct not_a_clique : error {
    explicit not_a_clique(const std::string& msg) : error(msg) {}
};

struct not_k4_minor_free : error {
    explicit not_k4_minor_free(const std::string& msg) : error(msg) {}
};

// A float-mode decision landed within tolerance of the accept/reject boundary.
struct tolerance_ambiguous : error {
    explicit tolerance_ambiguous(const std::string& msg) : error(msg) {}
};

// Search or enumeration exceeded its configured budget.
struct resource_limit : error {
    explicit resource_limit(const std::string& msg) : error(msg) {}
};

struct dimension_mismatch : error {
    explicit dimension_mismatch(const std::string& msg) : error(msg) {}
};

// Gram values on a shared clique disagree between two witnesses.
struct shared_mismatch : error {
    explicit shared_mismatch(const std::string& msg) : error(msg) {}
};

struct bad_weights : error {
    explicit bad_weights(const std::string& msg) : error(msg) {}
};

struct block_not_extreme : error {
    explicit block_not_extreme(const std::string& msg) : error(msg) {}
};

// Malformed textual input (JSON schema, rational syntax, graph encoding).
struct parse_error : error {
    explicit parse_error(const std::string& msg) : error(msg) {}
};

} // namespace ellipt
