#pragma once

#include "ellipt/rational.hpp"

#include <vector>

namespace ellipt {

// Dense symmetric rational matrix; set() writes both mirror entries.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(int n);

    int size() const { return n_; }
    const Rational& at(int i, int j) const;
    void set(int i, int j, Rational v);

private:
    int n_;
    std::vector<Rational> a_; // row-major n*n
};

struct PsdRankResult {
    bool is_psd;
    int rank;
};

// Exact PSD test and rank by symmetric Gaussian elimination on diagonal
// pivots. A negative pivot, or an all-zero remaining diagonal with nonzero
// residual, refutes PSD; in the latter case the rank of what is left is
// finished off by plain row elimination.
PsdRankResult exact_psd_rank(const SymmetricMatrix& m);

struct ExtremePointE3 {
    bool extreme;
    int rank;
};

// Extremality in the set of 3x3 PSD matrices with unit diagonal: extreme iff
// rank 1, or rank 2 with every off-diagonal entry strictly inside (-1, 1).
// Throws not_in_elliptope when the matrix is not PSD with unit diagonal,
// dimension_mismatch when it is not 3x3.
ExtremePointE3 extreme_point_e3(const SymmetricMatrix& m);

} // namespace ellipt
