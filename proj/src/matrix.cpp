#include "ellipt/matrix.hpp"

#include "ellipt/errors.hpp"

#include <utility>

namespace ellipt {

SymmetricMatrix::SymmetricMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, Rational(0)) {
    if (n <= 0) throw dimension_mismatch("matrix size must be positive");
}

const Rational& SymmetricMatrix::at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
}

void SymmetricMatrix::set(int i, int j, Rational v) {
    a_[static_cast<std::size_t>(i) * n_ + j] = v;
    a_[static_cast<std::size_t>(j) * n_ + i] = std::move(v);
}

PsdRankResult exact_psd_rank(const SymmetricMatrix& m) {
    const int n = m.size();
    std::vector<std::vector<Rational>> w(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w[i][j] = m.at(i, j);

    std::vector<bool> active(n, true);
    bool is_psd = true;
    int rank = 0;

    for (;;) {
        int piv = -1;
        for (int i = 0; i < n; ++i)
            if (active[i] && w[i][i] != 0) { piv = i; break; }
        if (piv < 0) break;
        if (w[piv][piv] < 0) is_psd = false;
        ++rank;
        // Schur complement step on the active block.
        const Rational p = w[piv][piv];
        for (int i = 0; i < n; ++i) {
            if (!active[i] || i == piv || w[i][piv] == 0) continue;
            const Rational f = w[i][piv] / p;
            for (int j = 0; j < n; ++j)
                if (active[j] && j != piv) w[i][j] -= f * w[piv][j];
        }
        active[piv] = false;
    }

    // All remaining diagonal entries are zero. Any nonzero residual means the
    // matrix is indefinite; its rank contribution comes from row elimination.
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
        if (active[i]) rest.push_back(i);
    bool residual = false;
    for (int i : rest)
        for (int j : rest)
            if (w[i][j] != 0) residual = true;
    if (!residual) return {is_psd, rank};

    is_psd = false;
    const int k = static_cast<int>(rest.size());
    std::vector<std::vector<Rational>> b(k, std::vector<Rational>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) b[i][j] = w[rest[i]][rest[j]];
    int row = 0;
    for (int col = 0; col < k && row < k; ++col) {
        int sel = -1;
        for (int i = row; i < k; ++i)
            if (b[i][col] != 0) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(b[sel], b[row]);
        for (int i = row + 1; i < k; ++i) {
            if (b[i][col] == 0) continue;
            const Rational f = b[i][col] / b[row][col];
            for (int j = col; j < k; ++j) b[i][j] -= f * b[row][j];
        }
        ++row;
        ++rank;
    }
    return {is_psd, rank};
}

ExtremePointE3 extreme_point_e3(const SymmetricMatrix& m) {
    if (m.size() != 3) throw dimension_mismatch("extreme_point_e3 wants a 3x3 matrix");
    for (int i = 0; i < 3; ++i)
        if (m.at(i, i) != 1) throw not_in_elliptope("diagonal entry != 1");
    const auto pr = exact_psd_rank(m);
    if (!pr.is_psd) throw not_in_elliptope("matrix is not PSD");
    if (pr.rank == 1) return {true, 1};
    if (pr.rank == 2) {
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const Rational& v = m.at(i, j);
                if (v >= 1 || v <= -1) return {false, 2};
            }
        return {true, 2};
    }
    return {false, pr.rank};
}

} // namespace ellipt
