#pragma once

#include <optional>
#include <vector>

#include "crfuchs/gaussian_rational.hpp"

namespace crfuchs {

using GRatMatrix = std::vector<std::vector<GaussianRational>>;
using GRatVector = std::vector<GaussianRational>;

struct LinearSolveResult {
    bool consistent = false;
    GRatVector particular;            // one solution (free coords zero)
    std::vector<GRatVector> kernel;   // basis of the homogeneous solution space
    std::vector<int> free_columns;    // columns without pivot
};

/// Exact Gauss-Jordan solve of A x = b over the Gaussian rationals.
inline LinearSolveResult solve_linear_system(GRatMatrix A, GRatVector b)
{
    const size_t rows = A.size();
    const size_t cols = rows ? A[0].size() : 0;
    std::vector<int> pivot_col_of_row;
    std::vector<int> pivot_row_of_col(cols, -1);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && A[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(A[p], A[r]);
        std::swap(b[p], b[r]);
        GaussianRational inv = A[r][c].inv();
        for (size_t j = c; j < cols; ++j) A[r][j] = A[r][j] * inv;
        b[r] = b[r] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            GaussianRational f = A[i][c];
            for (size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        pivot_row_of_col[c] = static_cast<int>(r);
        pivot_col_of_row.push_back(static_cast<int>(c));
        ++r;
    }
    LinearSolveResult res;
    res.consistent = true;
    for (size_t i = r; i < rows; ++i)
        if (!b[i].is_zero()) {
            res.consistent = false;
            return res;
        }
    res.particular.assign(cols, GaussianRational(0));
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_row_of_col[c] >= 0)
            res.particular[c] = b[pivot_row_of_col[c]];
        else
            res.free_columns.push_back(static_cast<int>(c));
    }
    for (int fc : res.free_columns) {
        GRatVector k(cols, GaussianRational(0));
        k[fc] = GaussianRational(1);
        for (size_t c = 0; c < cols; ++c)
            if (pivot_row_of_col[c] >= 0) k[c] = -A[pivot_row_of_col[c]][fc];
        res.kernel.push_back(std::move(k));
    }
    return res;
}

/// det(A) by fraction-free-ish Gaussian elimination (exact).
inline GaussianRational det(GRatMatrix A)
{
    const size_t n = A.size();
    GaussianRational d(1);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && A[p][c].is_zero()) ++p;
        if (p == n) return GaussianRational(0);
        if (p != c) {
            std::swap(A[p], A[c]);
            d = -d;
        }
        d *= A[c][c];
        GaussianRational inv = A[c][c].inv();
        for (size_t i = c + 1; i < n; ++i) {
            GaussianRational f = A[i][c] * inv;
            if (f.is_zero()) continue;
            for (size_t j = c; j < n; ++j) A[i][j] -= f * A[c][j];
        }
    }
    return d;
}

} // namespace crfuchs
