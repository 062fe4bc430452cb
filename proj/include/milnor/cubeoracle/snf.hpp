#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "milnor/error.hpp"

namespace milnor {

using IntMatrix = std::vector<std::vector<mpz_class>>;

struct SmithResult {
    std::vector<mpz_class> divisors;  // nonzero invariant factors d_1 | d_2 | ...
    std::size_t rank = 0;
};

/// Smith normal form over Z with exact big integers. Only the invariant
/// factors are returned, not the transformation matrices.
inline SmithResult smith_normal_form(IntMatrix a) {
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (const auto& r : a)
        if (r.size() != cols) throw Error("cubeoracle", "ragged integer matrix");
    SmithResult res;
    // q = round(x / p), so the remainder x - q p has magnitude at most |p| / 2.
    auto nearest_quotient = [](const mpz_class& x, const mpz_class& p) {
        mpz_class num = 2 * x + p, den = 2 * p, q;
        if (den < 0) {
            num = -num;
            den = -den;
        }
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        return q;
    };
    for (std::size_t t = 0; t < rows && t < cols; ++t) {
        for (;;) {
            // The smallest nonzero entry of the trailing block becomes the pivot;
            // re-selecting it on every pass keeps the entries small.
            std::size_t pr = rows, pc = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (a[i][j] != 0 && (pr == rows || mpz_cmpabs(a[i][j].get_mpz_t(), a[pr][pc].get_mpz_t()) < 0)) {
                        pr = i;
                        pc = j;
                    }
            if (pr == rows) break;
            std::swap(a[t], a[pr]);
            if (pc != t)
                for (auto& r : a) std::swap(r[t], r[pc]);
            const mpz_class p = a[t][t];
            bool rest = false;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                mpz_class q = nearest_quotient(a[i][t], p);
                for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                rest = rest || a[i][t] != 0;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                mpz_class q = nearest_quotient(a[t][j], p);
                for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                rest = rest || a[t][j] != 0;
            }
            if (rest) continue;
            // Row t and column t are clear; enforce divisibility of the trailing block.
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (!mpz_divisible_p(a[i][j].get_mpz_t(), p.get_mpz_t())) {
                        for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (a[t][t] == 0) break;
        res.divisors.push_back(abs(a[t][t]));
    }
    res.rank = res.divisors.size();
    return res;
}

/// Sparse integer matrix stored by columns.
struct SparseIntMatrix {
    std::size_t rows = 0;
    std::vector<std::map<std::size_t, mpz_class>> cols;
};

/// Smith invariants of a sparse matrix: unit pivots are eliminated first
/// (each contributes a divisor 1), the remainder goes to the dense solver.
/// Throws when the dense remainder exceeds `dense_budget` entries.
inline SmithResult sparse_smith(SparseIntMatrix m, std::size_t dense_budget = 4'000'000) {
    std::vector<std::set<std::size_t>> row_cols(m.rows);
    for (std::size_t c = 0; c < m.cols.size(); ++c)
        for (const auto& [r, v] : m.cols[c]) row_cols[r].insert(c);

    std::size_t unit = 0;
    std::vector<bool> col_alive(m.cols.size(), true), row_alive(m.rows, true);
    // Process sparse columns first to limit fill-in.
    std::vector<std::size_t> order(m.cols.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return m.cols[x].size() < m.cols[y].size(); });
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t c : order) {
            if (!col_alive[c] || m.cols[c].empty()) continue;
            std::size_t best = m.rows;
            for (const auto& [r, v] : m.cols[c])
                if ((v == 1 || v == -1) && (best == m.rows || row_cols[r].size() < row_cols[best].size())) best = r;
            if (best == m.rows) continue;
            const mpz_class u = m.cols[c][best];  // unit: u^{-1} = u
            std::vector<std::size_t> others(row_cols[best].begin(), row_cols[best].end());
            for (std::size_t c2 : others) {
                if (c2 == c) continue;
                mpz_class f = m.cols[c2][best] * u;
                for (const auto& [r, v] : m.cols[c]) {
                    mpz_class& e = m.cols[c2][r];
                    e -= f * v;
                    if (e == 0) {
                        m.cols[c2].erase(r);
                        row_cols[r].erase(c2);
                    } else {
                        row_cols[r].insert(c2);
                    }
                }
            }
            // Row `best` now meets only column c; drop both.
            for (const auto& [r, v] : m.cols[c]) row_cols[r].erase(c);
            m.cols[c].clear();
            col_alive[c] = false;
            row_alive[best] = false;
            ++unit;
            progress = true;
        }
    }

    std::vector<std::size_t> live_cols, live_rows;
    for (std::size_t c = 0; c < m.cols.size(); ++c)
        if (col_alive[c] && !m.cols[c].empty()) live_cols.push_back(c);
    std::vector<std::size_t> row_pos(m.rows, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r)
        if (row_alive[r] && !row_cols[r].empty()) {
            row_pos[r] = live_rows.size();
            live_rows.push_back(r);
        }
    if (live_rows.size() * live_cols.size() > dense_budget)
        throw Error("cubeoracle",
                    "boundary matrix remainder " + std::to_string(live_rows.size()) + "x" +
                        std::to_string(live_cols.size()) + " exceeds the dense budget",
                    "collapse the complex first or lower the resolution");
    SmithResult res;
    if (!live_cols.empty()) {
        IntMatrix dense(live_rows.size(), std::vector<mpz_class>(live_cols.size(), 0));
        for (std::size_t j = 0; j < live_cols.size(); ++j)
            for (const auto& [r, v] : m.cols[live_cols[j]]) dense[row_pos[r]][j] = v;
        res = smith_normal_form(std::move(dense));
    }
    res.divisors.insert(res.divisors.begin(), unit, mpz_class(1));
    res.rank = res.divisors.size();
    return res;
}

}  // namespace milnor
