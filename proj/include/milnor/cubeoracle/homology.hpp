#pragma once

#include <deque>
#include <vector>

#include "milnor/cubeoracle/complex.hpp"
#include "milnor/cubeoracle/snf.hpp"

namespace milnor {

struct HomologyResult {
    std::vector<long long> betti;                 // rank H_k, k = 0..d
    std::vector<std::vector<mpz_class>> torsion;  // divisors > 1 of the boundary into degree k

    long long euler_characteristic() const {
        long long chi = 0, sign = 1;
        for (long long b : betti) {
            chi += sign * b;
            sign = -sign;
        }
        return chi;
    }
    bool torsion_free() const {
        for (const auto& t : torsion)
            if (!t.empty()) return false;
        return true;
    }
};

namespace detail {

/// Homology of the chain complex spanned by the present cells of `s`, with
/// the cubical boundary restricted to present cells. `s` need not be closed.
inline HomologyResult chain_homology(const CubicalComplex& s, std::size_t dense_budget) {
    const std::size_t d = s.dim();
    std::vector<std::vector<std::size_t>> cells(d + 1);
    std::vector<std::size_t> pos(s.size(), 0);
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        if (!s.has(idx)) continue;
        auto& v = cells[s.cell_dim(idx)];
        pos[idx] = v.size();
        v.push_back(idx);
    }
    // rank of d_k : C_k -> C_{k-1}, k = 1..d
    std::vector<std::size_t> rank(d + 2, 0);
    HomologyResult h;
    h.betti.assign(d + 1, 0);
    h.torsion.assign(d + 1, {});
    for (std::size_t k = 1; k <= d; ++k) {
        SparseIntMatrix m;
        m.rows = cells[k - 1].size();
        m.cols.resize(cells[k].size());
        for (std::size_t j = 0; j < cells[k].size(); ++j)
            s.for_each_face(cells[k][j], [&](std::size_t f, int sign) {
                if (s.has(f)) m.cols[j][pos[f]] = sign;
            });
        SmithResult snf = sparse_smith(std::move(m), dense_budget);
        rank[k] = snf.rank;
        for (const auto& dv : snf.divisors)
            if (dv > 1) h.torsion[k - 1].push_back(dv);
    }
    for (std::size_t k = 0; k <= d; ++k)
        h.betti[k] = static_cast<long long>(cells[k].size()) - static_cast<long long>(rank[k]) -
                     static_cast<long long>(rank[k + 1]);
    return h;
}

inline void require_closed(const CubicalComplex& c) {
    for (std::size_t idx = 0; idx < c.size(); ++idx)
        if (c.has(idx))
            c.for_each_face(idx, [&](std::size_t f, int) {
                if (!c.has(f)) throw Error("cubeoracle", "complex is not closed under faces");
            });
}

}  // namespace detail

/// Integer homology straight from the boundary matrices, without reduction.
inline HomologyResult cubical_homology_direct(const CubicalComplex& c, std::size_t dense_budget = 4'000'000) {
    detail::require_closed(c);
    return detail::chain_homology(c, dense_budget);
}

/// Integer homology. One vertex per connected component is removed (each
/// accounts for a Z in H_0), then coreduction pairs are removed: a cell whose
/// only remaining face is t goes together with t. Both steps preserve
/// homology including torsion; the small remainder goes to Smith normal form.
inline HomologyResult cubical_homology(const CubicalComplex& c, std::size_t dense_budget = 4'000'000) {
    detail::require_closed(c);
    CubicalComplex s = c;
    std::vector<std::uint8_t> queued(c.size(), 0);
    std::deque<std::size_t> queue;
    auto enqueue_cofaces = [&](std::size_t idx) {
        s.for_each_coface(idx, [&](std::size_t x) {
            if (!queued[x]) {
                queued[x] = 1;
                queue.push_back(x);
            }
        });
    };
    auto drain = [&] {
        while (!queue.empty()) {
            std::size_t x = queue.front();
            queue.pop_front();
            queued[x] = 0;
            if (!s.has(x)) continue;
            std::size_t faces = 0, t = 0;
            s.for_each_face(x, [&](std::size_t f, int) {
                if (s.has(f)) {
                    ++faces;
                    t = f;
                }
            });
            if (faces == 0) {
                enqueue_cofaces(x);
            } else if (faces == 1) {
                s.set(x, false);
                s.set(t, false);
                enqueue_cofaces(t);
                enqueue_cofaces(x);
            }
        }
    };

    // Components of the original complex, found by walking edges.
    long long components = 0;
    std::vector<std::uint8_t> seen(c.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < c.size(); ++v) {
        if (!c.has(v) || c.cell_dim(v) != 0 || seen[v]) continue;
        ++components;
        seen[v] = 1;
        stack.push_back(v);
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            c.for_each_coface(u, [&](std::size_t e) {
                c.for_each_face(e, [&](std::size_t w, int) {
                    if (!seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                });
            });
        }
        s.set(v, false);
        enqueue_cofaces(v);
        drain();
    }

    HomologyResult h = detail::chain_homology(s, dense_budget);
    h.betti[0] += components;
    return h;
}

}  // namespace milnor
