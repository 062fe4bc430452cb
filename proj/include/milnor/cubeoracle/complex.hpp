#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "milnor/error.hpp"
#include "milnor/polyring.hpp"

namespace milnor {

inline constexpr std::size_t kMaxCubeDim = 4;
using CellCoord = std::array<std::size_t, kMaxCubeDim>;

/// Face-closed cubical complex on the grid partitioning [-delta, delta]^d into
/// N^d top cubes. Cells live on the doubled grid {0..2N}^d: an odd coordinate
/// is a nondegenerate interval, an even one a grid point, so the cell
/// dimension is the number of odd coordinates.
class CubicalComplex {
public:
    CubicalComplex() = default;
    CubicalComplex(std::size_t d, std::size_t n) : d_(d), n_(n), side_(2 * n + 1) {
        if (d == 0 || d > kMaxCubeDim) throw Error("cubeoracle", "ambient dimension must be in [1, 4]");
        std::size_t total = 1;
        for (std::size_t i = 0; i < d; ++i) {
            stride_[i] = total;
            total *= side_;
        }
        cells_.assign(total, 0);
    }

    std::size_t dim() const { return d_; }
    std::size_t resolution() const { return n_; }
    std::size_t side() const { return side_; }
    std::size_t size() const { return cells_.size(); }
    std::size_t stride(std::size_t axis) const { return stride_[axis]; }

    bool has(std::size_t idx) const { return cells_[idx] != 0; }
    void set(std::size_t idx, bool on) { cells_[idx] = on ? 1 : 0; }

    std::size_t index(const CellCoord& c) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < d_; ++i) idx += c[i] * stride_[i];
        return idx;
    }
    CellCoord coords(std::size_t idx) const {
        CellCoord c{};
        for (std::size_t i = 0; i < d_; ++i) {
            c[i] = idx % side_;
            idx /= side_;
        }
        return c;
    }
    std::size_t cell_dim(std::size_t idx) const {
        std::size_t k = 0;
        for (std::size_t i = 0; i < d_; ++i) {
            k += (idx % side_) & 1;
            idx /= side_;
        }
        return k;
    }

    /// Adds a cell together with all of its faces.
    void add_closed(const CellCoord& c) {
        std::size_t base = index(c);
        std::vector<std::size_t> todo{base};
        for (std::size_t i = 0; i < d_; ++i) {
            if (c[i] % 2 == 0) continue;
            std::size_t k = todo.size();
            for (std::size_t j = 0; j < k; ++j) {
                todo.push_back(todo[j] - stride_[i]);
                todo.push_back(todo[j] + stride_[i]);
            }
        }
        for (std::size_t idx : todo) cells_[idx] = 1;
    }

    /// Present cells per dimension.
    std::vector<std::size_t> cell_counts() const {
        std::vector<std::size_t> counts(d_ + 1, 0);
        CellCoord c{};
        std::size_t k = 0;  // number of odd coordinates of c
        for (std::size_t idx = 0; idx < cells_.size(); ++idx) {
            if (cells_[idx]) ++counts[k];
            for (std::size_t i = 0; i < d_; ++i) {
                k -= c[i] & 1;
                if (++c[i] < side_) {
                    k += c[i] & 1;
                    break;
                }
                c[i] = 0;
            }
        }
        return counts;
    }

    std::size_t cell_count() const {
        std::size_t s = 0;
        for (auto v : cells_) s += v;
        return s;
    }

    /// Present cells whose closure contains `idx` one dimension up.
    template <class Fn>
    void for_each_coface(std::size_t idx, Fn&& fn) const {
        CellCoord c = coords(idx);
        for (std::size_t i = 0; i < d_; ++i) {
            if (c[i] % 2 != 0) continue;
            if (c[i] > 0 && cells_[idx - stride_[i]]) fn(idx - stride_[i]);
            if (c[i] + 1 < side_ && cells_[idx + stride_[i]]) fn(idx + stride_[i]);
        }
    }

    /// Codimension-one faces with their incidence signs (all faces exist in a
    /// closed complex). The boundary is sum_j (-1)^j (upper_j - lower_j) over
    /// the odd coordinates j in increasing order.
    template <class Fn>
    void for_each_face(std::size_t idx, Fn&& fn) const {
        CellCoord c = coords(idx);
        int sign = 1;
        for (std::size_t i = 0; i < d_; ++i) {
            if (c[i] % 2 == 0) continue;
            fn(idx + stride_[i], sign);
            fn(idx - stride_[i], -sign);
            sign = -sign;
        }
    }

    friend bool operator==(const CubicalComplex&, const CubicalComplex&) = default;

private:
    std::size_t d_ = 0;
    std::size_t n_ = 0;
    std::size_t side_ = 1;
    std::array<std::size_t, kMaxCubeDim> stride_{};
    std::vector<std::uint8_t> cells_;
};

inline long long euler_characteristic(const CubicalComplex& c) {
    long long chi = 0, sign = 1;
    for (std::size_t k : c.cell_counts()) {
        chi += sign * static_cast<long long>(k);
        sign = -sign;
    }
    return chi;
}

enum class CubeMode { Center, Interval };

inline const char* to_string(CubeMode m) { return m == CubeMode::Center ? "center" : "interval"; }

/// Sublevel band {a <= g <= b} inside the closed ball of radius delta, sampled on N^d cubes.
struct RegionSpec {
    Polynomial g;
    double a = 0;
    double b = 0;
    double delta = 1;
    std::size_t resolution = 16;
};

inline constexpr std::size_t kMaxTopCubes = 20'000'000;

/// Worker count for cube classification: MILNOR_WORKERS if set, otherwise
/// the available hardware parallelism.
inline unsigned oracle_workers() {
    if (const char* env = std::getenv("MILNOR_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

inline CubicalComplex build_region_complex(const RegionSpec& region, CubeMode mode = CubeMode::Center,
                                           std::size_t max_top_cubes = kMaxTopCubes) {
    const std::size_t d = region.g.nvars(), n = region.resolution;
    if (d == 0 || d > kMaxCubeDim) throw Error("cubeoracle", "region polynomial must have 1 to 4 variables");
    if (n < 4) throw Error("cubeoracle", "grid resolution must be at least 4");
    if (!(region.a <= region.b)) throw Error("cubeoracle", "level window [a, b] is empty");
    if (!(region.delta > 0)) throw Error("cubeoracle", "ball radius must be positive");
    std::size_t top = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (top > max_top_cubes / n) top = max_top_cubes + 1;
        else top *= n;
    }
    if (top > max_top_cubes)
        throw Error("cubeoracle", "N^d exceeds the top-cube budget of " + std::to_string(max_top_cubes),
                    "lower the resolution");

    const double delta = region.delta, h = 2 * delta / static_cast<double>(n);
    const FastEvaluator fast(region.g);
    const Interval ia = Interval(region.a), ib = Interval(region.b);
    const Interval d2 = sqr(Interval(delta));

    // Classification writes one byte per top cube, indexed independently.
    std::vector<std::uint8_t> keep(top, 0);
    auto classify = [&](std::size_t begin, std::size_t end) {
        std::array<std::size_t, kMaxCubeDim> ic{};
        std::vector<double> x(d);
        IntervalBox box(d);
        for (std::size_t t = begin; t < end; ++t) {
            std::size_t r = t;
            for (std::size_t i = 0; i < d; ++i) {
                ic[i] = r % n;
                r /= n;
            }
            if (mode == CubeMode::Center) {
                double r2 = 0;
                for (std::size_t i = 0; i < d; ++i) {
                    x[i] = -delta + (static_cast<double>(ic[i]) + 0.5) * h;
                    r2 += x[i] * x[i];
                }
                if (r2 > delta * delta) continue;
                double v = fast(x);
                keep[t] = region.a <= v && v <= region.b;
            } else {
                for (std::size_t i = 0; i < d; ++i) {
                    double lo = -delta + static_cast<double>(ic[i]) * h;
                    double hi = ic[i] + 1 == n ? delta : -delta + static_cast<double>(ic[i] + 1) * h;
                    box[i] = Interval(rounding::down(lo), rounding::up(hi));
                }
                if (norm2(box).lo() > d2.hi()) continue;
                Interval v = region.g.evaluate(std::span<const Interval>(box));
                keep[t] = v.hi() >= ia.lo() && v.lo() <= ib.hi();
            }
        }
    };
    unsigned workers = std::min<std::size_t>(oracle_workers(), std::max<std::size_t>(1, top / 4096));
    if (workers <= 1) {
        classify(0, top);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (top + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t b = w * chunk, e = std::min(top, b + chunk);
            if (b < e) pool.emplace_back(classify, b, e);
        }
        for (auto& th : pool) th.join();
    }

    CubicalComplex cx(d, n);
    for (std::size_t t = 0; t < top; ++t) {
        if (!keep[t]) continue;
        CellCoord c{};
        std::size_t r = t;
        for (std::size_t i = 0; i < d; ++i) {
            c[i] = 2 * (r % n) + 1;
            r /= n;
        }
        cx.add_closed(c);
    }
    return cx;
}

/// Removes free-face pairs until none remain. A k-cell with exactly one
/// (k+1)-coface is removed together with that coface.
[[nodiscard]] inline CubicalComplex collapse(CubicalComplex c) {
    std::vector<std::size_t> work;
    for (std::size_t idx = c.size(); idx-- > 0;)
        if (c.has(idx)) work.push_back(idx);
    while (!work.empty()) {
        std::size_t idx = work.back();
        work.pop_back();
        if (!c.has(idx)) continue;
        std::size_t cofaces = 0, sigma = 0;
        c.for_each_coface(idx, [&](std::size_t s) {
            ++cofaces;
            sigma = s;
        });
        if (cofaces != 1) continue;
        c.set(idx, false);
        c.set(sigma, false);
        c.for_each_face(sigma, [&](std::size_t f, int) {
            if (c.has(f)) work.push_back(f);
        });
        c.for_each_face(idx, [&](std::size_t f, int) {
            if (c.has(f)) work.push_back(f);
        });
    }
    return c;
}

}  // namespace milnor
