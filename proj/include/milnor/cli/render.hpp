#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "milnor/certfind.hpp"
#include "milnor/error.hpp"
#include "milnor/polyring.hpp"

namespace milnor::cli {

using Point2 = std::array<double, 2>;
using Polyline = std::vector<Point2>;

/// Polylines of {f = level} inside the closed disc of radius delta, from
/// marching squares on a grid of `cells` x `cells` squares.
inline std::vector<Polyline> level_curves(const Polynomial& f, double level, double delta, std::size_t cells = 256) {
    if (f.nvars() != 2) throw Error("cli", "level curves need exactly two variables");
    const std::size_t g = cells;
    const double h = 2 * delta / double(g);
    FastEvaluator ev(f);
    std::vector<double> v((g + 1) * (g + 1));
    auto at = [&](std::size_t i, std::size_t j) -> double& { return v[i * (g + 1) + j]; };
    auto coord = [&](std::size_t i) { return -delta + h * double(i); };
    for (std::size_t i = 0; i <= g; ++i)
        for (std::size_t j = 0; j <= g; ++j) {
            double p[2] = {coord(i), coord(j)};
            at(i, j) = ev(std::span<const double>(p, 2)) - level;
        }

    // Edge keys: 2 * (i * (g + 1) + j) for the edge (i,j)-(i+1,j), +1 for (i,j)-(i,j+1).
    auto hkey = [&](std::size_t i, std::size_t j) { return 2 * (i * (g + 1) + j); };
    auto vkey = [&](std::size_t i, std::size_t j) { return 2 * (i * (g + 1) + j) + 1; };
    auto crossing = [&](std::size_t key) -> Point2 {
        std::size_t base = key / 2, i = base / (g + 1), j = base % (g + 1);
        std::size_t i2 = i + (key % 2 == 0), j2 = j + (key % 2 == 1);
        double a = at(i, j), b = at(i2, j2), s = a / (a - b);
        return {coord(i) + s * (coord(i2) - coord(i)), coord(j) + s * (coord(j2) - coord(j))};
    };

    std::map<std::size_t, std::vector<std::size_t>> adj;
    auto link = [&](std::size_t a, std::size_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) {
            bool bl = at(i, j) > 0, br = at(i + 1, j) > 0, tr = at(i + 1, j + 1) > 0, tl = at(i, j + 1) > 0;
            std::size_t bottom = hkey(i, j), top = hkey(i, j + 1), left = vkey(i, j), right = vkey(i + 1, j);
            std::vector<std::size_t> e;
            if (bl != br) e.push_back(bottom);
            if (br != tr) e.push_back(right);
            if (tr != tl) e.push_back(top);
            if (tl != bl) e.push_back(left);
            if (e.size() == 2) {
                link(e[0], e[1]);
            } else if (e.size() == 4) {
                double p[2] = {coord(i) + h / 2, coord(j) + h / 2};
                bool center = ev(std::span<const double>(p, 2)) - level > 0;
                if (center == bl) {
                    link(bottom, right);
                    link(left, top);
                } else {
                    link(left, bottom);
                    link(top, right);
                }
            }
        }

    // Chain edge keys into grid polylines: open chains from their ends first, then cycles.
    std::vector<std::vector<std::size_t>> chains;
    std::map<std::size_t, bool> seen;
    auto walk = [&](std::size_t start) {
        std::vector<std::size_t> chain{start};
        seen[start] = true;
        std::size_t cur = start;
        for (;;) {
            std::size_t next = SIZE_MAX;
            for (std::size_t nb : adj[cur])
                if (!seen[nb]) {
                    next = nb;
                    break;
                }
            if (next == SIZE_MAX) {
                for (std::size_t nb : adj[cur])
                    if (nb == start && chain.size() > 2) chain.push_back(start);
                break;
            }
            seen[next] = true;
            chain.push_back(next);
            cur = next;
        }
        chains.push_back(std::move(chain));
    };
    for (const auto& [k, nb] : adj)
        if (nb.size() == 1 && !seen[k]) walk(k);
    for (const auto& [k, nb] : adj)
        if (!seen[k]) walk(k);

    // Clip to the disc, splitting where a chain leaves it.
    const double r2 = delta * delta;
    auto inside = [&](const Point2& p) { return p[0] * p[0] + p[1] * p[1] <= r2; };
    auto exit_point = [&](const Point2& in, const Point2& out) {
        double dx = out[0] - in[0], dy = out[1] - in[1];
        double a = dx * dx + dy * dy, b = 2 * (in[0] * dx + in[1] * dy), c = in[0] * in[0] + in[1] * in[1] - r2;
        double s = (-b + std::sqrt(std::max(0.0, b * b - 4 * a * c))) / (2 * a);
        return Point2{in[0] + s * dx, in[1] + s * dy};
    };
    std::vector<Polyline> out;
    for (const auto& chain : chains) {
        const std::size_t first_piece = out.size();
        const bool closed = chain.size() > 2 && chain.front() == chain.back();
        Polyline cur;
        Point2 prev{};
        bool prev_in = false;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            Point2 p = crossing(chain[k]);
            bool in = inside(p);
            if (k > 0 && in != prev_in) {
                Point2 q = in ? exit_point(p, prev) : exit_point(prev, p);
                cur.push_back(q);
                if (!in) {
                    if (cur.size() >= 2) out.push_back(std::move(cur));
                    cur.clear();
                }
            }
            if (in) cur.push_back(p);
            prev = p;
            prev_in = in;
        }
        // A closed chain cut by the circle starts and ends mid-arc; rejoin those two pieces.
        if (closed && inside(crossing(chain.front())) && out.size() > first_piece && !cur.empty()) {
            cur.insert(cur.end(), out[first_piece].begin() + 1, out[first_piece].end());
            out[first_piece] = std::move(cur);
        } else if (cur.size() >= 2) {
            out.push_back(std::move(cur));
        }
    }
    return out;
}

enum class RenderSide { Both, Positive, Negative };

struct RenderInput {
    Polynomial ft;
    double delta = 1;
    double eta = 0.1;
    std::vector<CertifiedCriticalPoint> points;
    RenderSide side = RenderSide::Both;
    std::size_t cells = 256;
};

/// SVG 1.1 cross-section: the circle |x| = delta, the level curves f_t = +eta
/// (blue) and f_t = -eta (red), and the critical points labelled by index.
inline std::string render_svg(const RenderInput& in) {
    if (in.ft.nvars() != 2)
        throw Error("cli", "render draws plane curves only; the germ has " + std::to_string(in.ft.nvars()) +
                               " variables, need 2 (n = 1)");
    const double size = 480, half = size / 2, scale = 200 / in.delta;
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        std::string s = buf;
        return s == "-0.000" ? std::string("0.000") : s;
    };
    auto px = [&](const Point2& p) { return fmt(half + scale * p[0]) + "," + fmt(half - scale * p[1]); };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
    s += "<rect width=\"480\" height=\"480\" fill=\"white\"/>\n";
    s += "<circle class=\"ball\" cx=\"240.000\" cy=\"240.000\" r=\"200.000\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    auto draw = [&](double level, const char* cls, const char* color) {
        for (const auto& line : level_curves(in.ft, level, in.delta, in.cells)) {
            s += "<polyline class=\"";
            s += cls;
            s += "\" fill=\"none\" stroke=\"";
            s += color;
            s += "\" stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < line.size(); ++i) s += (i ? " " : "") + px(line[i]);
            s += "\"/>\n";
        }
    };
    if (in.side != RenderSide::Negative) draw(in.eta, "level-plus", "#1f4fbf");
    if (in.side != RenderSide::Positive) draw(-in.eta, "level-minus", "#c0392b");
    for (const auto& p : in.points) {
        Point2 c{p.midpoint[0], p.midpoint[1]};
        s += "<circle class=\"critical\" cx=\"" + fmt(half + scale * c[0]) + "\" cy=\"" + fmt(half - scale * c[1]) +
             "\" r=\"4\" fill=\"black\"/>\n";
        s += "<text x=\"" + fmt(half + scale * c[0] + 6) + "\" y=\"" + fmt(half - scale * c[1] - 6) +
             "\" font-family=\"sans-serif\" font-size=\"14\">λ=" + (p.index ? std::to_string(*p.index) : "?") +
             "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace milnor::cli
