#include "vhb/generators.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace vhb {

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

using Cell = std::pair<int, int>;
using Vertex = std::pair<int, int>;

struct Edge {
    Vertex from;
    Vertex to;
};

Letter letter_of(const Edge& e) {
    if (e.to.first > e.from.first) return Letter::E;
    if (e.to.first < e.from.first) return Letter::W;
    if (e.to.second > e.from.second) return Letter::N;
    return Letter::S;
}

// Boundary loop of a polyomino as unit edges, or empty if the boundary is
// pinched or the polyomino encloses a hole.
std::vector<Edge> boundary_loop(const std::set<Cell>& cells) {
    std::set<std::pair<Vertex, Vertex>> edges;
    for (auto [i, j] : cells) {
        const std::array<std::pair<Vertex, Vertex>, 4> quad{{
            {{i, j}, {i + 1, j}},
            {{i + 1, j}, {i + 1, j + 1}},
            {{i + 1, j + 1}, {i, j + 1}},
            {{i, j + 1}, {i, j}},
        }};
        for (const auto& e : quad) {
            auto rev = std::make_pair(e.second, e.first);
            if (edges.erase(rev) == 0) edges.insert(e);
        }
    }
    std::map<Vertex, Vertex> next;
    for (const auto& [a, b] : edges) {
        if (!next.emplace(a, b).second) return {};
    }
    std::vector<Edge> loop;
    Vertex start = edges.begin()->first;
    Vertex cur = start;
    do {
        Vertex nxt = next.at(cur);
        loop.push_back({cur, nxt});
        cur = nxt;
    } while (cur != start && loop.size() <= edges.size());
    if (loop.size() != edges.size()) return {};
    return loop;
}

}  // namespace

VHTable random_polyomino_table(Rng& rng, const PolyominoOptions& opts) {
    const int g = opts.grid;
    for (;;) {
        const auto target = uniform_int(rng, opts.min_cells, opts.max_cells);
        std::set<Cell> cells{{static_cast<int>(uniform_int(rng, 0, g - 1)), static_cast<int>(uniform_int(rng, 0, g - 1))}};
        while (static_cast<std::int64_t>(cells.size()) < target) {
            std::vector<Cell> frontier;
            for (auto [i, j] : cells) {
                const std::array<Cell, 4> nb{{{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}}};
                for (auto c : nb) {
                    if (c.first >= 0 && c.first < g && c.second >= 0 && c.second < g && !cells.count(c)) {
                        frontier.push_back(c);
                    }
                }
            }
            if (frontier.empty()) break;
            std::sort(frontier.begin(), frontier.end());
            frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
            cells.insert(frontier[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(frontier.size()) - 1))]);
        }
        auto loop = boundary_loop(cells);
        if (loop.empty()) continue;

        const std::int64_t den = uniform_int(rng, 1, opts.max_denominator);
        std::vector<Rational> widths, heights;
        for (int k = 0; k < g; ++k) {
            widths.emplace_back(uniform_int(rng, 1, 3 * den), den);
            heights.emplace_back(uniform_int(rng, 1, 3 * den), den);
        }

        // Start the word at a direction change so merged runs do not wrap.
        std::size_t first = 0;
        for (std::size_t k = 0; k < loop.size(); ++k) {
            if (letter_of(loop[k]) != letter_of(loop[(k + loop.size() - 1) % loop.size()])) {
                first = k;
                break;
            }
        }
        std::string word;
        std::vector<Rational> lengths;
        for (std::size_t k = 0; k < loop.size(); ++k) {
            const Edge& e = loop[(first + k) % loop.size()];
            const Letter l = letter_of(e);
            const Rational len = is_horizontal(l) ? widths[static_cast<std::size_t>(std::min(e.from.first, e.to.first))]
                                                  : heights[static_cast<std::size_t>(std::min(e.from.second, e.to.second))];
            if (!word.empty() && word.back() == static_cast<char>(l)) {
                lengths.back() += len;
            } else {
                word.push_back(static_cast<char>(l));
                lengths.push_back(len);
            }
        }
        VHPolygon outer = polygon_from_text(word, std::move(lengths));

        int min_i = g, min_j = g;
        for (auto [i, j] : cells) {
            min_i = std::min(min_i, i);
            min_j = std::min(min_j, j);
        }
        auto offset = [](const std::vector<Rational>& sizes, int from, int to) {
            Rational s = 0;
            for (int k = from; k < to; ++k) s += sizes[static_cast<std::size_t>(k)];
            return s;
        };

        std::vector<Hole> holes;
        std::vector<Cell> pool(cells.begin(), cells.end());
        for (int h = 0; h < opts.max_holes && !pool.empty(); ++h) {
            if (uniform01(rng) >= opts.hole_probability) continue;
            const auto pick = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1));
            auto [i, j] = pool[pick];
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
            const Rational& w = widths[static_cast<std::size_t>(i)];
            const Rational& ht = heights[static_cast<std::size_t>(j)];
            Point anchor{offset(widths, min_i, i) + w / 4, offset(heights, min_j, j) + ht / 4};
            holes.push_back(Hole{polygon_from_text("WNES", {w / 2, ht / 2, w / 2, ht / 2}), anchor});
        }
        return VHTable::build(std::move(outer), std::move(holes));
    }
}

VHPolygon random_polygon_for_word(const CombinatoricsWord& word, Rng& rng, std::int64_t denominator,
                                  std::int64_t max_units, int max_attempts) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<Rational> lengths;
        for (std::size_t i = 0; i < word.size(); ++i) {
            lengths.emplace_back(uniform_int(rng, 1, max_units), denominator);
        }
        const std::array<std::pair<Letter, Letter>, 2> classes{{{Letter::E, Letter::W}, {Letter::N, Letter::S}}};
        for (auto [a, b] : classes) {
            Rational sa = 0, sb = 0;
            std::vector<std::size_t> ia, ib;
            for (std::size_t i = 0; i < word.size(); ++i) {
                if (word[i] == a) { sa += lengths[i]; ia.push_back(i); }
                if (word[i] == b) { sb += lengths[i]; ib.push_back(i); }
            }
            if (sa == sb) continue;
            auto& idx = sa < sb ? ia : ib;
            const auto k = idx[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(idx.size()) - 1))];
            lengths[k] += boost::multiprecision::abs(sa - sb);
        }
        try {
            VHPolygon poly = VHPolygon::build(word, lengths);
            if (poly.word() == word) return poly;
        } catch (const GeometryError&) {
        }
    }
    throw GeometryError(GeometryError::Code::SelfIntersecting,
                        "no valid length vector found for word " + word.str());
}

}  // namespace vhb
