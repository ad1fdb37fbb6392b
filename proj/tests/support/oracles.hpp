#pragma once

// Test-only reference implementations, kept deliberately naive and written
// independently of the library's algorithms so they can act as oracles.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "evopipe/fitness.hpp"

namespace oracle {

using evopipe::FitnessVector;

inline bool dominates(const FitnessVector& a, const FitnessVector& b)
{
    const bool no_worse = a.score >= b.score && a.complexity <= b.complexity;
    const bool better = a.score > b.score || a.complexity < b.complexity;
    return no_worse && better;
}

// Non-dominated sorting by repeated extraction over the full O(n^2)
// dominance matrix.
inline std::vector<std::vector<std::size_t>> brute_fronts(const std::vector<FitnessVector>& pts)
{
    const std::size_t n = pts.size();
    std::vector<bool> assigned(n, false);
    std::vector<std::vector<std::size_t>> fronts;
    std::size_t remaining = n;
    while (remaining > 0) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < n; ++i) {
            if (assigned[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && !assigned[j] && oracle::dominates(pts[j], pts[i])) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) front.push_back(i);
        }
        for (auto i : front) assigned[i] = true;
        remaining -= front.size();
        fronts.push_back(std::move(front));
    }
    return fronts;
}

inline std::vector<double> brute_crowding(const std::vector<FitnessVector>& pts,
                                          const std::vector<std::size_t>& front)
{
    const std::size_t m = front.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> crowd(m, 0.0);
    if (m <= 2) return std::vector<double>(m, inf);

    for (int objective = 0; objective < 2; ++objective) {
        auto value = [&](std::size_t member) {
            return objective == 0 ? pts[front[member]].score
                                  : static_cast<double>(pts[front[member]].complexity);
        };
        std::vector<std::size_t> by(m);
        for (std::size_t i = 0; i < m; ++i) by[i] = i;
        std::stable_sort(by.begin(), by.end(),
                         [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
        crowd[by[0]] = inf;
        crowd[by[m - 1]] = inf;
        const double span = value(by[m - 1]) - value(by[0]);
        if (span == 0.0) continue;
        for (std::size_t i = 1; i + 1 < m; ++i) {
            crowd[by[i]] += (value(by[i + 1]) - value(by[i - 1])) / span;
        }
    }
    return crowd;
}

// Reference NSGA-II survival selection with the same tie rules as the
// library contract: crowding descending, then score descending, complexity
// ascending, candidate order.
inline std::vector<std::size_t> brute_nsga2_select(const std::vector<FitnessVector>& pts,
                                                   std::size_t target)
{
    std::vector<std::size_t> selected;
    if (pts.size() <= target) {
        for (std::size_t i = 0; i < pts.size(); ++i) selected.push_back(i);
        return selected;
    }
    for (const auto& front : brute_fronts(pts)) {
        if (selected.size() + front.size() <= target) {
            selected.insert(selected.end(), front.begin(), front.end());
            if (selected.size() == target) break;
            continue;
        }
        const auto crowd = brute_crowding(pts, front);
        std::vector<std::size_t> members(front.size());
        for (std::size_t i = 0; i < members.size(); ++i) members[i] = i;
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            if (crowd[a] != crowd[b]) return crowd[a] > crowd[b];
            if (pts[front[a]].score != pts[front[b]].score) {
                return pts[front[a]].score > pts[front[b]].score;
            }
            if (pts[front[a]].complexity != pts[front[b]].complexity) {
                return pts[front[a]].complexity < pts[front[b]].complexity;
            }
            return front[a] < front[b];
        });
        for (std::size_t i = 0; selected.size() < target; ++i) selected.push_back(front[members[i]]);
        break;
    }
    return selected;
}

// Grid-area hypervolume: counts cell centers of a resolution x resolution
// grid over [score_ref, 1] x [0, complexity_ref] dominated by some point.
inline double hv_grid(const std::vector<FitnessVector>& front, double score_ref,
                      double complexity_ref, int resolution)
{
    if (front.empty()) return 0.0;
    const double score_span = 1.0 - score_ref;
    const double cx_span = complexity_ref;
    const double dx = score_span / resolution;
    const double dy = cx_span / resolution;
    std::int64_t cells = 0;
    for (int i = 0; i < resolution; ++i) {
        const double x = score_ref + (i + 0.5) * dx;
        // lowest complexity among points whose score reaches x
        double min_cx = std::numeric_limits<double>::infinity();
        for (const auto& p : front) {
            if (p.score >= x) min_cx = std::min(min_cx, static_cast<double>(p.complexity));
        }
        if (!std::isfinite(min_cx)) continue;
        for (int j = 0; j < resolution; ++j) {
            const double y = (j + 0.5) * dy;
            if (y >= min_cx && y < complexity_ref) ++cells;
        }
    }
    return static_cast<double>(cells) * dx * dy;
}

// Exact union area of the dominated rectangles [score_ref, s_i] x
// [c_i, complexity_ref] by inclusion-exclusion over all subsets.
inline double hv_inclusion_exclusion(const std::vector<FitnessVector>& front, double score_ref,
                                     double complexity_ref)
{
    const std::size_t n = front.size();
    double area = 0.0;
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
        double min_score = std::numeric_limits<double>::infinity();
        int max_cx = 0;
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1ull << i)) {
                ++bits;
                min_score = std::min(min_score, front[i].score);
                max_cx = std::max(max_cx, front[i].complexity);
            }
        }
        const double part = (min_score - score_ref) * (complexity_ref - max_cx);
        area += (bits % 2 ? 1.0 : -1.0) * std::max(part, 0.0);
    }
    return area;
}

} // namespace oracle
