#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "evopipe/fitness.hpp"

namespace evopipe {

// Strict Pareto dominance: no worse on both objectives, strictly better on
// at least one. Score is maximized, complexity minimized.
inline bool dominates(const FitnessVector& a, const FitnessVector& b)
{
    return a.score >= b.score && a.complexity <= b.complexity
        && (a.score > b.score || a.complexity < b.complexity);
}

struct ParetoPoint {
    FitnessVector fitness;
    std::string key;
};

// Nondominated set, kept sorted by score descending (complexity then
// strictly decreases); at most one point per fitness value.
using ParetoFront = std::vector<ParetoPoint>;

// Reduces arbitrary members to a front: exact-duplicate fitness keeps the
// first occurrence, dominated points drop out.
inline ParetoFront build_front(const std::vector<ParetoPoint>& members)
{
    ParetoFront front;
    for (const auto& m : members) {
        bool keep = true;
        for (const auto& f : front) {
            if (f.fitness == m.fitness || dominates(f.fitness, m.fitness)) {
                keep = false;
                break;
            }
        }
        if (!keep) continue;
        std::erase_if(front, [&](const ParetoPoint& f) { return dominates(m.fitness, f.fitness); });
        front.push_back(m);
    }
    std::sort(front.begin(), front.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        if (a.fitness.score != b.fitness.score) return a.fitness.score > b.fitness.score;
        return a.fitness.complexity < b.fitness.complexity;
    });
    return front;
}

namespace detail {

// Fast non-dominated sorting specialized for two objectives: sweep in
// (score desc, complexity asc) order and binary-search the first front that
// does not dominate the point. Per front we track the minimum complexity
// seen and the lowest score among its holders, which is enough to decide
// dominance against the whole front.
inline std::vector<int> nondominated_ranks(std::span<const FitnessVector> pts)
{
    const std::size_t n = pts.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pts[a].score != pts[b].score) return pts[a].score > pts[b].score;
        if (pts[a].complexity != pts[b].complexity) return pts[a].complexity < pts[b].complexity;
        return a < b;
    });

    std::vector<int> rank(n, 0);
    std::vector<int> front_min_cx;       // per front: lowest complexity so far
    std::vector<double> front_min_score; // per front: lowest score among holders of that complexity
    for (std::size_t oi = 0; oi < n; ++oi) {
        const auto& p = pts[order[oi]];
        auto dominated_by = [&](std::size_t f) {
            return front_min_cx[f] < p.complexity
                || (front_min_cx[f] == p.complexity && front_min_score[f] > p.score);
        };
        std::size_t lo = 0, hi = front_min_cx.size();
        while (lo < hi) { // first front that does not dominate p
            const std::size_t mid = (lo + hi) / 2;
            if (dominated_by(mid)) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if (lo == front_min_cx.size()) {
            front_min_cx.push_back(p.complexity);
            front_min_score.push_back(p.score);
        } else if (p.complexity < front_min_cx[lo]) {
            front_min_cx[lo] = p.complexity;
            front_min_score[lo] = p.score;
        } else if (p.complexity == front_min_cx[lo]) {
            front_min_score[lo] = std::min(front_min_score[lo], p.score);
        }
        rank[order[oi]] = static_cast<int>(lo);
    }
    return rank;
}

// NSGA-II crowding distance over one front (indices into pts). Boundary
// points on either objective get infinity; duplicates are handled as a
// multiset.
inline std::vector<double> crowding_distances(std::span<const FitnessVector> pts,
                                              const std::vector<std::size_t>& front)
{
    const std::size_t m = front.size();
    std::vector<double> crowd(m, 0.0);
    if (m <= 2) {
        std::fill(crowd.begin(), crowd.end(), std::numeric_limits<double>::infinity());
        return crowd;
    }
    std::vector<std::size_t> by(m);
    for (std::size_t i = 0; i < m; ++i) by[i] = i;

    auto accumulate = [&](auto value) {
        std::stable_sort(by.begin(), by.end(), [&](std::size_t a, std::size_t b) {
            return value(pts[front[a]]) < value(pts[front[b]]);
        });
        crowd[by.front()] = std::numeric_limits<double>::infinity();
        crowd[by.back()] = std::numeric_limits<double>::infinity();
        const double lo = value(pts[front[by.front()]]);
        const double hi = value(pts[front[by.back()]]);
        if (hi == lo) return;
        for (std::size_t i = 1; i + 1 < m; ++i) {
            crowd[by[i]] += (value(pts[front[by[i + 1]]]) - value(pts[front[by[i - 1]]])) / (hi - lo);
        }
    };
    accumulate([](const FitnessVector& f) { return f.score; });
    accumulate([](const FitnessVector& f) { return static_cast<double>(f.complexity); });
    return crowd;
}

} // namespace detail

// NSGA-II survival selection: fill whole fronts in rank order, then reduce
// the splitting front by crowding distance (largest kept). Crowding ties
// break by score descending, then complexity ascending, then candidate
// order, which keeps the incumbent best-score point alive through every
// selection. Returns min(target, n) candidate indices.
inline std::vector<std::size_t> nsga2_select(std::span<const FitnessVector> candidates,
                                             std::size_t target)
{
    if (candidates.empty()) throw std::invalid_argument("nsga2_select: empty candidate set");
    if (target < 1) throw std::invalid_argument("nsga2_select: target must be >= 1");

    const std::size_t n = candidates.size();
    std::vector<std::size_t> selected;
    if (n <= target) {
        selected.resize(n);
        for (std::size_t i = 0; i < n; ++i) selected[i] = i;
        return selected;
    }

    const auto rank = detail::nondominated_ranks(candidates);
    const int max_rank = *std::max_element(rank.begin(), rank.end());
    std::vector<std::vector<std::size_t>> fronts(max_rank + 1);
    for (std::size_t i = 0; i < n; ++i) fronts[rank[i]].push_back(i);

    selected.reserve(target);
    for (auto& front : fronts) {
        if (selected.size() + front.size() <= target) {
            selected.insert(selected.end(), front.begin(), front.end());
            if (selected.size() == target) break;
            continue;
        }
        const auto crowd = detail::crowding_distances(candidates, front);
        std::vector<std::size_t> pos(front.size());
        for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
        std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
            if (crowd[a] != crowd[b]) return crowd[a] > crowd[b];
            const auto& fa = candidates[front[a]];
            const auto& fb = candidates[front[b]];
            if (fa.score != fb.score) return fa.score > fb.score;
            if (fa.complexity != fb.complexity) return fa.complexity < fb.complexity;
            return front[a] < front[b];
        });
        for (std::size_t i = 0; selected.size() < target; ++i) {
            selected.push_back(front[pos[i]]);
        }
        break;
    }
    return selected;
}

// 2-D hypervolume by rectangle sweep. Every point must strictly dominate
// the reference point; the front must be nondominated. Empty fronts span
// zero area.
inline double hypervolume_2d(std::vector<FitnessVector> front, double score_ref,
                             double complexity_ref)
{
    if (front.empty()) return 0.0;
    for (const auto& f : front) {
        if (!(f.score > score_ref && f.complexity < complexity_ref)) {
            throw std::invalid_argument("hypervolume_2d: point does not dominate the reference");
        }
    }
    std::sort(front.begin(), front.end(), [](const FitnessVector& a, const FitnessVector& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.complexity < b.complexity;
    });
    double hv = 0.0;
    int best_cx = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < front.size(); ++i) {
        if (front[i].complexity >= best_cx) {
            throw std::invalid_argument("hypervolume_2d: front contains dominated points");
        }
        best_cx = front[i].complexity;
        const double next_score = i + 1 < front.size() ? front[i + 1].score : score_ref;
        hv += (front[i].score - next_score) * (complexity_ref - front[i].complexity);
    }
    return hv;
}

inline double hypervolume_2d(const ParetoFront& front, double score_ref, double complexity_ref)
{
    std::vector<FitnessVector> pts;
    pts.reserve(front.size());
    for (const auto& p : front) pts.push_back(p.fitness);
    return hypervolume_2d(std::move(pts), score_ref, complexity_ref);
}

// Cross-run frontier averaging: for each complexity present in any run,
// average the best score at that complexity over the runs that contain it,
// then strip dominated points.
inline ParetoFront average_frontier(const std::vector<ParetoFront>& runs)
{
    if (runs.empty()) throw std::invalid_argument("average_frontier: need at least one run");
    std::vector<int> complexities;
    for (const auto& run : runs) {
        for (const auto& p : run) {
            if (std::find(complexities.begin(), complexities.end(), p.fitness.complexity)
                == complexities.end()) {
                complexities.push_back(p.fitness.complexity);
            }
        }
    }
    std::sort(complexities.begin(), complexities.end());

    std::vector<ParetoPoint> averaged;
    for (int cx : complexities) {
        double sum = 0.0;
        int count = 0;
        for (const auto& run : runs) {
            double best = -1.0;
            for (const auto& p : run) {
                if (p.fitness.complexity == cx) best = std::max(best, p.fitness.score);
            }
            if (best >= 0.0) {
                sum += best;
                ++count;
            }
        }
        if (count) averaged.push_back({{sum / count, cx}, {}});
    }
    return build_front(averaged);
}

} // namespace evopipe
