#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "evopipe/moo.hpp"
#include "evopipe/runlog.hpp"

namespace evopipe {

// Paired per-dataset values for two methods; the paper-style comparison is
// across datasets, never across individual runs.
struct PairedResults {
    struct Pair {
        std::string dataset;
        double a = 0.0;
        double b = 0.0;
    };
    std::vector<Pair> pairs;
};

struct WilcoxonResult {
    double w_statistic = 0.0;
    double p_value = 1.0;
    int n_effective = 0;
    bool degenerate = false; // all differences were zero
    bool exact = false;      // exact enumeration rather than normal approximation
};

namespace detail {

// Ranks of |d| (ascending), average ranks for ties, scaled by 2 so that
// half-ranks stay exact integers.
inline std::vector<std::int64_t> double_ranks(const std::vector<double>& absd)
{
    const std::size_t n = absd.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return absd[a] < absd[b]; });
    std::vector<std::int64_t> ranks2(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && absd[order[j + 1]] == absd[order[i]]) ++j;
        // average of ranks i+1..j+1, doubled: (i+1 + j+1)
        const std::int64_t r2 = static_cast<std::int64_t>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) ranks2[order[k]] = r2;
        i = j + 1;
    }
    return ranks2;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace detail

enum class WilcoxonMethod { automatic, exact, approximate };

// Two-sided Wilcoxon signed-rank test. Zero differences drop out; |d| ties
// get average ranks; W = min(W+, W-). Exact p by enumerating all 2^n sign
// assignments for n <= 20, otherwise a normal approximation with
// tie-corrected variance and 0.5 continuity correction. `method` can force
// either branch.
inline WilcoxonResult wilcoxon_signed_rank(const PairedResults& input,
                                           WilcoxonMethod method = WilcoxonMethod::automatic)
{
    if (input.pairs.empty()) throw std::invalid_argument("wilcoxon: need at least one pair");
    std::vector<double> diffs;
    for (const auto& p : input.pairs) {
        const double d = p.a - p.b;
        if (d != 0.0) diffs.push_back(d);
    }
    WilcoxonResult res;
    res.n_effective = static_cast<int>(diffs.size());
    if (diffs.empty()) {
        res.degenerate = true;
        res.p_value = 1.0;
        return res;
    }

    std::vector<double> absd(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) absd[i] = std::fabs(diffs[i]);
    const auto ranks2 = detail::double_ranks(absd);

    std::int64_t w_plus2 = 0, total2 = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        total2 += ranks2[i];
        if (diffs[i] > 0.0) w_plus2 += ranks2[i];
    }
    const std::int64_t w_minus2 = total2 - w_plus2;
    const std::int64_t w2 = std::min(w_plus2, w_minus2);
    res.w_statistic = static_cast<double>(w2) / 2.0;

    const std::size_t n = diffs.size();
    const bool use_exact = method == WilcoxonMethod::exact
        || (method == WilcoxonMethod::automatic && n <= 20);
    if (use_exact && n > 30) throw std::invalid_argument("wilcoxon: exact enumeration too large");
    if (use_exact) {
        res.exact = true;
        std::uint64_t count = 0;
        const std::uint64_t assignments = 1ull << n;
        for (std::uint64_t mask = 0; mask < assignments; ++mask) {
            std::int64_t s2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1ull << i)) s2 += ranks2[i];
            }
            if (std::min(s2, total2 - s2) <= w2) ++count;
        }
        res.p_value = static_cast<double>(count) / static_cast<double>(assignments);
    } else {
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        double tie_term = 0.0;
        std::map<std::int64_t, int> groups;
        for (auto r : ranks2) ++groups[r];
        for (const auto& [r, t] : groups) {
            tie_term += static_cast<double>(t) * t * t - t;
        }
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
        const double w = res.w_statistic;
        const double z = (w - mean + 0.5) / std::sqrt(var);
        res.p_value = std::min(1.0, 2.0 * detail::normal_cdf(z));
    }
    return res;
}

// ---- cross-dataset comparison report --------------------------------------

struct MethodStats {
    double mean_score = 0.0;
    double mean_complexity = 0.0;
    double mean_hypervolume = 0.0;
    int n_runs = 0;
};

struct DatasetComparison {
    std::string name;
    std::string digest;
    MethodStats a, b;
    ParetoFront frontier_a, frontier_b; // cross-run averaged fronts
};

struct WilcoxonRow {
    WilcoxonResult test;
    double mean_a = 0.0;
    double mean_b = 0.0;
    bool significant = false;
};

struct ComparisonReport {
    double hv_score_ref = 0.0;
    double hv_complexity_ref = 10.0;
    double alpha = 0.05;
    std::vector<DatasetComparison> datasets;
    bool has_tests = false;
    std::map<std::string, WilcoxonRow> tests; // keys: score, complexity, hypervolume
};

namespace detail {

struct RunMetrics {
    double best_score = 0.0;
    double best_complexity = 1.0;
    double hypervolume = 0.0;
};

inline RunMetrics run_metrics(const RunLog& log, double s_ref, double c_ref)
{
    RunMetrics m;
    const auto& front = log.final_front();
    if (front.empty()) return m;
    double best = -1.0;
    int best_cx = 0;
    std::vector<FitnessVector> hv_points;
    int dropped = 0;
    for (const auto& p : front) {
        if (p.fitness.score > best
            || (p.fitness.score == best && p.fitness.complexity < best_cx)) {
            best = p.fitness.score;
            best_cx = p.fitness.complexity;
        }
        if (p.fitness.score > s_ref && p.fitness.complexity < c_ref) {
            hv_points.push_back(p.fitness);
        } else {
            ++dropped;
        }
    }
    if (dropped) {
        std::fprintf(stderr, "warning: %d front point(s) outside the reference box excluded from hypervolume\n",
                     dropped);
    }
    m.best_score = best;
    m.best_complexity = best_cx;
    m.hypervolume = hypervolume_2d(std::move(hv_points), s_ref, c_ref);
    return m;
}

inline std::string dataset_name_of(const RunLog& log)
{
    std::string data = log.header.config.value("data", std::string());
    const auto slash = data.find_last_of('/');
    if (slash != std::string::npos) data = data.substr(slash + 1);
    const auto dot = data.find_last_of('.');
    if (dot != std::string::npos && dot > 0) data = data.substr(0, dot);
    return data.empty() ? log.header.dataset_digest : data;
}

} // namespace detail

// Per-dataset means of best score, best-point complexity and hypervolume
// for the two methods, an averaged frontier per dataset/method, and one
// Wilcoxon test per metric across datasets.
inline ComparisonReport compare_report(const std::vector<RunLog>& runs_a,
                                       const std::vector<RunLog>& runs_b, double hv_score_ref,
                                       double hv_complexity_ref, bool with_wilcoxon)
{
    if (runs_a.empty() || runs_b.empty()) {
        throw ConfigError("compare_report: both methods need at least one run");
    }

    auto group = [](const std::vector<RunLog>& runs) {
        std::map<std::string, std::vector<const RunLog*>> by_digest;
        for (const auto& log : runs) by_digest[log.header.dataset_digest].push_back(&log);
        return by_digest;
    };
    const auto by_a = group(runs_a);
    const auto by_b = group(runs_b);

    std::set<std::string> only_a, only_b;
    for (const auto& [d, _] : by_a) {
        if (!by_b.contains(d)) only_a.insert(d);
    }
    for (const auto& [d, _] : by_b) {
        if (!by_a.contains(d)) only_b.insert(d);
    }
    if (!only_a.empty() || !only_b.empty()) {
        std::string msg = "compare_report: dataset sets differ;";
        for (const auto& d : only_a) msg += " only-in-A " + d;
        for (const auto& d : only_b) msg += " only-in-B " + d;
        throw ConfigError(msg);
    }

    ComparisonReport report;
    report.hv_score_ref = hv_score_ref;
    report.hv_complexity_ref = hv_complexity_ref;

    PairedResults score_pairs, cx_pairs, hv_pairs;
    for (const auto& [digest, logs_a] : by_a) {
        const auto& logs_b = by_b.at(digest);
        DatasetComparison cmp;
        cmp.digest = digest;
        cmp.name = detail::dataset_name_of(*logs_a.front());

        auto summarize = [&](const std::vector<const RunLog*>& logs, MethodStats& out,
                             ParetoFront& frontier) {
            std::vector<ParetoFront> fronts;
            for (const auto* log : logs) {
                const auto m = detail::run_metrics(*log, hv_score_ref, hv_complexity_ref);
                out.mean_score += m.best_score;
                out.mean_complexity += m.best_complexity;
                out.mean_hypervolume += m.hypervolume;
                fronts.push_back(log->final_front());
            }
            out.n_runs = static_cast<int>(logs.size());
            out.mean_score /= out.n_runs;
            out.mean_complexity /= out.n_runs;
            out.mean_hypervolume /= out.n_runs;
            frontier = average_frontier(fronts);
        };
        summarize(logs_a, cmp.a, cmp.frontier_a);
        summarize(logs_b, cmp.b, cmp.frontier_b);

        score_pairs.pairs.push_back({cmp.name, cmp.a.mean_score, cmp.b.mean_score});
        cx_pairs.pairs.push_back({cmp.name, cmp.a.mean_complexity, cmp.b.mean_complexity});
        hv_pairs.pairs.push_back({cmp.name, cmp.a.mean_hypervolume, cmp.b.mean_hypervolume});
        report.datasets.push_back(std::move(cmp));
    }
    std::sort(report.datasets.begin(), report.datasets.end(),
              [](const DatasetComparison& x, const DatasetComparison& y) {
                  return x.name != y.name ? x.name < y.name : x.digest < y.digest;
              });

    if (with_wilcoxon) {
        report.has_tests = true;
        auto add_test = [&](const std::string& metric, const PairedResults& pairs) {
            WilcoxonRow row;
            row.test = wilcoxon_signed_rank(pairs);
            for (const auto& p : pairs.pairs) {
                row.mean_a += p.a;
                row.mean_b += p.b;
            }
            row.mean_a /= pairs.pairs.size();
            row.mean_b /= pairs.pairs.size();
            row.significant = !row.test.degenerate && row.test.p_value < report.alpha;
            report.tests[metric] = row;
        };
        add_test("score", score_pairs);
        add_test("complexity", cx_pairs);
        add_test("hypervolume", hv_pairs);
    }
    return report;
}

inline json to_json(const ComparisonReport& report)
{
    json datasets = json::array();
    for (const auto& d : report.datasets) {
        auto frontier = [](const ParetoFront& f) {
            json arr = json::array();
            for (const auto& p : f) {
                arr.push_back({{"complexity", p.fitness.complexity}, {"score", p.fitness.score}});
            }
            return arr;
        };
        auto stats = [](const MethodStats& s) {
            return json{{"mean_score", s.mean_score},
                        {"mean_complexity", s.mean_complexity},
                        {"mean_hypervolume", s.mean_hypervolume},
                        {"runs", s.n_runs}};
        };
        datasets.push_back({{"name", d.name},
                            {"digest", d.digest},
                            {"a", stats(d.a)},
                            {"b", stats(d.b)},
                            {"frontier_a", frontier(d.frontier_a)},
                            {"frontier_b", frontier(d.frontier_b)}});
    }
    json j{{"hv_ref", {report.hv_score_ref, report.hv_complexity_ref}},
           {"alpha", report.alpha},
           {"datasets", datasets}};
    if (report.has_tests) {
        json tests;
        for (const auto& [metric, row] : report.tests) {
            tests[metric] = {{"w", row.test.w_statistic},
                             {"p", row.test.p_value},
                             {"n_effective", row.test.n_effective},
                             {"degenerate", row.test.degenerate},
                             {"exact", row.test.exact},
                             {"significant", row.significant},
                             {"mean_a", row.mean_a},
                             {"mean_b", row.mean_b}};
        }
        j["wilcoxon"] = tests;
    }
    return j;
}

inline std::string to_table(const ComparisonReport& report)
{
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "hv reference: (%g, %g)   alpha: %g\n", report.hv_score_ref,
                  report.hv_complexity_ref, report.alpha);
    out << line;
    std::snprintf(line, sizeof line, "%-20s %10s %10s %10s %10s %10s %10s\n", "dataset", "scoreA",
                  "scoreB", "cxA", "cxB", "hvA", "hvB");
    out << line;
    for (const auto& d : report.datasets) {
        std::snprintf(line, sizeof line, "%-20s %10.4f %10.4f %10.2f %10.2f %10.4f %10.4f\n",
                      d.name.c_str(), d.a.mean_score, d.b.mean_score, d.a.mean_complexity,
                      d.b.mean_complexity, d.a.mean_hypervolume, d.b.mean_hypervolume);
        out << line;
    }
    if (report.has_tests) {
        std::snprintf(line, sizeof line, "%-12s %10s %12s %6s %12s %12s %s\n", "metric", "W", "p",
                      "n", "meanA", "meanB", "verdict");
        out << line;
        for (const auto& [metric, row] : report.tests) {
            std::snprintf(line, sizeof line, "%-12s %10.1f %12.6f %6d %12.4f %12.4f %s\n",
                          metric.c_str(), row.test.w_statistic, row.test.p_value,
                          row.test.n_effective, row.mean_a, row.mean_b,
                          row.test.degenerate      ? "degenerate"
                          : row.significant        ? "significant"
                                                   : "not significant");
            out << line;
        }
    }
    return out.str();
}

} // namespace evopipe
