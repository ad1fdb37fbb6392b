#pragma once

#include <fstream>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "evopipe/executor.hpp"
#include "evopipe/fitness.hpp"
#include "evopipe/rng.hpp"

namespace evopipe {

// Unweighted mean of per-class F1. Classes absent from both the predictions
// and the actuals are excluded from the average; a class with an undefined
// precision or recall contributes 0.
inline double macro_f1(const std::vector<int>& predicted, const std::vector<int>& actual,
                       int n_classes)
{
    if (predicted.empty() || predicted.size() != actual.size()) {
        throw std::invalid_argument("macro_f1: label vectors must be non-empty and equal length");
    }
    std::vector<std::size_t> tp(n_classes, 0), fp(n_classes, 0), fn(n_classes, 0);
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (predicted[i] == actual[i]) {
            ++tp[actual[i]];
        } else {
            ++fp[predicted[i]];
            ++fn[actual[i]];
        }
    }
    double sum = 0.0;
    int present = 0;
    for (int c = 0; c < n_classes; ++c) {
        const std::size_t support = 2 * tp[c] + fp[c] + fn[c];
        if (support == 0) continue; // absent from both
        sum += 2.0 * static_cast<double>(tp[c]) / static_cast<double>(support);
        ++present;
    }
    return present ? sum / present : 0.0;
}

// One stratified fold assignment, fixed per run and shared by every pipeline
// evaluation so fitness values stay comparable across generations. Depends
// only on (labels, k, rng state): per-class index lists are shuffled and
// dealt round-robin, which keeps each fold within one instance of the global
// class proportions.
struct StratifiedFolds {
    int k = 5;
    std::vector<int> assignment; // instance -> fold

    static StratifiedFolds make(const std::vector<int>& labels, int n_classes, int k, Rng& rng)
    {
        if (k < 2) throw ConfigError("cv folds must be >= 2");
        std::vector<std::size_t> class_count(n_classes, 0);
        for (int y : labels) ++class_count[y];
        std::size_t smallest = labels.size();
        for (auto c : class_count) smallest = std::min(smallest, c);
        int effective_k = k;
        if (smallest < static_cast<std::size_t>(k)) {
            effective_k = static_cast<int>(smallest);
            if (effective_k < 2) {
                throw ConfigError("smallest class has fewer than 2 instances; cannot stratify");
            }
            std::fprintf(stderr, "warning: reducing cv folds from %d to %d (smallest class count)\n",
                         k, effective_k);
        }

        StratifiedFolds folds;
        folds.k = effective_k;
        folds.assignment.assign(labels.size(), -1);
        for (int c = 0; c < n_classes; ++c) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] == c) idx.push_back(i);
            }
            rng.shuffle(idx);
            for (std::size_t i = 0; i < idx.size(); ++i) {
                folds.assignment[idx[i]] = static_cast<int>(i % effective_k);
            }
        }
        return folds;
    }
};

struct EvalOutcome {
    bool ok = false;
    FitnessVector fitness;
    std::string fail_reason; // "timeout" or an error description

    static EvalOutcome success(FitnessVector f) { return {true, f, {}}; }
    static EvalOutcome failure(std::string reason) { return {false, {}, std::move(reason)}; }
};

// Insert-once map from canonical key to evaluation outcome. Failures are
// cached like successes so a key is never evaluated twice. Safe for
// concurrent lookup/insert; racing inserts of one key keep the first stored
// outcome.
class EvaluationCache {
public:
    bool contains(const std::string& key) const
    {
        std::lock_guard lock(mu_);
        return map_.contains(key);
    }

    std::optional<EvalOutcome> find(const std::string& key) const
    {
        std::lock_guard lock(mu_);
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    // Returns the outcome now stored under the key.
    const EvalOutcome& insert(const std::string& key, EvalOutcome outcome)
    {
        std::lock_guard lock(mu_);
        auto [it, fresh] = map_.emplace(key, std::move(outcome));
        return it->second;
    }

    std::size_t size() const
    {
        std::lock_guard lock(mu_);
        return map_.size();
    }

    KeySet keys() const
    {
        std::lock_guard lock(mu_);
        KeySet out;
        for (const auto& [k, v] : map_) out.insert(k);
        return out;
    }

    // One record per line: `<key>\t<score>\t<complexity>` for successes,
    // `<key>\tFAILED\t<reason>` for failures.
    void save(const std::string& path) const
    {
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot write cache file '" + path + "'");
        std::lock_guard lock(mu_);
        for (const auto& [key, outcome] : map_) {
            if (outcome.ok) {
                char buf[64];
                auto [p, ec] = std::to_chars(buf, buf + sizeof buf, outcome.fitness.score);
                out << key << '\t' << std::string_view(buf, p - buf) << '\t'
                    << outcome.fitness.complexity << '\n';
            } else {
                out << key << "\tFAILED\t" << outcome.fail_reason << '\n';
            }
        }
    }

    void load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read cache file '" + path + "'");
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto t1 = line.find('\t');
            const auto t2 = line.find('\t', t1 + 1);
            if (t1 == std::string::npos || t2 == std::string::npos) {
                throw ConfigError("cache file: malformed line " + std::to_string(lineno));
            }
            const std::string key = line.substr(0, t1);
            const std::string second = line.substr(t1 + 1, t2 - t1 - 1);
            const std::string third = line.substr(t2 + 1);
            if (second == "FAILED") {
                insert(key, EvalOutcome::failure(third));
            } else {
                FitnessVector f;
                auto [p1, e1] = std::from_chars(second.data(), second.data() + second.size(), f.score);
                int cx = 0;
                auto [p2, e2] = std::from_chars(third.data(), third.data() + third.size(), cx);
                if (e1 != std::errc{} || e2 != std::errc{}) {
                    throw ConfigError("cache file: bad numbers at line " + std::to_string(lineno));
                }
                f.complexity = cx;
                insert(key, EvalOutcome::success(f));
            }
        }
    }

private:
    mutable std::mutex mu_;
    std::unordered_map<std::string, EvalOutcome> map_;
};

// Pure CV evaluation; no cache interaction. Exceeding the timeout anywhere
// in the pipeline's CV yields failed(timeout); any other fold error yields
// failed(<what>).
inline EvalOutcome evaluate_uncached(const PipelineTree& tree, const Dataset& data,
                                     const StratifiedFolds& folds, double timeout_s)
{
    const Deadline deadline = Deadline::after(timeout_s);
    const int cx = complexity(tree);
    try {
        double score_sum = 0.0;
        for (int fold = 0; fold < folds.k; ++fold) {
            deadline.check();
            std::vector<std::size_t> train_idx, test_idx;
            for (std::size_t i = 0; i < data.n_instances(); ++i) {
                (folds.assignment[i] == fold ? test_idx : train_idx).push_back(i);
            }
            Dataset train;
            train.features = data.features.select_rows(train_idx);
            train.n_classes = data.n_classes;
            train.labels.reserve(train_idx.size());
            for (auto i : train_idx) train.labels.push_back(data.labels[i]);

            Matrix test_features = data.features.select_rows(test_idx);
            std::vector<int> actual;
            actual.reserve(test_idx.size());
            for (auto i : test_idx) actual.push_back(data.labels[i]);

            const auto predicted = predict_pipeline(tree, train, test_features, deadline);
            score_sum += macro_f1(predicted, actual, data.n_classes);
        }
        return EvalOutcome::success({score_sum / folds.k, cx});
    } catch (const EvalTimeout&) {
        return EvalOutcome::failure("timeout");
    } catch (const std::exception& e) {
        return EvalOutcome::failure(e.what());
    }
}

// Cache-aware evaluation: hits return the stored outcome without touching
// the learners.
inline EvalOutcome evaluate(const PipelineTree& tree, const Dataset& data,
                            const StratifiedFolds& folds, double timeout_s, EvaluationCache& cache)
{
    const std::string key = canonical_key(tree);
    if (auto hit = cache.find(key)) return *hit;
    return cache.insert(key, evaluate_uncached(tree, data, folds, timeout_s));
}

} // namespace evopipe
