#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <thread>

#include "evopipe/evaluation.hpp"
#include "evopipe/fib.hpp"
#include "evopipe/runlog.hpp"
#include "evopipe/variation.hpp"

namespace evopipe {

enum class EngineMode { adaptive, fixed };
enum class SigmaScope { all, population };
enum class RateUpdate { every_gen, on_stagnation };

struct EngineConfig {
    EngineMode mode = EngineMode::adaptive;
    double time_budget_s = 60.0;
    int cv_folds = 5;
    std::string metric = "f1-macro";
    std::uint64_t seed = 0;
    int workers = 1;
    double eval_timeout_s = 10.0;
    SigmaScope sigma_scope = SigmaScope::all;
    RateUpdate rate_update = RateUpdate::every_gen;
    TreeLimits limits;
    std::string data_name; // echoed into the log header
    std::string label_col; // echoed into the log header

    json to_header_config() const
    {
        return json{{"mode", mode == EngineMode::adaptive ? "adaptive" : "fixed"},
                    {"time_budget", time_budget_s},
                    {"cv_folds", cv_folds},
                    {"metric", metric},
                    {"seed", seed},
                    {"workers", workers},
                    {"eval_timeout", eval_timeout_s},
                    {"sigma_scope", sigma_scope == SigmaScope::all ? "all" : "population"},
                    {"rate_update", rate_update == RateUpdate::every_gen ? "every-gen" : "on-stagnation"},
                    {"data", data_name},
                    {"label_col", label_col}};
    }
};

struct Individual {
    PipelineTree tree;
    std::string key;
    FitnessVector fitness;
};

struct RunResult {
    std::vector<Individual> population;
    ParetoFront front;
    RunLog log;
};

// Eq.-style rate update: 1 - sigma / max(all sigmas including the current
// one); full mutation while no dispersion has ever been observed.
inline double mutation_rate_from_sigma(double sigma_gen, double max_sigma_so_far)
{
    if (max_sigma_so_far <= 0.0) return 1.0;
    return 1.0 - sigma_gen / max_sigma_so_far;
}

// Three-case schedule move. `best` pairs the generation's best score with
// the lowest complexity among individuals attaining it.
inline std::int64_t update_population_size(std::int64_t mu, std::pair<double, int> prev_best,
                                           std::pair<double, int> gen_best)
{
    const bool score_improved = gen_best.first > prev_best.first;
    const bool complexity_improved = gen_best.second < prev_best.second;
    if (score_improved && complexity_improved) return FibSchedule::prev(mu);
    if (score_improved || complexity_improved) return mu;
    return FibSchedule::next(mu);
}

namespace detail {

// Population standard deviation (n divisor); for a {0,1}-valued score split
// this tops out at the 0.5 the rate update's scaling assumes.
inline double population_stddev(const std::vector<double>& xs)
{
    if (xs.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ssd = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        ssd += d * d;
    }
    return std::sqrt(ssd / static_cast<double>(xs.size()));
}

inline std::optional<std::pair<double, int>> best_of(const std::vector<Individual>& pop)
{
    std::optional<std::pair<double, int>> best;
    for (const auto& ind : pop) {
        if (!best || ind.fitness.score > best->first
            || (ind.fitness.score == best->first && ind.fitness.complexity < best->second)) {
            best = {ind.fitness.score, ind.fitness.complexity};
        }
    }
    return best;
}

inline ParetoFront front_of(const std::vector<Individual>& pop)
{
    std::vector<ParetoPoint> members;
    members.reserve(pop.size());
    for (const auto& ind : pop) members.push_back({ind.fitness, ind.key});
    return build_front(members);
}

} // namespace detail

// Draws lambda offspring. Each slot picks crossover with probability
// 1 - mutation_rate (needs two distinct-key parents; with a single parent it
// falls back to mutation), resampling parents and operators up to 100 times
// when the draw cannot produce a novel individual, then falling back to a
// novel random stump. A slot whose fallback also comes up empty emits
// nothing but still counts against lambda. Every emitted key is added to
// `seen` immediately so offspring in one batch never collide.
inline std::vector<PipelineTree> generate_offspring(const std::vector<Individual>& population,
                                                    std::int64_t lambda, double mutation_rate,
                                                    const Registry& reg, KeySet& seen, Rng& rng,
                                                    const TreeLimits& limits = {})
{
    std::vector<PipelineTree> offspring;
    offspring.reserve(lambda);
    const std::size_t n = population.size();
    for (std::int64_t slot = 0; slot < lambda; ++slot) {
        std::optional<PipelineTree> child;
        if (n > 0) {
            for (int attempt = 0; attempt < 100 && !child; ++attempt) {
                const bool cross = n >= 2 && rng.bernoulli(1.0 - mutation_rate);
                if (cross) {
                    const std::size_t i = rng.index(n);
                    std::size_t j = rng.index(n - 1);
                    if (j >= i) ++j;
                    child = crossover(population[i].tree, population[j].tree, seen, rng, limits);
                }
                // a crossover draw that cannot produce a novel child (stump
                // parents, exhausted cuts) falls back to mutation, like the
                // mu = 1 case
                if (!child) {
                    child = mutate(population[rng.index(n)].tree, reg, seen, rng, limits);
                }
            }
        }
        if (!child) child = novel_random_stump(reg, seen, rng);
        if (child) {
            seen.insert(canonical_key(*child));
            offspring.push_back(std::move(*child));
        }
    }
    return offspring;
}

namespace detail {

// Evaluates a batch, fanning out to a worker pool when configured. Results
// and cache insertions follow creation order, so runs are reproducible for
// any worker count (evaluation itself is pure).
inline std::vector<EvalOutcome> evaluate_batch(const std::vector<PipelineTree>& trees,
                                               const Dataset& data, const StratifiedFolds& folds,
                                               const EngineConfig& cfg, EvaluationCache& cache,
                                               std::int64_t& evaluations_total)
{
    std::vector<EvalOutcome> outcomes(trees.size());
    if (cfg.workers <= 1 || trees.size() <= 1) {
        for (std::size_t i = 0; i < trees.size(); ++i) {
            outcomes[i] = evaluate_uncached(trees[i], data, folds, cfg.eval_timeout_s);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < trees.size(); i = next.fetch_add(1)) {
                outcomes[i] = evaluate_uncached(trees[i], data, folds, cfg.eval_timeout_s);
            }
        };
        std::vector<std::thread> pool;
        const int count = std::min<int>(cfg.workers, static_cast<int>(trees.size()));
        pool.reserve(count);
        for (int t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < trees.size(); ++i) {
        cache.insert(canonical_key(trees[i]), outcomes[i]);
        ++evaluations_total;
    }
    return outcomes;
}

} // namespace detail

// The (mu + lambda) loop shared by both arms. Adaptive mode starts from a
// single random stump with mu = 1 and full mutation, walks mu along the
// Fibonacci schedule by the three-case rule, sizes lambda as the preceding
// schedule entry, and rescales the mutation rate from the score dispersion.
// Fixed mode pins mu = lambda = 100 and rates 0.9/0.1 over a 100-tree
// initial population of one to three nodes. The time budget is checked at
// generation boundaries; a generation in progress completes.
inline RunResult run_engine(const Dataset& data, const Registry& reg, const EngineConfig& cfg,
                            RunLogWriter* writer = nullptr)
{
    data.validate();
    if (cfg.time_budget_s <= 0.0) throw ConfigError("time budget must be positive");
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    const bool adaptive = cfg.mode == EngineMode::adaptive;

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed_s = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };
    auto elapsed_ms = [&] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t_start)
            .count();
    };

    Rng rng_init = Rng::substream(cfg.seed, "init");
    Rng rng_variation = Rng::substream(cfg.seed, "variation");
    Rng rng_folds = Rng::substream(cfg.seed, "folds");
    const auto folds = StratifiedFolds::make(data.labels, data.n_classes, cfg.cv_folds, rng_folds);

    RunResult result;
    result.log.header = {adaptive ? "adaptive" : "fixed", cfg.seed, cfg.to_header_config(),
                         dataset_digest(data)};
    if (writer) writer->write(to_json(result.log.header));

    EvaluationCache cache;
    KeySet seen;
    std::int64_t evaluations_total = 0;

    // initial population
    std::vector<PipelineTree> initial;
    if (adaptive) {
        PipelineTree stump = random_stump(reg, rng_init);
        seen.insert(canonical_key(stump));
        initial.push_back(std::move(stump));
    } else {
        int safety = 0;
        while (initial.size() < 100 && safety < 100000) {
            PipelineTree t = random_small_tree(reg, rng_init);
            std::string key = canonical_key(t);
            if (!seen.contains(key)) {
                seen.insert(std::move(key));
                initial.push_back(std::move(t));
            }
            ++safety;
        }
    }
    auto initial_outcomes = detail::evaluate_batch(initial, data, folds, cfg, cache, evaluations_total);
    std::vector<Individual> population;
    for (std::size_t i = 0; i < initial.size(); ++i) {
        if (initial_outcomes[i].ok) {
            std::string key = canonical_key(initial[i]);
            population.push_back({std::move(initial[i]), std::move(key), initial_outcomes[i].fitness});
        }
    }

    std::int64_t mu = adaptive ? 1 : 100;
    double mutation_rate = adaptive ? 1.0 : 0.9;
    double crossover_rate = adaptive ? 0.0 : 0.1;
    double max_sigma = 0.0;
    auto prev_best = detail::best_of(population);

    auto emit = [&](std::int64_t gen, std::int64_t lambda, double sigma,
                    std::int64_t offspring_valid) {
        GenRecord r;
        r.gen = gen;
        r.mu = mu;
        r.lambda = lambda;
        r.mutation_rate = mutation_rate;
        r.crossover_rate = crossover_rate;
        r.sigma = sigma;
        r.max_sigma = max_sigma;
        auto best = detail::best_of(population);
        if (best) {
            r.has_best = true;
            r.best_score = best->first;
            r.best_complexity = best->second;
        }
        r.survivors = static_cast<std::int64_t>(population.size());
        r.offspring_valid = offspring_valid;
        r.evaluations_total = evaluations_total;
        r.cache_size = static_cast<std::int64_t>(cache.size());
        r.elapsed_ms = elapsed_ms();
        r.front = detail::front_of(population);
        if (writer) writer->write(to_json(r));
        result.log.records.push_back(std::move(r));
    };

    {
        std::vector<double> init_scores;
        for (const auto& ind : population) init_scores.push_back(ind.fitness.score);
        const double sigma0 = detail::population_stddev(init_scores);
        max_sigma = std::max(max_sigma, sigma0);
        emit(0, adaptive ? offspring_size(mu) : 100, sigma0,
             static_cast<std::int64_t>(population.size()));
    }

    for (std::int64_t gen = 1; elapsed_s() < cfg.time_budget_s; ++gen) {
        const std::int64_t lambda = adaptive ? offspring_size(mu) : 100;
        auto offspring_trees =
            generate_offspring(population, lambda, mutation_rate, reg, seen, rng_variation, cfg.limits);
        auto outcomes = detail::evaluate_batch(offspring_trees, data, folds, cfg, cache,
                                               evaluations_total);

        std::vector<Individual> candidates = population;
        std::int64_t offspring_valid = 0;
        for (std::size_t i = 0; i < offspring_trees.size(); ++i) {
            if (outcomes[i].ok) {
                ++offspring_valid;
                std::string key = canonical_key(offspring_trees[i]);
                candidates.push_back({std::move(offspring_trees[i]), std::move(key),
                                      outcomes[i].fitness});
            }
        }

        std::vector<double> scores;
        const auto& sigma_pool = cfg.sigma_scope == SigmaScope::all ? candidates : population;
        scores.reserve(sigma_pool.size());
        for (const auto& ind : sigma_pool) scores.push_back(ind.fitness.score);
        const double sigma = detail::population_stddev(scores);
        max_sigma = std::max(max_sigma, sigma);

        bool stagnated = false;
        if (adaptive) {
            const auto gen_best = detail::best_of(candidates);
            if (!gen_best) {
                mu = FibSchedule::next(mu); // nothing evaluated: no progression
                stagnated = true;
            } else if (!prev_best) {
                prev_best = gen_best;
            } else {
                const std::int64_t new_mu = update_population_size(mu, *prev_best, *gen_best);
                stagnated = new_mu > mu;
                mu = new_mu;
                prev_best = gen_best;
            }
            if (cfg.rate_update == RateUpdate::every_gen
                || (cfg.rate_update == RateUpdate::on_stagnation && stagnated)) {
                mutation_rate = mutation_rate_from_sigma(sigma, max_sigma);
                crossover_rate = 1.0 - mutation_rate;
            }
        }

        if (!candidates.empty()) {
            std::vector<FitnessVector> fitnesses;
            fitnesses.reserve(candidates.size());
            for (const auto& c : candidates) fitnesses.push_back(c.fitness);
            const auto keep = nsga2_select(fitnesses, static_cast<std::size_t>(mu));
            std::vector<Individual> next_pop;
            next_pop.reserve(keep.size());
            for (auto i : keep) next_pop.push_back(std::move(candidates[i]));
            population = std::move(next_pop);
        }

        emit(gen, lambda, sigma, offspring_valid);

        if (offspring_trees.empty()) {
            // no operator can produce a novel individual anymore
            std::fprintf(stderr, "note: search space exhausted at generation %lld\n",
                         static_cast<long long>(gen));
            break;
        }
    }

    result.front = detail::front_of(population);
    result.population = std::move(population);
    return result;
}

} // namespace evopipe
