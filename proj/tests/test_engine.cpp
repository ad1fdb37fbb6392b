#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "evopipe/engine.hpp"
#include "evopipe/synthetic.hpp"

using namespace evopipe;
using Catch::Approx;

TEST_CASE("fibonacci schedule")
{
    CHECK(FibSchedule::contains(1));
    CHECK(FibSchedule::contains(2));
    CHECK(FibSchedule::contains(3));
    CHECK(FibSchedule::contains(5));
    CHECK(FibSchedule::contains(144));
    CHECK_FALSE(FibSchedule::contains(4));
    CHECK_FALSE(FibSchedule::contains(0));

    CHECK(FibSchedule::next(1) == 2);
    CHECK(FibSchedule::next(2) == 3);
    CHECK(FibSchedule::next(8) == 13);
    CHECK(FibSchedule::prev(2) == 1);
    CHECK(FibSchedule::prev(1) == 1); // clamped floor
    CHECK(FibSchedule::prev(13) == 8);
    CHECK_THROWS_AS(FibSchedule::next(4), std::invalid_argument);

    SECTION("offspring size facts")
    {
        CHECK(offspring_size(144) == 89);
        CHECK(offspring_size(8) == 5);
        CHECK(offspring_size(1) == 1);
    }

    SECTION("increase steps absorb exactly lambda")
    {
        std::int64_t mu = 2;
        for (int i = 0; i < 20; ++i) {
            CHECK(FibSchedule::next(mu) - mu == FibSchedule::prev(mu));
            mu = FibSchedule::next(mu);
        }
    }
}

TEST_CASE("mutation rate from dispersion")
{
    CHECK(mutation_rate_from_sigma(0.25, 0.25) == 0.0);
    CHECK(mutation_rate_from_sigma(0.0, 0.4) == 1.0);
    CHECK(mutation_rate_from_sigma(0.0, 0.0) == 1.0); // no dispersion observed yet
    CHECK(mutation_rate_from_sigma(0.20, 0.25) == Approx(0.2));
}

TEST_CASE("three-case population size update")
{
    // stagnation: next entry
    CHECK(update_population_size(5, {0.80, 2}, {0.80, 2}) == 8);
    // both improved: previous entry
    CHECK(update_population_size(8, {0.80, 3}, {0.85, 2}) == 5);
    // one improved: maintain
    CHECK(update_population_size(8, {0.80, 2}, {0.85, 2}) == 8);
    CHECK(update_population_size(8, {0.80, 2}, {0.80, 1}) == 8);
    // floor stays on the schedule
    CHECK(update_population_size(1, {0.5, 3}, {0.6, 2}) == 1);
}

TEST_CASE("offspring generation")
{
    const Registry reg = default_registry();
    const Dataset d = generate_synthetic({"blobs", 60, 3, 2, 1.0, 17});

    SECTION("single parent cannot cross over")
    {
        Rng rng(5);
        KeySet seen;
        PipelineTree stump = random_stump(reg, rng);
        seen.insert(canonical_key(stump));
        std::vector<Individual> population{{stump, canonical_key(stump), {0.5, 1}}};
        // mutation_rate 0 would always pick crossover if it were possible
        const auto offspring = generate_offspring(population, 10, 0.0, reg, seen, rng);
        CHECK(offspring.size() == 10);
        KeySet batch;
        for (const auto& t : offspring) {
            const std::string key = canonical_key(t);
            CHECK(validate(t).empty());
            CHECK_FALSE(batch.contains(key));
            batch.insert(key);
        }
    }

    SECTION("exhausted neighborhoods fall back to novel stumps")
    {
        Registry tiny;
        tiny.add({"clf_a", PrimitiveKind::classifier, {}});
        tiny.add({"clf_b", PrimitiveKind::classifier, {}});
        tiny.add({"prep", PrimitiveKind::preprocessor, {}});
        Rng rng(3);
        TreeLimits limits;
        limits.max_nodes = 2;

        // parent clf_a(prep); its whole neighborhood and the clf_a stump are
        // cached, so only the clf_b stump is reachable
        PipelineTree parent{{tiny.find("clf_a"), {}, {{tiny.find("prep"), {}, {}}}}};
        KeySet seen{"clf_a{}(prep{})", "clf_b{}(prep{})", "clf_a{}"};
        std::vector<Individual> population{{parent, "clf_a{}(prep{})", {0.5, 2}}};

        const auto offspring = generate_offspring(population, 3, 1.0, tiny, seen, rng, limits);
        REQUIRE(offspring.size() == 1);
        CHECK(canonical_key(offspring[0]) == "clf_b{}");
        // stump space now exhausted: further slots yield nothing
        const auto more = generate_offspring(population, 3, 1.0, tiny, seen, rng, limits);
        CHECK(more.empty());
    }

    SECTION("every emitted offspring is novel against a growing cache")
    {
        Rng rng(29);
        KeySet seen;
        std::vector<Individual> population;
        for (int i = 0; i < 5; ++i) {
            PipelineTree t = random_stump(reg, rng);
            std::string key = canonical_key(t);
            if (seen.contains(key)) continue;
            seen.insert(key);
            population.push_back({std::move(t), std::move(key), {0.1 * i, 1}});
        }
        const auto offspring = generate_offspring(population, 200, 0.5, reg, seen, rng);
        CHECK(offspring.size() == 200);
    }
}

TEST_CASE("engine runs")
{
    const Registry reg = default_registry();
    const Dataset d = generate_synthetic({"blobs", 90, 3, 3, 1.2, 41});

    EngineConfig cfg;
    cfg.time_budget_s = 1.5;
    cfg.cv_folds = 5;
    cfg.seed = 11;
    cfg.eval_timeout_s = 10.0;
    cfg.data_name = "unit-blobs";

    SECTION("adaptive run satisfies the log invariants")
    {
        const auto result = run_engine(d, reg, cfg);
        REQUIRE(result.log.records.size() >= 2);
        const auto issues = validate_runlog(result.log);
        for (const auto& i : issues) UNSCOPED_INFO(i);
        CHECK(issues.empty());
        CHECK_FALSE(result.front.empty());
        CHECK(result.log.records[0].mu == 1);
        CHECK(result.log.records[0].mutation_rate == 1.0);
    }

    SECTION("two runs share a deterministic prefix")
    {
        const auto a = run_engine(d, reg, cfg);
        const auto b = run_engine(d, reg, cfg);
        const std::size_t common = std::min(a.log.records.size(), b.log.records.size());
        REQUIRE(common >= 2);
        for (std::size_t i = 0; i < common; ++i) {
            auto ja = to_json(a.log.records[i]);
            auto jb = to_json(b.log.records[i]);
            ja["elapsed_ms"] = 0;
            jb["elapsed_ms"] = 0;
            CAPTURE(i);
            REQUIRE(ja.dump() == jb.dump());
        }
    }

    SECTION("fixed mode pins the table constants")
    {
        EngineConfig fixed = cfg;
        fixed.mode = EngineMode::fixed;
        fixed.time_budget_s = 2.0;
        const auto result = run_engine(d, reg, fixed);
        const auto issues = validate_runlog(result.log);
        for (const auto& i : issues) UNSCOPED_INFO(i);
        CHECK(issues.empty());
        for (const auto& r : result.log.records) {
            CHECK(r.mu == 100);
            CHECK(r.lambda == 100);
            CHECK(r.mutation_rate == 0.9);
            CHECK(r.crossover_rate == Approx(0.1));
        }
    }

    SECTION("initial trees in fixed mode have one to three nodes")
    {
        EngineConfig fixed = cfg;
        fixed.mode = EngineMode::fixed;
        fixed.time_budget_s = 1e-9; // stop after initialization
        const auto result = run_engine(d, reg, fixed);
        REQUIRE(result.population.size() == 100);
        for (const auto& ind : result.population) {
            const int nodes = complexity(ind.tree);
            CHECK(nodes >= 1);
            CHECK(nodes <= 3);
        }
    }

    SECTION("budget smaller than one evaluation returns the initial stump front")
    {
        EngineConfig tiny = cfg;
        tiny.time_budget_s = 1e-9;
        const auto result = run_engine(d, reg, tiny);
        CHECK(result.log.records.size() == 1);
        CHECK(result.front.size() == 1);
        CHECK(result.front[0].fitness.complexity == 1);
    }

    SECTION("zero eval timeout exhausts the stump space gracefully")
    {
        EngineConfig doomed = cfg;
        doomed.time_budget_s = 30.0; // termination must come from exhaustion
        doomed.eval_timeout_s = 0.0;
        const auto result = run_engine(d, reg, doomed);
        CHECK(result.front.empty());
        CHECK(result.log.records.back().cache_size == 21); // whole stump space
        CHECK(result.log.records.back().elapsed_ms < 10000);
    }

    SECTION("configuration errors precede the loop")
    {
        EngineConfig bad = cfg;
        bad.time_budget_s = 0.0;
        CHECK_THROWS_AS(run_engine(d, reg, bad), ConfigError);

        Dataset tiny_data = generate_synthetic({"blobs", 40, 2, 2, 0.5, 3});
        tiny_data.labels.assign(tiny_data.labels.size(), 0);
        tiny_data.labels[0] = 1; // one lonely instance of class 1
        CHECK_THROWS_AS(run_engine(tiny_data, reg, cfg), ConfigError);
    }

    SECTION("worker fan-out does not change results")
    {
        EngineConfig serial = cfg;
        serial.time_budget_s = 0.8;
        EngineConfig parallel = serial;
        parallel.workers = 2;
        const auto a = run_engine(d, reg, serial);
        const auto b = run_engine(d, reg, parallel);
        const std::size_t common = std::min(a.log.records.size(), b.log.records.size());
        for (std::size_t i = 0; i < common; ++i) {
            auto ja = to_json(a.log.records[i]);
            auto jb = to_json(b.log.records[i]);
            ja["elapsed_ms"] = 0;
            jb["elapsed_ms"] = 0;
            REQUIRE(ja.dump() == jb.dump());
        }
    }
}
