#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "evopipe/csv.hpp"
#include "evopipe/evaluation.hpp"
#include "evopipe/synthetic.hpp"
#include "evopipe/variation.hpp"

using namespace evopipe;
using Catch::Approx;

namespace {

const std::string kDataDir = EVOPIPE_TEST_DATA_DIR;

} // namespace

TEST_CASE("macro f1")
{
    SECTION("perfect prediction scores 1")
    {
        CHECK(macro_f1({0, 1, 2, 1}, {0, 1, 2, 1}, 3) == 1.0);
    }

    SECTION("all-wrong binary prediction scores 0")
    {
        CHECK(macro_f1({1, 1, 0, 0}, {0, 0, 1, 1}, 2) == 0.0);
    }

    SECTION("hand-computed confusion example")
    {
        // class F1s are {1.0, 0.5, 0.5}
        CHECK(macro_f1({0, 0, 1, 2, 2, 1}, {0, 0, 1, 1, 2, 2}, 3) == Approx(2.0 / 3.0));
    }

    SECTION("classes absent from both sides are excluded")
    {
        // class 2 never appears; average over classes 0 and 1 only
        CHECK(macro_f1({0, 1}, {0, 1}, 3) == 1.0);
    }

    SECTION("undefined recall contributes zero")
    {
        // class 1 predicted but absent from actuals: F1(0) = 2/3, F1(1) = 0
        CHECK(macro_f1({0, 1}, {0, 0}, 2) == Approx((2.0 / 3.0 + 0.0) / 2.0));
    }

    SECTION("empty input violates the precondition")
    {
        CHECK_THROWS_AS(macro_f1({}, {}, 2), std::invalid_argument);
    }
}

TEST_CASE("stratified folds")
{
    SECTION("per-fold class counts stay within one of proportional")
    {
        std::vector<int> labels;
        for (int i = 0; i < 47; ++i) labels.push_back(0);
        for (int i = 0; i < 31; ++i) labels.push_back(1);
        for (int i = 0; i < 22; ++i) labels.push_back(2);
        Rng rng(5);
        const auto folds = StratifiedFolds::make(labels, 3, 5, rng);
        REQUIRE(folds.k == 5);
        for (int c = 0; c < 3; ++c) {
            std::vector<int> per_fold(5, 0);
            int total = 0;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] == c) {
                    ++per_fold[folds.assignment[i]];
                    ++total;
                }
            }
            for (int f = 0; f < 5; ++f) {
                CHECK(per_fold[f] >= total / 5);
                CHECK(per_fold[f] <= total / 5 + 1);
            }
        }
    }

    SECTION("assignment depends only on labels, k and seed")
    {
        std::vector<int> labels(60);
        for (int i = 0; i < 60; ++i) labels[i] = i % 2;
        Rng a(9), b(9);
        CHECK(StratifiedFolds::make(labels, 2, 5, a).assignment
              == StratifiedFolds::make(labels, 2, 5, b).assignment);
    }

    SECTION("k reduces to the smallest class count")
    {
        std::vector<int> labels{0, 0, 0, 0, 0, 0, 1, 1, 1};
        Rng rng(2);
        CHECK(StratifiedFolds::make(labels, 2, 5, rng).k == 3);
    }

    SECTION("a 1-instance class cannot be stratified")
    {
        std::vector<int> labels{0, 0, 0, 1};
        Rng rng(2);
        CHECK_THROWS_AS(StratifiedFolds::make(labels, 2, 5, rng), ConfigError);
    }
}

TEST_CASE("evaluate caches outcomes and counts no fits on hits")
{
    const Registry reg = default_registry();
    const Dataset d = generate_synthetic({"blobs", 100, 3, 2, 1.0, 33});
    Rng rng(1);
    const auto folds = StratifiedFolds::make(d.labels, d.n_classes, 5, rng);
    const PipelineTree stump{{reg.find("decision_tree"), {ParamValue{std::int64_t{5}}}, {}}};

    EvaluationCache cache;
    const auto first = evaluate(stump, d, folds, 10.0, cache);
    REQUIRE(first.ok);
    CHECK(first.fitness.complexity == 1);
    CHECK(first.fitness.score >= 0.0);
    CHECK(first.fitness.score <= 1.0);
    CHECK(cache.size() == 1);

    FitCounter::reset();
    const auto second = evaluate(stump, d, folds, 10.0, cache);
    CHECK(FitCounter::value() == 0); // cache hit: zero model fits
    CHECK(second.ok);
    CHECK(second.fitness == first.fitness);
    CHECK(cache.size() == 1);
}

TEST_CASE("zero timeout fails every tree and the failure is cached")
{
    const Registry reg = default_registry();
    const Dataset d = generate_synthetic({"blobs", 60, 3, 2, 1.0, 3});
    Rng rng(1);
    const auto folds = StratifiedFolds::make(d.labels, d.n_classes, 5, rng);
    const PipelineTree stump{{reg.find("knn"), {ParamValue{std::int64_t{1}}}, {}}};

    EvaluationCache cache;
    const auto outcome = evaluate(stump, d, folds, 0.0, cache);
    REQUIRE_FALSE(outcome.ok);
    CHECK(outcome.fail_reason == "timeout");

    FitCounter::reset();
    const auto again = evaluate(stump, d, folds, 0.0, cache);
    CHECK_FALSE(again.ok);
    CHECK(FitCounter::value() == 0);
    CHECK(cache.size() == 1);
}

TEST_CASE("cv score agrees with the external oracle on identical folds")
{
    const Registry reg = default_registry();
    const Dataset d = load_csv(kDataDir + "/cv_blobs_150.csv");
    Rng rng = Rng::substream(7, "folds");
    const auto folds = StratifiedFolds::make(d.labels, d.n_classes, 5, rng);

    // guard: the fold assignment must match the one the oracle script read
    std::ifstream fold_file(kDataDir + "/cv_blobs_150_folds.txt");
    REQUIRE(fold_file.good());
    std::vector<int> frozen_assignment;
    int v;
    while (fold_file >> v) frozen_assignment.push_back(v);
    REQUIRE(folds.assignment == frozen_assignment);

    std::ifstream score_file(kDataDir + "/cv_blobs_150_expected.txt");
    REQUIRE(score_file.good());
    double oracle_score = -1.0;
    score_file >> oracle_score;

    const PipelineTree stump{{reg.find("decision_tree"), {ParamValue{std::int64_t{10}}}, {}}};
    EvaluationCache cache;
    const auto outcome = evaluate(stump, d, folds, 10.0, cache);
    REQUIRE(outcome.ok);
    CHECK(outcome.fitness.score == Approx(oracle_score).margin(0.05));
}

TEST_CASE("scores stay in [0,1] across random pipelines")
{
    const Registry reg = default_registry();
    const Dataset d = generate_synthetic({"xor", 80, 3, 2, 0.1, 12});
    Rng rng(77);
    const auto folds = StratifiedFolds::make(d.labels, d.n_classes, 4, rng);
    EvaluationCache cache;
    KeySet seen;
    PipelineTree t = random_stump(reg, rng);
    for (int i = 0; i < 25; ++i) {
        const auto outcome = evaluate(t, d, folds, 10.0, cache);
        if (outcome.ok) {
            CHECK(outcome.fitness.score >= 0.0);
            CHECK(outcome.fitness.score <= 1.0);
            CHECK(outcome.fitness.complexity == complexity(t));
        }
        seen.insert(canonical_key(t));
        auto next = mutate(t, reg, seen, rng);
        if (!next) break;
        t = std::move(*next);
    }
    CHECK(cache.size() >= 20);
}

TEST_CASE("cache persistence round-trips successes and failures")
{
    EvaluationCache cache;
    cache.insert("knn{k=3}", EvalOutcome::success({0.8125, 1}));
    cache.insert("knn{k=3}(binarizer{})", EvalOutcome::success({0.90625, 2}));
    cache.insert("logistic{l2=10}", EvalOutcome::failure("timeout"));

    const std::string path = "cache_roundtrip_test.tsv";
    cache.save(path);

    EvaluationCache loaded;
    loaded.load(path);
    REQUIRE(loaded.size() == 3);
    const auto hit = loaded.find("knn{k=3}");
    REQUIRE(hit.has_value());
    CHECK(hit->ok);
    CHECK(hit->fitness.score == 0.8125);
    CHECK(hit->fitness.complexity == 1);
    const auto failed = loaded.find("logistic{l2=10}");
    REQUIRE(failed.has_value());
    CHECK_FALSE(failed->ok);
    CHECK(failed->fail_reason == "timeout");
    std::remove(path.c_str());
}
