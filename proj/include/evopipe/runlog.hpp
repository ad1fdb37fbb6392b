#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "evopipe/errors.hpp"
#include "evopipe/fib.hpp"
#include "evopipe/moo.hpp"

namespace evopipe {

using nlohmann::json;

// JSONL run log: one header line {mode, seed, config, dataset_digest}
// followed by one record per generation. Every line is flushed as written,
// so a killed run leaves a parseable prefix.

struct RunHeader {
    std::string mode;
    std::uint64_t seed = 0;
    json config;
    std::string dataset_digest;
};

struct GenRecord {
    std::int64_t gen = 0;
    std::int64_t mu = 0;
    std::int64_t lambda = 0;
    double mutation_rate = 1.0;
    double crossover_rate = 0.0;
    double sigma = 0.0;
    double max_sigma = 0.0;
    bool has_best = false;
    double best_score = 0.0;
    std::int64_t best_complexity = 0;
    std::int64_t survivors = 0;
    std::int64_t offspring_valid = 0;
    std::int64_t evaluations_total = 0;
    std::int64_t cache_size = 0;
    std::int64_t elapsed_ms = 0;
    ParetoFront front;
};

struct RunLog {
    RunHeader header;
    std::vector<GenRecord> records;

    const ParetoFront& final_front() const
    {
        if (records.empty()) throw ConfigError("run log has no generation records");
        return records.back().front;
    }
};

inline json to_json(const RunHeader& h)
{
    return json{{"mode", h.mode},
                {"seed", h.seed},
                {"config", h.config},
                {"dataset_digest", h.dataset_digest}};
}

inline json to_json(const GenRecord& r)
{
    json front = json::array();
    for (const auto& p : r.front) {
        front.push_back({{"score", p.fitness.score},
                         {"complexity", p.fitness.complexity},
                         {"key", p.key}});
    }
    json j{{"gen", r.gen},
           {"mu", r.mu},
           {"lambda", r.lambda},
           {"mutation_rate", r.mutation_rate},
           {"crossover_rate", r.crossover_rate},
           {"sigma", r.sigma},
           {"max_sigma", r.max_sigma},
           {"survivors", r.survivors},
           {"offspring_valid", r.offspring_valid},
           {"evaluations_total", r.evaluations_total},
           {"cache_size", r.cache_size},
           {"elapsed_ms", r.elapsed_ms},
           {"front", std::move(front)}};
    if (r.has_best) {
        j["best_score"] = r.best_score;
        j["best_complexity"] = r.best_complexity;
    } else {
        j["best_score"] = nullptr;
        j["best_complexity"] = nullptr;
    }
    return j;
}

inline RunHeader header_from_json(const json& j)
{
    RunHeader h;
    h.mode = j.at("mode").get<std::string>();
    h.seed = j.at("seed").get<std::uint64_t>();
    h.config = j.at("config");
    h.dataset_digest = j.at("dataset_digest").get<std::string>();
    return h;
}

inline GenRecord record_from_json(const json& j)
{
    GenRecord r;
    r.gen = j.at("gen").get<std::int64_t>();
    r.mu = j.at("mu").get<std::int64_t>();
    r.lambda = j.at("lambda").get<std::int64_t>();
    r.mutation_rate = j.at("mutation_rate").get<double>();
    r.crossover_rate = j.at("crossover_rate").get<double>();
    r.sigma = j.at("sigma").get<double>();
    r.max_sigma = j.at("max_sigma").get<double>();
    if (!j.at("best_score").is_null()) {
        r.has_best = true;
        r.best_score = j.at("best_score").get<double>();
        r.best_complexity = j.at("best_complexity").get<std::int64_t>();
    }
    r.survivors = j.at("survivors").get<std::int64_t>();
    r.offspring_valid = j.at("offspring_valid").get<std::int64_t>();
    r.evaluations_total = j.at("evaluations_total").get<std::int64_t>();
    r.cache_size = j.at("cache_size").get<std::int64_t>();
    r.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
    for (const auto& p : j.at("front")) {
        r.front.push_back({{p.at("score").get<double>(), p.at("complexity").get<int>()},
                           p.at("key").get<std::string>()});
    }
    return r;
}

// Streams log lines to disk, one flush per line.
class RunLogWriter {
public:
    explicit RunLogWriter(const std::string& path) : out_(path)
    {
        if (!out_) throw ConfigError("cannot open run log '" + path + "' for writing");
    }

    void write(const json& line)
    {
        out_ << line.dump() << '\n';
        out_.flush();
    }

private:
    std::ofstream out_;
};

inline RunLog read_runlog(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read run log '" + path + "'");
    RunLog log;
    std::string line;
    bool have_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        try {
            if (!have_header) {
                log.header = header_from_json(j);
                have_header = true;
            } else {
                log.records.push_back(record_from_json(j));
            }
        } catch (const json::exception& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!have_header) throw ConfigError(path + ": missing header record");
    return log;
}

// Schema and invariant checks. Returns human-readable violations; empty
// means the log is well-formed.
inline std::vector<std::string> validate_runlog(const RunLog& log)
{
    std::vector<std::string> issues;
    auto flag = [&](std::int64_t gen, const std::string& what) {
        issues.push_back("gen " + std::to_string(gen) + ": " + what);
    };

    const bool adaptive = log.header.mode == "adaptive";
    if (!adaptive && log.header.mode != "fixed") {
        issues.push_back("header: unknown mode '" + log.header.mode + "'");
    }
    const std::string rate_update =
        log.header.config.value("rate_update", std::string("every-gen"));

    double max_sigma_seen = 0.0;
    double prev_best = -1.0;
    bool sigma_positive_seen = false;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        const auto& r = log.records[i];
        if (r.gen != static_cast<std::int64_t>(i)) flag(r.gen, "generation indices not consecutive");

        if (r.mutation_rate < 0.0 || r.mutation_rate > 1.0) flag(r.gen, "mutation_rate outside [0,1]");
        if (r.crossover_rate != 1.0 - r.mutation_rate
            && r.mutation_rate + r.crossover_rate != 1.0) {
            flag(r.gen, "crossover_rate != 1 - mutation_rate");
        }
        if (r.sigma < 0.0) flag(r.gen, "negative sigma");
        if (r.sigma > 0.0) sigma_positive_seen = true;
        max_sigma_seen = std::max(max_sigma_seen, r.sigma);
        if (r.max_sigma != max_sigma_seen) flag(r.gen, "max_sigma is not the running maximum");

        if (r.evaluations_total != r.cache_size) {
            flag(r.gen, "evaluations_total != cache_size (a key was evaluated twice)");
        }
        if (i > 0 && r.evaluations_total < log.records[i - 1].evaluations_total) {
            flag(r.gen, "evaluations_total decreased");
        }

        if (adaptive) {
            if (!FibSchedule::contains(r.mu)) flag(r.gen, "mu off the schedule");
            if (i > 0) {
                const auto prev_mu = log.records[i - 1].mu;
                if (r.mu != prev_mu && r.mu != FibSchedule::next(prev_mu)
                    && r.mu != FibSchedule::prev(prev_mu)) {
                    flag(r.gen, "mu transition is not equal/adjacent on the schedule");
                }
                if (r.lambda != offspring_size(prev_mu)) {
                    flag(r.gen, "lambda != preceding schedule entry of previous mu");
                }
                if (r.mu > prev_mu && r.survivors != log.records[i - 1].survivors + r.lambda) {
                    flag(r.gen, "increase step did not absorb all offspring");
                }
            } else if (r.mu != 1) {
                flag(r.gen, "adaptive run must start at mu = 1");
            }
            if (!sigma_positive_seen && r.mutation_rate != 1.0) {
                flag(r.gen, "mutation_rate left 1 before any sigma > 0");
            }
            if (rate_update == "every-gen" && i > 0) {
                const double expected = r.max_sigma > 0.0 ? 1.0 - r.sigma / r.max_sigma : 1.0;
                if (r.mutation_rate != expected) flag(r.gen, "mutation_rate deviates from the update rule");
            }
        } else {
            if (r.mu != 100 || r.lambda != 100) flag(r.gen, "fixed mode requires mu = lambda = 100");
            if (r.mutation_rate != 0.9 || r.crossover_rate != 0.1) {
                flag(r.gen, "fixed mode requires rates 0.9/0.1");
            }
        }

        if (r.has_best) {
            if (r.best_score < 0.0 || r.best_score > 1.0) flag(r.gen, "best_score outside [0,1]");
            if (r.best_score < prev_best) flag(r.gen, "best_score decreased (elitism violated)");
            prev_best = std::max(prev_best, r.best_score);
            if (r.front.empty()) {
                flag(r.gen, "best fitness present but front empty");
            } else {
                double front_best = 0.0;
                for (const auto& p : r.front) front_best = std::max(front_best, p.fitness.score);
                if (front_best != r.best_score) flag(r.gen, "best_score != best front score");
            }
        } else if (!r.front.empty()) {
            flag(r.gen, "front present but best fitness missing");
        }

        for (std::size_t a = 0; a < r.front.size(); ++a) {
            const auto& fa = r.front[a].fitness;
            if (fa.score < 0.0 || fa.score > 1.0 || fa.complexity < 1) flag(r.gen, "front point out of range");
            for (std::size_t b = 0; b < r.front.size(); ++b) {
                if (a != b && dominates(r.front[b].fitness, fa)) {
                    flag(r.gen, "front contains a dominated point");
                }
            }
        }
    }
    if (log.records.empty()) issues.push_back("log has no generation records");
    return issues;
}

// Log lines with volatile timing masked out; byte-wise equality of these is
// the determinism contract for single-worker runs.
inline std::vector<std::string> masked_lines(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read run log '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j.contains("elapsed_ms")) j["elapsed_ms"] = 0;
        out.push_back(j.dump());
    }
    return out;
}

} // namespace evopipe
