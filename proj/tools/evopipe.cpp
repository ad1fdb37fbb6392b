// Command-line front end: evolve | report | gen-data | validate-log.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "evopipe/csv.hpp"
#include "evopipe/engine.hpp"
#include "evopipe/stats.hpp"
#include "evopipe/synthetic.hpp"

namespace {

using namespace evopipe;

struct EvolveOptions {
    std::string data;
    std::string label_col;
    long time_budget = 60;
    int cv_folds = 5;
    std::string metric = "f1-macro";
    std::uint64_t seed = 0;
    int workers = 1;
    double eval_timeout = 10.0;
    std::string mode = "adaptive";
    std::string out;
    std::string sigma_scope = "all";
    std::string rate_update = "every-gen";
};

int cmd_evolve(const EvolveOptions& opt)
{
    if (opt.time_budget <= 0) throw ConfigError("--time-budget must be positive");
    if (opt.cv_folds < 2) throw ConfigError("--cv-folds must be >= 2");
    if (opt.workers < 1) throw ConfigError("--workers must be >= 1");
    if (opt.metric != "f1-macro") throw ConfigError("unsupported metric '" + opt.metric + "'");

    EngineConfig cfg;
    cfg.mode = opt.mode == "fixed" ? EngineMode::fixed : EngineMode::adaptive;
    cfg.time_budget_s = static_cast<double>(opt.time_budget);
    cfg.cv_folds = opt.cv_folds;
    cfg.metric = opt.metric;
    cfg.seed = opt.seed;
    cfg.workers = opt.workers;
    cfg.eval_timeout_s = opt.eval_timeout;
    cfg.sigma_scope = opt.sigma_scope == "population" ? SigmaScope::population : SigmaScope::all;
    cfg.rate_update =
        opt.rate_update == "on-stagnation" ? RateUpdate::on_stagnation : RateUpdate::every_gen;
    cfg.data_name = opt.data;
    cfg.label_col = opt.label_col;

    const Dataset data = load_csv(opt.data, opt.label_col);
    const Registry reg = default_registry();

    RunLogWriter writer(opt.out);
    const RunResult result = run_engine(data, reg, cfg, &writer);

    std::printf("generations: %zu  evaluations: %lld\n", result.log.records.size(),
                static_cast<long long>(result.log.records.back().evaluations_total));
    std::printf("%-10s %-10s %s\n", "score", "complexity", "pipeline");
    for (const auto& p : result.front) {
        std::printf("%-10.4f %-10d %s\n", p.fitness.score, p.fitness.complexity, p.key.c_str());
    }
    return 0;
}

std::pair<double, double> parse_hv_ref(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("--hv-ref expects 'score,complexity'");
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

int cmd_report(const std::vector<std::string>& files_a, const std::vector<std::string>& files_b,
               const std::string& hv_ref_text, bool with_wilcoxon, const std::string& out_dir)
{
    const auto [s_ref, c_ref] = parse_hv_ref(hv_ref_text);
    std::vector<RunLog> runs_a, runs_b;
    for (const auto& f : files_a) runs_a.push_back(read_runlog(f));
    for (const auto& f : files_b) runs_b.push_back(read_runlog(f));

    const auto report = compare_report(runs_a, runs_b, s_ref, c_ref, with_wilcoxon);

    std::filesystem::create_directories(out_dir);
    {
        std::ofstream json_out(out_dir + "/report.json");
        json_out << to_json(report).dump(2) << '\n';
    }
    const std::string table = to_table(report);
    {
        std::ofstream table_out(out_dir + "/report.txt");
        table_out << table;
    }
    for (const auto& d : report.datasets) {
        auto write_frontier = [&](const ParetoFront& f, const std::string& method) {
            std::ofstream csv(out_dir + "/frontier_" + d.name + "_" + method + ".csv");
            csv << "complexity,mean_score\n";
            for (auto it = f.rbegin(); it != f.rend(); ++it) {
                char buf[64];
                auto [p, ec] = std::to_chars(buf, buf + sizeof buf, it->fitness.score);
                csv << it->fitness.complexity << ',' << std::string_view(buf, p - buf) << '\n';
            }
        };
        write_frontier(d.frontier_a, "a");
        write_frontier(d.frontier_b, "b");
    }
    std::fputs(table.c_str(), stdout);
    return 0;
}

int cmd_gen_data(const SyntheticSpec& spec, const std::string& out)
{
    const Dataset d = generate_synthetic(spec);
    save_csv(d, out);
    std::printf("wrote %zu instances x %zu features, %d classes to %s\n", d.n_instances(),
                d.n_features(), d.n_classes, out.c_str());
    return 0;
}

int cmd_validate_log(const std::vector<std::string>& logs, const std::string& compare)
{
    int status = 0;
    for (const auto& path : logs) {
        const auto issues = validate_runlog(read_runlog(path));
        if (issues.empty()) {
            std::printf("%s: ok\n", path.c_str());
        } else {
            status = 1;
            std::printf("%s: %zu issue(s)\n", path.c_str(), issues.size());
            for (const auto& i : issues) std::printf("  %s\n", i.c_str());
        }
    }
    if (!compare.empty()) {
        if (logs.size() != 1) throw ConfigError("--compare needs exactly one --log");
        const auto a = masked_lines(logs[0]);
        const auto b = masked_lines(compare);
        if (a == b) {
            std::printf("logs identical (elapsed_ms masked)\n");
        } else {
            status = 1;
            if (a.size() != b.size()) {
                std::printf("logs differ: %zu vs %zu lines\n", a.size(), b.size());
            } else {
                for (std::size_t i = 0; i < a.size(); ++i) {
                    if (a[i] != b[i]) {
                        std::printf("logs differ at line %zu\n", i + 1);
                        break;
                    }
                }
            }
        }
    }
    return status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"adaptive evolutionary search over ML pipeline trees"};
    app.require_subcommand(1);

    EvolveOptions evolve;
    auto* cmd_ev = app.add_subcommand("evolve", "run one evolutionary search");
    cmd_ev->add_option("--data", evolve.data, "input CSV with header row")->required();
    cmd_ev->add_option("--label-col", evolve.label_col, "label column name (default: last column)");
    cmd_ev->add_option("--time-budget", evolve.time_budget, "run budget in seconds")->required();
    cmd_ev->add_option("--cv-folds", evolve.cv_folds, "internal CV folds (default 5)");
    cmd_ev->add_option("--metric", evolve.metric, "scoring metric (f1-macro)");
    cmd_ev->add_option("--seed", evolve.seed, "master seed");
    cmd_ev->add_option("--workers", evolve.workers, "evaluation worker threads");
    cmd_ev->add_option("--eval-timeout", evolve.eval_timeout, "per-pipeline timeout in seconds");
    cmd_ev->add_option("--mode", evolve.mode, "adaptive|fixed")
        ->check(CLI::IsMember({"adaptive", "fixed"}));
    cmd_ev->add_option("--out", evolve.out, "run log output path (JSONL)")->required();
    cmd_ev->add_option("--sigma-scope", evolve.sigma_scope, "dispersion pool: all|population")
        ->check(CLI::IsMember({"all", "population"}));
    cmd_ev->add_option("--rate-update", evolve.rate_update, "every-gen|on-stagnation")
        ->check(CLI::IsMember({"every-gen", "on-stagnation"}));

    std::vector<std::string> report_a, report_b;
    std::string hv_ref = "0,10";
    bool with_wilcoxon = false;
    std::string report_out = ".";
    auto* cmd_rp = app.add_subcommand("report", "compare two sets of run logs");
    cmd_rp->add_option("--a", report_a, "run logs for method A")->required()->expected(-1);
    cmd_rp->add_option("--b", report_b, "run logs for method B")->required()->expected(-1);
    cmd_rp->add_option("--hv-ref", hv_ref, "hypervolume reference 'score,complexity'");
    cmd_rp->add_flag("--wilcoxon", with_wilcoxon, "run signed-rank tests across datasets");
    cmd_rp->add_option("--out", report_out, "output directory");

    SyntheticSpec gen_spec;
    std::string gen_out;
    auto* cmd_gd = app.add_subcommand("gen-data", "write a synthetic dataset as CSV");
    cmd_gd->add_option("--kind", gen_spec.kind, "blobs|xor|spirals")
        ->check(CLI::IsMember({"blobs", "xor", "spirals"}));
    cmd_gd->add_option("--instances", gen_spec.instances, "instance count");
    cmd_gd->add_option("--features", gen_spec.features, "feature count");
    cmd_gd->add_option("--classes", gen_spec.classes, "class count");
    cmd_gd->add_option("--noise", gen_spec.noise, "noise level");
    cmd_gd->add_option("--seed", gen_spec.seed, "generator seed");
    cmd_gd->add_option("--out", gen_out, "output CSV path")->required();

    std::vector<std::string> logs;
    std::string compare;
    auto* cmd_vl = app.add_subcommand("validate-log", "check run logs against the schema");
    cmd_vl->add_option("--log", logs, "run log path(s)")->required()->expected(-1);
    cmd_vl->add_option("--compare", compare, "second log for a masked determinism comparison");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_ev->parsed()) return cmd_evolve(evolve);
        if (cmd_rp->parsed()) return cmd_report(report_a, report_b, hv_ref, with_wilcoxon, report_out);
        if (cmd_gd->parsed()) return cmd_gen_data(gen_spec, gen_out);
        if (cmd_vl->parsed()) return cmd_validate_log(logs, compare);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
