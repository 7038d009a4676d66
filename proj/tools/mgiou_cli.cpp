// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface: evaluate losses on shape/trajectory files, run fits,
// audit the property suites, benchmark against the oracle and generate
// random corpora. Exit codes: 0 ok, 1 property violation, 2 input error,
// 3 optimization divergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "mgiou/audit.hpp"
#include "mgiou/fit.hpp"
#include "mgiou/grad.hpp"
#include "mgiou/mgiou.hpp"
#include "mgiou/mgiou_minus.hpp"
#include "mgiou/random_shapes.hpp"
#include "mgiou/shape_json.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

int max_threads() {
    if (const char* env = std::getenv("MGIOU_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return int(std::thread::hardware_concurrency());
}

json manifest(const std::string& command, const json& config, std::uint64_t seed, double wall_ms) {
    json m{{"command", command}, {"config", config}, {"version", kVersion}, {"seed", seed}};
    if (wall_ms >= 0) m["wall_ms"] = wall_ms;
    return json{{"manifest", m}};
}

void open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return;  // caller falls back to std::cout
    file.open(path);
    if (!file) throw mgiou::Error(mgiou::Errc::InputError, "cannot open output file: " + path);
}

std::ostream& out_stream(std::ofstream& file) { return file.is_open() ? file : std::cout; }

// ---- eval ------------------------------------------------------------------

std::string eval_record(const std::string& line, double default_lambda) {
    json rec = json::parse(line);
    if (rec.contains("agents")) {
        auto batch = mgiou::batch_from_json(rec);
        return mgiou::report_to_json(mgiou::mgiou_minus(batch)).dump();
    }
    mgiou::ConvexShape p = mgiou::shape_from_json(rec.at("p"));
    mgiou::ConvexShape g = mgiou::shape_from_json(rec.at("g"));
    mgiou::MgiouConfig cfg;
    cfg.lambda = rec.value("lambda", default_lambda);
    cfg.mode = rec.value("mode", std::string("structured")) == "unstructured"
                   ? mgiou::Mode::Unstructured
                   : mgiou::Mode::Structured;
    return mgiou::result_to_json(mgiou::mgiou_plus(p, g, cfg)).dump();
}

int cmd_eval(const std::string& input, const std::string& output, const std::string& mode,
             double lambda) {
    std::ifstream in_file;
    if (input != "-") {
        in_file.open(input);
        if (!in_file) {
            std::cerr << "eval: cannot open " << input << "\n";
            return 2;
        }
    }
    std::istream& in = input == "-" ? std::cin : in_file;
    std::ofstream out_file;
    open_output(output, out_file);
    std::ostream& out = out_stream(out_file);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);

    const int workers = std::max(1, std::min<int>(max_threads(), int(lines.size())));
    std::vector<std::string> results(lines.size());
    std::vector<std::string> errors(lines.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < lines.size();) {
            if (lines[i].empty()) continue;
            try {
                std::string rec = lines[i];
                std::string ln = rec;
                // apply CLI-level mode override by merging into the record
                json j = json::parse(ln);
                if (!mode.empty() && !j.contains("agents")) j["mode"] = mode;
                results[i] = eval_record(j.dump(), lambda);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();

    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!errors[i].empty()) {
            std::cerr << "eval: line " << (i + 1) << ": " << errors[i] << "\n";
            return 2;
        }
        if (!results[i].empty()) out << results[i] << "\n";
    }
    double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out << manifest("eval", {{"mode", mode}, {"lambda", lambda}}, 0, wall).dump() << "\n";
    return 0;
}

// ---- fit -------------------------------------------------------------------

mgiou::ConvexShape load_shape(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mgiou::Error(mgiou::Errc::InputError, "cannot open " + path);
    json j;
    in >> j;
    return mgiou::shape_from_json(j);
}

int cmd_fit(const std::string& init_path, const std::string& target_path,
            const std::string& trace_path, const std::string& out_path, const mgiou::FitConfig& cfg,
            bool separation) {
    auto t0 = std::chrono::steady_clock::now();
    mgiou::FitTrace trace;
    json final_obj;
    std::string metric_name;

    if (separation) {
        std::ifstream in(init_path);
        if (!in) {
            std::cerr << "fit: cannot open " << init_path << "\n";
            return 2;
        }
        json j;
        in >> j;
        auto batch = mgiou::batch_from_json(j);
        trace = mgiou::fit_separation(batch, cfg);
        final_obj = mgiou::batch_to_json(mgiou::batch_from_trace(batch, trace));
        metric_name = "collisions";
    } else {
        auto init = load_shape(init_path);
        auto target = load_shape(target_path);
        trace = mgiou::fit_shape(init, target, cfg);
        final_obj = mgiou::shape_to_json(mgiou::shape_from_trace(init, trace));
        metric_name = "exact_iou";
    }
    double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    json cfg_echo{{"steps", cfg.steps},   {"lr", cfg.lr},           {"momentum", cfg.momentum},
                  {"lambda", cfg.lambda}, {"stop_tol", cfg.stop_tol}};
    std::ofstream trace_file;
    open_output(trace_path, trace_file);
    std::ostream& tr = out_stream(trace_file);
    tr << "# manifest: " << manifest("fit", cfg_echo, cfg.seed, wall)["manifest"].dump() << "\n";
    tr << "step,loss," << metric_name << "\n";
    for (std::size_t i = 0; i < trace.loss.size(); ++i)
        tr << i << "," << trace.loss[i] << "," << trace.metric[i] << "\n";

    final_obj["manifest"] = manifest("fit", cfg_echo, cfg.seed, wall)["manifest"];
    final_obj["converged"] = trace.converged;
    if (out_path.empty() || out_path == "-") {
        std::cout << final_obj.dump() << "\n";
    } else {
        std::ofstream out(out_path);
        out << final_obj.dump() << "\n";
    }
    return 0;
}

// ---- audit -----------------------------------------------------------------

int cmd_audit(const std::string& suite, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 100) {
        std::cerr << "audit: --trials must be at least 100\n";
        return 2;
    }
    mgiou::audit::SuiteReport rep;
    if (suite == "equivalence")
        rep = mgiou::audit::equivalence(trials, seed);
    else if (suite == "metric")
        rep = mgiou::audit::metric(trials, seed);
    else if (suite == "gradient")
        rep = mgiou::audit::gradient(trials, seed);
    else if (suite == "correlation")
        rep = mgiou::audit::correlation(trials, seed);
    else {
        std::cerr << "audit: unknown suite " << suite << "\n";
        return 2;
    }
    std::cout << rep.name << ": " << (rep.pass ? "PASS" : "FAIL") << " (measured " << rep.measured
              << ")\n"
              << rep.detail << "\n";
    return rep.pass ? 0 : 1;
}

// ---- bench -----------------------------------------------------------------

int cmd_bench(std::size_t pairs, const std::string& shape, int repeat, std::uint64_t seed,
              const std::string& output) {
    auto rep = mgiou::audit::bench(pairs, shape, repeat, seed);
    std::ofstream out_file;
    open_output(output, out_file);
    std::ostream& out = out_stream(out_file);
    json cfg{{"pairs", pairs}, {"shape", shape}, {"repeat", repeat}};
    out << "# manifest: " << manifest("bench", cfg, seed, rep.mgiou_ms + rep.oracle_ms)["manifest"].dump()
        << "\n";
    out << "metric,mgiou_ms,oracle_ms,speedup\n";
    out << "median," << rep.mgiou_ms << "," << rep.oracle_ms << "," << rep.ratio << "\n";
    return 0;
}

// ---- gen -------------------------------------------------------------------

int cmd_gen(const std::string& kind, std::size_t count, std::uint64_t seed,
            const std::string& output) {
    mgiou::gen::Rng rng(seed);
    std::ofstream out_file;
    open_output(output, out_file);
    std::ostream& out = out_stream(out_file);
    json cfg{{"kind", kind}, {"count", count}};
    out << manifest("gen", cfg, seed, -1).dump() << "\n";
    for (std::size_t i = 0; i < count; ++i) {
        if (kind == "rect") {
            mgiou::RotatedRect p = mgiou::gen::random_rect(rng);
            mgiou::RotatedRect g = mgiou::gen::random_rect_near(rng, p, 2.0);
            out << json{{"p", mgiou::shape_to_json(p)}, {"g", mgiou::shape_to_json(g)}}.dump() << "\n";
        } else if (kind == "polygon") {
            json rec{{"p", mgiou::shape_to_json(mgiou::gen::random_convex_polygon(rng))},
                     {"g", mgiou::shape_to_json(mgiou::gen::random_convex_polygon(rng))},
                     {"mode", "unstructured"}};
            out << rec.dump() << "\n";
        } else if (kind == "traj") {
            auto batch = mgiou::gen::random_trajectory(rng, 3, 8, true);
            out << mgiou::batch_to_json(batch).dump() << "\n";
        } else {
            std::cerr << "gen: unknown kind " << kind << "\n";
            return 2;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MGIoU loss family: projection-based convex shape similarity"};
    app.require_subcommand(1);

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate losses on a JSONL pair/trajectory file");
    std::string eval_in = "-", eval_out, eval_mode;
    double eval_lambda = 1.0;
    eval->add_option("input", eval_in, "input JSONL file, - for stdin");
    eval->add_option("-o,--output", eval_out, "output JSONL file (default stdout)");
    eval->add_option("--mode", eval_mode, "override mode: structured|unstructured");
    eval->add_option("--lambda", eval_lambda, "convexity weight");

    // fit
    auto* fit = app.add_subcommand("fit", "gradient-descent shape alignment or separation");
    std::string fit_init, fit_target, fit_trace, fit_out;
    bool fit_sep = false;
    mgiou::FitConfig fcfg;
    fit->add_option("--init", fit_init, "initial shape JSON (or trajectory file with --separate)")
        ->required();
    fit->add_option("--target", fit_target, "target shape JSON");
    fit->add_flag("--separate", fit_sep, "run MGIoU- separation on a trajectory file");
    fit->add_option("--trace", fit_trace, "trace CSV output (default stdout)");
    fit->add_option("--out", fit_out, "final shape JSON output (default stdout)");
    fit->add_option("--steps", fcfg.steps, "max steps");
    fit->add_option("--lr", fcfg.lr, "learning rate");
    fit->add_option("--momentum", fcfg.momentum, "heavy-ball momentum");
    fit->add_option("--lambda", fcfg.lambda, "convexity weight for polygon fits");
    fit->add_option("--tol", fcfg.stop_tol, "stop tolerance on the loss");
    fit->add_option("--seed", fcfg.seed, "seed recorded in the manifest");

    // audit
    auto* audit = app.add_subcommand("audit", "run a property suite");
    std::string audit_suite;
    std::uint64_t audit_trials = 10000, audit_seed = 0;
    audit->add_option("--suite", audit_suite, "metric|equivalence|gradient|correlation")->required();
    audit->add_option("--trials", audit_trials, "trial count (>= 100)");
    audit->add_option("--seed", audit_seed, "rng seed");

    // bench
    auto* bench = app.add_subcommand("bench", "time MGIoU vs the exact clipping oracle");
    std::size_t bench_pairs = 10000;
    std::string bench_shape = "rect", bench_out;
    int bench_repeat = 5;
    std::uint64_t bench_seed = 0;
    bench->add_option("--pairs", bench_pairs, "number of shape pairs");
    bench->add_option("--shape", bench_shape, "rect|polygon");
    bench->add_option("--repeat", bench_repeat, "runs per timing (median)");
    bench->add_option("--seed", bench_seed, "rng seed");
    bench->add_option("-o,--output", bench_out, "CSV output (default stdout)");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random test corpus");
    std::string gen_kind = "rect", gen_out;
    std::size_t gen_count = 100;
    std::uint64_t gen_seed = 0;
    gen->add_option("--kind", gen_kind, "rect|polygon|traj");
    gen->add_option("--count", gen_count, "record count");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("-o,--output", gen_out, "output JSONL file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval) return cmd_eval(eval_in, eval_out, eval_mode, eval_lambda);
        if (*fit) {
            if (!fit_sep && fit_target.empty()) {
                std::cerr << "fit: --target is required unless --separate is given\n";
                return 2;
            }
            return cmd_fit(fit_init, fit_target, fit_trace, fit_out, fcfg, fit_sep);
        }
        if (*audit) return cmd_audit(audit_suite, audit_trials, audit_seed);
        if (*bench) return cmd_bench(bench_pairs, bench_shape, bench_repeat, bench_seed, bench_out);
        if (*gen) return cmd_gen(gen_kind, gen_count, gen_seed, gen_out);
    } catch (const mgiou::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == mgiou::Errc::DivergenceDetected) return 3;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
