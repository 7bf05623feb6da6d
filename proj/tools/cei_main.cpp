#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cei/experiments.hpp"
#include "cei/rng.hpp"
#include "cei/samplers.hpp"
#include "cei/transforms.hpp"

namespace {

void print_report(const cei::test_report& r) {
    std::printf("%s: %s (statistic=%.6g", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.statistic);
    if (r.p_value) std::printf(", p=%.6g", *r.p_value);
    if (r.exact_pass) std::printf(", exact=%s", *r.exact_pass ? "yes" : "no");
    std::printf(", samples=%ld/%ld, seed=%llu)\n", r.n_samples.first, r.n_samples.second,
                static_cast<unsigned long long>(r.seed));
    for (const auto& [k, v] : r.details) std::printf("  %s = %.6g\n", k.c_str(), v);
}

int cmd_list() {
    for (const auto& e : cei::list_experiments()) {
        std::printf("%s\n", e.name.c_str());
        std::printf("  identity: %s\n", e.citation.c_str());
        std::printf("  check:    %s\n", e.description.c_str());
    }
    return 0;
}

struct sample_args {
    std::string process = "bridge";
    int n = 1024;
    long paths = 100;
    std::uint64_t seed = 0;
    double x = 0.0;
    bool x_set = false;
    double alpha_drift = 0.0;
    double sigma = 1.0;
    std::vector<double> betas;
    std::vector<double> increments = {1, 1, -1, -1};
    std::string out = "samples.csv";
    std::string format = "csv";
};

int cmd_sample(const sample_args& a) {
    std::vector<cei::grid_path> out;
    out.reserve(static_cast<std::size_t>(a.paths));
    for (long i = 0; i < a.paths; ++i) {
        cei::rng_stream s(a.seed, static_cast<std::uint64_t>(i));
        if (a.process == "bridge") {
            out.push_back(cei::sample_brownian_bridge(a.n, a.x_set ? a.x : 0.0, s));
        } else if (a.process == "bm") {
            out.push_back(cei::sample_brownian_motion(a.n, s));
        } else if (a.process == "ei") {
            cei::ei_params params;
            params.alpha = a.alpha_drift;
            params.sigma = a.sigma;
            params.betas = a.betas;
            std::optional<double> x_end;
            if (a.x_set) x_end = a.x;
            out.push_back(cei::sample_ei_process(a.n, params, x_end, s));
        } else if (a.process == "bessel3") {
            out.push_back(cei::sample_bessel3_process(a.n, s));
        } else if (a.process == "bessel3-bridge") {
            out.push_back(cei::sample_bessel3_bridge(a.n, a.x_set ? a.x : 1.0, s));
        } else if (a.process == "signed-bm") {
            out.push_back(cei::sample_signed_bm(a.n, s));
        } else if (a.process == "walk") {
            out.push_back(cei::sample_discrete_cei_walk(a.increments, s));
        } else {
            cei::fail(cei::errc::out_of_range, "unknown process " + a.process);
        }
    }
    cei::emit_samples(out, cei::parse_file_format(a.format), a.out, a.seed);
    std::printf("wrote %ld %s paths (n=%d, seed=%llu) to %s\n", a.paths, a.process.c_str(), a.n,
                static_cast<unsigned long long>(a.seed), a.out.c_str());
    return 0;
}

struct transform_args {
    std::string op;
    std::string in;
    std::string out = "transformed.csv";
    std::string format = "csv";
    int j = 0;
    std::string interval_text = "(-0.4,-0.1]";
    double y = -0.5;
    double epsilon = 0.05;
    double x = 1.0;
    std::uint64_t seed = 0;
};

int cmd_transform(const transform_args& a) {
    const std::vector<cei::grid_path> input = cei::read_samples(a.in);
    const cei::interval I = cei::parse_interval(a.interval_text);
    std::vector<cei::grid_path> output;
    output.reserve(input.size());
    long skipped_event = 0, skipped_no_passage = 0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        cei::rng_stream us(a.seed, i);
        const double u = us.next_uniform();
        const cei::grid_path& p = input[i];
        if (a.op == "shift") {
            output.push_back(cei::cyclic_shift(p, a.j));
        } else if (a.op == "vervaat") {
            output.push_back(cei::vervaat(p));
        } else if (a.op == "condition-min") {
            const cei::shift_result r = cei::condition_min_transform(p, I, u);
            if (r.conditioning_event)
                output.push_back(*r.path);
            else
                ++skipped_event;
        } else if (a.op == "condition-min-value") {
            const cei::shift_result r = cei::condition_min_value_transform(p, a.y, a.epsilon, u);
            if (r.conditioning_event)
                output.push_back(*r.path);
            else
                ++skipped_event;
        } else if (a.op == "first-passage") {
            try {
                output.push_back(*cei::first_passage_transform(p, a.x, u).path);
            } catch (const cei::cei_error& e) {
                if (e.code != cei::errc::no_passage) throw;
                ++skipped_no_passage;
            }
        } else if (a.op == "bes3-to-bridge") {
            output.push_back(cei::bes3_to_bridge(p, u));
        } else {
            cei::fail(cei::errc::out_of_range, "unknown op " + a.op);
        }
    }
    if (output.empty())
        cei::fail(cei::errc::empty_sample, "no path survived the transform");
    cei::emit_samples(output, cei::parse_file_format(a.format), a.out, a.seed);
    std::printf("%s: %zu in, %zu out", a.op.c_str(), input.size(), output.size());
    if (skipped_event) std::printf(", %ld skipped (conditioning event failed)", skipped_event);
    if (skipped_no_passage) std::printf(", %ld skipped (no passage)", skipped_no_passage);
    std::printf(" -> %s\n", a.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Path transformations of cyclically exchangeable processes"};
    app.require_subcommand(1);

    app.add_subcommand("list", "List the verification experiments");

    sample_args sa;
    CLI::App* sample = app.add_subcommand("sample", "Draw paths from a process family");
    sample->add_option("--process", sa.process,
                       "bridge|bm|ei|bessel3|bessel3-bridge|signed-bm|walk");
    sample->add_option("--n", sa.n, "grid cells");
    sample->add_option("--paths", sa.paths, "number of paths");
    sample->add_option("--seed", sa.seed, "master seed");
    CLI::Option* sx = sample->add_option("--x", sa.x, "endpoint (bridge-type processes)");
    sample->add_option("--alpha-drift", sa.alpha_drift, "drift of the exchangeable-increment form");
    sample->add_option("--sigma", sa.sigma, "diffusive coefficient of the EI form");
    sample->add_option("--betas", sa.betas, "EI jump sizes")->delimiter(',');
    sample->add_option("--increments", sa.increments, "walk increment multiset")->delimiter(',');
    sample->add_option("--out", sa.out, "output file");
    sample->add_option("--format", sa.format, "csv|json");

    transform_args ta;
    CLI::App* transform = app.add_subcommand("transform", "Apply a path transform to a sample file");
    transform->add_option("--op", ta.op, "shift|vervaat|condition-min|condition-min-value|first-passage|bes3-to-bridge")
        ->required();
    transform->add_option("--in", ta.in, "input sample file")->required();
    transform->add_option("--out", ta.out, "output file");
    transform->add_option("--format", ta.format, "csv|json");
    transform->add_option("--j", ta.j, "shift cell (op=shift)");
    transform->add_option("--interval", ta.interval_text, "conditioning interval (op=condition-min)");
    transform->add_option("--y", ta.y, "target minimum level (op=condition-min-value)");
    transform->add_option("--epsilon", ta.epsilon, "band half-width (op=condition-min-value)");
    transform->add_option("--x", ta.x, "first-passage endpoint (op=first-passage)");
    transform->add_option("--seed", ta.seed, "seed for the per-path uniforms");

    cei::experiment_config cfg;
    std::string experiment_name, config_file, interval_text;
    int n = 0;
    long paths = 0;
    std::uint64_t seed = 0;
    double epsilon = 0, x = 0, y = 0, alpha = 0;
    std::string out_dir, format;
    CLI::App* verify = app.add_subcommand("verify", "Run a named verification experiment");
    CLI::Option* vname = verify->add_option("experiment", experiment_name, "experiment name (see `cei list`)");
    verify->add_option("--config", config_file, "key=value config file; flags override it");
    CLI::Option* vn = verify->add_option("--n", n, "grid cells");
    CLI::Option* vp = verify->add_option("--paths", paths, "total path budget");
    CLI::Option* vs = verify->add_option("--seed", seed, "master seed");
    CLI::Option* ve = verify->add_option("--epsilon", epsilon, "epsilon knob");
    CLI::Option* vi = verify->add_option("--interval", interval_text, "conditioning interval, e.g. (-0.4,-0.1]");
    CLI::Option* vx = verify->add_option("--x", x, "endpoint knob");
    CLI::Option* vy = verify->add_option("--y", y, "minimum-level knob");
    CLI::Option* va = verify->add_option("--alpha", alpha, "significance level");
    CLI::Option* vo = verify->add_option("--out", out_dir, "artifact directory");
    CLI::Option* vf = verify->add_option("--format", format, "samples format: csv|json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list")) return cmd_list();
        if (app.got_subcommand("sample")) {
            sa.x_set = sx->count() > 0;
            return cmd_sample(sa);
        }
        if (app.got_subcommand("transform")) return cmd_transform(ta);
        if (app.got_subcommand("verify")) {
            if (!config_file.empty()) cei::apply_config_file(config_file, cfg);
            if (vname->count()) cfg.experiment = experiment_name;
            if (vn->count()) cfg.n = n;
            if (vp->count()) cfg.paths = paths;
            if (vs->count()) cfg.seed = seed;
            if (ve->count()) cfg.epsilon = epsilon;
            if (vi->count()) cfg.window = cei::parse_interval(interval_text);
            if (vx->count()) cfg.x = x;
            if (vy->count()) cfg.y = y;
            if (va->count()) cfg.alpha = alpha;
            if (vo->count()) cfg.out_dir = out_dir;
            if (vf->count()) cfg.format = cei::parse_file_format(format);
            if (cfg.experiment.empty())
                cei::fail(cei::errc::unknown_experiment, "no experiment given (argument or config)");
            const cei::test_report r = cei::run_experiment(cfg);
            print_report(r);
            const std::filesystem::path dir(cfg.out_dir);
            std::printf("report: %s\n", (dir / (cfg.experiment + "-report.json")).c_str());
            return r.passed ? 0 : 1;
        }
    } catch (const cei::cei_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
