// Acceptance gate: one criterion per line, A1..A12, exit 0 iff every selected
// criterion passes. Run with no arguments for the full gate or with criterion
// ids (e.g. `cei_acceptance A3 A7`) for a subset.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "cei/experiments.hpp"

namespace {

constexpr std::uint64_t kSeedBase = 0xCE1A000ull;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double detail(const cei::test_report& r, const std::string& key) {
    const auto it = r.details.find(key);
    return it == r.details.end() ? 0.0 : it->second;
}

cei::experiment_config base_config(const std::string& name, int criterion) {
    cei::experiment_config cfg;
    cfg.experiment = name;
    cfg.seed = kSeedBase + static_cast<std::uint64_t>(criterion);
    cfg.alpha = 0.001;
    return cfg;
}

struct criterion {
    const char* id;
    const char* title;
    std::function<bool(std::vector<std::string>&)> run;
};

bool a1(std::vector<std::string>& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const cei::test_report r = cei::evaluate_experiment(base_config("discrete-exact-theorem22", 1));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(fmt("worst TV=%.6g (tolerance 1e-12), nu uniform=%s, nu independent=%s",
                      r.statistic, detail(r, "nu_uniform") > 0 ? "yes" : "no",
                      detail(r, "nu_independent") > 0 ? "yes" : "no"));
    out.push_back(fmt("TV by case: sym/singleton=%.6g sym/interval=%.6g asym/singleton=%.6g asym/interval=%.6g",
                      detail(r, "tv_sym_singleton"), detail(r, "tv_sym_interval"),
                      detail(r, "tv_asym_singleton"), detail(r, "tv_asym_interval")));
    out.push_back(fmt("cell-weighted pipeline TV (sym/interval)=%.6g, elapsed=%.2fs",
                      detail(r, "tv_weighted_sym_interval"), secs));
    return r.passed && secs < 1.0;
}

bool a2(std::vector<std::string>& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const cei::test_report r = cei::evaluate_experiment(base_config("nu-uniformity", 2));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(fmt("KS D=%.4g, p=%.4g, %ld selected shifts, elapsed=%.1fs", r.statistic,
                      r.p_value.value_or(0.0), r.n_samples.first, secs));
    return r.passed && secs < 60.0;
}

bool a3(std::vector<std::string>& out) {
    const cei::test_report r = cei::evaluate_experiment(base_config("nu-independence", 3));
    out.push_back(fmt("chi2=%.4g (16 dof), p=%.4g, %ld pairs", r.statistic, r.p_value.value_or(0.0),
                      r.n_samples.first));
    return r.passed;
}

bool a4(std::vector<std::string>& out) {
    const cei::test_report r = cei::evaluate_experiment(base_config("theorem22-forward", 4));
    for (const char* label : {"marginal_t0.25", "marginal_t0.5", "marginal_t0.75", "min"})
        out.push_back(fmt("%s: D=%.4g, p=%.4g", label, detail(r, std::string(label) + "_stat"),
                          detail(r, std::string(label) + "_p")));
    return r.passed;
}

bool a5(std::vector<std::string>& out) {
    const cei::test_report r = cei::evaluate_experiment(base_config("theorem22-converse", 5));
    for (const char* label : {"max", "marginal_t0.5"})
        out.push_back(fmt("%s: D=%.4g, p=%.4g", label, detail(r, std::string(label) + "_stat"),
                          detail(r, std::string(label) + "_p")));
    return r.passed;
}

void vervaat_lines(const cei::test_report& r, std::vector<std::string>& out) {
    out.push_back(fmt("%s: D(0.5)=%.4g D(0.2)=%.4g D(0.1)=%.4g D(0.05)=%.4g, nonincreasing=%s",
                      r.name.c_str(), detail(r, "eps0.5_D"), detail(r, "eps0.2_D"),
                      detail(r, "eps0.1_D"), detail(r, "eps0.05_D"),
                      detail(r, "distance_nonincreasing") > 0 ? "yes" : "no"));
    out.push_back(fmt("%s: final test at eps=0.05: D=%.4g, p=%.4g", r.name.c_str(), r.statistic,
                      r.p_value.value_or(0.0)));
}

bool a6(std::vector<std::string>& out) {
    const cei::test_report rb = cei::evaluate_experiment(base_config("vervaat-limit", 6));
    const cei::test_report re = cei::evaluate_experiment(base_config("ei-vervaat-limit", 6));
    vervaat_lines(rb, out);
    vervaat_lines(re, out);
    return rb.passed && re.passed;
}

bool a7(std::vector<std::string>& out) {
    const cei::test_report r = cei::evaluate_experiment(base_config("range-equals-excursion-max", 7));
    out.push_back(fmt("max pathwise gap=%.3g (tolerance 1e-12); cross-seed KS D=%.4g, p=%.4g",
                      detail(r, "max_pathwise_gap"), detail(r, "max_vs_amplitude_stat"),
                      detail(r, "max_vs_amplitude_p")));
    return r.passed;
}

bool a8(std::vector<std::string>& out) {
    const cei::test_report r = cei::evaluate_experiment(base_config("bessel3-first-passage", 8));
    for (const char* label : {"marginal_t0.25", "marginal_t0.5", "marginal_t0.75"})
        out.push_back(fmt("%s: D=%.4g, p=%.4g", label, detail(r, std::string(label) + "_stat"),
                          detail(r, std::string(label) + "_p")));
    out.push_back(fmt("paths dropped with no passage: %.0f of %ld",
                      detail(r, "dropped_no_passage"),
                      r.n_samples.first + static_cast<long>(detail(r, "dropped_no_passage"))));
    return r.passed;
}

bool a9(std::vector<std::string>& out) {
    const cei::test_report r = cei::evaluate_experiment(base_config("meander-construction", 9));
    for (const char* label : {"endpoint", "marginal_t0.5"})
        out.push_back(fmt("%s: D=%.4g, p=%.4g", label, detail(r, std::string(label) + "_stat"),
                          detail(r, std::string(label) + "_p")));
    return r.passed;
}

bool a10(std::vector<std::string>& out) {
    const cei::test_report r = cei::evaluate_experiment(base_config("bes3-to-bridge", 10));
    for (const char* label : {"marginal_t0.25", "marginal_t0.5", "marginal_t0.75"})
        out.push_back(fmt("%s: D=%.4g, p=%.4g", label, detail(r, std::string(label) + "_stat"),
                          detail(r, std::string(label) + "_p")));
    out.push_back(fmt("|corr(endpoint, output mid)|=%.4g (limit 0.05)",
                      std::abs(detail(r, "endpoint_mid_corr"))));
    return r.passed;
}

bool a11(std::vector<std::string>& out) {
    const cei::test_report rl = cei::evaluate_experiment(base_config("local-time-min-level", 11));
    const cei::test_report rd = cei::evaluate_experiment(base_config("local-time-vervaat-degeneration", 11));
    out.push_back(fmt("min within [y-2eps, y+2eps]: %.2f%% of %ld accepted (need >= 99%%)",
                      100.0 * detail(rl, "contained_fraction"), rl.n_samples.first));
    out.push_back(fmt("local-time halving stability: mean rel change=%.3g",
                      detail(rl, "local_time_halving_rel_change")));
    out.push_back(fmt("median |nu-argmin|/n: y=-0.3: %.4g, y=-0.1: %.4g, y=-0.03: %.4g (must decrease)",
                      detail(rd, "median_gap_y-0.3"), detail(rd, "median_gap_y-0.1"),
                      detail(rd, "median_gap_y-0.03")));
    return rl.passed && rd.passed;
}

bool a12(std::vector<std::string>& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const cei::test_report r = cei::evaluate_experiment(base_config("reflected-identity", 12));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(fmt("max |R[j] + min(shift_j)| over %ld paths x 3 families = %.3g (tolerance 1e-12), elapsed=%.2fs",
                      r.n_samples.first, r.statistic, secs));
    return r.passed && secs < 1.0;
}

const std::vector<criterion>& criteria() {
    static const std::vector<criterion> table = {
        {"A1", "exact discrete enumeration of the shift-conditioning identity", a1},
        {"A2", "selected shift index is uniform", a2},
        {"A3", "selected shift independent of the shifted maximum", a3},
        {"A4", "shift pipeline matches rejection conditioning (forward)", a4},
        {"A5", "uniform re-shift recovers the amplitude-conditioned law (converse)", a5},
        {"A6", "Vervaat transform is the small-epsilon conditioning limit", a6},
        {"A7", "range of the bridge equals the excursion maximum", a7},
        {"A8", "first-passage shift matches the Bessel(3) bridge", a8},
        {"A9", "first-passage meander construction matches conditioned motion", a9},
        {"A10", "Bessel(3) paths reduce to Brownian bridges", a10},
        {"A11", "local-time conditioning pins the minimum and degenerates to Vervaat", a11},
        {"A12", "reflected profile equals minus the shifted minima", a12},
    };
    return table;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> wanted;
    for (int i = 1; i < argc; ++i) wanted.emplace_back(argv[i]);
    bool all_ok = true;
    bool any_run = false;
    for (const criterion& c : criteria()) {
        if (!wanted.empty()) {
            bool selected = false;
            for (const auto& w : wanted) selected = selected || w == c.id;
            if (!selected) continue;
        }
        any_run = true;
        std::vector<std::string> lines;
        bool ok;
        try {
            ok = c.run(lines);
        } catch (const std::exception& e) {
            ok = false;
            lines.push_back(fmt("error: %s", e.what()));
        }
        all_ok = all_ok && ok;
        std::printf("%s %s — %s\n", c.id, ok ? "PASS" : "FAIL", c.title);
        for (const auto& l : lines) std::printf("    %s\n", l.c_str());
        std::fflush(stdout);
    }
    if (!any_run) {
        std::fprintf(stderr, "no such criterion; expected A1..A12\n");
        return 2;
    }
    return all_ok ? 0 : 1;
}
