#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "anisolab/io.hpp"

namespace {

/// ANISOLAB_THREADS caps worker parallelism.  Execution is currently
/// single-threaded, so any positive cap is honored trivially; the value is
/// still validated so misconfiguration is caught early.
bool validate_thread_env() {
    const char* env = std::getenv("ANISOLAB_THREADS");
    if (!env) return true;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) {
        std::fprintf(stderr, "ANISOLAB_THREADS must be a positive integer\n");
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (!validate_thread_env()) return 2;

    CLI::App app{"anisolab: anisotropic half-space flow laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir, csv_path;
    double t0 = 5.0, t1 = 50.0;
    std::uint64_t seed = 1;
    int trials = 100;

    CLI::App* sim = app.add_subcommand("simulate", "run a configured march");
    sim->add_option("--config", config_path, "config JSON path")->required();
    sim->add_option("--out", out_dir, "output directory")->required();

    CLI::App* fit = app.add_subcommand("decay-fit", "fit exponents from a CSV");
    fit->add_option("--series", csv_path, "norms.csv path")->required();
    fit->add_option("--t0", t0, "window start")->required();
    fit->add_option("--t1", t1, "window end")->required();

    CLI::App* ops = app.add_subcommand("verify-ops", "operator bound survey");
    ops->add_option("--seed", seed, "RNG seed");
    ops->add_option("--trials", trials, "number of random fields");

    CLI::App* lp = app.add_subcommand("lp-check", "dyadic partition checks");
    lp->add_option("--config", config_path, "config JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return anisolab::run_simulate(config_path, out_dir);
        if (fit->parsed()) return anisolab::run_decay_fit(csv_path, t0, t1);
        if (ops->parsed()) return anisolab::run_verify_ops(seed, trials);
        if (lp->parsed()) return anisolab::run_lp_check(config_path);
    } catch (const anisolab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const anisolab::BlowUpError& e) {
        std::fprintf(stderr, "blow-up: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
