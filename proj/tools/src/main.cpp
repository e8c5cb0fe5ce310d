#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "twistlaw_cli/commands.hpp"

using twistlaw::cli::RunConfig;

namespace {

void add_output(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out_dir, "Output directory (default: $TWISTLAW_OUT or the working directory)");
    sub->add_option("--prefix", cfg.prefix, "File name prefix (default: the command name)");
    sub->add_option("--workers", cfg.workers, "Worker threads; results do not depend on it")
        ->check(CLI::Range(1u, 1024u));
}

void add_surface(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--surface", cfg.surface, "Origami 'n; (h cycles); (v cycles)' or 'torus'")
        ->capture_default_str();
}

void add_filters(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--eps", cfg.eps, "Thin-part parameter (default eps0/2; must not exceed eps0)");
    sub->add_option("--xi", cfg.xi, "Sandwich parameter xi > 1")->capture_default_str();
    sub->add_option("--s-xi", cfg.s_xi, "Early-entry cutoff s_xi")->capture_default_str();
    sub->add_option("--T", cfg.T_grid, "Horizon grid; a single value T expands to T/4, T/2, T")
        ->capture_default_str();
    sub->add_option("--convention", cfg.convention, "Time convention: teichmuller | hyperbolic")
        ->capture_default_str();
    sub->add_option("--bits", cfg.bits, "Endpoint precision in bits (default: enough for the largest T)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"twistlaw: trimmed-sum strong laws and Siegel-Veech constants of square-tiled surfaces"};
    app.set_version_flag("--version", std::string(twistlaw::cli::kVersion));
    app.set_config("--config", "", "Key-value config file; command-line flags win");
    app.require_subcommand(1);

    RunConfig cf_cfg, sim_cfg, oracle_cfg, est_cfg, dec_cfg;
    sim_cfg.rays = 1;
    sim_cfg.T_grid = {2000.0};

    auto* cf = app.add_subcommand("cf-dv", "Diamond-Vaaler statistic of random continued fractions");
    cf->add_option("--n", cf_cfg.n, "Coefficients per sample (>= 100)")->capture_default_str();
    cf->add_option("--samples", cf_cfg.samples, "Number of samples (>= 10)")->capture_default_str();
    cf->add_option("--seed", cf_cfg.seed, "RNG seed (required)");
    cf->add_option("--bits", cf_cfg.bits, "Precision budget per sample (default max(4096, 20 n))");
    add_output(cf, cf_cfg);

    auto* sim = app.add_subcommand("sim", "Excursion log and trimmed statistics of geodesic rays");
    add_surface(sim, sim_cfg);
    add_filters(sim, sim_cfg);
    sim->add_option("--rays", sim_cfg.rays, "Number of random rays")->capture_default_str();
    sim->add_option("--seed", sim_cfg.seed, "RNG seed (required unless --theta is given)");
    sim->add_option("--theta", sim_cfg.theta, "Exact rational endpoint p/q instead of random rays");
    add_output(sim, sim_cfg);

    auto* oracle = app.add_subcommand("oracle", "Siegel-transform and thin-volume estimates of c_area");
    add_surface(oracle, oracle_cfg);
    oracle->add_option("--eps", oracle_cfg.eps, "Thin-part scale of the ladder (default eps0)");
    oracle->add_option("--samples", oracle_cfg.oracle_samples, "Disc samples (>= 1000)")->capture_default_str();
    oracle->add_option("--R", oracle_cfg.R, "Disc radius of the Siegel transform")->capture_default_str();
    oracle->add_option("--ladder", oracle_cfg.ladder, "Increasing R values of the thin-volume ladder (>= 3)")
        ->capture_default_str();
    oracle->add_option("--seed", oracle_cfg.seed, "RNG seed (required)");
    add_output(oracle, oracle_cfg);

    auto* est = app.add_subcommand("estimate", "Ensemble estimate of c_area from the twist statistic");
    add_surface(est, est_cfg);
    add_filters(est, est_cfg);
    est->add_option("--rays", est_cfg.rays, "Ensemble size (>= 30)")->capture_default_str();
    est->add_option("--seed", est_cfg.seed, "RNG seed (required)");
    est->add_option("--oracle-samples", est_cfg.oracle_samples, "Disc samples per oracle")->capture_default_str();
    est->add_option("--R", est_cfg.R, "Disc radius of the Siegel transform")->capture_default_str();
    est->add_option("--ladder", est_cfg.ladder, "Thin-volume ladder")->capture_default_str();
    est->add_option("--bootstrap", est_cfg.bootstrap, "Bootstrap resamples")->capture_default_str();
    est->add_option("--level", est_cfg.level, "Confidence level")->capture_default_str();
    add_output(est, est_cfg);

    auto* dec = app.add_subcommand("decompose", "Cylinder decompositions of a surface");
    add_surface(dec, dec_cfg);
    dec->add_option("--direction", dec_cfg.directions, "Directions p/q (1/0 is horizontal)")->capture_default_str();
    dec->add_option("--max-q", dec_cfg.max_q, "Also every direction p/q with 0 <= p <= q <= max-q");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        twistlaw::cli::CommandResult res;
        if (*cf) res = twistlaw::cli::cmd_cf_dv(cf_cfg);
        else if (*sim) res = twistlaw::cli::cmd_sim(sim_cfg);
        else if (*oracle) res = twistlaw::cli::cmd_oracle(oracle_cfg);
        else if (*est) res = twistlaw::cli::cmd_estimate(est_cfg);
        else res = twistlaw::cli::cmd_decompose(dec_cfg);
        std::cout << res.text;
        for (const auto& f : res.files) std::cout << "wrote " << f.string() << "\n";
        return 0;
    } catch (const twistlaw::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const twistlaw::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
