#include "twistlaw_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "twistlaw/continued_fraction.hpp"
#include "twistlaw/estimator.hpp"
#include "twistlaw/excursion.hpp"
#include "twistlaw/origami.hpp"
#include "twistlaw/parallel.hpp"
#include "twistlaw/random.hpp"

namespace twistlaw::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kInvLog2 = 1.4426950408889634074;
constexpr double kE = 2.71828182845904523536;

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::uint64_t require_seed(const RunConfig& cfg, const char* command) {
    if (!cfg.seed) throw UsageError(std::string(command) + ": --seed is required");
    return *cfg.seed;
}

exc::TimeConvention parse_convention(const std::string& s) {
    if (s == "teichmuller") return exc::TimeConvention::teichmuller;
    if (s == "hyperbolic") return exc::TimeConvention::hyperbolic;
    throw UsageError("unknown time convention '" + s + "' (teichmuller | hyperbolic)");
}

exc::PreparedSurface prepare(const RunConfig& cfg) {
    return exc::PreparedSurface(flat::parse_origami(cfg.surface));
}

json stratum_json(const exc::PreparedSurface& s) {
    json a = json::array();
    for (int k : s.stratum) a.push_back(k);
    return a;
}

std::string stratum_text(const exc::PreparedSurface& s) {
    std::string t = "{";
    for (std::size_t i = 0; i < s.stratum.size(); ++i) t += (i ? ", " : "") + std::to_string(s.stratum[i]);
    return t + "}";
}

double resolve_eps(const RunConfig& cfg, const exc::PreparedSurface& s, double fallback) {
    const double eps = cfg.eps.value_or(fallback);
    if (!(eps > 0.0)) throw UsageError("eps must be positive");
    if (eps > s.eps_zero * (1 + 1e-12))
        throw UsageError("eps = " + num(eps) + " exceeds eps0 = " + num(s.eps_zero) + " for surface '" +
                         cfg.surface + "'");
    return eps;
}

std::vector<double> resolve_grid(std::vector<double> grid) {
    if (grid.empty()) throw UsageError("empty horizon grid");
    std::sort(grid.begin(), grid.end());
    if (grid.size() == 1) {
        const double T = grid[0];
        grid = {T / 4, T / 2, T};
        grid.erase(std::remove_if(grid.begin(), grid.end(), [](double t) { return t < kE; }), grid.end());
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= kE)) throw UsageError("horizons must be >= e");
        if (i && !(grid[i] > grid[i - 1])) throw UsageError("horizons must be distinct");
    }
    return grid;
}

void check_xi(const RunConfig& cfg) {
    if (!(cfg.xi > 1.0)) throw UsageError("xi must exceed 1");
    if (!(cfg.s_xi >= 0.0)) throw UsageError("s_xi must be >= 0");
}

fs::path output_path(const RunConfig& cfg, const std::string& command, const std::string& suffix) {
    const fs::path dir = cfg.out_dir.empty() ? default_out_dir() : cfg.out_dir;
    fs::create_directories(dir);
    return dir / ((cfg.prefix.empty() ? command : cfg.prefix) + "_" + suffix);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

void emit(CommandResult& res, const RunConfig& cfg, const std::string& command, const std::string& suffix,
          const std::string& content) {
    if (!cfg.write_files) return;
    const auto path = output_path(cfg, command, suffix);
    write_file(path, content);
    res.files.push_back(path);
}

// Header comment of every CSV: provenance line, config echo, column documentation.
std::string csv_header(const std::string& command, const RunConfig& cfg,
                       const std::vector<std::pair<std::string, std::string>>& columns,
                       const std::vector<std::string>& extra = {}) {
    std::string h = "# twistlaw " + std::string(kVersion) + " " + command + "\n";
    h += "# config: " + config_echo(command, cfg).dump() + "\n";
    for (const auto& line : extra) h += "# " + line + "\n";
    for (const auto& [name, doc] : columns) h += "# column " + name + ": " + doc + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) h += (i ? "," : "") + columns[i].first;
    return h + "\n";
}

json horizon_json(const sv::HorizonStats& h, double eps) {
    return json{{"T", h.T},
                {"n_kept", h.n_kept},
                {"twist_statistic", h.twist.value},
                {"excursion_statistic", h.excursion.value},
                {"empty", h.twist.empty},
                {"c_from_twist", h.twist.value / 4.0},
                {"c_from_excursion", h.excursion.value / (2.0 * eps)},
                {"dropped", {{"incomplete", h.dropped.incomplete},
                             {"shallow", h.dropped.shallow},
                             {"early", h.dropped.early},
                             {"mass_shallow", h.dropped.mass_shallow},
                             {"mass_early", h.dropped.mass_early}}}};
}

} // namespace

fs::path default_out_dir() {
    if (const char* env = std::getenv("TWISTLAW_OUT"); env && *env) return env;
    return fs::current_path();
}

json config_echo(const std::string& command, const RunConfig& cfg) {
    json j;
    j["command"] = command;
    j["surface"] = cfg.surface;
    j["eps"] = cfg.eps ? json(*cfg.eps) : json(nullptr);
    j["xi"] = cfg.xi;
    j["s_xi"] = cfg.s_xi;
    j["T_grid"] = cfg.T_grid;
    j["rays"] = cfg.rays;
    j["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
    j["bits"] = cfg.bits ? json(*cfg.bits) : json(nullptr);
    j["n"] = cfg.n;
    j["samples"] = cfg.samples;
    j["oracle_samples"] = cfg.oracle_samples;
    j["R"] = cfg.R;
    j["ladder"] = cfg.ladder;
    j["theta"] = cfg.theta ? json(*cfg.theta) : json(nullptr);
    j["directions"] = cfg.directions;
    j["max_q"] = cfg.max_q;
    j["convention"] = cfg.convention;
    j["bootstrap"] = cfg.bootstrap;
    j["level"] = cfg.level;
    return j;
}

// ---------------------------------------------------------------------------

CommandResult cmd_cf_dv(const RunConfig& cfg) {
    const std::uint64_t seed = require_seed(cfg, "cf-dv");
    if (cfg.n < 100) throw UsageError("cf-dv: --n must be >= 100");
    if (cfg.samples < 10) throw UsageError("cf-dv: --samples must be >= 10");
    const unsigned bits = cfg.bits.value_or(static_cast<unsigned>(std::max<std::size_t>(4096, 20 * cfg.n)));
    if (bits < 128 || bits > (1u << 28)) throw UsageError("cf-dv: precision budget must lie in [128, 2^28] bits");

    std::vector<std::size_t> checkpoints;
    if (cfg.n / 10 >= 2) checkpoints.push_back(cfg.n / 10);
    checkpoints.push_back(cfg.n);

    struct Sample {
        bool exhausted = false;
        std::size_t coeffs = 0;
        double bits_left = 0.0;
        double max_coeff = 0.0;
        std::vector<double> stats;
    };
    const auto samples = parallel_map(cfg.samples, cfg.workers, [&](std::size_t i) {
        Rng rng = make_rng(seed, Stream::cf_samples, i);
        const auto x = cf::PrecisionReal::uniform(rng, bits);
        const auto e = cf::cf_expand(x, cfg.n);
        Sample s;
        s.coeffs = e.coeffs.size();
        s.exhausted = e.coeffs.size() < cfg.n;
        s.bits_left = e.bits_left;
        for (const auto& a : e.coeffs) s.max_coeff = std::max(s.max_coeff, a.get_d());
        for (std::size_t n : checkpoints)
            s.stats.push_back(e.coeffs.size() >= n ? cf::dv_statistic(e, n) : std::nan(""));
        return s;
    });

    CommandResult res;
    json rep;
    rep["command"] = "cf-dv";
    rep["version"] = kVersion;
    rep["n"] = cfg.n;
    rep["samples"] = cfg.samples;
    rep["bits"] = bits;
    rep["seed"] = seed;
    rep["target"] = kInvLog2;
    std::size_t exhausted = 0;
    for (const auto& s : samples) exhausted += s.exhausted ? 1 : 0;
    rep["exhausted"] = exhausted;
    json cps = json::array();
    std::ostringstream text;
    text << "cf-dv: n=" << cfg.n << " samples=" << cfg.samples << " bits=" << bits << " exhausted=" << exhausted
         << "\n";
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        std::vector<double> vals;
        for (const auto& s : samples)
            if (!std::isnan(s.stats[k])) vals.push_back(s.stats[k]);
        if (vals.empty()) throw PrecisionExhausted("cf-dv: every sample ran out of precision");
        const double med = sv::median(vals);
        cps.push_back({{"n", checkpoints[k]},
                       {"median", med},
                       {"relative_error", (med - kInvLog2) / kInvLog2},
                       {"used", vals.size()}});
        text << "  n=" << checkpoints[k] << " median=" << num(med) << " target=" << num(kInvLog2) << "\n";
    }
    rep["checkpoints"] = cps;
    rep["config"] = config_echo("cf-dv", cfg);
    res.report = rep;
    res.text = text.str();

    std::vector<std::pair<std::string, std::string>> cols{
        {"sample", "sample index (seed stream cf_samples)"},
        {"exhausted", "1 if the precision budget ran out before n coefficients"},
        {"coefficients", "number of coefficients produced"},
        {"bits_left", "remaining precision budget in bits"},
        {"max_coeff", "largest coefficient seen"}};
    for (std::size_t n : checkpoints)
        cols.emplace_back("dv_" + std::to_string(n), "(a_1+...+a_n - max)/(n log n) at n=" + std::to_string(n));
    std::string csv = csv_header("cf-dv", cfg, cols);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        csv += std::to_string(i) + "," + (s.exhausted ? "1" : "0") + "," + std::to_string(s.coeffs) + "," +
               num(s.bits_left) + "," + num(s.max_coeff);
        for (double v : s.stats) csv += "," + num(v);
        csv += "\n";
    }
    emit(res, cfg, "cf_dv", "samples.csv", csv);
    emit(res, cfg, "cf_dv", "summary.json", rep.dump(2) + "\n");
    return res;
}

// ---------------------------------------------------------------------------

CommandResult cmd_sim(const RunConfig& cfg) {
    const auto surface = prepare(cfg);
    const double eps = resolve_eps(cfg, surface, surface.eps_zero / 2);
    check_xi(cfg);
    const auto grid = resolve_grid(cfg.T_grid);
    const double t_max = grid.back();
    const auto conv = parse_convention(cfg.convention);

    std::optional<mpq_class> theta;
    if (cfg.theta) {
        mpq_class q;
        if (q.set_str(*cfg.theta, 10) != 0) throw ParseError("theta must be an integer or p/q", *cfg.theta);
        q.canonicalize();
        theta = q;
    }
    const std::uint64_t seed = theta ? cfg.seed.value_or(0) : require_seed(cfg, "sim");
    const std::size_t rays = theta ? 1 : cfg.rays;
    if (rays < 1) throw UsageError("sim: --rays must be >= 1");
    const unsigned bits = cfg.bits.value_or(exc::direction_bits(t_max, conv));

    struct Run {
        exc::Trajectory traj;
        std::vector<exc::ExcursionRecord> records;
        std::vector<char> kept;
        std::vector<sv::HorizonStats> series;
        double theta_approx = 0.0;
    };
    const auto runs = parallel_map(rays, cfg.workers, [&](std::size_t i) {
        exc::TrajectoryConfig tc;
        if (theta) {
            tc.theta = cf::PrecisionReal::exact(*theta);
        } else {
            Rng rng = make_rng(seed, Stream::rays, i);
            tc.theta = exc::sample_direction(rng, bits);
        }
        tc.T = t_max;
        tc.eps = eps;
        tc.xi = cfg.xi;
        tc.s_xi = cfg.s_xi;
        tc.convention = conv;
        Run r;
        r.theta_approx = tc.theta.value.get_d();
        r.traj = exc::enumerate_excursions(surface, tc);
        r.records = exc::at_horizon(r.traj.records, t_max);
        r.kept = exc::filter_excursions(r.traj.records, cfg.xi, t_max, cfg.s_xi).kept_mask;
        r.series = sv::trimmed_series(r.traj.records, grid, cfg.xi, cfg.s_xi);
        return r;
    });

    CommandResult res;
    json rep;
    rep["command"] = "sim";
    rep["version"] = kVersion;
    rep["surface"] = flat::format_origami(surface.origami);
    rep["stratum"] = stratum_json(surface);
    rep["eps0"] = surface.eps_zero;
    rep["eps"] = eps;
    rep["xi"] = cfg.xi;
    rep["xi_prime"] = exc::xi_prime(cfg.xi);
    rep["shallow_threshold"] = 1.0 / exc::xi_prime(cfg.xi);
    rep["s_xi"] = cfg.s_xi;
    rep["T_grid"] = grid;
    rep["convention"] = cfg.convention;
    rep["seed"] = seed;
    rep["theta_bits"] = theta ? json(nullptr) : json(bits);
    json trajs = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        json t{{"id", i},
               {"theta_approx", r.theta_approx},
               {"truncated", r.traj.truncated},
               {"records", r.records.size()},
               {"candidates", r.traj.candidates},
               {"overlaps", r.traj.overlaps}};
        json per = json::array();
        for (const auto& h : r.series) per.push_back(horizon_json(h, eps));
        t["per_T"] = per;
        trajs.push_back(t);
    }
    rep["trajectories"] = trajs;
    rep["config"] = config_echo("sim", cfg);
    res.report = rep;

    const std::vector<std::pair<std::string, std::string>> cols{
        {"trajectory_id", "ray index (seed stream rays)"},
        {"label", "p/q#k: cylinder k of direction (p,q); 1/0 is the horizontal direction"},
        {"t_entry", "entry time"},
        {"t_exit", "exit time (inf when the ray ends at the tangency)"},
        {"phi", "angle at the base between the ray and the ray to the tangency"},
        {"phi_max", "angle between the ray to the tangency and the tangent ray"},
        {"E", "horocyclic length of the projected passage"},
        {"E_area", "cylinder area fraction times E"},
        {"tw", "twist count from the angle formula"},
        {"complete", "1 if the excursion ends by the largest horizon"},
        {"kept", "1 if the excursion survives the partial/shallow/early filters at the largest horizon"}};
    std::string csv = csv_header(
        "sim", cfg, cols,
        {"surface: " + flat::format_origami(surface.origami) + "  stratum " + stratum_text(surface) +
             "  genus " + std::to_string(flat::genus(surface.origami)),
         "eps0 = " + num(surface.eps_zero) + "  eps = " + num(eps) + "  shallow threshold 1/xi' = " +
             num(1.0 / exc::xi_prime(cfg.xi))});
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        for (std::size_t k = 0; k < r.records.size(); ++k) {
            const auto& e = r.records[k];
            csv += std::to_string(i) + "," + e.label + "," + num(e.t_entry) + "," + num(e.t_exit) + "," +
                   num(static_cast<double>(e.phi)) + "," + num(static_cast<double>(e.phi_max)) + "," + num(e.E) +
                   "," + num(e.E_area) + "," + num(e.tw) + "," + (e.complete ? "1" : "0") + "," +
                   (r.kept[k] ? "1" : "0") + "\n";
        }
    }
    emit(res, cfg, "sim", "excursions.csv", csv);
    emit(res, cfg, "sim", "series.json", rep.dump(2) + "\n");

    std::ostringstream text;
    text << "sim: surface " << flat::format_origami(surface.origami) << " stratum " << stratum_text(surface)
         << " eps=" << num(eps) << " rays=" << rays << "\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(runs.size(), 5); ++i) {
        const auto& h = runs[i].series.back();
        text << "  ray " << i << ": " << runs[i].records.size() << " excursions, kept " << h.n_kept
             << ", twist stat " << num(h.twist.value) << ", excursion stat " << num(h.excursion.value) << "\n";
    }
    res.text = text.str();
    return res;
}

// ---------------------------------------------------------------------------

namespace {

json oracle_pair(const exc::PreparedSurface& surface, const RunConfig& cfg, double eps, std::uint64_t seed,
                 sv::OracleResult& transform, sv::OracleResult& thin) {
    transform = sv::oracle_siegel_transform(surface, cfg.oracle_samples, cfg.R, seed, cfg.workers);
    thin = sv::oracle_thin_volume(surface, cfg.oracle_samples, eps, cfg.ladder, seed, cfg.workers);
    json rungs = json::array();
    for (std::size_t k = 0; k < thin.rung_values.size(); ++k)
        rungs.push_back({{"R", cfg.ladder[k]}, {"scale", thin.rung_scales[k]}, {"value", thin.rung_values[k]}});
    return json{{"oracle_transform", {{"value", transform.value}, {"std_error", transform.std_error}, {"R", cfg.R}}},
                {"oracle_thin", {{"value", thin.value}, {"std_error", thin.std_error}, {"eps", eps}, {"rungs", rungs}}},
                {"relative_gap", std::abs(transform.value - thin.value) / transform.value}};
}

} // namespace

CommandResult cmd_oracle(const RunConfig& cfg) {
    const std::uint64_t seed = require_seed(cfg, "oracle");
    if (cfg.oracle_samples < 1000) throw UsageError("oracle: --samples must be >= 1000");
    if (!(cfg.R > 0.0)) throw UsageError("oracle: --R must be positive");
    const auto surface = prepare(cfg);
    const double eps = resolve_eps(cfg, surface, surface.eps_zero);

    sv::OracleResult transform, thin;
    const json pair = oracle_pair(surface, cfg, eps, seed, transform, thin);
    CommandResult res;
    json rep;
    rep["command"] = "oracle";
    rep["version"] = kVersion;
    rep["surface"] = flat::format_origami(surface.origami);
    rep["stratum"] = stratum_json(surface);
    rep["eps0"] = surface.eps_zero;
    rep["samples"] = cfg.oracle_samples;
    rep["seed"] = seed;
    for (const auto& [k, v] : pair.items()) rep[k] = v;
    rep["config"] = config_echo("oracle", cfg);
    res.report = rep;
    emit(res, cfg, "oracle", "report.json", rep.dump(2) + "\n");

    std::ostringstream text;
    text << "oracle: surface " << flat::format_origami(surface.origami) << "\n"
         << "  siegel transform  " << num(transform.value) << " +- " << num(transform.std_error) << "\n"
         << "  thin volume       " << num(thin.value) << " +- " << num(thin.std_error) << "\n"
         << "  relative gap      " << num(pair["relative_gap"].get<double>()) << "\n";
    res.text = text.str();
    return res;
}

// ---------------------------------------------------------------------------

CommandResult cmd_estimate(const RunConfig& cfg) {
    const std::uint64_t seed = require_seed(cfg, "estimate");
    if (cfg.rays < 30) throw UsageError("estimate: ensemble needs --rays >= 30");
    if (cfg.oracle_samples < 1000) throw UsageError("estimate: --oracle-samples must be >= 1000");
    if (cfg.bootstrap < 1) throw UsageError("estimate: --bootstrap must be >= 1");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw UsageError("estimate: --level must lie in (0,1)");
    const auto surface = prepare(cfg);
    const double eps = resolve_eps(cfg, surface, surface.eps_zero / 2);
    check_xi(cfg);

    sv::EnsembleConfig ec;
    ec.eps = eps;
    ec.xi = cfg.xi;
    ec.s_xi = cfg.s_xi;
    ec.T_grid = resolve_grid(cfg.T_grid);
    ec.rays = cfg.rays;
    ec.seed = seed;
    ec.workers = cfg.workers;
    ec.bootstrap = cfg.bootstrap;
    ec.level = cfg.level;
    ec.convention = parse_convention(cfg.convention);
    const auto est = sv::estimate_c_area(surface, ec);

    sv::OracleResult transform, thin;
    const json pair = oracle_pair(surface, cfg, surface.eps_zero, seed, transform, thin);
    const double reference = transform.value;

    CommandResult res;
    json rep;
    rep["surface"] = flat::format_origami(surface.origami);
    rep["stratum"] = stratum_json(surface);
    rep["eps0"] = surface.eps_zero;
    rep["eps"] = eps;
    rep["xi"] = cfg.xi;
    rep["s_xi"] = cfg.s_xi;
    rep["T_grid"] = ec.T_grid;
    json per = json::array();
    for (const auto& h : est.per_T)
        per.push_back({{"T", h.T},
                       {"c_from_twist", h.c_twist},
                       {"c_from_excursion", h.c_excursion},
                       {"relative_gap_twist", (h.c_twist - reference) / reference},
                       {"relative_gap_excursion", (h.c_excursion - reference) / reference},
                       {"empty", h.empty}});
    rep["per_T"] = per;
    rep["estimate"] = est.point;
    rep["ci"] = {{"level", est.level}, {"lo", est.lo}, {"hi", est.hi}, {"resamples", cfg.bootstrap}};
    rep["oracle_transform"] = pair["oracle_transform"];
    rep["oracle_thin"] = pair["oracle_thin"];
    rep["seed"] = seed;
    rep["version"] = kVersion;
    rep["ensemble"] = {{"rays", est.ensemble}, {"used", est.used}, {"excluded_truncated", est.excluded_truncated}};
    rep["convention"] = cfg.convention;
    rep["config"] = config_echo("estimate", cfg);
    res.report = rep;

    std::string conv = csv_header("estimate", cfg,
                                  {{"T", "horizon"},
                                   {"c_from_twist", "ensemble median of the twist statistic / 4"},
                                   {"c_from_excursion", "ensemble median of the excursion statistic / (2 eps)"},
                                   {"oracle_transform", "Siegel-transform oracle value"},
                                   {"oracle_thin", "thin-volume oracle value"},
                                   {"relative_gap_twist", "(c_from_twist - oracle_transform) / oracle_transform"},
                                   {"empty", "trajectories without kept excursions"}});
    for (const auto& h : est.per_T)
        conv += num(h.T) + "," + num(h.c_twist) + "," + num(h.c_excursion) + "," + num(transform.value) + "," +
                num(thin.value) + "," + num((h.c_twist - reference) / reference) + "," + std::to_string(h.empty) +
                "\n";
    emit(res, cfg, "estimate", "convergence.csv", conv);

    std::string traj = csv_header("estimate", cfg,
                                  {{"trajectory_id", "ray index (seed stream rays)"},
                                   {"T", "horizon"},
                                   {"truncated", "1 if the endpoint precision ran out (excluded)"},
                                   {"n_kept", "kept excursions entering before T"},
                                   {"twist_statistic", "(sum tw - max tw)/(T log T)"},
                                   {"excursion_statistic", "(sum E_area - max E_area)/(T log T)"},
                                   {"dropped_incomplete", "partial excursions"},
                                   {"dropped_shallow", "excursions with E <= 1/xi'"},
                                   {"dropped_early", "excursions entering before s_xi"}});
    for (const auto& t : est.trajectories)
        for (const auto& h : t.per_T)
            traj += std::to_string(t.id) + "," + num(h.T) + "," + (t.truncated ? "1" : "0") + "," +
                    std::to_string(h.n_kept) + "," + num(h.twist.value) + "," + num(h.excursion.value) + "," +
                    std::to_string(h.dropped.incomplete) + "," + std::to_string(h.dropped.shallow) + "," +
                    std::to_string(h.dropped.early) + "\n";
    emit(res, cfg, "estimate", "trajectories.csv", traj);
    emit(res, cfg, "estimate", "report.json", rep.dump(2) + "\n");

    std::ostringstream text;
    text << "estimate: surface " << flat::format_origami(surface.origami) << " eps=" << num(eps)
         << " rays=" << cfg.rays << "\n";
    for (const auto& h : est.per_T)
        text << "  T=" << num(h.T) << "  c(twist)=" << num(h.c_twist) << "  c(excursion)=" << num(h.c_excursion)
             << "\n";
    text << "  estimate " << num(est.point) << "  " << num(est.level) << " CI [" << num(est.lo) << ", "
         << num(est.hi) << "]\n"
         << "  oracles: transform " << num(transform.value) << ", thin " << num(thin.value) << "\n";
    res.text = text.str();
    return res;
}

// ---------------------------------------------------------------------------

CommandResult cmd_decompose(const RunConfig& cfg) {
    const auto surface = prepare(cfg);
    if (cfg.max_q < 0) throw UsageError("decompose: --max-q must be >= 0");
    std::vector<std::pair<mpz_class, mpz_class>> dirs;
    for (const auto& d : cfg.directions) {
        const auto sep = d.find_first_of("/,");
        if (sep == std::string::npos) throw ParseError("direction must read p/q", d);
        mpz_class p, q;
        if (p.set_str(d.substr(0, sep), 10) != 0 || q.set_str(d.substr(sep + 1), 10) != 0)
            throw ParseError("direction must read p/q", d);
        dirs.emplace_back(p, q);
    }
    for (long q = 1; q <= cfg.max_q; ++q)
        for (long p = 0; p <= q; ++p)
            if (std::gcd(p, q) == 1) dirs.emplace_back(p, q);

    CommandResult res;
    json rep;
    rep["command"] = "decompose";
    rep["version"] = kVersion;
    rep["surface"] = flat::format_origami(surface.origami);
    rep["stratum"] = stratum_json(surface);
    rep["genus"] = flat::genus(surface.origami);
    rep["eps0"] = surface.eps_zero;
    json table = json::array();
    std::ostringstream text;
    text << "# surface " << flat::format_origami(surface.origami) << "  stratum " << stratum_text(surface)
         << "  genus " << flat::genus(surface.origami) << "  eps0 " << num(surface.eps_zero) << "\n"
         << "# direction cylinder circumference height area_fraction\n";
    for (const auto& [p, q] : dirs) {
        const auto cyls = flat::cylinder_decomposition(surface.origami, p, q);
        for (std::size_t k = 0; k < cyls.size(); ++k) {
            const auto& c = cyls[k];
            const std::string dir = c.p.get_str() + "/" + c.q.get_str();
            table.push_back({{"direction", dir},
                             {"cylinder", k},
                             {"circumference", c.circumference},
                             {"height", c.height},
                             {"area_fraction", c.area_fraction}});
            text << dir << " " << k << " " << c.circumference << " " << c.height << " " << num(c.area_fraction)
                 << "\n";
        }
    }
    rep["cylinders"] = table;
    rep["config"] = config_echo("decompose", cfg);
    res.report = rep;
    res.text = text.str();
    return res;
}

} // namespace twistlaw::cli
