#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twistlaw/error.hpp"

namespace twistlaw::cli {

inline constexpr const char* kVersion = "0.3.0";

// Bad command-line parameters; the CLI exits with status 2.
class UsageError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Parameters of every command; each command reads the fields it needs and
// validates them against the preconditions of the operations they feed.
struct RunConfig {
    std::string surface = "torus";
    std::optional<double> eps;        // default: eps0/2 (sim, estimate) or eps0 (oracle)
    double xi = 2.0;
    double s_xi = 2.0;
    std::vector<double> T_grid{500.0, 1000.0, 2000.0};
    std::size_t rays = 100;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> bits;     // precision budget; default depends on the command
    std::size_t n = 10000;            // cf-dv: coefficients per sample
    std::size_t samples = 200;        // cf-dv: samples; oracle: see oracle_samples
    std::size_t oracle_samples = 100000;
    double R = 1.0;
    std::vector<double> ladder{1.0, 2.0, 4.0};
    std::optional<std::string> theta; // sim: exact endpoint "p/q" instead of sampled rays
    std::vector<std::string> directions{"1/0"};
    long max_q = 0;                   // decompose: also every direction with q <= max_q
    std::filesystem::path out_dir;
    std::string prefix;
    unsigned workers = 1;
    std::string convention = "teichmuller";
    std::size_t bootstrap = 1000;
    double level = 0.9;
    bool write_files = true;
};

// Output directory from the environment (TWISTLAW_OUT) or the working directory.
std::filesystem::path default_out_dir();

struct CommandResult {
    nlohmann::ordered_json report;
    std::vector<std::filesystem::path> files;
    std::string text; // human-readable summary for stdout
};

CommandResult cmd_cf_dv(const RunConfig& cfg);
CommandResult cmd_sim(const RunConfig& cfg);
CommandResult cmd_oracle(const RunConfig& cfg);
CommandResult cmd_estimate(const RunConfig& cfg);
CommandResult cmd_decompose(const RunConfig& cfg);

// Resolved configuration as written into every output.
nlohmann::ordered_json config_echo(const std::string& command, const RunConfig& cfg);

} // namespace twistlaw::cli
