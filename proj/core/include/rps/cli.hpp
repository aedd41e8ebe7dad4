#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rps/sim.hpp"

namespace rps {

// Whole-file JSON config: simulation parameters plus the player roster and,
// for tournaments, the federation registry path. Unknown keys are rejected;
// omitted optional fields take defaults. The seed is required — there is no
// wall-clock seeding anywhere.
struct CliConfig {
    std::uint64_t seed = 0;
    bool has_seed = false;
    Variant variant = Variant::validate(3);
    int games_per_match = 10;
    LatencyModel latency;
    int timeout_days = 30;
    std::vector<PlayerSpec> players;
    std::optional<AdversarySpec> adversary;
    std::optional<std::string> registry_path;
};

// DomainError(ConfigError) on I/O, parse, or schema problems; the message
// names the offending key.
CliConfig load_cli_config(const std::filesystem::path& path);

// Subcommands: play, tournament, attack, rankings. Exit codes: 0 success,
// 1 usage/config error, 2 protocol abort, 3 undetected attack.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace rps
