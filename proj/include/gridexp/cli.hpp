#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gridexp/engine.hpp"

namespace gridexp {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2, kInconclusive = 3 };

/// A towerless placement of k robots drawn uniformly from the seed.
Configuration sample_initial(const GridDims& g, int k, std::uint64_t seed);

/// "random", "sequential", "synchronous" or "script:FILE".
std::unique_ptr<Adversary> make_adversary(const std::string& spec, std::uint64_t seed);

/// Entry point of the gridexp tool; args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridexp
