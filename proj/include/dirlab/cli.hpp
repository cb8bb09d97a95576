#pragma once

// Command-line front end: dirlab <cantor|capacity|outer|dirichlet-audit|cyclicity> [flags].
//
// Exit codes: 0 success (or all verdicts pass), 1 I/O failure, 2 usage or
// invalid input, 3 some audit or surrogate failed, 4 a hypothesis of the
// cyclicity campaign is not met.

#include <iosfwd>
#include <string>
#include <vector>

namespace dirlab {

enum ExitCode : int { kExitOk = 0, kExitIo = 1, kExitUsage = 2, kExitFailed = 3, kExitHypothesis = 4 };

constexpr int kConfigSchemaVersion = 1;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dirlab
