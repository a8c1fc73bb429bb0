#pragma once

// Command-line entry point and the JSON run manifests it writes.
//
//   mmdwr solve    --config FILE [--output DIR] [--seed N]
//   mmdwr adapt    --config FILE [--output DIR] [--seed N]
//   mmdwr baseline --config FILE [--output DIR] [--seed N]
//   mmdwr gen-mesh --config FILE --out MESH
//   mmdwr export   --state STATE --out VTK
//
// The output directory is taken from --output, else MMDWR_OUTPUT_DIR, else
// the config's output.directory.

#include <iosfwd>
#include <string>

#include "mmdwr/config.hpp"
#include "mmdwr/newton.hpp"

namespace mmdwr {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitNonphysical = 4,
  kExitNoConvergence = 5,
  kExitDiverged = 6,
  kExitIo = 7,
  kExitBudget = 8,
  kExitOther = 9,
};

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Manifest of an adapt or baseline run. Without timing the text depends only
/// on the inputs, so reruns compare byte for byte.
std::string adaptation_manifest(const RunConfig& cfg, const std::string& command, const AdaptationState& state,
                                bool with_timing);
std::string solve_manifest(const RunConfig& cfg, const LeafMesh& mesh, const SteadyResult& result,
                           bool with_timing);

}  // namespace mmdwr
