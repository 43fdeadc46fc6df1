#pragma once

#include <string>

#include "egolayers/config.hpp"

namespace egolayers {

// Subcommand bodies, callable in-process (the CLI wraps these). Each writes
// its outputs plus a manifest under config.output_dir and throws
// ConfigError/DataError on failure.

/// Raw events -> filtered edge list + ingest stats report.
void cmd_ingest(const RunConfig& config);

/// Edge list -> per-ego results (line-JSON), population summary, p(x) CSV.
void cmd_analyze(const RunConfig& config);

/// Edge list + events + labels -> per-layer review-type crosstab.
void cmd_crosstab(const RunConfig& config);

/// Synthetic event log, label file, planted ledger.
void cmd_synth(const RunConfig& config);

/// DOT export of one ego's layered network.
void cmd_export_dot(const RunConfig& config, const std::string& ego_id, Direction direction,
                    int k, const std::string& out_path);

}  // namespace egolayers
