#pragma once

#include "run_config.hpp"

namespace cavspin::cli {

void cmd_simulate(const RunConfig& config);
void cmd_anneal(const RunConfig& config);
void cmd_sweep(const RunConfig& config);
// Writes the report to stdout, and to <out>/oracle.json when to_file is set.
void cmd_oracle(const RunConfig& config, bool to_file);

}  // namespace cavspin::cli
