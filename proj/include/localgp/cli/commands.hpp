#pragma once

#include "localgp/cli/config.hpp"

#include <iosfwd>

namespace localgp::cli {

// Each command writes its files and one `summary ...` line to `log`.
void cmd_gen(const RunConfig& config, std::ostream& log);
void cmd_predict(const RunConfig& config, std::ostream& log);
void cmd_surface(const RunConfig& config, std::ostream& log);
void cmd_table(const RunConfig& config, std::ostream& log);

void run_command(const RunConfig& config, std::ostream& log);

}  // namespace localgp::cli
