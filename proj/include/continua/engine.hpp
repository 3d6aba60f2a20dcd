// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <string>

#include "continua/serialize.hpp"

namespace continua {

// Exit-code contract: 0 = property holds / value computed, 1 = property
// fails (witness in the report), 2 = input or usage error.
struct RunResult {
  int exit_code = 0;
  Json report;
};

// Dispatches one request: {"command": ..., inputs...}.  Input fields
// accept inline JSON objects or strings naming JSON files.  Reports are
// deterministic for a fixed request (including the seed, echoed in the
// header).  Never throws; errors become exit code 2 reports.
RunResult run_request(const Json& request);
RunResult run_request_text(const std::string& request_json);

// Human-readable rendering of a report.
std::string report_to_text(const Json& report);

}  // namespace continua
