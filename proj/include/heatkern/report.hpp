// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_REPORT_HPP
#define HEATKERN_REPORT_HPP

#include <string>

#include "heatkern/config.hpp"

namespace heatkern {

struct ReportOutcome {
  std::string json_text;
  int exit_code = 0; // 0 success, 1 computation failure, 3 ellipticity abort
  std::string message;
};

// Runs the full pipeline: ellipticity gate, interior densities and global
// invariants, boundary invariant, Finsler summaries, oracle fits and
// cross-checks. Deterministic for a fixed config: fixed quadrature orders
// and an index-ordered reduction, so repeated runs emit identical bytes.
ReportOutcome run_report(const RunConfig &config, bool force = false);

} // namespace heatkern

#endif
