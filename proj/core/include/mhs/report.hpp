#pragma once

/*
 * Serialization of check results and scan tables.
 *
 * JSON objects are emitted with keys sorted, residues as decimal strings.
 * Identical inputs serialize to identical bytes; elapsed_ms is only
 * included when timings are requested, since wall-clock values would break
 * that guarantee.
 */

#include <string>
#include <vector>

#include "mhs/sums.hpp"
#include "mhs/verifier.hpp"

namespace mhs {

struct ReportOptions {
    bool timings = false;
};

struct SuiteSummary {
    std::size_t total = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t rejected = 0;
};

SuiteSummary summarize(const std::vector<CheckResult>& results);

// 0 when every executed check passed (rejected checks only fail the run
// under strict hypotheses), 1 otherwise.
int exit_code_for(const std::vector<CheckResult>& results,
                  bool strict_hypotheses);

std::string suite_to_json(const std::vector<CheckResult>& results,
                          const ReportOptions& opts = {});
std::string suite_to_csv(const std::vector<CheckResult>& results,
                         const ReportOptions& opts = {});
std::string suite_to_text(const std::vector<CheckResult>& results);

std::string result_to_json(const MhsResult& result,
                           const ReportOptions& opts = {});
std::string result_to_text(const MhsResult& result);

struct ScanReport {
    ScanTable table;
    bool calibrated = false;
    std::string calibration_message;
};

std::string scan_to_json(const ScanReport& report);
std::string scan_to_csv(const ScanReport& report);
std::string scan_to_text(const ScanReport& report);

} // namespace mhs
