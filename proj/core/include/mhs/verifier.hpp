#pragma once

/*
 * One parameterized check per congruence the library certifies. A check
 * computes its left side with the sum/combinatorics engines, assembles the
 * right side exactly from Bernoulli numbers and rational coefficients,
 * reduces both in the modulus the statement names, and compares residues.
 *
 * Hypothesis gating is total: a parameter set outside a statement's
 * hypotheses yields a rejected result, which is distinct from a failure.
 */

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mhs/bernoulli.hpp"
#include "mhs/cache.hpp"
#include "mhs/sums.hpp"

namespace mhs {

enum class CheckId {
    ZHAO1,
    ZHOU_ODD,
    ZHOU_EVEN,
    WANG_PP,
    ZHAO4,
    MAIN,
    THM2_R1,
    THM2_RGE2,
    REC_I,
    REC_II,
    CASOL_RESIDUE,
    CASOL_COLSUM,
    ZHOUXIA,
    COR_LEMCOR,
    LEMMA_2P,
    COR_LEMCOR2,
    S52MODP,
    REC_ADD1,
    REC_ADD2,
    REC_S512,
    REC_S21,
    REC_S5,
    REC_THM2,
};

const char* to_string(CheckId id);
std::optional<CheckId> parse_check_id(std::string_view s);
const std::vector<CheckId>& all_check_ids();

// The congruence a check certifies, as a formula string for reports.
const char* statement_of(CheckId id);

using CheckParams = std::map<std::string, long>;

struct CheckSpec {
    CheckId id;
    CheckParams params;
};

struct CheckResult {
    CheckSpec spec;
    Modulus modulus;
    std::optional<RingElem> lhs;
    std::optional<RingElem> rhs;
    bool pass = false;
    bool rejected = false;
    std::string reason;  // populated for rejected results
    std::string method;  // engine that produced the lhs
    double elapsed_ms = 0.0;
};

struct CheckOptions {
    ComputeLimits limits;
    CacheStore* cache = nullptr;
};

CheckResult run_check(const CheckSpec& spec, const CheckOptions& opts = {});

struct SuiteOptions {
    unsigned threads = 1;
    bool fail_fast = false;
    CheckOptions check;
};

// Runs the given specs; result order matches spec order regardless of the
// thread count. Rejections and failures are recorded, not thrown.
std::vector<CheckResult> run_suite(const std::vector<CheckSpec>& specs,
                                   const SuiteOptions& opts = {});

// Expands per-check parameter grids over the given primes and r values
// (aux parameters like n, k, a, alpha follow each check's committed grid),
// ordered by (id, p, r, aux).
std::vector<CheckSpec> expand_grid(const std::vector<CheckId>& ids,
                                   const std::vector<long>& primes,
                                   const std::vector<unsigned>& r_values);

std::vector<CheckResult> run_suite(const std::vector<CheckId>& ids,
                                   const std::vector<long>& primes,
                                   const std::vector<unsigned>& r_values,
                                   const SuiteOptions& opts = {});

// The canonical full grid: every check over the parameter ranges this
// project commits to. `verify` runs this when no grid flags are given.
std::vector<CheckSpec> default_suite();

// Data collection for the open question: for odd n, compute
// S_n^(1)(p^r) / (p^(r-1) B_{p-n}) mod p per prime. Rows where the
// divisions are impossible are marked unavailable. No fit is asserted.
struct ScanRow {
    long p = 0;
    bool available = false;
    std::string note;
    std::optional<RingElem> sum_residue; // S_n^(1)(p^r) mod p^r
    std::optional<RingElem> ratio;       // candidate a(n) mod p
};

struct ScanTable {
    unsigned n = 0;
    unsigned r = 0;
    std::vector<ScanRow> rows;
};

ScanTable conjecture_scan(unsigned n, const std::vector<long>& primes,
                          unsigned r, const CheckOptions& opts = {});

// The known rows: a(3) = -2 and a(5) = -5!/6. Returns false and fills
// `message` when a computed ratio disagrees; n >= 7 data is only
// trustworthy after this passes.
bool scan_calibrates(const std::vector<long>& primes, unsigned r,
                     std::string* message, const CheckOptions& opts = {});

} // namespace mhs
