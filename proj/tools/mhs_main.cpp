/*
 * mhs: harmonic-sum congruences over prime powers, from the command line.
 *
 * Exit codes: 0 every executed check passed, 1 at least one failure,
 * 2 usage error, 3 resource limit.
 */

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mhs/bernoulli.hpp"
#include "mhs/cache.hpp"
#include "mhs/report.hpp"
#include "mhs/verifier.hpp"
#include "mhs/version.hpp"

namespace {

using namespace mhs;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

long parse_long(const std::string& s) {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw usage_error("not an integer: '" + s + "'");
    return v;
}

// "5,7" or "11..31" (ranges keep only the primes in them); explicit values
// must be prime.
std::vector<long> parse_primes(const std::string& text) {
    std::vector<long> out;
    for (const std::string& tok : split(text, ',')) {
        if (tok.empty()) continue;
        auto dots = tok.find("..");
        if (dots != std::string::npos) {
            long lo = parse_long(tok.substr(0, dots));
            long hi = parse_long(tok.substr(dots + 2));
            for (long x = lo; x <= hi; ++x) {
                if (is_prime(Int(x))) out.push_back(x);
            }
        } else {
            long p = parse_long(tok);
            if (!is_prime(Int(p))) {
                throw usage_error("'" + tok + "' is not prime");
            }
            out.push_back(p);
        }
    }
    if (out.empty()) throw usage_error("no primes in '" + text + "'");
    return out;
}

std::vector<unsigned> parse_r_values(const std::string& text) {
    std::vector<unsigned> out;
    for (const std::string& tok : split(text, ',')) {
        if (tok.empty()) continue;
        auto dots = tok.find("..");
        if (dots != std::string::npos) {
            long lo = parse_long(tok.substr(0, dots));
            long hi = parse_long(tok.substr(dots + 2));
            for (long x = lo; x <= hi; ++x) {
                if (x < 1) throw usage_error("r values must be >= 1");
                out.push_back(static_cast<unsigned>(x));
            }
        } else {
            long x = parse_long(tok);
            if (x < 1) throw usage_error("r values must be >= 1");
            out.push_back(static_cast<unsigned>(x));
        }
    }
    if (out.empty()) throw usage_error("no r values in '" + text + "'");
    return out;
}

std::vector<CheckId> parse_ids(const std::string& text) {
    std::vector<CheckId> out;
    for (const std::string& tok : split(text, ',')) {
        if (tok.empty()) continue;
        auto id = parse_check_id(tok);
        if (!id) throw usage_error("unknown check id '" + tok + "'");
        out.push_back(*id);
    }
    if (out.empty()) throw usage_error("no check ids in '" + text + "'");
    return out;
}

// "7^2" or a bare prime.
Modulus parse_modulus(const std::string& text) {
    auto caret = text.find('^');
    if (caret == std::string::npos) {
        return Modulus(Int(text), 1);
    }
    Int p(text.substr(0, caret));
    long m = parse_long(text.substr(caret + 1));
    if (m < 1) throw usage_error("modulus exponent must be >= 1");
    return Modulus(p, static_cast<unsigned>(m));
}

std::unique_ptr<CacheStore> open_cache(const std::string& flag_path) {
    std::string path = flag_path;
    if (path.empty()) {
        if (const char* env = std::getenv("MHS_CACHE")) path = env;
    }
    if (path.empty()) return nullptr;
    return std::make_unique<CacheStore>(path);
}

struct VerifyArgs {
    std::string ids, primes, rs, format = "text", cache_path;
    unsigned threads = 1;
    bool fail_fast = false;
    bool strict = false;
    bool timings = false;
};

int cmd_verify(const VerifyArgs& args) {
    std::vector<CheckId> ids =
        args.ids.empty() ? all_check_ids() : parse_ids(args.ids);

    std::vector<CheckSpec> specs;
    if (args.primes.empty() && args.rs.empty()) {
        for (const CheckSpec& spec : default_suite()) {
            if (std::find(ids.begin(), ids.end(), spec.id) != ids.end()) {
                specs.push_back(spec);
            }
        }
    } else {
        std::vector<long> primes = args.primes.empty()
                                       ? std::vector<long>{5, 7, 11, 13}
                                       : parse_primes(args.primes);
        std::vector<unsigned> rs =
            args.rs.empty() ? std::vector<unsigned>{} : parse_r_values(args.rs);
        specs = expand_grid(ids, primes, rs);
    }

    auto cache = open_cache(args.cache_path);
    SuiteOptions opts;
    opts.threads = args.threads;
    opts.fail_fast = args.fail_fast;
    opts.check.cache = cache.get();

    std::vector<CheckResult> results = run_suite(specs, opts);

    ReportOptions ropts{args.timings};
    if (args.format == "json") {
        std::cout << suite_to_json(results, ropts);
    } else if (args.format == "csv") {
        std::cout << suite_to_csv(results, ropts);
    } else {
        std::cout << suite_to_text(results);
    }
    return exit_code_for(results, args.strict);
}

struct ComputeArgs {
    unsigned n = 0;
    long k = -1;
    std::string target;
    std::string p;
    unsigned r = 1;
    long m = -1;
    std::string bound;
    std::string method = "auto";
    bool no_coprime = false;
    std::string format = "text", cache_path;
    bool timings = false;
};

int cmd_compute(const ComputeArgs& args) {
    if (args.k >= 0 && !args.target.empty()) {
        throw usage_error("give either --k or --target, not both");
    }
    Int p(args.p);
    unsigned m = args.m >= 0 ? static_cast<unsigned>(args.m) : args.r;
    MhsQuery q;
    if (!args.target.empty()) {
        q = MhsQuery::with_sum(args.n, Int(args.target), p, m);
        q.r = args.r;
    } else {
        unsigned k = args.k >= 0 ? static_cast<unsigned>(args.k) : 1;
        q = MhsQuery::harmonic(args.n, k, p, args.r, m);
    }
    if (!args.bound.empty()) q.bound = Int(args.bound);
    q.coprime = !args.no_coprime;
    q.validate();

    auto engine = [&](const MhsQuery& qq) {
        if (args.method == "bruteforce") return mhs_bruteforce(qq);
        if (args.method == "convolution") return mhs_convolution(qq);
        if (args.method == "auto") return compute(qq);
        throw usage_error("unknown method '" + args.method + "'");
    };
    auto cache = open_cache(args.cache_path);
    MhsResult res = cache ? cache->lookup_or_compute(q, engine) : engine(q);

    if (args.format == "json") {
        std::cout << result_to_json(res, ReportOptions{args.timings});
    } else {
        std::cout << result_to_text(res);
    }
    return 0;
}

int cmd_bernoulli(long n, const std::string& mod_text) {
    if (n < 0) throw usage_error("Bernoulli index must be >= 0");
    if (mod_text.empty()) {
        std::cout << bernoulli_exact(static_cast<unsigned>(n)).get_str() << "\n";
    } else {
        Modulus mod = parse_modulus(mod_text);
        std::cout << bernoulli_mod(static_cast<unsigned>(n), mod).str() << "\n";
    }
    return 0;
}

struct ScanArgs {
    unsigned n = 7;
    std::string primes;
    unsigned r = 2;
    std::string format = "text", cache_path;
};

int cmd_scan(const ScanArgs& args) {
    std::vector<long> primes = parse_primes(args.primes);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

    auto cache = open_cache(args.cache_path);
    CheckOptions opts;
    opts.cache = cache.get();

    // Known coefficients must reproduce before any new data is reported.
    ScanReport report;
    report.calibrated = scan_calibrates(primes, args.r,
                                        &report.calibration_message, opts);
    if (report.calibrated) {
        report.table = conjecture_scan(args.n, primes, args.r, opts);
    } else {
        report.table.n = args.n;
        report.table.r = args.r;
    }

    if (args.format == "json") {
        std::cout << scan_to_json(report);
    } else if (args.format == "csv") {
        std::cout << scan_to_csv(report);
    } else {
        std::cout << scan_to_text(report);
    }
    return report.calibrated ? 0 : 1;
}

int cmd_cache(const std::string& action, const std::string& cache_path) {
    auto cache = open_cache(cache_path);
    if (!cache) {
        throw usage_error("no cache path: pass --cache or set MHS_CACHE");
    }
    if (action == "stats") {
        auto s = cache->stats();
        std::cout << "path: " << cache->path().string() << "\n"
                  << "records: " << s.total << "\n"
                  << "current engine (v" << kEngineVersion << "): " << s.current
                  << "\n"
                  << "stale: " << s.stale << "\n"
                  << "writable: " << (s.writable ? "yes" : "no") << "\n";
        if (s.quarantined) {
            std::cout << "quarantined: " << s.quarantine_path << "\n";
        }
    } else if (action == "clear") {
        cache->clear();
        std::cout << "cache cleared\n";
    } else {
        throw usage_error("cache action must be 'stats' or 'clear'");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiple harmonic sums over prime powers: exact computation "
                 "and congruence verification"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    VerifyArgs vargs;
    auto* verify = app.add_subcommand(
        "verify", "run congruence checks and report pass/fail per instance");
    verify->add_option("--ids", vargs.ids,
                       "comma-separated check ids (default: all)");
    verify->add_option("--primes", vargs.primes,
                       "primes, e.g. 5,7 or 11..31 (default: per-check grid)");
    verify->add_option("--r", vargs.rs, "r values, e.g. 2..3 or 1,2");
    verify->add_option("--format", vargs.format, "text, json, or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    verify->add_option("--threads", vargs.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    verify->add_flag("--fail-fast", vargs.fail_fast,
                     "stop scheduling after the first failure");
    verify->add_flag("--strict-hypotheses", vargs.strict,
                     "rejected checks fail the run");
    verify->add_flag("--timings", vargs.timings,
                     "include elapsed_ms in json/csv output (not reproducible)");
    verify->add_option("--cache", vargs.cache_path,
                       "cache file (default: $MHS_CACHE)");

    ComputeArgs cargs;
    auto* compute_cmd =
        app.add_subcommand("compute", "compute one harmonic sum S_n^(k)(p^r)");
    compute_cmd->add_option("--n", cargs.n, "number of parts")->required();
    compute_cmd->add_option("--k", cargs.k, "target multiplier (default 1)");
    compute_cmd->add_option("--target", cargs.target,
                            "composition total (overrides --k; unbounded parts)");
    compute_cmd->add_option("--p", cargs.p, "prime")->required();
    compute_cmd->add_option("--r", cargs.r, "bound exponent (default 1)");
    compute_cmd->add_option("--m", cargs.m, "modulus exponent (default r)");
    compute_cmd->add_option("--bound", cargs.bound, "per-part bound override");
    compute_cmd->add_option("--method", cargs.method,
                            "auto, bruteforce, or convolution")
        ->check(CLI::IsMember({"auto", "bruteforce", "convolution"}));
    compute_cmd->add_flag("--no-coprime", cargs.no_coprime,
                          "drop the coprimality constraint on parts");
    compute_cmd->add_option("--format", cargs.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    compute_cmd->add_flag("--timings", cargs.timings, "include elapsed_ms");
    compute_cmd->add_option("--cache", cargs.cache_path, "cache file");

    long bern_n = 0;
    std::string bern_mod;
    auto* bern = app.add_subcommand("bernoulli",
                                    "print B_n exactly or modulo a prime power");
    bern->add_option("n", bern_n, "index")->required();
    bern->add_option("--mod", bern_mod, "modulus, e.g. 7^2");

    ScanArgs sargs;
    auto* scan = app.add_subcommand(
        "scan", "collect S_n^(1)(p^r)/(p^(r-1) B_{p-n}) data for odd n");
    scan->add_option("--n", sargs.n, "odd n >= 3")->required();
    scan->add_option("--primes", sargs.primes, "primes, e.g. 11..31")
        ->required();
    scan->add_option("--r", sargs.r, "exponent r >= 2 (default 2)");
    scan->add_option("--format", sargs.format, "text, json, or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    scan->add_option("--cache", sargs.cache_path, "cache file");

    std::string cache_action, cache_path;
    auto* cache_cmd = app.add_subcommand("cache", "inspect or clear the cache");
    cache_cmd->add_option("action", cache_action, "stats or clear")
        ->required()
        ->check(CLI::IsMember({"stats", "clear"}));
    cache_cmd->add_option("--cache", cache_path,
                          "cache file (default: $MHS_CACHE)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(vargs);
        if (compute_cmd->parsed()) return cmd_compute(cargs);
        if (bern->parsed()) return cmd_bernoulli(bern_n, bern_mod);
        if (scan->parsed()) return cmd_scan(sargs);
        if (cache_cmd->parsed()) return cmd_cache(cache_action, cache_path);
    } catch (const limit_error& e) {
        std::cerr << "mhs: resource limit: " << e.what() << "\n";
        return 3;
    } catch (const usage_error& e) {
        std::cerr << "mhs: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "mhs: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "mhs: internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
