#include "mhs/report.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace mhs {

namespace {

using nlohmann::json;

json check_to_json(const CheckResult& r, const ReportOptions& opts) {
    json params = json::object();
    for (const auto& [key, value] : r.spec.params) params[key] = value;
    json j{
        {"id", to_string(r.spec.id)},
        {"params", std::move(params)},
        {"modulus", r.modulus.str()},
        {"lhs", r.lhs ? json(r.lhs->str()) : json(nullptr)},
        {"rhs", r.rhs ? json(r.rhs->str()) : json(nullptr)},
        {"pass", r.pass},
        {"rejected", r.rejected},
        {"method", r.method},
        {"paper_ref", statement_of(r.spec.id)},
    };
    if (opts.timings) j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Spec'd parameter column order; covers every parameter a check uses.
constexpr const char* kParamColumns[] = {"p", "r", "n", "k", "m",
                                         "a", "alpha", "a1", "a2", "a3"};

std::string param_cell(const CheckParams& params, const char* key) {
    auto it = params.find(key);
    return it == params.end() ? std::string() : std::to_string(it->second);
}

std::string compact_params(const CheckParams& params) {
    std::string out;
    for (const char* key : kParamColumns) {
        auto it = params.find(key);
        if (it == params.end()) continue;
        if (!out.empty()) out += ' ';
        out += key;
        out += '=';
        out += std::to_string(it->second);
    }
    return out;
}

} // namespace

SuiteSummary summarize(const std::vector<CheckResult>& results) {
    SuiteSummary s;
    s.total = results.size();
    for (const CheckResult& r : results) {
        if (r.rejected) {
            ++s.rejected;
        } else if (r.pass) {
            ++s.passed;
        } else {
            ++s.failed;
        }
    }
    return s;
}

int exit_code_for(const std::vector<CheckResult>& results,
                  bool strict_hypotheses) {
    SuiteSummary s = summarize(results);
    if (s.failed > 0) return 1;
    if (strict_hypotheses && s.rejected > 0) return 1;
    return 0;
}

std::string suite_to_json(const std::vector<CheckResult>& results,
                          const ReportOptions& opts) {
    json checks = json::array();
    for (const CheckResult& r : results) checks.push_back(check_to_json(r, opts));
    SuiteSummary s = summarize(results);
    json doc{
        {"checks", std::move(checks)},
        {"summary",
         {{"total", s.total},
          {"passed", s.passed},
          {"failed", s.failed},
          {"rejected", s.rejected}}},
    };
    return doc.dump(2) + "\n";
}

std::string suite_to_csv(const std::vector<CheckResult>& results,
                         const ReportOptions& opts) {
    std::ostringstream os;
    os << "id";
    for (const char* key : kParamColumns) os << ',' << key;
    os << ",modulus,lhs,rhs,pass,rejected,method";
    if (opts.timings) os << ",elapsed_ms";
    os << ",paper_ref\n";
    for (const CheckResult& r : results) {
        os << to_string(r.spec.id);
        for (const char* key : kParamColumns) {
            os << ',' << param_cell(r.spec.params, key);
        }
        os << ',' << r.modulus.str();
        os << ',' << (r.lhs ? r.lhs->str() : std::string());
        os << ',' << (r.rhs ? r.rhs->str() : std::string());
        os << ',' << (r.pass ? "true" : "false");
        os << ',' << (r.rejected ? "true" : "false");
        os << ',' << r.method;
        if (opts.timings) os << ',' << r.elapsed_ms;
        os << ',' << csv_escape(statement_of(r.spec.id));
        os << '\n';
    }
    return os.str();
}

std::string suite_to_text(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    for (const CheckResult& r : results) {
        std::string status;
        if (r.rejected) {
            status = "REJECTED (" + r.reason + ")";
        } else {
            status = r.pass ? "pass" : "FAIL";
        }
        os << to_string(r.spec.id) << "  " << compact_params(r.spec.params)
           << "  mod " << r.modulus.str();
        if (r.lhs && r.rhs) {
            os << "  lhs=" << r.lhs->str() << " rhs=" << r.rhs->str();
        }
        if (!r.method.empty()) os << "  [" << r.method << "]";
        os << "  " << status << "  (" << r.elapsed_ms << " ms)\n";
    }
    SuiteSummary s = summarize(results);
    os << s.total << " checks: " << s.passed << " passed, " << s.failed
       << " failed, " << s.rejected << " rejected\n";
    return os.str();
}

std::string result_to_json(const MhsResult& result, const ReportOptions& opts) {
    json j{
        {"n", result.query.parts},
        {"target", result.query.target.get_str()},
        {"p", result.query.p.get_str()},
        {"r", result.query.r},
        {"bound", result.query.bound.get_str()},
        {"coprime", result.query.coprime},
        {"m", result.query.mod_exponent},
        {"modulus", result.residue.modulus().str()},
        {"residue", result.residue.str()},
        {"term_count", result.term_count.get_str()},
        {"method", to_string(result.method)},
        {"from_cache", result.from_cache},
    };
    if (opts.timings) j["elapsed_ms"] = result.elapsed_ms;
    return j.dump(2) + "\n";
}

std::string result_to_text(const MhsResult& result) {
    std::ostringstream os;
    os << result.residue.str() << " (mod " << result.residue.modulus().str()
       << ")  terms=" << result.term_count.get_str() << "  method="
       << to_string(result.method) << (result.from_cache ? " (cached)" : "")
       << "  " << result.elapsed_ms << " ms\n";
    return os.str();
}

namespace {

json scan_row_to_json(const ScanRow& row) {
    return json{
        {"p", row.p},
        {"available", row.available},
        {"note", row.note},
        {"sum", row.sum_residue ? json(row.sum_residue->str()) : json(nullptr)},
        {"ratio", row.ratio ? json(row.ratio->str()) : json(nullptr)},
    };
}

} // namespace

std::string scan_to_json(const ScanReport& report) {
    json rows = json::array();
    for (const ScanRow& row : report.table.rows) {
        rows.push_back(scan_row_to_json(row));
    }
    json doc{
        {"n", report.table.n},
        {"r", report.table.r},
        {"calibration",
         {{"ok", report.calibrated}, {"message", report.calibration_message}}},
        {"rows", std::move(rows)},
    };
    return doc.dump(2) + "\n";
}

std::string scan_to_csv(const ScanReport& report) {
    std::ostringstream os;
    os << "p,available,sum,ratio,note\n";
    for (const ScanRow& row : report.table.rows) {
        os << row.p << ',' << (row.available ? "true" : "false") << ','
           << (row.sum_residue ? row.sum_residue->str() : std::string()) << ','
           << (row.ratio ? row.ratio->str() : std::string()) << ','
           << csv_escape(row.note) << '\n';
    }
    return os.str();
}

std::string scan_to_text(const ScanReport& report) {
    std::ostringstream os;
    os << "scan n=" << report.table.n << " r=" << report.table.r
       << "  calibration: "
       << (report.calibrated ? "ok (a(3) = -2, a(5) = -5!/6 reproduced)"
                             : "FAILED " + report.calibration_message)
       << "\n";
    for (const ScanRow& row : report.table.rows) {
        os << "  p=" << row.p;
        if (row.available) {
            os << "  S=" << row.sum_residue->str()
               << "  ratio=" << row.ratio->str() << " (mod " << row.p << ")";
        } else {
            os << "  unavailable: " << row.note;
        }
        os << "\n";
    }
    return os.str();
}

} // namespace mhs
