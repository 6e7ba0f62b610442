#include "mhs/cache.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mhs/version.hpp"

namespace mhs {

namespace {

using nlohmann::json;

long now_seconds() {
    return static_cast<long>(std::chrono::duration_cast<std::chrono::seconds>(
                                 std::chrono::system_clock::now().time_since_epoch())
                                 .count());
}

json record_to_json(const CacheRecord& rec) {
    return json{
        {"n", rec.query.parts},
        {"target", rec.query.target.get_str()},
        {"p", rec.query.p.get_str()},
        {"r", rec.query.r},
        {"bound", rec.query.bound.get_str()},
        {"coprime", rec.query.coprime},
        {"m", rec.query.mod_exponent},
        {"residue", rec.residue.get_str()},
        {"term_count", rec.term_count.get_str()},
        {"method", rec.method},
        {"engine", rec.engine},
        {"ts", rec.timestamp},
    };
}

CacheRecord record_from_json(const json& j) {
    CacheRecord rec;
    rec.query.parts = j.at("n").get<unsigned>();
    rec.query.target = Int(j.at("target").get<std::string>());
    rec.query.p = Int(j.at("p").get<std::string>());
    rec.query.r = j.at("r").get<unsigned>();
    rec.query.bound = Int(j.at("bound").get<std::string>());
    rec.query.coprime = j.at("coprime").get<bool>();
    rec.query.mod_exponent = j.at("m").get<unsigned>();
    rec.residue = Int(j.at("residue").get<std::string>());
    rec.term_count = Int(j.at("term_count").get<std::string>());
    rec.method = j.at("method").get<std::string>();
    rec.engine = j.at("engine").get<std::string>();
    rec.timestamp = j.at("ts").get<long>();
    return rec;
}

std::optional<SumMethod> parse_method(const std::string& s) {
    if (s == "bruteforce") return SumMethod::bruteforce;
    if (s == "convolution") return SumMethod::convolution;
    return std::nullopt;
}

} // namespace

std::string cache_key(const MhsQuery& q) {
    std::ostringstream os;
    os << "n=" << q.parts << ";target=" << q.target.get_str()
       << ";p=" << q.p.get_str() << ";r=" << q.r
       << ";bound=" << q.bound.get_str() << ";coprime=" << (q.coprime ? 1 : 0)
       << ";m=" << q.mod_exponent;
    return os.str();
}

CacheStore::CacheStore(std::filesystem::path path) : path_(std::move(path)) {
    load();
}

void CacheStore::load() {
    std::ifstream in(path_);
    if (!in.is_open()) return; // no file yet
    std::string line;
    std::size_t lineno = 0;
    bool corrupt = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            CacheRecord rec = record_from_json(j);
            ++total_;
            if (rec.engine == kEngineVersion) {
                records_[cache_key(rec.query)] = std::move(rec);
            } else {
                ++stale_;
            }
        } catch (const std::exception&) {
            corrupt = true;
            break;
        }
    }
    in.close();
    if (corrupt) {
        // Rename the whole file aside and start over.
        quarantine_path_ =
            path_.string() + ".quarantined." + std::to_string(now_seconds());
        std::error_code ec;
        std::filesystem::rename(path_, quarantine_path_, ec);
        std::cerr << "mhs: cache " << path_ << " is corrupt (line " << lineno
                  << "); moved aside to " << quarantine_path_
                  << " and recomputing\n";
        records_.clear();
        total_ = 0;
        stale_ = 0;
        quarantined_ = true;
    }
}

void CacheStore::append(const CacheRecord& rec) {
    if (!writable_) return;
    std::ofstream out(path_, std::ios::app);
    if (!out.is_open()) {
        writable_ = false;
        if (!warned_) {
            std::cerr << "mhs: cache path " << path_
                      << " is not writable; continuing uncached\n";
            warned_ = true;
        }
        return;
    }
    out << record_to_json(rec).dump() << "\n";
    if (!out.good()) {
        writable_ = false;
        if (!warned_) {
            std::cerr << "mhs: write to cache " << path_
                      << " failed; continuing uncached\n";
            warned_ = true;
        }
    }
}

MhsResult CacheStore::lookup_or_compute(
    const MhsQuery& q, const std::function<MhsResult(const MhsQuery&)>& fn) {
    const std::string key = cache_key(q);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = records_.find(key);
        if (it != records_.end()) {
            if (auto method = parse_method(it->second.method)) {
                MhsResult res{q, RingElem(q.modulus(), it->second.residue),
                              *method, it->second.term_count, 0.0, true};
                return res;
            }
        }
    }
    MhsResult res = fn(q);
    CacheRecord rec{q, res.residue.residue(), res.term_count,
                    to_string(res.method), kEngineVersion, now_seconds()};
    {
        std::lock_guard<std::mutex> lock(mutex_);
        // Another thread may have raced the same key in; keep the first.
        auto [it, inserted] = records_.emplace(key, std::move(rec));
        if (inserted) {
            ++total_;
            append(it->second);
        }
    }
    return res;
}

std::optional<CacheRecord> CacheStore::lookup(const MhsQuery& q) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = records_.find(cache_key(q));
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

CacheStore::Stats CacheStore::stats() const {
    std::lock_guard<std::mutex> lock(mutex_);
    Stats s;
    s.total = total_;
    s.current = records_.size();
    s.stale = stale_;
    s.writable = writable_;
    s.quarantined = quarantined_;
    s.quarantine_path = quarantine_path_;
    return s;
}

void CacheStore::clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    records_.clear();
    total_ = 0;
    stale_ = 0;
    std::error_code ec;
    std::filesystem::remove(path_, ec);
}

} // namespace mhs
