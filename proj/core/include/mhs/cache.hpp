#pragma once

/*
 * Append-only on-disk cache of harmonic-sum results: one JSON object per
 * line, UTF-8, keyed by the full query and the engine version. A file that
 * fails to parse is renamed aside (quarantined) and recomputation proceeds;
 * an unwritable path degrades to uncached operation with one warning.
 */

#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "mhs/sums.hpp"

namespace mhs {

struct CacheRecord {
    MhsQuery query;
    Int residue;
    Int term_count;
    std::string method;
    std::string engine;
    long timestamp = 0; // seconds since epoch
};

class CacheStore {
public:
    explicit CacheStore(std::filesystem::path path);

    const std::filesystem::path& path() const noexcept { return path_; }

    // Returns the cached result on a key hit for the current engine
    // version; otherwise runs `fn`, appends, and returns its result.
    MhsResult lookup_or_compute(const MhsQuery& q,
                                const std::function<MhsResult(const MhsQuery&)>& fn);

    std::optional<CacheRecord> lookup(const MhsQuery& q) const;

    struct Stats {
        std::size_t total = 0;    // records seen in the file
        std::size_t current = 0;  // records matching the engine version
        std::size_t stale = 0;    // records from other engine versions
        bool writable = true;
        bool quarantined = false; // a corrupt file was renamed aside
        std::string quarantine_path;
    };
    Stats stats() const;

    // Drops all records, in memory and on disk.
    void clear();

private:
    void load();
    void append(const CacheRecord& rec);

    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, CacheRecord> records_; // current engine only
    std::size_t stale_ = 0;
    std::size_t total_ = 0;
    bool writable_ = true;
    bool warned_ = false;
    bool quarantined_ = false;
    std::string quarantine_path_;
};

// Cache key text for a query; stable across runs.
std::string cache_key(const MhsQuery& q);

} // namespace mhs
