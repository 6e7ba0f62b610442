#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mhs/cache.hpp"
#include "mhs/version.hpp"

using namespace mhs;
namespace fs = std::filesystem;

namespace {

fs::path temp_cache_path(const char* name) {
    fs::path dir = fs::temp_directory_path() / "mhs_cache_tests";
    fs::create_directories(dir);
    fs::path p = dir / name;
    fs::remove(p);
    return p;
}

MhsQuery sample_query() { return MhsQuery::harmonic(3, 1, Int(5), 1, 1); }

} // namespace

TEST_CASE("miss then hit is idempotent") {
    fs::path path = temp_cache_path("hit.jsonl");
    MhsQuery q = sample_query();
    int calls = 0;
    auto engine = [&](const MhsQuery& qq) {
        ++calls;
        return mhs_bruteforce(qq);
    };

    CacheStore store(path);
    MhsResult first = store.lookup_or_compute(q, engine);
    CHECK(!first.from_cache);
    MhsResult second = store.lookup_or_compute(q, engine);
    CHECK(second.from_cache);
    CHECK(second.residue == first.residue);
    CHECK(second.term_count == first.term_count);
    CHECK(calls == 1);

    // A fresh store reads the same record back from disk.
    CacheStore reopened(path);
    MhsResult third = reopened.lookup_or_compute(q, engine);
    CHECK(third.from_cache);
    CHECK(third.residue == first.residue);
    CHECK(calls == 1);
}

TEST_CASE("results with and without the cache are residue-identical") {
    fs::path path = temp_cache_path("transparent.jsonl");
    CacheStore store(path);
    MhsQuery q = MhsQuery::harmonic(4, 2, Int(7), 1, 2);
    auto engine = [](const MhsQuery& qq) { return compute(qq); };
    MhsResult uncached = engine(q);
    MhsResult miss = store.lookup_or_compute(q, engine);
    MhsResult hit = store.lookup_or_compute(q, engine);
    CHECK(uncached.residue == miss.residue);
    CHECK(uncached.residue == hit.residue);
}

TEST_CASE("engine version bump invalidates old records") {
    fs::path path = temp_cache_path("stale.jsonl");
    MhsQuery q = sample_query();
    {
        std::ofstream out(path);
        // Same key, older engine, wrong residue on purpose.
        out << R"({"bound":"5","coprime":true,"engine":"0","m":1,"method":"bruteforce","n":3,"p":"5","r":1,"residue":"9","target":"5","term_count":"6","ts":0})"
            << "\n";
    }
    CacheStore store(path);
    CHECK(store.stats().stale == 1);
    CHECK(!store.lookup(q).has_value());

    int calls = 0;
    auto engine = [&](const MhsQuery& qq) {
        ++calls;
        return mhs_bruteforce(qq);
    };
    MhsResult res = store.lookup_or_compute(q, engine);
    CHECK(calls == 1);
    CHECK(!res.from_cache);
    CHECK(res.residue.residue() == 3);
}

TEST_CASE("a corrupt cache is quarantined and the run continues") {
    fs::path path = temp_cache_path("corrupt.jsonl");
    {
        std::ofstream out(path);
        out << "{\"this is\": \"not a record\"\n";
    }
    CacheStore store(path);
    auto stats = store.stats();
    CHECK(stats.quarantined);
    CHECK(fs::exists(stats.quarantine_path));
    CHECK(!fs::exists(path)); // moved aside

    MhsQuery q = sample_query();
    MhsResult res = store.lookup_or_compute(
        q, [](const MhsQuery& qq) { return mhs_bruteforce(qq); });
    CHECK(res.residue.residue() == 3);
    CHECK(store.lookup_or_compute(q, [](const MhsQuery& qq) {
                   return mhs_bruteforce(qq);
               }).from_cache);
    fs::remove(stats.quarantine_path);
}

TEST_CASE("an unwritable path degrades to uncached") {
    fs::path path =
        fs::temp_directory_path() / "mhs_cache_tests_missing_dir" / "x" / "c.jsonl";
    CacheStore store(path);
    MhsQuery q = sample_query();
    MhsResult res = store.lookup_or_compute(
        q, [](const MhsQuery& qq) { return mhs_bruteforce(qq); });
    CHECK(res.residue.residue() == 3);
    CHECK(!store.stats().writable);
    // Still computes correctly on repeat.
    MhsResult again = store.lookup_or_compute(
        q, [](const MhsQuery& qq) { return mhs_bruteforce(qq); });
    CHECK(again.residue.residue() == 3);
}

TEST_CASE("clear removes records and the file") {
    fs::path path = temp_cache_path("clear.jsonl");
    CacheStore store(path);
    store.lookup_or_compute(sample_query(), [](const MhsQuery& qq) {
        return mhs_bruteforce(qq);
    });
    CHECK(store.stats().current == 1);
    store.clear();
    CHECK(store.stats().current == 0);
    CHECK(!fs::exists(path));
}

TEST_CASE("cache keys distinguish every query field") {
    MhsQuery a = sample_query();
    MhsQuery b = a;
    b.mod_exponent = 2;
    MhsQuery c = a;
    c.coprime = false;
    MhsQuery d = a;
    d.bound = Int(6);
    CHECK(cache_key(a) != cache_key(b));
    CHECK(cache_key(a) != cache_key(c));
    CHECK(cache_key(a) != cache_key(d));
    CHECK(cache_key(a) == cache_key(sample_query()));
}
