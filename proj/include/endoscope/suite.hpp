#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "endoscope/endo.hpp"

namespace endoscope::suite {

struct RunConfig {
    int64_t p = 3;
    int f = 1;
    int r = 2;
    int n = 1;
    std::string parity = "both"; // even | odd | both
    int precision = 4;
    int window_low = -2;
    int64_t psi_b = 1;
    int max_n = 2;       // appendix Fourier bound: n + m <= 2 * max_n
    uint64_t term_cap = 100000000;
    int threads = 1;
    bool timings = false;

    void validate() const;
};

// Runs, in order: gf/cyclo self-tests, the appendix suite, the p-adic
// witness certificates, the closed-vs-brute character suite, and the
// endoscopic layer (ECR + uniqueness).  Emits one JSON document.
// Returns 0 if everything passed, 1 otherwise.
int run_suite(const RunConfig& cfg, std::ostream& out);

// The appendix identities alone (Hasse-Davenport, Fourier, collapse,
// witnesses, distinguishing); shared by the suite and the CLI.
std::vector<report::VerifyReport> appendix_reports(const RunConfig& cfg, const gf::QuadExt& T,
                                                   const cyclo::CycRing& R);

std::string run_suite_to_string(const RunConfig& cfg);

// CSV of Kl_a^{n,m} values, one row per a, one column per requested (n, m).
void emit_kl_table(const RunConfig& cfg, int max_n, int max_m, std::ostream& out);

// Deterministic parallel map: results land in input order regardless of the
// thread count (all values are exact, so this is bit-reproducible).
template <typename T>
std::vector<T> parallel_map(size_t count, int threads, const std::function<T(size_t)>& fn) {
    std::vector<T> out(count);
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            out[i] = fn(i);
        }
    };
    int tcount = std::min<int>(threads, int(count));
    pool.reserve(size_t(tcount));
    for (int t = 0; t < tcount; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

} // namespace endoscope::suite
