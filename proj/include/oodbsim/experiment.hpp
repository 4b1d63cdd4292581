#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "oodbsim/engine.hpp"
#include "oodbsim/metrics.hpp"

namespace oodbsim {

// Runs each configuration once, spread over a small worker pool. Results keep
// the input order; the first worker exception is rethrown.
inline std::vector<RunMetrics> simulate_many(const std::vector<SimConfig>& cfgs, int jobs = 0) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    if (jobs > static_cast<int>(cfgs.size())) jobs = static_cast<int>(cfgs.size());

    std::vector<RunMetrics> out(cfgs.size());
    if (cfgs.empty()) return out;

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cfgs.size()) return;
            try {
                out[i] = simulate(cfgs[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

// Same configuration under consecutive seeds starting at cfg.seed.
inline std::vector<RunMetrics> simulate_replications(const SimConfig& base, int reps, int jobs = 0) {
    std::vector<SimConfig> cfgs;
    cfgs.reserve(static_cast<std::size_t>(reps));
    for (int i = 0; i < reps; ++i) {
        SimConfig c = base;
        c.seed = base.seed + static_cast<std::uint64_t>(i);
        cfgs.push_back(std::move(c));
    }
    return simulate_many(cfgs, jobs);
}

} // namespace oodbsim
