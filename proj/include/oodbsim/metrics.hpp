#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "oodbsim/config.hpp"
#include "oodbsim/storage.hpp"
#include "oodbsim/workload.hpp"

namespace oodbsim {

struct KindStats {
    long count = 0;
    double resp_sum_ms = 0.0;
    long ios = 0;          // transfers attributed to these transactions' own work
    long pages_sum = 0;    // distinct pages touched, summed over transactions
    long entries = 0;      // object touches executed

    double mean_response_ms() const { return count ? resp_sum_ms / static_cast<double>(count) : 0.0; }
    double mean_ios() const { return count ? static_cast<double>(ios) / static_cast<double>(count) : 0.0; }
    double mean_pages() const { return count ? static_cast<double>(pages_sum) / static_cast<double>(count) : 0.0; }
};

struct RunMetrics {
    std::uint64_t seed = 0;
    PolicyKind policy = PolicyKind::Cactis;
    long completed = 0;
    double end_ms = 0.0;                          // completion time of the last counted transaction
    std::array<KindStats, txn_kind_count> kinds{};
    IoCounters io;                                // store totals at the end of the run
    long buffer_hits = 0;
    long buffer_misses = 0;
    double pages_used_avg = 0.0;                  // time average of nonempty pages
    long reorg_count = 0;
    long objects_created = 0;
    long read_entries = 0;
    long write_entries = 0;

    const KindStats& kind(TxnKind k) const { return kinds[static_cast<std::size_t>(k)]; }
    KindStats& kind(TxnKind k) { return kinds[static_cast<std::size_t>(k)]; }

    double throughput_tps() const { return end_ms > 0.0 ? completed / (end_ms / 1000.0) : 0.0; }

    double avg_response_ms() const {
        double sum = 0.0;
        long n = 0;
        for (const KindStats& s : kinds) {
            sum += s.resp_sum_ms;
            n += s.count;
        }
        return n ? sum / static_cast<double>(n) : 0.0;
    }

    // object reads per object write, counting a version creation as one write
    double observed_rw_ratio() const {
        long denom = write_entries + objects_created;
        return denom ? static_cast<double>(read_entries) / static_cast<double>(denom) : 0.0;
    }

    double txn_ios_per_txn() const {
        return completed ? static_cast<double>(io.transaction()) / static_cast<double>(completed) : 0.0;
    }
    double clust_ios_per_txn() const {
        return completed ? static_cast<double>(io.clustering()) / static_cast<double>(completed) : 0.0;
    }
    double total_ios_per_txn() const {
        return completed ? static_cast<double>(io.total()) / static_cast<double>(completed) : 0.0;
    }
};

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;
    long n = 0;
};

inline Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.n = static_cast<long>(xs.size());
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

template <typename F>
Summary summarize_runs(const std::vector<RunMetrics>& runs, F&& metric) {
    std::vector<double> xs;
    xs.reserve(runs.size());
    for (const RunMetrics& r : runs) xs.push_back(metric(r));
    return summarize(xs);
}

} // namespace oodbsim
