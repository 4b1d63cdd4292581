#pragma once

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "oodbsim/clustering.hpp"
#include "oodbsim/config.hpp"
#include "oodbsim/metrics.hpp"
#include "oodbsim/model.hpp"
#include "oodbsim/rng.hpp"
#include "oodbsim/storage.hpp"
#include "oodbsim/workload.hpp"

namespace oodbsim {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-ish queueing simulation: Poisson arrivals, FCFS admission up to
// MULTI concurrent transactions, one simulated step per object touch. A
// reorganization request drains the in-service set, runs exclusively, and
// blocks admission until its end event. Admission charges CCT once; each
// step charges its physical transfers plus in-memory work.
class Simulation {
public:
    explicit Simulation(const SimConfig& cfg)
        : cfg_(cfg),
          policy_(make_policy(cfg)),
          store_(cfg.PGSIZE, cfg.BUFSIZE),
          workload_(cfg, cfg.policy, derive_seeds(cfg.seed).second) {
        RandomStream gen(derive_seeds(cfg.seed).first);
        graph_ = generate_database(generate_schema(cfg, gen), cfg, gen);
        policy_->load_database(graph_, store_);
        if (store_.counters.total() != 0)
            throw EngineError("initial load must not perform I/O");
        pages_cur_ = store_.nonempty_page_count();
    }

    RunMetrics run() {
        schedule_arrival(workload_.next());
        while (running_ && !events_.empty()) {
            Event ev = events_.top();
            events_.pop();
            clock_ = ev.at_ms;
            dispatch(ev);
        }
        pages_mark_at(end_ms_);
        RunMetrics m = metrics_;
        m.seed = cfg_.seed;
        m.policy = cfg_.policy;
        m.completed = completed_;
        m.end_ms = end_ms_;
        m.io = store_.counters;
        m.buffer_hits = store_.buffer_hits;
        m.buffer_misses = store_.buffer_misses;
        m.pages_used_avg = end_ms_ > 0.0 ? pages_acc_ / end_ms_ : static_cast<double>(pages_cur_);
        return m;
    }

    const ObjectGraph& graph() const { return graph_; }
    const Store& store() const { return store_; }
    ClusteringPolicy& policy() { return *policy_; }

private:
    enum class EvKind : std::uint8_t { Arrival, Step, Complete, ReclusterEnd };

    struct Event {
        double at_ms = 0.0;
        long seq = 0;
        EvKind kind = EvKind::Arrival;
        long txn = 0;
        int entry = 0;
        TxnSpec spec;

        bool operator>(const Event& o) const {
            if (at_ms != o.at_ms) return at_ms > o.at_ms;
            return seq > o.seq;
        }
    };

    struct ActiveTxn {
        TxnSpec spec;
        TxnPlan plan;
        double admit_ms = 0.0;
        long ios = 0;
        std::set<int> pages;
    };

    static std::pair<std::uint64_t, std::uint64_t> derive_seeds(std::uint64_t seed) {
        RandomStream base(seed);
        std::uint64_t gen = base.fork_seed();
        std::uint64_t wl = base.fork_seed();
        return {gen, wl};
    }

    void schedule(double at, EvKind kind, long txn = 0, int entry = 0) {
        events_.push(Event{at, ++seq_, kind, txn, entry, {}});
    }

    void schedule_arrival(TxnSpec spec) {
        Event ev{spec.arrival_ms, ++seq_, EvKind::Arrival, 0, 0, spec};
        events_.push(ev);
    }

    void dispatch(const Event& ev) {
        switch (ev.kind) {
            case EvKind::Arrival:
                waiting_.push_back(ev.spec);
                schedule_arrival(workload_.next());
                try_admit();
                break;
            case EvKind::Step: execute_step(ev.txn, ev.entry); break;
            case EvKind::Complete: complete(ev.txn); break;
            case EvKind::ReclusterEnd: finish_recluster(); break;
        }
    }

    void try_admit() {
        while (!recluster_pending_ && !recluster_active_ && in_service_ < cfg_.MULTI &&
               !waiting_.empty()) {
            if (waiting_.front().kind == TxnKind::Clust && policy_->reclusters()) {
                recluster_pending_ = true;
                maybe_start_recluster();
                return;
            }
            TxnSpec spec = waiting_.front();
            waiting_.pop_front();
            admit(spec);
        }
    }

    void admit(const TxnSpec& spec) {
        ++in_service_;
        ActiveTxn a;
        a.spec = spec;
        a.admit_ms = clock_;
        RandomStream sub(spec.plan_seed);

        if (spec.kind == TxnKind::U2) {
            IoCounters before = store_.counters;
            CreateResult res = create_instance(graph_, spec.class_id, cfg_, sub);
            pages_mark();
            policy_->on_object_created(graph_, store_, res.oid);
            for (int gid : res.grown)
                if (store_.page_of(gid) != 0) policy_->on_object_grown(graph_, store_, gid);
            pages_refresh();
            long ios = (store_.counters - before).total();
            a.ios = ios;
            ++metrics_.objects_created;
            active_.emplace(spec.id, std::move(a));
            schedule(clock_ + cfg_.CCT + static_cast<double>(ios) * cfg_.io_time_ms(),
                     EvKind::Complete, spec.id);
            return;
        }

        a.plan = build_plan(graph_, spec, cfg_, sub);
        bool empty = a.plan.entries.empty();
        active_.emplace(spec.id, std::move(a));
        if (empty)
            schedule(clock_ + cfg_.CCT, EvKind::Complete, spec.id);
        else
            schedule(clock_ + cfg_.CCT, EvKind::Step, spec.id, 0);
    }

    void execute_step(long txn, int idx) {
        ActiveTxn& a = active_.at(txn);
        const PlanEntry& e = a.plan.entries[static_cast<std::size_t>(idx)];
        int pid = store_.page_of(e.oid);
        if (pid == 0) throw EngineError("plan touches an unplaced object");

        IoCounters before = store_.counters;
        store_.fetch_page(pid, IoCause::Transaction);
        if (e.write) {
            store_.mark_dirty(pid);
            graph_.obj(e.oid).attrs[static_cast<std::size_t>(e.update_attr)].value = e.update_value;
            ++metrics_.write_entries;
        } else {
            ++metrics_.read_entries;
        }
        policy_->observe_access(graph_, e);

        long ios = (store_.counters - before).total();
        a.ios += ios;
        a.pages.insert(pid);
        double dur = static_cast<double>(ios) * cfg_.io_time_ms() + cfg_.TEST +
                     cfg_.ACCM * static_cast<double>(1 + e.words);
        if (idx + 1 < static_cast<int>(a.plan.entries.size()))
            schedule(clock_ + dur, EvKind::Step, txn, idx + 1);
        else
            schedule(clock_ + dur, EvKind::Complete, txn);
    }

    void complete(long txn) {
        auto it = active_.find(txn);
        ActiveTxn a = std::move(it->second);
        active_.erase(it);
        --in_service_;

        KindStats& ks = metrics_.kind(a.spec.kind);
        ++ks.count;
        ks.resp_sum_ms += clock_ - a.spec.arrival_ms;
        ks.ios += a.ios;
        ks.pages_sum += static_cast<long>(a.pages.size());
        ks.entries += static_cast<long>(a.plan.entries.size());
        count_completion();
        if (!running_) return;

        if (recluster_pending_)
            maybe_start_recluster();
        else
            try_admit();
    }

    void maybe_start_recluster() {
        if (in_service_ != 0) return;
        recluster_spec_ = waiting_.front();
        waiting_.pop_front();
        IoCounters before = store_.counters;
        pages_mark();
        bool did = policy_->on_recluster(graph_, store_);
        pages_refresh();
        recluster_ios_ = (store_.counters - before).total();
        if (did) ++metrics_.reorg_count;
        recluster_pending_ = false;
        recluster_active_ = true;
        schedule(clock_ + cfg_.CCT + static_cast<double>(recluster_ios_) * cfg_.io_time_ms(),
                 EvKind::ReclusterEnd);
    }

    void finish_recluster() {
        KindStats& ks = metrics_.kind(TxnKind::Clust);
        ++ks.count;
        ks.resp_sum_ms += clock_ - recluster_spec_.arrival_ms;
        ks.ios += recluster_ios_;
        recluster_active_ = false;
        count_completion();
        if (running_) try_admit();
    }

    void count_completion() {
        ++completed_;
        end_ms_ = clock_;
        if (cfg_.progress && completed_ % std::max<long>(1, cfg_.horizon_transactions / 10) == 0)
            std::fprintf(stderr, "  [%s seed=%llu] %ld/%ld completed, t=%.0fms\n",
                         policy_name(cfg_.policy), static_cast<unsigned long long>(cfg_.seed),
                         completed_, cfg_.horizon_transactions, clock_);
        if (completed_ >= cfg_.horizon_transactions) running_ = false;
    }

    // time average of the nonempty page count; bracket every layout change
    void pages_mark() { pages_mark_at(clock_); }
    void pages_mark_at(double now) {
        pages_acc_ += (now - pages_last_) * static_cast<double>(pages_cur_);
        pages_last_ = now;
    }
    void pages_refresh() { pages_cur_ = store_.nonempty_page_count(); }

    SimConfig cfg_;
    std::unique_ptr<ClusteringPolicy> policy_;
    ObjectGraph graph_;
    Store store_;
    WorkloadGenerator workload_;

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
    std::deque<TxnSpec> waiting_;
    std::map<long, ActiveTxn> active_;
    long seq_ = 0;
    double clock_ = 0.0;
    int in_service_ = 0;
    bool running_ = true;
    bool recluster_pending_ = false;
    bool recluster_active_ = false;
    TxnSpec recluster_spec_;
    long recluster_ios_ = 0;
    long completed_ = 0;
    double end_ms_ = 0.0;

    RunMetrics metrics_;
    double pages_acc_ = 0.0;
    double pages_last_ = 0.0;
    int pages_cur_ = 0;
};

inline RunMetrics simulate(const SimConfig& cfg) {
    Simulation sim(cfg);
    return sim.run();
}

} // namespace oodbsim
