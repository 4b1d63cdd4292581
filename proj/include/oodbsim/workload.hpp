#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "oodbsim/config.hpp"
#include "oodbsim/model.hpp"
#include "oodbsim/rng.hpp"

namespace oodbsim {

// Q1  lookup one object
// Q2  range scan: instances of one class with attribute 0 in a value window
// Q3  all versions reachable from one version
// Q4  all components reachable from one assembly
// Q5  direct equivalents of one object
// Q6  all ancestors of one version
// Q7  direct assemblies containing one part
// Q8  every instance of one class
// Q9  random walk along version links
// Q10 random walk along composition links
// Q11 random walk along equivalence links
// Q12 random walk picking the link kind at every step
// U1  rewrite one attribute of one object
// U2  create a new version of an existing design object
// Clust  reorganize placement (policies that cluster on demand ignore it)
enum class TxnKind : std::uint8_t {
    Q1, Q2, Q3, Q4, Q5, Q6, Q7, Q8, Q9, Q10, Q11, Q12, U1, U2, Clust
};

inline constexpr int txn_kind_count = 15;

inline const char* txn_kind_name(TxnKind k) {
    static const char* names[] = {"Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7", "Q8",
                                  "Q9", "Q10", "Q11", "Q12", "U1", "U2", "CLUST"};
    return names[static_cast<int>(k)];
}

inline bool is_query(TxnKind k) { return static_cast<int>(k) <= static_cast<int>(TxnKind::Q12); }

// One object touch. Reads cost the full logical value of every attribute;
// a write costs the words of the attribute it rewrites.
struct PlanEntry {
    int oid = 0;
    bool write = false;
    long words = 0;
    int via_from = 0;                       // object whose edge led here (0 = entry point)
    RelKind via_kind = RelKind::Version;
    bool via_forward = true;
    int update_attr = -1;                   // U1 only
    int update_value = 0;
};

struct TxnPlan {
    std::vector<PlanEntry> entries;
};

// Drawn at arrival from the master stream; everything that depends on the
// object graph is drawn later from the per-transaction substream, so the
// arrival sequence is identical across buffer sizes and storage layouts.
struct TxnSpec {
    long id = 0;
    TxnKind kind = TxnKind::Q1;
    double arrival_ms = 0.0;
    int class_id = 0;        // Q2, Q8, U2
    int window_lo = 0;       // Q2
    std::uint64_t plan_seed = 0;
};

inline long read_words(const ObjectInstance& obj) {
    long words = 0;
    for (const AttrValue& a : obj.attrs) words += a.size_words;
    return words;
}

inline int range_window_width(const SimConfig& cfg) {
    return static_cast<int>(std::ceil(cfg.RANGE_SEL * 100.0));
}

// Poisson arrivals; kind frequencies follow the configured mix, with the
// reorganization share resolved per policy.
class WorkloadGenerator {
public:
    WorkloadGenerator(const SimConfig& cfg, PolicyKind policy, std::uint64_t seed)
        : cfg_(cfg), rng_(seed) {
        weights_.assign(cfg.PQ.begin(), cfg.PQ.end());
        weights_.push_back(cfg.PU1);
        weights_.push_back(cfg.PU2);
        weights_.push_back(cfg.effective_pclust(policy));
    }

    TxnSpec next() {
        TxnSpec s;
        s.id = ++issued_;
        clock_ms_ += rng_.exponential(cfg_.MINTER);
        s.arrival_ms = clock_ms_;
        s.kind = static_cast<TxnKind>(rng_.pick_weighted(weights_));
        if (s.kind == TxnKind::Q2 || s.kind == TxnKind::Q8 || s.kind == TxnKind::U2)
            s.class_id = static_cast<int>(rng_.uniform_int(1, cfg_.NCL));
        if (s.kind == TxnKind::Q2)
            s.window_lo = static_cast<int>(rng_.uniform_int(0, 100 - range_window_width(cfg_)));
        s.plan_seed = rng_.fork_seed();
        return s;
    }

    long issued() const { return issued_; }

private:
    const SimConfig& cfg_;
    RandomStream rng_;
    std::vector<double> weights_;
    long issued_ = 0;
    double clock_ms_ = 0.0;
};

namespace detail {

inline PlanEntry read_entry(const ObjectGraph& g, int oid) {
    return PlanEntry{oid, false, read_words(g.obj(oid)), 0, RelKind::Version, true, -1, 0};
}

// breadth-first over one edge direction of one kind; start object included
inline void closure(const ObjectGraph& g, int start, RelKind kind, bool forward, TxnPlan& plan) {
    std::vector<char> seen(static_cast<std::size_t>(g.size()) + 1, 0);
    std::deque<int> frontier;
    seen[static_cast<std::size_t>(start)] = 1;
    frontier.push_back(start);
    plan.entries.push_back(read_entry(g, start));
    while (!frontier.empty()) {
        int oid = frontier.front();
        frontier.pop_front();
        for (const RelEdge& e : g.obj(oid).edges) {
            if (e.kind != kind || e.forward != forward) continue;
            if (seen[static_cast<std::size_t>(e.target)]) continue;
            seen[static_cast<std::size_t>(e.target)] = 1;
            frontier.push_back(e.target);
            PlanEntry pe = read_entry(g, e.target);
            pe.via_from = oid;
            pe.via_kind = kind;
            pe.via_forward = forward;
            plan.entries.push_back(pe);
        }
    }
}

inline void one_hop(const ObjectGraph& g, int start, RelKind kind, bool forward, TxnPlan& plan) {
    plan.entries.push_back(read_entry(g, start));
    for (const RelEdge& e : g.obj(start).edges) {
        if (e.kind != kind || e.forward != forward) continue;
        PlanEntry pe = read_entry(g, e.target);
        pe.via_from = start;
        pe.via_kind = kind;
        pe.via_forward = forward;
        plan.entries.push_back(pe);
    }
}

// forward walk of bounded depth; a step picks uniformly among the current
// object's outgoing links of the step kind and the walk stops early when
// there is none
inline void walk(const ObjectGraph& g, int start, long depth, bool mixed, RelKind fixed_kind,
                 RandomStream& sub, TxnPlan& plan) {
    plan.entries.push_back(read_entry(g, start));
    int current = start;
    for (long step = 0; step < depth; ++step) {
        RelKind kind = fixed_kind;
        if (mixed)
            kind = static_cast<RelKind>(sub.uniform_index(3));
        std::vector<const RelEdge*> out;
        for (const RelEdge& e : g.obj(current).edges)
            if (e.kind == kind && e.forward) out.push_back(&e);
        if (out.empty()) break;
        const RelEdge* pick = out[sub.uniform_index(out.size())];
        PlanEntry pe = read_entry(g, pick->target);
        pe.via_from = current;
        pe.via_kind = kind;
        pe.via_forward = true;
        plan.entries.push_back(pe);
        current = pick->target;
    }
}

} // namespace detail

// Resolves a spec against the current graph. U2 and Clust plans are empty;
// their work is not per-object.
inline TxnPlan build_plan(const ObjectGraph& g, const TxnSpec& spec, const SimConfig& cfg,
                          RandomStream& sub) {
    TxnPlan plan;
    if (g.size() == 0) return plan;
    auto start = [&] { return static_cast<int>(sub.uniform_int(1, g.size())); };
    switch (spec.kind) {
        case TxnKind::Q1:
            plan.entries.push_back(detail::read_entry(g, start()));
            break;
        case TxnKind::Q2: {
            int w = range_window_width(cfg);
            for (const ObjectInstance& o : g.objects) {
                if (o.class_id != spec.class_id) continue;
                int v = o.attrs.front().value;
                if (v >= spec.window_lo && v < spec.window_lo + w)
                    plan.entries.push_back(detail::read_entry(g, o.oid));
            }
            break;
        }
        case TxnKind::Q3: detail::closure(g, start(), RelKind::Version, true, plan); break;
        case TxnKind::Q4: detail::closure(g, start(), RelKind::Configuration, true, plan); break;
        case TxnKind::Q5: detail::one_hop(g, start(), RelKind::Equivalence, true, plan); break;
        case TxnKind::Q6: detail::closure(g, start(), RelKind::Version, false, plan); break;
        case TxnKind::Q7: detail::one_hop(g, start(), RelKind::Configuration, false, plan); break;
        case TxnKind::Q8:
            for (const ObjectInstance& o : g.objects)
                if (o.class_id == spec.class_id)
                    plan.entries.push_back(detail::read_entry(g, o.oid));
            break;
        case TxnKind::Q9:
            detail::walk(g, start(), sub.uniform_int(1, cfg.MAXDEPTH), false, RelKind::Version, sub, plan);
            break;
        case TxnKind::Q10:
            detail::walk(g, start(), sub.uniform_int(1, cfg.MAXDEPTH), false, RelKind::Configuration, sub, plan);
            break;
        case TxnKind::Q11:
            detail::walk(g, start(), sub.uniform_int(1, cfg.MAXDEPTH), false, RelKind::Equivalence, sub, plan);
            break;
        case TxnKind::Q12:
            detail::walk(g, start(), sub.uniform_int(1, cfg.MAXDEPTH), true, RelKind::Version, sub, plan);
            break;
        case TxnKind::U1: {
            int oid = start();
            const ObjectInstance& o = g.obj(oid);
            PlanEntry pe;
            pe.oid = oid;
            pe.write = true;
            pe.update_attr = static_cast<int>(sub.uniform_index(o.attrs.size()));
            pe.update_value = static_cast<int>(sub.uniform_int(0, 99));
            pe.words = o.attrs[static_cast<std::size_t>(pe.update_attr)].size_words;
            plan.entries.push_back(pe);
            break;
        }
        case TxnKind::U2:
        case TxnKind::Clust:
            break;
    }
    return plan;
}

} // namespace oodbsim
