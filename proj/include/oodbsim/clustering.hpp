#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "oodbsim/config.hpp"
#include "oodbsim/model.hpp"
#include "oodbsim/storage.hpp"
#include "oodbsim/workload.hpp"

namespace oodbsim {

// Placement strategy. Hooks perform metadata placement plus whatever physical
// clustering I/O the strategy pays at that moment; the caller converts counter
// deltas into simulated time. load_database must not perform I/O.
class ClusteringPolicy {
public:
    explicit ClusteringPolicy(const SimConfig& cfg) : cfg_(cfg) {}
    virtual ~ClusteringPolicy() = default;

    virtual PolicyKind kind() const = 0;
    virtual void load_database(ObjectGraph& g, Store& store) = 0;
    virtual void on_object_created(ObjectGraph& g, Store& store, int oid) = 0;
    virtual bool on_recluster(ObjectGraph& g, Store& store) = 0;
    // whether a reorganization request makes this policy rewrite the store
    virtual bool reclusters() const { return false; }

    // A placed object gained an edge half. Grow it in place when the page has
    // slack, otherwise move it to the least filled page with room (else a
    // fresh one) for one direct write.
    virtual void on_object_grown(ObjectGraph& g, Store& store, int oid) {
        long size = object_size_bytes(g.obj(oid), cfg_);
        if (store.object_fits_after_growth(oid, size)) {
            store.resize_object(oid, size);
            return;
        }
        store.remove_object(oid);
        int target = least_filled_with_room(store, size);
        if (target == 0) target = store.new_page();
        store.place_object(oid, size, target);
        store.write_page_direct(target, IoCause::Clustering);
    }

    // per-touch bookkeeping the strategies cluster on
    virtual void observe_access(ObjectGraph& g, const PlanEntry& e) {
        ObjectInstance& o = g.obj(e.oid);
        ++o.access_count;
        if (e.via_from == 0) return;
        for (RelEdge& ed : g.obj(e.via_from).edges) {
            if (ed.kind == e.via_kind && ed.forward == e.via_forward && ed.target == e.oid) {
                ++ed.usage_count;
                break;
            }
        }
    }

protected:
    static int least_filled_with_room(const Store& store, long size) {
        int best = 0;
        long best_used = 0;
        for (const auto& [id, p] : store.pages()) {
            if (store.capacity() - p.used_bytes < size) continue;
            if (best == 0 || p.used_bytes < best_used) {
                best = id;
                best_used = p.used_bytes;
            }
        }
        return best;
    }

    const SimConfig& cfg_;
};

// Fills pages sequentially and relies entirely on periodic reorganization,
// which rebuilds every page around observed access and traversal counts.
class CactisPolicy : public ClusteringPolicy {
public:
    using ClusteringPolicy::ClusteringPolicy;

    PolicyKind kind() const override { return PolicyKind::Cactis; }
    bool reclusters() const override { return true; }

    void load_database(ObjectGraph& g, Store& store) override {
        for (const ObjectInstance& o : g.objects) {
            long size = object_size_bytes(o, cfg_);
            int target = fill_page(store, size);
            store.place_object(o.oid, size, target);
        }
    }

    void on_object_created(ObjectGraph& g, Store& store, int oid) override {
        long size = object_size_bytes(g.obj(oid), cfg_);
        int target = fill_page(store, size);
        store.place_object(oid, size, target);
    }

    // Greedy block building: seed each block with the hottest unassigned
    // object, then repeatedly pull in the unassigned neighbor whose link to
    // the block carries the most traversals. A block closes as soon as the
    // chosen neighbor does not fit; each block becomes one page. Every old
    // page is read through the buffer once and every new page is written
    // once.
    bool on_recluster(ObjectGraph& g, Store& store) override {
        std::vector<int> oids;
        for (const ObjectInstance& o : g.objects)
            if (store.page_of(o.oid) != 0) oids.push_back(o.oid);
        if (oids.empty()) return true;

        std::map<int, int> old_page;
        for (int oid : oids) old_page[oid] = store.page_of(oid);

        std::set<int> unassigned(oids.begin(), oids.end());
        std::vector<std::vector<int>> blocks;
        while (!unassigned.empty()) {
            int seed = 0;
            long best_access = -1;
            for (int oid : unassigned) {
                long a = g.obj(oid).access_count;
                if (a > best_access) {
                    best_access = a;
                    seed = oid;
                }
            }
            std::vector<int> block{seed};
            unassigned.erase(seed);
            long remaining = store.capacity() - store.object_bytes(seed);
            while (true) {
                bool found = false;
                long best_usage = -1;
                int best_target = 0, best_member = 0, best_kind = 0;
                for (int m : block) {
                    for (const RelEdge& e : g.obj(m).edges) {
                        if (unassigned.count(e.target) == 0) continue;
                        long u = g.pair_usage(m, e.target, e.kind);
                        bool better =
                            !found || u > best_usage ||
                            (u == best_usage &&
                             (e.target < best_target ||
                              (e.target == best_target &&
                               (m < best_member ||
                                (m == best_member && static_cast<int>(e.kind) < best_kind)))));
                        if (better) {
                            found = true;
                            best_usage = u;
                            best_target = e.target;
                            best_member = m;
                            best_kind = static_cast<int>(e.kind);
                        }
                    }
                }
                if (!found) break;
                long sz = store.object_bytes(best_target);
                if (sz > remaining) break;
                block.push_back(best_target);
                unassigned.erase(best_target);
                remaining -= sz;
            }
            blocks.push_back(std::move(block));
        }

        std::set<int> freed;
        for (const auto& [oid, pid] : old_page) freed.insert(pid);
        for (int pid : freed) store.fetch_page(pid, IoCause::Clustering);

        for (const std::vector<int>& block : blocks) {
            int np = store.new_page();
            for (int oid : block) store.place_object(oid, store.object_bytes(oid), np);
            store.write_page_direct(np, IoCause::Clustering);
        }
        for (int pid : freed) store.free_page(pid);
        return true;
    }

private:
    // highest page with room, so pages fill in creation order
    static int fill_page(Store& store, long size) {
        int best = 0;
        for (const auto& [id, p] : store.pages())
            if (store.capacity() - p.used_bytes >= size) best = id;
        return best == 0 ? store.new_page() : best;
    }
};

// One segment per class, with cluster messages merging classes into shared
// segments. Placement appends within the segment; reorganization rebuilds
// each segment densely, scanning the pre-reorganization pages once per
// segment.
class OrionPolicy : public ClusteringPolicy {
public:
    explicit OrionPolicy(const SimConfig& cfg) : ClusteringPolicy(cfg) {
        int ngroups = static_cast<int>(cfg.orion_cluster_messages.size());
        for (int i = 0; i < ngroups; ++i)
            for (int c : cfg.orion_cluster_messages[static_cast<std::size_t>(i)]) {
                if (class_seg_.count(c))
                    throw ConfigError("orion.cluster_messages: class " + std::to_string(c) +
                                      " appears in two groups");
                class_seg_[c] = i + 1;
            }
        for (int c = 1; c <= cfg.NCL; ++c)
            if (class_seg_.count(c) == 0) class_seg_[c] = ngroups + c;
    }

    PolicyKind kind() const override { return PolicyKind::Orion; }
    bool reclusters() const override { return true; }

    int segment_of_class(int class_id) const { return class_seg_.at(class_id); }

    void load_database(ObjectGraph& g, Store& store) override {
        for (const ObjectInstance& o : g.objects) place(g, store, o.oid);
    }

    void on_object_created(ObjectGraph& g, Store& store, int oid) override {
        place(g, store, oid);
    }

    void on_object_grown(ObjectGraph& g, Store& store, int oid) override {
        long size = object_size_bytes(g.obj(oid), cfg_);
        if (store.object_fits_after_growth(oid, size)) {
            store.resize_object(oid, size);
            return;
        }
        store.remove_object(oid);
        int target = segment_page_with_room(store, class_seg_.at(g.obj(oid).class_id), size);
        store.place_object(oid, size, target);
        store.write_page_direct(target, IoCause::Clustering);
    }

    bool on_recluster(ObjectGraph& g, Store& store) override {
        std::vector<int> old_pages;
        for (const auto& [id, p] : store.pages()) old_pages.push_back(id);

        std::map<int, std::vector<int>> seg_members;
        for (const ObjectInstance& o : g.objects)
            if (store.page_of(o.oid) != 0)
                seg_members[class_seg_.at(o.class_id)].push_back(o.oid);

        seg_pages_.clear();
        for (const auto& [seg, members] : seg_members) {
            for (int pid : old_pages) store.fetch_page(pid, IoCause::Clustering);
            std::vector<int>& pages = seg_pages_[seg];
            int cur = 0;
            for (int oid : members) {
                long sz = store.object_bytes(oid);
                if (cur == 0 || store.free_bytes(cur) < sz) {
                    cur = store.new_page();
                    pages.push_back(cur);
                }
                store.place_object(oid, sz, cur);
            }
            for (int np : pages) store.write_page_direct(np, IoCause::Clustering);
        }
        for (int pid : old_pages) store.free_page(pid);
        return true;
    }

private:
    void place(ObjectGraph& g, Store& store, int oid) {
        long size = object_size_bytes(g.obj(oid), cfg_);
        int target = segment_page_with_room(store, class_seg_.at(g.obj(oid).class_id), size);
        store.place_object(oid, size, target);
    }

    int segment_page_with_room(Store& store, int seg, long size) {
        for (int pid : seg_pages_[seg])
            if (store.free_bytes(pid) >= size) return pid;
        int np = store.new_page();
        seg_pages_[seg].push_back(np);
        return np;
    }

    std::map<int, int> class_seg_;
    std::map<int, std::vector<int>> seg_pages_;
};

// Places each new version next to the data it inherits, weighing reference
// lookups against copy storage per candidate page; the chosen page gets one
// direct write (two when it must be split first). Never reorganizes.
class CkPolicy : public ClusteringPolicy {
public:
    using ClusteringPolicy::ClusteringPolicy;

    PolicyKind kind() const override { return PolicyKind::Ck; }

    void load_database(ObjectGraph& g, Store& store) override {
        for (const ObjectInstance& o : g.objects) place_core(g, store, o.oid, false);
    }

    void on_object_created(ObjectGraph& g, Store& store, int oid) override {
        place_core(g, store, oid, true);
    }

    // A grown object that no longer fits is re-placed by the same cost table
    // as a new one; the policy has no other placement rule.
    void on_object_grown(ObjectGraph& g, Store& store, int oid) override {
        long size = object_size_bytes(g.obj(oid), cfg_);
        if (store.object_fits_after_growth(oid, size)) {
            store.resize_object(oid, size);
            return;
        }
        store.remove_object(oid);
        place_core(g, store, oid, true);
    }

    bool on_recluster(ObjectGraph&, Store&) override { return false; }

private:
    struct Candidate {
        double cost = 0.0;
        int pid = 0;
        int variant = 2;   // 1 = store inherited attributes by reference, 2 = keep copies
        bool operator<(const Candidate& o) const {
            if (cost != o.cost) return cost < o.cost;
            if (pid != o.pid) return pid < o.pid;
            return variant < o.variant;
        }
    };

    void place_core(ObjectGraph& g, Store& store, int oid, bool charge) {
        ObjectInstance& o = g.obj(oid);

        // candidate pages hold the object's attribute sources or link partners
        std::map<int, double> page_max_prob;
        std::vector<int> src_page(o.attrs.size(), 0);
        for (std::size_t i = 0; i < o.attrs.size(); ++i) {
            const AttrValue& a = o.attrs[i];
            if (a.impl == AttrImpl::Owned) continue;
            int pid = store.page_of(a.source);
            src_page[i] = pid;
            if (pid != 0) note_anchor(page_max_prob, pid, cfg_.ck_prob_version);
        }
        for (const RelEdge& e : o.edges) {
            int pid = store.page_of(e.target);
            if (pid != 0) note_anchor(page_max_prob, pid, e.access_prob);
        }

        long size_copies = object_size_bytes(o, cfg_);
        std::vector<int> writes;
        int target = 0;

        if (page_max_prob.empty()) {
            target = least_filled_with_room(store, size_copies);
            if (target == 0) target = store.new_page();
            store.place_object(oid, size_copies, target);
            writes.push_back(target);
        } else {
            std::vector<Candidate> cands;
            for (const auto& [pid, maxp] : page_max_prob) {
                double w = maxp > 0.0 ? 1.0 / maxp : 1e18;
                long nref = 0, ncopy = 0, copy_bytes = 0;
                for (std::size_t i = 0; i < o.attrs.size(); ++i) {
                    const AttrValue& a = o.attrs[i];
                    if (a.impl == AttrImpl::Owned || src_page[i] == pid) continue;
                    if (a.impl == AttrImpl::ByRef) ++nref;
                    else {
                        ++ncopy;
                        copy_bytes += static_cast<long>(a.size_words) * cfg_.WDSIZE;
                    }
                }
                double ref_lookup = static_cast<double>(nref) * w;
                double copy_lookup = static_cast<double>(ncopy) * w;
                cands.push_back({(ref_lookup + copy_lookup) * cfg_.ck_lookup_cost, pid, 1});
                cands.push_back({ref_lookup * cfg_.ck_lookup_cost +
                                     static_cast<double>(copy_bytes) * cfg_.ck_storage_cost,
                                 pid, 2});
            }
            std::sort(cands.begin(), cands.end());
            long size_refs = size_all_refs(o);

            if (cfg_.ck_policy == CkFitPolicy::NoSplit) {
                for (const Candidate& c : cands) {
                    long sz = c.variant == 1 ? size_refs : size_copies;
                    if (store.free_bytes(c.pid) >= sz) {
                        target = c.pid;
                        commit(g, store, oid, c.variant, sz, target);
                        break;
                    }
                }
                if (target == 0) {
                    target = store.new_page();
                    store.place_object(oid, size_copies, target);
                }
                writes.push_back(target);
            } else {
                const Candidate& best = cands.front();
                long sz = best.variant == 1 ? size_refs : size_copies;
                if (store.free_bytes(best.pid) >= sz) {
                    target = best.pid;
                    commit(g, store, oid, best.variant, sz, target);
                } else {
                    int spill = split(store, best.pid);
                    writes.push_back(spill);
                    if (store.free_bytes(best.pid) >= sz) {
                        target = best.pid;
                        commit(g, store, oid, best.variant, sz, target);
                    } else {
                        target = store.new_page();
                        store.place_object(oid, size_copies, target);
                    }
                }
                writes.push_back(target);
            }
        }

        if (charge)
            for (int pid : writes) store.write_page_direct(pid, IoCause::Clustering);
    }

    static void note_anchor(std::map<int, double>& m, int pid, double prob) {
        auto [it, fresh] = m.emplace(pid, prob);
        if (!fresh && prob > it->second) it->second = prob;
    }

    long size_all_refs(const ObjectInstance& o) const {
        long words = cfg_.OBJHDR_WORDS;
        for (const AttrValue& a : o.attrs) words += (a.impl == AttrImpl::Owned) ? a.size_words : 1;
        words += static_cast<long>(o.edges.size());
        return words * cfg_.WDSIZE;
    }

    void commit(ObjectGraph& g, Store& store, int oid, int variant, long size, int pid) {
        if (variant == 1)
            for (AttrValue& a : g.obj(oid).attrs)
                if (a.impl == AttrImpl::ByCopy) a.impl = AttrImpl::ByRef;
        store.place_object(oid, size, pid);
    }

    // move the largest residents to a fresh page until half the bytes are out
    int split(Store& store, int pid) {
        const Page& p = store.page(pid);
        long used_before = p.used_bytes;
        std::vector<int> residents = p.objects;
        std::sort(residents.begin(), residents.end(), [&](int a, int b) {
            long sa = store.object_bytes(a), sb = store.object_bytes(b);
            if (sa != sb) return sa > sb;
            return a < b;
        });
        int np = store.new_page();
        long moved = 0;
        for (int oid : residents) {
            long sz = store.object_bytes(oid);
            store.place_object(oid, sz, np);
            moved += sz;
            if (moved * 2 >= used_before) break;
        }
        return np;
    }
};

inline std::unique_ptr<ClusteringPolicy> make_policy(const SimConfig& cfg) {
    switch (cfg.policy) {
        case PolicyKind::Cactis: return std::make_unique<CactisPolicy>(cfg);
        case PolicyKind::Orion: return std::make_unique<OrionPolicy>(cfg);
        default: return std::make_unique<CkPolicy>(cfg);
    }
}

} // namespace oodbsim
