#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "oodbsim/config.hpp"
#include "oodbsim/rng.hpp"

namespace oodbsim {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RelKind : std::uint8_t { Version, Configuration, Equivalence };

inline const char* rel_kind_name(RelKind k) {
    switch (k) {
        case RelKind::Version: return "version";
        case RelKind::Configuration: return "configuration";
        default: return "equivalence";
    }
}

// How an instance carries one attribute: its own value, a duplicated value
// inherited from a version ancestor, or a one-word reference to the object
// that owns the value.
enum class AttrImpl : std::uint8_t { Owned, ByCopy, ByRef };

struct AttrSpec {
    int size_words = 1;
};

struct ClassDef {
    int id = 0;                  // 1-based
    int superclass = 0;          // 0 = none
    int component_of = 0;        // 0 = none; this class is a component of that class
    int equivalent_to = 0;       // 0 = none
    std::vector<AttrSpec> attrs;
    int mean_versions = 1;
};

struct Schema {
    std::vector<ClassDef> classes;   // classes[i] has id i+1

    const ClassDef& cls(int id) const { return classes.at(static_cast<std::size_t>(id - 1)); }
    int size() const { return static_cast<int>(classes.size()); }
};

// One directed half of a mirrored relationship. Every forward edge stored on
// the source has a reverse twin stored on the target.
struct RelEdge {
    RelKind kind;
    bool forward;
    int target;                  // oid
    long usage_count = 0;        // traversals that crossed this half
    double access_prob = 0.0;
};

struct AttrValue {
    AttrImpl impl = AttrImpl::Owned;
    int size_words = 1;          // full value size (copied from the class spec)
    int value = 0;               // effective value; domain [0, 99]
    int source = 0;              // owning object when impl != Owned
};

struct ObjectInstance {
    int oid = 0;                 // 1-based
    int class_id = 0;
    std::vector<AttrValue> attrs;
    std::vector<RelEdge> edges;
    long access_count = 0;
};

// words = header + full size of owned/by-copy values + one word per reference
// + one word per edge half stored on the object.
inline long object_size_bytes(const ObjectInstance& obj, const SimConfig& cfg) {
    long words = cfg.OBJHDR_WORDS;
    for (const AttrValue& a : obj.attrs)
        words += (a.impl == AttrImpl::ByRef) ? 1 : a.size_words;
    words += static_cast<long>(obj.edges.size());
    return words * cfg.WDSIZE;
}

struct CreateResult {
    int oid = 0;
    std::vector<int> grown;      // already existing objects that gained an edge
};

struct ObjectGraph {
    Schema schema;
    std::vector<ObjectInstance> objects;          // objects[i] has oid i+1
    std::vector<std::vector<int>> chain_tails;    // [class_id] -> latest version of each chain

    ObjectInstance& obj(int oid) { return objects.at(static_cast<std::size_t>(oid - 1)); }
    const ObjectInstance& obj(int oid) const { return objects.at(static_cast<std::size_t>(oid - 1)); }
    int size() const { return static_cast<int>(objects.size()); }

    void add_edge_pair(int from, int to, RelKind kind, double prob) {
        obj(from).edges.push_back(RelEdge{kind, true, to, 0, prob});
        obj(to).edges.push_back(RelEdge{kind, false, from, 0, prob});
    }

    // usage_count of both halves of the relationship between a and b
    long pair_usage(int a, int b, RelKind kind) const {
        long total = 0;
        for (const RelEdge& e : obj(a).edges)
            if (e.kind == kind && e.target == b) total += e.usage_count;
        for (const RelEdge& e : obj(b).edges)
            if (e.kind == kind && e.target == a) total += e.usage_count;
        return total;
    }
};

inline double rel_prob(RelKind k, const SimConfig& cfg) {
    switch (k) {
        case RelKind::Version: return cfg.ck_prob_version;
        case RelKind::Configuration: return cfg.ck_prob_configuration;
        default: return cfg.ck_prob_equivalence;
    }
}

// NCL classes; class i may link to an earlier class for each relationship,
// which keeps the class graph acyclic. Attribute counts and sizes are drawn
// around MNATTR and MSATTR.
inline Schema generate_schema(const SimConfig& cfg, RandomStream& rng) {
    Schema schema;
    schema.classes.reserve(static_cast<std::size_t>(cfg.NCL));
    for (int i = 1; i <= cfg.NCL; ++i) {
        ClassDef c;
        c.id = i;
        c.mean_versions = cfg.MNVER;
        if (i > 1) {
            if (rng.bernoulli(cfg.PSUPER)) c.superclass = static_cast<int>(rng.uniform_int(1, i - 1));
            if (rng.bernoulli(cfg.PCOMP)) c.component_of = static_cast<int>(rng.uniform_int(1, i - 1));
            if (rng.bernoulli(cfg.PEQUI)) c.equivalent_to = static_cast<int>(rng.uniform_int(1, i - 1));
        }
        long nattr = rng.around_mean(cfg.MNATTR);
        c.attrs.reserve(static_cast<std::size_t>(nattr));
        for (long a = 0; a < nattr; ++a)
            c.attrs.push_back(AttrSpec{static_cast<int>(rng.around_mean(cfg.MSATTR))});
        schema.classes.push_back(std::move(c));
    }
    return schema;
}

namespace detail {

// Fill a freshly created instance's attributes. Roots own everything; other
// chain members inherit each attribute from the version ancestor, by copy
// with probability p_copy, otherwise by reference. References collapse to the
// object that physically owns the value.
inline void init_attrs(ObjectGraph& g, ObjectInstance& o, int ancestor_oid,
                       const SimConfig& cfg, RandomStream& rng) {
    const ClassDef& cd = g.schema.cls(o.class_id);
    o.attrs.resize(cd.attrs.size());
    for (std::size_t i = 0; i < cd.attrs.size(); ++i) {
        AttrValue& a = o.attrs[i];
        a.size_words = cd.attrs[i].size_words;
        if (ancestor_oid == 0) {
            a.impl = AttrImpl::Owned;
            a.value = static_cast<int>(rng.uniform_int(0, 99));
            a.source = 0;
        } else {
            const AttrValue& pa = g.obj(ancestor_oid).attrs[i];
            a.impl = rng.bernoulli(cfg.p_copy) ? AttrImpl::ByCopy : AttrImpl::ByRef;
            a.value = pa.value;
            a.source = (pa.impl == AttrImpl::Owned) ? ancestor_oid : pa.source;
        }
    }
}

} // namespace detail

// Exactly NOBJ instances with uniformly drawn classes. Version chains are cut
// from a shuffled per-class instance list with lengths around MNVER. Each
// chain of a component class is attached whole to one uniformly drawn owner
// instance of the composite class (a part's versions stay in one assembly);
// equivalence links pair chain roots. Every edge is mirrored.
inline ObjectGraph generate_database(Schema schema, const SimConfig& cfg, RandomStream& rng) {
    ObjectGraph g;
    g.schema = std::move(schema);
    const int ncl = g.schema.size();
    g.chain_tails.assign(static_cast<std::size_t>(ncl) + 1, {});

    g.objects.resize(static_cast<std::size_t>(cfg.NOBJ));
    std::vector<std::vector<int>> members(static_cast<std::size_t>(ncl) + 1);
    for (int oid = 1; oid <= cfg.NOBJ; ++oid) {
        ObjectInstance& o = g.objects[static_cast<std::size_t>(oid - 1)];
        o.oid = oid;
        o.class_id = static_cast<int>(rng.uniform_int(1, ncl));
        members[static_cast<std::size_t>(o.class_id)].push_back(oid);
    }

    // version chains
    std::vector<std::vector<std::vector<int>>> chains(static_cast<std::size_t>(ncl) + 1);
    for (int c = 1; c <= ncl; ++c) {
        std::vector<int> pool = members[static_cast<std::size_t>(c)];
        rng.shuffle(pool);
        std::size_t at = 0;
        while (at < pool.size()) {
            std::size_t len = static_cast<std::size_t>(rng.around_mean(cfg.MNVER));
            len = std::min(len, pool.size() - at);
            std::vector<int> chain(pool.begin() + static_cast<long>(at),
                                   pool.begin() + static_cast<long>(at + len));
            at += len;
            int ancestor = 0;
            for (int oid : chain) {
                detail::init_attrs(g, g.obj(oid), ancestor, cfg, rng);
                if (ancestor != 0)
                    g.add_edge_pair(ancestor, oid, RelKind::Version, rel_prob(RelKind::Version, cfg));
                ancestor = oid;
            }
            g.chain_tails[static_cast<std::size_t>(c)].push_back(chain.back());
            chains[static_cast<std::size_t>(c)].push_back(std::move(chain));
        }
    }

    // configuration: owner -> each member of the component chain
    for (int c = 1; c <= ncl; ++c) {
        int owner_class = g.schema.cls(c).component_of;
        if (owner_class == 0) continue;
        const std::vector<int>& owners = members[static_cast<std::size_t>(owner_class)];
        if (owners.empty()) continue;
        for (const std::vector<int>& chain : chains[static_cast<std::size_t>(c)]) {
            int owner = owners[rng.uniform_index(owners.size())];
            for (int oid : chain)
                g.add_edge_pair(owner, oid, RelKind::Configuration,
                                rel_prob(RelKind::Configuration, cfg));
        }
    }

    // equivalence: chain roots only
    for (int c = 1; c <= ncl; ++c) {
        int eq_class = g.schema.cls(c).equivalent_to;
        if (eq_class == 0) continue;
        const std::vector<int>& partners = members[static_cast<std::size_t>(eq_class)];
        if (partners.empty()) continue;
        for (const std::vector<int>& chain : chains[static_cast<std::size_t>(c)]) {
            int partner = partners[rng.uniform_index(partners.size())];
            g.add_edge_pair(chain.front(), partner, RelKind::Equivalence,
                            rel_prob(RelKind::Equivalence, cfg));
        }
    }

    return g;
}

// Appends a new latest version to a uniformly chosen chain of the class, or
// starts a new chain when the class has none. The new instance inherits the
// ancestor's composite owners. Returns the new oid plus the objects whose
// stored size grew because they gained a mirrored edge half.
inline CreateResult create_instance(ObjectGraph& g, int class_id, const SimConfig& cfg,
                                    RandomStream& rng) {
    if (class_id < 1 || class_id > g.schema.size())
        throw ModelError("create_instance: class id " + std::to_string(class_id) + " out of range");

    CreateResult res;
    ObjectInstance o;
    o.oid = g.size() + 1;
    o.class_id = class_id;
    res.oid = o.oid;

    std::vector<int>& tails = g.chain_tails[static_cast<std::size_t>(class_id)];
    int ancestor = 0;
    std::size_t chain_idx = 0;
    if (!tails.empty()) {
        chain_idx = rng.uniform_index(tails.size());
        ancestor = tails[chain_idx];
    }

    detail::init_attrs(g, o, ancestor, cfg, rng);
    g.objects.push_back(std::move(o));

    if (ancestor != 0) {
        g.add_edge_pair(ancestor, res.oid, RelKind::Version, rel_prob(RelKind::Version, cfg));
        res.grown.push_back(ancestor);
        tails[chain_idx] = res.oid;
        // the part's new version belongs to the same assemblies as the ancestor
        std::vector<int> owners;
        for (const RelEdge& e : g.obj(ancestor).edges)
            if (e.kind == RelKind::Configuration && !e.forward) owners.push_back(e.target);
        for (int owner : owners) {
            g.add_edge_pair(owner, res.oid, RelKind::Configuration,
                            rel_prob(RelKind::Configuration, cfg));
            res.grown.push_back(owner);
        }
    } else {
        tails.push_back(res.oid);
    }
    return res;
}

// Structural invariants: mirrored edges, sane attribute sources, linear
// version chains, per-kind access probabilities.
inline void validate_graph(const ObjectGraph& g, const SimConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ModelError("graph invariant violated: " + msg); };
    for (const ObjectInstance& o : g.objects) {
        if (o.class_id < 1 || o.class_id > g.schema.size()) fail("bad class id");
        if (o.attrs.size() != g.schema.cls(o.class_id).attrs.size()) fail("attr count mismatch");
        int fwd_version = 0;
        std::map<std::tuple<int, int, bool>, int> halves;  // (kind, target, forward) -> count
        for (const RelEdge& e : o.edges) {
            if (e.target < 1 || e.target > g.size()) fail("edge target out of range");
            if (e.target == o.oid) fail("self edge");
            if (e.access_prob != rel_prob(e.kind, cfg)) fail("edge access_prob mismatch");
            if (e.kind == RelKind::Version && e.forward) ++fwd_version;
            ++halves[{static_cast<int>(e.kind), e.target, e.forward}];
        }
        if (fwd_version > 1) fail("version chain is not linear");
        for (const auto& [key, count] : halves) {
            auto [kind, target, forward] = key;
            int mirrored = 0;
            for (const RelEdge& e : g.obj(target).edges)
                if (static_cast<int>(e.kind) == kind && e.target == o.oid && e.forward == !forward)
                    ++mirrored;
            if (mirrored != count) fail("edge not mirrored");
        }
        for (std::size_t i = 0; i < o.attrs.size(); ++i) {
            const AttrValue& a = o.attrs[i];
            if (a.impl == AttrImpl::Owned) {
                if (a.source != 0) fail("owned attribute has a source");
            } else {
                if (a.source < 1 || a.source > g.size()) fail("inherited attribute source invalid");
                if (g.obj(a.source).class_id != o.class_id) fail("attribute source class mismatch");
                if (g.obj(a.source).attrs[i].impl != AttrImpl::Owned)
                    fail("attribute source does not own the value");
            }
            if (a.value < 0 || a.value > 99) fail("attribute value out of domain");
        }
    }
}

} // namespace oodbsim
