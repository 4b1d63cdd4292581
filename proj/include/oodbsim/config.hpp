#pragma once

#include <array>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oodbsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PolicyKind { Cactis, Orion, Ck };

inline const char* policy_name(PolicyKind p) {
    switch (p) {
        case PolicyKind::Cactis: return "cactis";
        case PolicyKind::Orion: return "orion";
        default: return "ck";
    }
}

inline PolicyKind parse_policy(const std::string& s) {
    if (s == "cactis") return PolicyKind::Cactis;
    if (s == "orion") return PolicyKind::Orion;
    if (s == "ck") return PolicyKind::Ck;
    throw ConfigError("unknown policy '" + s + "' (expected cactis, orion or ck)");
}

enum class CkFitPolicy { NoSplit, PageSplit };

// All times are in milliseconds.
struct SimConfig {
    // system parameters
    int MULTI = 10;           // multiprogramming level
    int WDSIZE = 4;           // word size, bytes
    int PGSIZE = 2048;        // page size, bytes
    double MINTER = 4000.0;   // mean inter-arrival time
    double CCT = 0.5;         // concurrency-control time per transaction
    double ACCM = 0.0001;     // memory access time per word
    double TEST = 0.0007;     // page test time
    double SEEK = 28.0;       // disk seek
    double LATENCY = 8.33;    // disk latency
    double TRANSFER = 1.28;   // page transfer

    // database / workload parameters
    int NCL = 20;             // number of classes
    int NOBJ = 400;           // initial objects
    int MNVER = 3;            // mean version-chain length
    int MNATTR = 10;          // mean attributes per class
    int MSATTR = 1;           // mean attribute size, words
    int BUFSIZE = 10;         // buffer capacity, pages
    int MAXDEPTH = 5;         // max closure-traversal depth
    double PSUPER = 0.9;      // P(class has a superclass)
    double PCOMP = 0.5;       // P(class is a component of another)
    double PEQUI = 0.1;       // P(class has an equivalent class)
    std::array<double, 12> PQ{0.065, 0.065, 0.065, 0.065, 0.065, 0.065,
                              0.065, 0.065, 0.065, 0.065, 0.065, 0.065};
    double PU1 = 0.065;       // attribute update
    double PU2 = 0.05;        // instance creation
    double PCLUST = -1.0;     // reclustering; < 0 selects the per-policy default

    // run parameters
    std::uint64_t seed = 1;
    long horizon_transactions = 2500;
    int replications = 1;
    PolicyKind policy = PolicyKind::Cactis;
    double p_copy = 0.5;      // P(inherited attribute is carried by copy)
    double RANGE_SEL = 0.10;  // range-lookup selectivity over the value domain
    int OBJHDR_WORDS = 2;     // object header, words

    // CK placement model
    double ck_lookup_cost = 1.0;
    double ck_storage_cost = 1.0 / 2048.0;
    CkFitPolicy ck_policy = CkFitPolicy::NoSplit;
    double ck_prob_version = 0.4;
    double ck_prob_configuration = 0.4;
    double ck_prob_equivalence = 0.2;

    // ORION clustering directives: groups of class ids placed in one segment
    std::vector<std::vector<int>> orion_cluster_messages;

    bool progress = false;    // emit progress lines to stderr

    double io_time_ms() const { return SEEK + LATENCY + TRANSFER; }

    // Reclustering probability actually used for a given policy. The CK
    // algorithm clusters at creation time and never draws CLUST transactions.
    double effective_pclust(PolicyKind p) const {
        if (PCLUST >= 0.0) return PCLUST;
        return p == PolicyKind::Ck ? 0.0 : 0.15;
    }

    // Range checks that each field satisfies on its own.
    void validate_fields() const {
        auto require = [](bool ok, const char* what) {
            if (!ok) throw ConfigError(std::string("invalid configuration: ") + what);
        };
        require(MULTI >= 1, "MULTI must be >= 1");
        require(WDSIZE >= 1, "WDSIZE must be >= 1");
        require(PGSIZE >= 1, "PGSIZE must be >= 1");
        require(MINTER > 0, "MINTER must be > 0");
        require(CCT >= 0 && ACCM >= 0 && TEST >= 0, "times must be >= 0");
        require(SEEK >= 0 && LATENCY >= 0 && TRANSFER >= 0, "disk times must be >= 0");
        require(NCL >= 1, "NCL must be >= 1");
        require(NOBJ >= 1, "NOBJ must be >= 1");
        require(MNVER >= 1, "MNVER must be >= 1");
        require(MNATTR >= 1, "MNATTR must be >= 1");
        require(MSATTR >= 1, "MSATTR must be >= 1");
        require(BUFSIZE >= 1, "BUFSIZE must be >= 1");
        require(MAXDEPTH >= 1, "MAXDEPTH must be >= 1");
        auto prob = [&](double p, const char* what) {
            require(p >= 0.0 && p <= 1.0, what);
        };
        prob(PSUPER, "PSUPER must be in [0,1]");
        prob(PCOMP, "PCOMP must be in [0,1]");
        prob(PEQUI, "PEQUI must be in [0,1]");
        for (double q : PQ) prob(q, "PQ weights must be in [0,1]");
        prob(PU1, "PU1 must be in [0,1]");
        prob(PU2, "PU2 must be in [0,1]");
        if (PCLUST >= 0.0) prob(PCLUST, "PCLUST must be in [0,1]");
        prob(p_copy, "p_copy must be in [0,1]");
        prob(RANGE_SEL, "RANGE_SEL must be in [0,1]");
        require(horizon_transactions >= 0, "horizon_transactions must be >= 0");
        require(replications >= 1, "replications must be >= 1");
        require(OBJHDR_WORDS >= 0, "OBJHDR_WORDS must be >= 0");
        require(ck_lookup_cost >= 0, "ck.lookup_cost must be >= 0");
        require(ck_storage_cost >= 0, "ck.storage_cost must be >= 0");
        prob(ck_prob_version, "ck.prob_version must be in [0,1]");
        prob(ck_prob_configuration, "ck.prob_configuration must be in [0,1]");
        prob(ck_prob_equivalence, "ck.prob_equivalence must be in [0,1]");
        require(ck_prob_version > 0 && ck_prob_configuration > 0 && ck_prob_equivalence > 0,
                "ck relationship probabilities must be > 0");
        for (const auto& group : orion_cluster_messages)
            for (int c : group)
                require(c >= 1, "orion.cluster_messages class ids must be >= 1");
    }

    // Full validation including cross-field constraints.
    void validate() const {
        validate_fields();
        auto require = [](bool ok, const char* what) {
            if (!ok) throw ConfigError(std::string("invalid configuration: ") + what);
        };
        require(PGSIZE >= WDSIZE, "PGSIZE must be >= WDSIZE");
        double mass = PU1 + PU2 + effective_pclust(policy);
        for (double q : PQ) mass += q;
        require(mass > 0.0, "transaction mix has no probability mass");
        for (const auto& group : orion_cluster_messages)
            for (int c : group)
                require(c <= NCL, "orion.cluster_messages class id out of range");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline ConfigError line_error(int line, const std::string& msg) {
    return ConfigError("config line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T parse_number(const std::string& v, int line);

template <>
inline double parse_number<double>(const std::string& v, int line) {
    std::size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw line_error(line, "expected a number, got '" + v + "'");
    }
    if (pos != v.size()) throw line_error(line, "trailing characters in number '" + v + "'");
    return d;
}

template <>
inline long parse_number<long>(const std::string& v, int line) {
    std::size_t pos = 0;
    long n;
    try {
        n = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw line_error(line, "expected an integer, got '" + v + "'");
    }
    if (pos != v.size()) throw line_error(line, "trailing characters in integer '" + v + "'");
    return n;
}

// "1,2;5,6" -> {{1,2},{5,6}}
inline std::vector<std::vector<int>> parse_class_groups(const std::string& v, int line) {
    std::vector<std::vector<int>> groups;
    std::stringstream gs(v);
    std::string group;
    while (std::getline(gs, group, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        std::vector<int> ids;
        std::stringstream cs(group);
        std::string id;
        while (std::getline(cs, id, ',')) {
            id = trim(id);
            if (id.empty()) throw line_error(line, "empty class id in cluster group");
            ids.push_back(static_cast<int>(parse_number<long>(id, line)));
        }
        if (!ids.empty()) groups.push_back(std::move(ids));
    }
    return groups;
}

} // namespace detail

// Parses "KEY = value" lines; '#' starts a comment; blank lines ignored.
// Unknown keys and malformed or out-of-range values raise ConfigError naming
// the offending line.
inline SimConfig parse_config(std::istream& in, SimConfig base = SimConfig{}) {
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw detail::line_error(lineno, "expected KEY = value, got '" + detail::trim(raw) + "'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw detail::line_error(lineno, "missing key");
        if (value.empty()) throw detail::line_error(lineno, "missing value for '" + key + "'");

        auto as_int = [&]() { return static_cast<int>(detail::parse_number<long>(value, lineno)); };
        auto as_long = [&]() { return detail::parse_number<long>(value, lineno); };
        auto as_real = [&]() { return detail::parse_number<double>(value, lineno); };

        if (key == "MULTI") base.MULTI = as_int();
        else if (key == "WDSIZE") base.WDSIZE = as_int();
        else if (key == "PGSIZE") base.PGSIZE = as_int();
        else if (key == "MINTER") base.MINTER = as_real();
        else if (key == "CCT") base.CCT = as_real();
        else if (key == "ACCM") base.ACCM = as_real();
        else if (key == "TEST") base.TEST = as_real();
        else if (key == "SEEK") base.SEEK = as_real();
        else if (key == "LATENCY") base.LATENCY = as_real();
        else if (key == "TRANSFER") base.TRANSFER = as_real();
        else if (key == "NCL") base.NCL = as_int();
        else if (key == "NOBJ") base.NOBJ = as_int();
        else if (key == "MNVER") base.MNVER = as_int();
        else if (key == "MNATTR") base.MNATTR = as_int();
        else if (key == "MSATTR") base.MSATTR = as_int();
        else if (key == "BUFSIZE") base.BUFSIZE = as_int();
        else if (key == "MAXDEPTH") base.MAXDEPTH = as_int();
        else if (key == "PSUPER") base.PSUPER = as_real();
        else if (key == "PCOMP") base.PCOMP = as_real();
        else if (key == "PEQUI") base.PEQUI = as_real();
        else if (key.size() >= 3 && key.compare(0, 2, "PQ") == 0 &&
                 key.find_first_not_of("0123456789", 2) == std::string::npos) {
            long qi = detail::parse_number<long>(key.substr(2), lineno);
            if (qi < 1 || qi > 12) throw detail::line_error(lineno, "unknown key '" + key + "'");
            base.PQ[static_cast<std::size_t>(qi - 1)] = as_real();
        }
        else if (key == "PU1") base.PU1 = as_real();
        else if (key == "PU2") base.PU2 = as_real();
        else if (key == "PCLUST") base.PCLUST = as_real();
        else if (key == "seed") base.seed = static_cast<std::uint64_t>(as_long());
        else if (key == "horizon_transactions") base.horizon_transactions = as_long();
        else if (key == "replications") base.replications = as_int();
        else if (key == "policy") {
            try {
                base.policy = parse_policy(value);
            } catch (const ConfigError& e) {
                throw detail::line_error(lineno, e.what());
            }
        }
        else if (key == "p_copy") base.p_copy = as_real();
        else if (key == "RANGE_SEL") base.RANGE_SEL = as_real();
        else if (key == "OBJHDR_WORDS") base.OBJHDR_WORDS = as_int();
        else if (key == "ck.lookup_cost") base.ck_lookup_cost = as_real();
        else if (key == "ck.storage_cost") base.ck_storage_cost = as_real();
        else if (key == "ck.policy") {
            if (value == "no_split") base.ck_policy = CkFitPolicy::NoSplit;
            else if (value == "page_split") base.ck_policy = CkFitPolicy::PageSplit;
            else throw detail::line_error(lineno, "ck.policy must be no_split or page_split");
        }
        else if (key == "ck.prob_version") base.ck_prob_version = as_real();
        else if (key == "ck.prob_configuration") base.ck_prob_configuration = as_real();
        else if (key == "ck.prob_equivalence") base.ck_prob_equivalence = as_real();
        else if (key == "orion.cluster_messages")
            base.orion_cluster_messages = detail::parse_class_groups(value, lineno);
        else throw detail::line_error(lineno, "unknown key '" + key + "'");

        try {
            base.validate_fields();
        } catch (const ConfigError& e) {
            throw detail::line_error(lineno, e.what());
        }
    }
    base.validate();
    return base;
}

inline SimConfig parse_config_string(const std::string& text, SimConfig base = SimConfig{}) {
    std::istringstream in(text);
    return parse_config(in, std::move(base));
}

} // namespace oodbsim
