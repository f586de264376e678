#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfbasis/errors.hpp"
#include "pfbasis/linalg.hpp"

namespace pfb {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct ProductState {
    std::vector<Cvec> locals;

    int parties() const { return static_cast<int>(locals.size()); }
};

struct EventLabel {
    std::vector<int> a;
    std::vector<int> x;

    friend bool operator==(const EventLabel& l, const EventLabel& r) {
        return l.a == r.a && l.x == r.x;
    }
};
using EventLabeling = std::vector<EventLabel>;

// A list of n-partite product states over local dimensions dims, optionally
// carrying explicit event labels per state.
struct ProductBasis {
    std::vector<int> dims;
    std::vector<ProductState> states;
    std::optional<EventLabeling> labels;

    int parties() const { return static_cast<int>(dims.size()); }
    std::int64_t full_dimension() const {
        std::int64_t p = 1;
        for (int d : dims) p *= d;
        return p;
    }

    void check_shape() const {
        for (const auto& s : states) {
            if (s.parties() != parties())
                throw ShapeError("ProductBasis: state arity mismatch");
            for (int k = 0; k < parties(); ++k)
                if (s.locals[k].dim() != dims[k])
                    throw ShapeError("ProductBasis: local dimension mismatch at party " +
                                     std::to_string(k));
        }
        if (labels && labels->size() != states.size())
            throw ShapeError("ProductBasis: label count mismatch");
    }
};

inline cplx product_inner(const ProductState& s, const ProductState& t) {
    if (s.parties() != t.parties()) throw ShapeError("product_inner: arity mismatch");
    cplx p(1, 0);
    for (int k = 0; k < s.parties(); ++k) p *= inner(s.locals[k], t.locals[k]);
    return p;
}

// ---------------------------------------------------------------------------
// Completeness
// ---------------------------------------------------------------------------

struct CompletenessReport {
    bool complete = false;
    bool count_ok = false;
    double max_deviation = 0.0;
};

// A complete orthonormal product basis: prod d_k states with identity Gram
// matrix (inner products taken as products of local inner products).
inline CompletenessReport is_complete_orthonormal(const ProductBasis& S,
                                                  double tol = kDefaultTol) {
    S.check_shape();
    CompletenessReport r;
    r.count_ok = static_cast<std::int64_t>(S.states.size()) == S.full_dimension();
    for (std::size_t j = 0; j < S.states.size(); ++j)
        for (std::size_t l = j; l < S.states.size(); ++l) {
            const double target = (j == l) ? 1.0 : 0.0;
            const double dev =
                std::abs(product_inner(S.states[j], S.states[l]) - cplx(target, 0));
            r.max_deviation = std::max(r.max_deviation, dev);
        }
    r.complete = r.count_ok && r.max_deviation < tol;
    return r;
}

// ---------------------------------------------------------------------------
// Local catalogs and setting partitions
// ---------------------------------------------------------------------------

// Distinct local vectors of one party in first-occurrence order, with each
// basis state mapped to its representative.
struct LocalCatalog {
    std::vector<Cvec> vectors;
    std::vector<int> state_to_rep;
};

inline LocalCatalog dedup_local(const ProductBasis& S, int k, double tol = kDefaultTol) {
    if (k < 0 || k >= S.parties()) throw RangeError("dedup_local: bad party index");
    LocalCatalog cat;
    for (const auto& st : S.states) {
        const Cvec& v = st.locals[k];
        int rep = -1;
        for (std::size_t r = 0; r < cat.vectors.size(); ++r) {
            if (same_up_to_phase(cat.vectors[r], v, tol)) {
                rep = static_cast<int>(r);
                break;
            }
        }
        if (rep < 0) {
            rep = static_cast<int>(cat.vectors.size());
            cat.vectors.push_back(v);
        }
        cat.state_to_rep.push_back(rep);
    }
    return cat;
}

// Per party: the measurement settings, each an ordered list of catalog
// indices (outcome a_k = position within its setting).
struct SettingPartition {
    std::vector<std::vector<int>> settings;

    // (setting, position) of a catalog index.
    std::pair<int, int> locate(int rep) const {
        for (std::size_t s = 0; s < settings.size(); ++s) {
            const auto& mem = settings[s];
            auto it = std::find(mem.begin(), mem.end(), rep);
            if (it != mem.end())
                return {static_cast<int>(s), static_cast<int>(it - mem.begin())};
        }
        throw RangeError("SettingPartition: catalog index not found");
    }
};

struct AmbiguityWitness {
    int party = -1;
    // Catalog indices of the offending local vectors (the second one is -1
    // for size violations).
    int rep_u = -1;
    int rep_v = -1;
    std::string description;
};

struct PartitionResult {
    bool ok = false;
    LocalCatalog catalog;
    SettingPartition partition;
    std::optional<AmbiguityWitness> witness;
};

// Groups the distinct local vectors into settings: greedy first-fit growth of
// orthogonality cliques, then verification that cross-setting pairs are
// non-orthogonal and every setting is a full local basis of size d_k.
inline PartitionResult orthogonality_partition(const ProductBasis& S, int k,
                                               double tol = kDefaultTol) {
    PartitionResult res;
    res.catalog = dedup_local(S, k, tol);
    const auto& vecs = res.catalog.vectors;
    for (int r = 0; r < static_cast<int>(vecs.size()); ++r) {
        int placed = -1;
        for (std::size_t s = 0; s < res.partition.settings.size() && placed < 0; ++s) {
            bool all_orth = true;
            for (int member : res.partition.settings[s])
                if (!orthogonal(vecs[member], vecs[r], tol)) {
                    all_orth = false;
                    break;
                }
            if (all_orth) {
                res.partition.settings[s].push_back(r);
                placed = static_cast<int>(s);
            }
        }
        if (placed < 0) res.partition.settings.push_back({r});
    }
    // Cross-setting orthogonality means a vector sits between two would-be
    // local bases: the basis is ambiguous at that vector.
    std::vector<int> setting_of(vecs.size());
    for (std::size_t s = 0; s < res.partition.settings.size(); ++s)
        for (int member : res.partition.settings[s]) setting_of[member] = static_cast<int>(s);
    for (std::size_t u = 0; u < vecs.size(); ++u)
        for (std::size_t v = u + 1; v < vecs.size(); ++v) {
            if (setting_of[u] == setting_of[v]) continue;
            if (orthogonal(vecs[u], vecs[v], tol)) {
                res.witness = AmbiguityWitness{
                    k, static_cast<int>(u), static_cast<int>(v),
                    "local vector " + std::to_string(u) +
                        " is orthogonal across settings " + std::to_string(setting_of[u]) +
                        " and " + std::to_string(setting_of[v])};
                return res;
            }
        }
    for (std::size_t s = 0; s < res.partition.settings.size(); ++s) {
        if (static_cast<int>(res.partition.settings[s].size()) != S.dims[k]) {
            res.witness = AmbiguityWitness{
                k, res.partition.settings[s].front(), -1,
                "setting " + std::to_string(s) + " has " +
                    std::to_string(res.partition.settings[s].size()) +
                    " members, expected " + std::to_string(S.dims[k])};
            return res;
        }
    }
    res.ok = true;
    return res;
}

// ---------------------------------------------------------------------------
// Unambiguity
// ---------------------------------------------------------------------------

struct UnambiguityReport {
    bool unambiguous = false;
    std::vector<PartitionResult> per_party;
    std::optional<AmbiguityWitness> witness;
};

// Distinct local vectors are orthogonal iff they share a setting, for every
// party.  Requires a complete orthonormal basis.
inline UnambiguityReport is_unambiguous(const ProductBasis& S, double tol = kDefaultTol) {
    auto comp = is_complete_orthonormal(S, tol);
    if (!comp.complete)
        throw InputError("is_unambiguous: basis is not complete orthonormal "
                         "(max deviation " + std::to_string(comp.max_deviation) + ")");
    UnambiguityReport rep;
    rep.unambiguous = true;
    for (int k = 0; k < S.parties(); ++k) {
        rep.per_party.push_back(orthogonality_partition(S, k, tol));
        if (!rep.per_party.back().ok) {
            rep.unambiguous = false;
            if (!rep.witness) rep.witness = rep.per_party.back().witness;
        }
    }
    return rep;
}

// Settings and outcomes both numbered by first occurrence in the basis
// listing; reproduces the catalogued labelings of the named bases.
inline EventLabeling canonical_labels(const ProductBasis& S, double tol = kDefaultTol) {
    UnambiguityReport rep = is_unambiguous(S, tol);
    if (!rep.unambiguous)
        throw InputError("canonical_labels: basis is ambiguous (" +
                         (rep.witness ? rep.witness->description : std::string("?")) + ")");
    EventLabeling labels(S.states.size());
    for (std::size_t j = 0; j < S.states.size(); ++j) {
        labels[j].a.resize(S.parties());
        labels[j].x.resize(S.parties());
    }
    for (int k = 0; k < S.parties(); ++k) {
        const auto& pr = rep.per_party[k];
        for (std::size_t j = 0; j < S.states.size(); ++j) {
            auto [setting, pos] = pr.partition.locate(pr.catalog.state_to_rep[j]);
            labels[j].x[k] = setting;
            labels[j].a[k] = pos;
        }
    }
    return labels;
}

// ---------------------------------------------------------------------------
// Pairwise exclusivity and weak unambiguity
// ---------------------------------------------------------------------------

// Two events are exclusive when some party has the same setting but different
// outcomes.
inline bool events_exclusive(const EventLabel& e, const EventLabel& f) {
    for (std::size_t k = 0; k < e.a.size(); ++k)
        if (e.a[k] != f.a[k] && e.x[k] == f.x[k]) return true;
    return false;
}

struct ExclusivityReport {
    bool exclusive = false;
    std::optional<std::pair<int, int>> violating_pair;  // first in scan order
};

inline ExclusivityReport pairwise_exclusivity(const EventLabeling& labels) {
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j].a.size() != labels.front().a.size() ||
            labels[j].x.size() != labels.front().x.size())
            throw ShapeError("pairwise_exclusivity: ragged labeling");
        for (std::size_t l = j + 1; l < labels.size(); ++l)
            if (!events_exclusive(labels[j], labels[l]))
                return {false, std::make_pair(static_cast<int>(j), static_cast<int>(l))};
    }
    return {true, std::nullopt};
}

struct WeakUnambiguityReport {
    bool weakly_unambiguous = false;
    bool settings_disjoint = true;
    bool exclusivity = true;
    std::optional<AmbiguityWitness> overlap_witness;
    std::optional<std::pair<int, int>> exclusivity_witness;
};

// The labeled relaxation: per party, no vector may appear under two settings,
// and all labeled events must be pairwise exclusive.  Accidental
// cross-setting orthogonality is allowed here.
inline WeakUnambiguityReport is_weakly_unambiguous(const ProductBasis& S,
                                                   double tol = kDefaultTol) {
    S.check_shape();
    if (!S.labels) throw InputError("is_weakly_unambiguous: explicit labels required");
    const EventLabeling& labels = *S.labels;
    WeakUnambiguityReport rep;
    for (int k = 0; k < S.parties(); ++k) {
        for (std::size_t j = 0; j < S.states.size(); ++j)
            for (std::size_t l = j + 1; l < S.states.size(); ++l) {
                if (labels[j].x[k] == labels[l].x[k]) continue;
                if (same_up_to_phase(S.states[j].locals[k], S.states[l].locals[k], tol)) {
                    rep.settings_disjoint = false;
                    if (!rep.overlap_witness)
                        rep.overlap_witness = AmbiguityWitness{
                            k, static_cast<int>(j), static_cast<int>(l),
                            "party " + std::to_string(k) + ": states " + std::to_string(j) +
                                " and " + std::to_string(l) +
                                " carry the same local vector under settings " +
                                std::to_string(labels[j].x[k]) + " and " +
                                std::to_string(labels[l].x[k])};
                }
            }
    }
    auto ex = pairwise_exclusivity(labels);
    rep.exclusivity = ex.exclusive;
    rep.exclusivity_witness = ex.violating_pair;
    rep.weakly_unambiguous = rep.settings_disjoint && rep.exclusivity;
    return rep;
}

// ---------------------------------------------------------------------------
// Repair of weakly unambiguous bases
// ---------------------------------------------------------------------------

// Rotates whole local settings by seeded random unitaries until no accidental
// cross-setting orthogonality remains.  Labels (and hence the derived table)
// are untouched; weak unambiguity guarantees global orthonormality survives.
inline ProductBasis repair_rotation(const ProductBasis& S, std::uint64_t seed,
                                    double tol = kDefaultTol, int budget = 64) {
    auto weak = is_weakly_unambiguous(S, tol);
    if (!weak.weakly_unambiguous)
        throw InputError("repair_rotation: input is not weakly unambiguous");

    const EventLabeling& labels = *S.labels;
    ProductBasis out = S;
    RandomStream rng(seed);

    for (int attempt = 0; attempt < budget; ++attempt) {
        // Look for an accidental orthogonality between distinct settings.
        int bad_party = -1, bad_setting = -1;
        for (int k = 0; k < out.parties() && bad_party < 0; ++k) {
            for (std::size_t j = 0; j < out.states.size() && bad_party < 0; ++j)
                for (std::size_t l = j + 1; l < out.states.size(); ++l) {
                    if (labels[j].x[k] == labels[l].x[k]) continue;
                    if (orthogonal(out.states[j].locals[k], out.states[l].locals[k], tol)) {
                        bad_party = k;
                        bad_setting = std::max(labels[j].x[k], labels[l].x[k]);
                        break;
                    }
                }
        }
        if (bad_party < 0) return out;
        Matrix v = random_unitary(out.dims[bad_party], rng);
        for (std::size_t j = 0; j < out.states.size(); ++j)
            if (labels[j].x[bad_party] == bad_setting)
                out.states[j].locals[bad_party] = v * out.states[j].locals[bad_party];
    }
    throw ConsistencyError("repair_rotation: retry budget exhausted");
}

// ---------------------------------------------------------------------------
// Set comparison for golden tests
// ---------------------------------------------------------------------------

// Order-insensitive equality of two bases under the phase-modulus criterion;
// returns the matching permutation (B index per A state) when it exists.
inline std::optional<std::vector<int>> basis_set_match(const ProductBasis& A,
                                                       const ProductBasis& B,
                                                       double tol = kDefaultTol) {
    if (A.dims != B.dims || A.states.size() != B.states.size()) return std::nullopt;
    std::vector<int> match(A.states.size(), -1);
    std::vector<bool> used(B.states.size(), false);
    for (std::size_t j = 0; j < A.states.size(); ++j) {
        for (std::size_t l = 0; l < B.states.size(); ++l) {
            if (used[l]) continue;
            if (std::abs(product_inner(A.states[j], B.states[l])) > 1.0 - tol) {
                match[j] = static_cast<int>(l);
                used[l] = true;
                break;
            }
        }
        if (match[j] < 0) return std::nullopt;
    }
    return match;
}

}  // namespace pfb
