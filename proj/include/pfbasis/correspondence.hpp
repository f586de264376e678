#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfbasis/basis.hpp"
#include "pfbasis/causality.hpp"
#include "pfbasis/core.hpp"
#include "pfbasis/errors.hpp"
#include "pfbasis/linalg.hpp"
#include "pfbasis/validate.hpp"

namespace pfb {

// ---------------------------------------------------------------------------
// Unitary families
// ---------------------------------------------------------------------------

// Per party, one unitary per measurement setting; U^{x} maps the
// computational basis onto the setting-x local basis.
struct UnitaryFamily {
    std::vector<std::vector<Matrix>> parties;

    int party_count() const { return static_cast<int>(parties.size()); }
    int settings(int k) const { return static_cast<int>(parties.at(k).size()); }
    int dim(int k) const { return parties.at(k).empty() ? 0 : parties.at(k).front().rows; }
};

struct UnitaryConditionReport {
    bool ok = false;
    bool cross_overlap_ok = true;  // off-diagonal cross-setting overlaps all nonzero
    bool local_families_ok = true; // produced setting families satisfy unambiguity
    struct Witness {
        int party = -1;
        int x = -1, x_prime = -1;
        int a = -1, a_prime = -1;
        std::string what;
    };
    std::optional<Witness> witness;
};

// The overlap condition on controlled unitaries: within a setting the columns
// are orthogonal (unitarity), and across two settings every off-diagonal
// overlap <a'|(U^{x'})^dag U^{x}|a> must be nonzero.  The produced local
// families are additionally re-verified against full unambiguity: no
// cross-setting pair of columns may be orthogonal or equal up to phase.
// A family passing the literal overlap condition but failing the re-check is
// reported with local_families_ok = false.
inline UnitaryConditionReport check_unitary_condition(const UnitaryFamily& U,
                                                      double tol = kDefaultTol) {
    UnitaryConditionReport rep;
    for (int k = 0; k < U.party_count(); ++k) {
        const auto& fam = U.parties[k];
        if (fam.empty()) throw ShapeError("unitary family: party with no settings");
        const int d = fam.front().rows;
        for (const auto& m : fam) {
            if (m.rows != d || m.cols != d)
                throw ShapeError("unitary family: inconsistent dimensions in party " +
                                 std::to_string(k));
            if (!is_unitary(m, tol))
                throw InputError("unitary family: non-unitary matrix in party " +
                                 std::to_string(k));
        }
        for (int x = 0; x < static_cast<int>(fam.size()); ++x)
            for (int xp = 0; xp < static_cast<int>(fam.size()); ++xp) {
                if (xp == x) continue;
                Matrix overlap = fam[xp].adjoint() * fam[x];
                for (int a = 0; a < d; ++a)
                    for (int ap = 0; ap < d; ++ap) {
                        const double mag = std::abs(overlap.at(ap, a));
                        if (ap != a && mag < tol) {
                            rep.cross_overlap_ok = false;
                            if (!rep.witness)
                                rep.witness = UnitaryConditionReport::Witness{
                                    k, x, xp, a, ap,
                                    "cross-setting overlap vanishes"};
                        } else if (ap == a && mag < tol) {
                            rep.local_families_ok = false;
                            if (!rep.witness)
                                rep.witness = UnitaryConditionReport::Witness{
                                    k, x, xp, a, ap,
                                    "cross-setting vectors accidentally orthogonal"};
                        }
                        if (mag > 1.0 - tol) {
                            rep.local_families_ok = false;
                            if (!rep.witness)
                                rep.witness = UnitaryConditionReport::Witness{
                                    k, x, xp, a, ap,
                                    "the same local vector appears in two settings"};
                        }
                    }
            }
    }
    rep.ok = rep.cross_overlap_ok && rep.local_families_ok;
    return rep;
}

// Identity for setting 0, Hadamard / Fourier for setting 1, seeded random
// unitaries beyond, resampled until the overlap condition holds.
inline UnitaryFamily default_unitaries(const std::vector<PartyShape>& shapes,
                                       std::uint64_t seed, double tol = kDefaultTol,
                                       int budget = 64) {
    for (const auto& p : shapes)
        if (p.a_size == 1 && p.x_size > 1)
            throw InputError("default_unitaries: no disjoint settings exist on a "
                             "one-dimensional local space");
    RandomStream rng(seed);
    for (int attempt = 0; attempt < budget; ++attempt) {
        UnitaryFamily U;
        for (const auto& p : shapes) {
            std::vector<Matrix> fam;
            fam.push_back(Matrix::identity(p.a_size));
            if (p.x_size >= 2)
                fam.push_back(p.a_size == 2 ? hadamard2() : fourier(p.a_size));
            for (int x = 2; x < p.x_size; ++x)
                fam.push_back(random_unitary(p.a_size, rng));
            U.parties.push_back(std::move(fam));
        }
        if (check_unitary_condition(U, tol).ok) return U;
    }
    throw ConsistencyError("default_unitaries: retry budget exhausted");
}

// ---------------------------------------------------------------------------
// Table -> basis (encoding)
// ---------------------------------------------------------------------------

// Builds the labeled product state for each joint outcome without judging
// anything; shared by the encoder and the measurement check.
inline ProductBasis controlled_basis_states(const ProcessTable& w, const UnitaryFamily& U) {
    if (U.party_count() != w.parties())
        throw ShapeError("unitary family party count mismatch");
    for (int k = 0; k < w.parties(); ++k) {
        if (U.settings(k) < w.shape(k).x_size)
            throw ShapeError("party " + std::to_string(k) + " has " +
                             std::to_string(U.settings(k)) + " unitaries but needs " +
                             std::to_string(w.shape(k).x_size));
        if (U.dim(k) != w.shape(k).a_size)
            throw ShapeError("party " + std::to_string(k) + ": unitary dimension " +
                             std::to_string(U.dim(k)) + " != outcome alphabet " +
                             std::to_string(w.shape(k).a_size));
    }
    ProductBasis S;
    S.dims = a_sizes(w.shapes());
    EventLabeling labels;
    std::vector<int> a(w.parties(), 0);
    do {
        const std::vector<int>& x = w.apply(a);
        ProductState st;
        for (int k = 0; k < w.parties(); ++k)
            st.locals.push_back(U.parties[k][x[k]].column(a[k]));
        S.states.push_back(std::move(st));
        labels.push_back(EventLabel{a, x});
    } while (w.a_index().next(a));
    S.labels = std::move(labels);
    return S;
}

// Encodes a valid table into a complete unambiguous product basis
// S = { (tensor_k U_k^{w_k(a)}) |a> } with explicit labels (a | w(a)).
inline ProductBasis pf_to_basis(const ProcessTable& w, const UnitaryFamily& U,
                                double tol = kDefaultTol,
                                std::uint64_t cap = kDefaultInterventionCap) {
    if (!is_valid_recursive(w, cap).valid)
        throw InputError("pf_to_basis: table is not a valid process function");
    auto cond = check_unitary_condition(U, tol);
    if (!cond.ok)
        throw InputError("pf_to_basis: unitary family fails the overlap condition (" +
                         (cond.witness ? cond.witness->what : std::string("?")) + ")");
    return controlled_basis_states(w, U);
}

// ---------------------------------------------------------------------------
// Basis -> table (decoding)
// ---------------------------------------------------------------------------

struct BasisToPfResult {
    ProcessTable table;
    EventLabeling labels;
    ValidityReport validity;
};

// Reads a process table off a complete product basis.  Without explicit
// labels the basis must be unambiguous and the result is guaranteed valid (a
// failure here is a hard error).  With explicit labels, any fiber-unique
// labeling is accepted and the validity of the resulting quasi-process is
// reported, not enforced.
inline BasisToPfResult basis_to_pf(const ProductBasis& S, double tol = kDefaultTol,
                                   std::uint64_t cap = kDefaultInterventionCap) {
    auto comp = is_complete_orthonormal(S, tol);
    if (!comp.complete)
        throw InputError("basis_to_pf: not a complete orthonormal product basis (count " +
                         std::to_string(S.states.size()) + " vs " +
                         std::to_string(S.full_dimension()) + ", deviation " +
                         std::to_string(comp.max_deviation) + ")");

    const bool explicit_labels = S.labels.has_value();
    EventLabeling labels = explicit_labels ? *S.labels : canonical_labels(S, tol);

    const int n = S.parties();
    std::vector<PartyShape> shapes;
    for (int k = 0; k < n; ++k) {
        int x_size = 1;
        for (const auto& lab : labels) {
            if (static_cast<int>(lab.a.size()) != n || static_cast<int>(lab.x.size()) != n)
                throw InputError("basis_to_pf: label arity mismatch");
            if (lab.a[k] < 0 || lab.a[k] >= S.dims[k])
                throw InputError("basis_to_pf: outcome label out of range");
            if (lab.x[k] < 0) throw InputError("basis_to_pf: negative setting label");
            x_size = std::max(x_size, lab.x[k] + 1);
        }
        shapes.emplace_back(x_size, S.dims[k]);
    }

    JointIndexer a_idx(a_sizes(shapes));
    std::vector<std::vector<int>> table(static_cast<std::size_t>(a_idx.size()));
    std::vector<bool> seen(static_cast<std::size_t>(a_idx.size()), false);
    for (const auto& lab : labels) {
        const std::int64_t j = a_idx.encode(lab.a);
        if (seen[j]) {
            std::string msg = "basis_to_pf: joint outcome (";
            for (std::size_t k = 0; k < lab.a.size(); ++k)
                msg += (k ? "," : "") + std::to_string(lab.a[k]);
            throw InputError(msg + ") labels two states");
        }
        seen[j] = true;
        table[j] = lab.x;
    }
    // complete basis + fiber uniqueness => every joint outcome seen
    for (bool s : seen)
        if (!s) throw InputError("basis_to_pf: some joint outcome labels no state");

    BasisToPfResult res{ProcessTable(std::move(shapes), std::move(table)),
                        std::move(labels), ValidityReport{}};
    res.validity = is_valid_recursive(res.table, cap);
    if (!explicit_labels && !res.validity.valid)
        throw ConsistencyError("basis_to_pf: unambiguous basis produced an invalid table "
                               "(tolerance pathology or internal error)");
    return res;
}

// ---------------------------------------------------------------------------
// Distributed projective measurement check
// ---------------------------------------------------------------------------

struct DpvmReport {
    bool ok = false;
    double max_deviation = 0.0;
};

// Wires the local projectors |(a_k|x_k)><(a_k|x_k)| with x_k = w_k(a) through
// the candidate table and checks that the resulting rank-one family resolves
// the identity projectively (global Gram = identity).
inline DpvmReport dpvm_check(const ProcessTable& w, const UnitaryFamily& U,
                             double tol = kDefaultTol) {
    ProductBasis S = controlled_basis_states(w, U);
    auto comp = is_complete_orthonormal(S, tol);
    return {comp.complete, comp.max_deviation};
}

// ---------------------------------------------------------------------------
// End-to-end basis classification
// ---------------------------------------------------------------------------

enum class BasisKind { not_a_basis, ambiguous, unambiguous_causal, unambiguous_qnlwe };

inline const char* to_string(BasisKind k) {
    switch (k) {
        case BasisKind::not_a_basis: return "not_a_basis";
        case BasisKind::ambiguous: return "ambiguous";
        case BasisKind::unambiguous_causal: return "unambiguous_causal";
        case BasisKind::unambiguous_qnlwe: return "unambiguous_qnlwe";
    }
    return "?";
}

struct BasisVerdict {
    BasisKind kind = BasisKind::not_a_basis;
    CompletenessReport completeness;
    std::optional<AmbiguityWitness> ambiguity_witness;
    std::optional<ProcessTable> derived_pf;
    std::optional<EventLabeling> derived_labels;
    std::optional<Verdict> pf_verdict;
};

// completeness -> unambiguity -> decode -> classify.  Local measurability is
// judged through the causal structure of the derived table: an unambiguous
// basis is locally measurable iff that table is causal.
inline BasisVerdict classify_basis(const ProductBasis& S, double tol = kDefaultTol,
                                   std::uint64_t cap = kDefaultInterventionCap) {
    BasisVerdict v;
    v.completeness = is_complete_orthonormal(S, tol);
    if (!v.completeness.complete) {
        v.kind = BasisKind::not_a_basis;
        return v;
    }
    UnambiguityReport ua = is_unambiguous(S, tol);
    if (!ua.unambiguous) {
        v.kind = BasisKind::ambiguous;
        v.ambiguity_witness = ua.witness;
        return v;
    }
    ProductBasis canonical = S;
    canonical.labels.reset();  // classification always uses canonical labels
    BasisToPfResult decoded = basis_to_pf(canonical, tol, cap);
    v.derived_pf = decoded.table;
    v.derived_labels = decoded.labels;
    v.pf_verdict = classify(decoded.table, cap);
    v.kind = (v.pf_verdict->causality == Causality::non_causal)
                 ? BasisKind::unambiguous_qnlwe
                 : BasisKind::unambiguous_causal;
    return v;
}

}  // namespace pfb
