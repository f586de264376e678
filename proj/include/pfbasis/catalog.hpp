#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pfbasis/basis.hpp"
#include "pfbasis/causality.hpp"
#include "pfbasis/core.hpp"
#include "pfbasis/correspondence.hpp"
#include "pfbasis/errors.hpp"
#include "pfbasis/fraction.hpp"
#include "pfbasis/linalg.hpp"

namespace pfb::catalog {

// ---------------------------------------------------------------------------
// Process tables
// ---------------------------------------------------------------------------

// x1 = a3(a2+1), x2 = a1(a3+1), x3 = a2(a1+1) over bits: the canonical
// tripartite process with no global past.
inline ProcessTable lugano() {
    std::vector<PartyShape> shapes(3, PartyShape(2, 2));
    return ProcessTable::from_components(shapes, [](int k, const std::vector<int>& a) {
        return a[(k + 2) % 3] * (1 - a[(k + 1) % 3]);
    });
}

// The cyclic guess-your-neighbour-input wiring x1=a2, x2=a3, x3=a1; a global
// loop, logically inconsistent.
inline ProcessTable gyni3() {
    std::vector<PartyShape> shapes(3, PartyShape(2, 2));
    return ProcessTable::from_components(
        shapes, [](int k, const std::vector<int>& a) { return a[(k + 1) % 3]; });
}

// Three-trit analogue of the Lugano wiring.
inline ProcessTable qutrit_lugano() {
    std::vector<PartyShape> shapes(3, PartyShape(3, 3));
    return ProcessTable::from_components(shapes, [](int k, const std::vector<int>& a) {
        const int nxt = a[(k + 1) % 3];
        const int prv = a[(k + 2) % 3];
        return nxt == 0 ? ((prv == 1 ? 1 : 0) + 2 * (prv == 2 ? 1 : 0)) : 0;
    });
}

// Party 4 sits in the global past and selects, through its output, either a
// fixed causal order or a Lugano round among the first three parties.
inline ProcessTable ngpf() {
    std::vector<PartyShape> shapes(4, PartyShape(2, 2));
    return ProcessTable::from_components(shapes, [](int k, const std::vector<int>& a) {
        switch (k) {
            case 0: return (1 - a[3]) + a[3] * a[2] * (1 - a[1]);
            case 1: return (1 - a[3]) * a[0] + a[3] * a[0] * (1 - a[2]);
            case 2: return (1 - a[3]) * a[1] + a[3] * a[1] * (1 - a[0]);
            default: return 0;
        }
    });
}

// Four parties, party 1 carrying a trit; no global past.
inline ProcessTable fourpartite_trit() {
    std::vector<PartyShape> shapes{PartyShape(2, 3), PartyShape(2, 2), PartyShape(2, 2),
                                   PartyShape(2, 2)};
    return ProcessTable::from_components(shapes, [](int k, const std::vector<int>& a) {
        switch (k) {
            case 0: return (a[1] == a[2] && a[2] == a[3]) ? 1 : 0;
            case 1: return (a[0] != 0 ? 1 : 0) * a[3] * (1 - a[2]);
            case 2: return (a[0] != 1 ? 1 : 0) * a[1] * (1 - a[3]);
            default: return (a[0] != 2 ? 1 : 0) * a[2] * (1 - a[1]);
        }
    });
}

// Party 1's output classically controls which of two Lugano wirings the
// remaining three parties communicate through; x1 is constant.
inline ProcessTable controlled_lugano() {
    std::vector<PartyShape> shapes(4, PartyShape(2, 2));
    return ProcessTable::from_components(shapes, [](int k, const std::vector<int>& a) {
        const int c = a[0];
        switch (k) {
            case 0: return 0;
            case 1: return (1 - c) * a[3] * (1 - a[2]) + c * a[2] * (1 - a[3]);
            case 2: return (1 - c) * a[1] * (1 - a[3]) + c * a[3] * (1 - a[1]);
            default: return (1 - c) * a[2] * (1 - a[1]) + c * a[1] * (1 - a[2]);
        }
    });
}

// Two-way-signaling quasi-process read off the domino basis:
// x1 = a2 + 2 (mod 3), x2 flips a1 in {0,1} and keeps 2.
inline ProcessTable domino_quasi_pf() {
    std::vector<PartyShape> shapes(2, PartyShape(3, 3));
    return ProcessTable::from_components(shapes, [](int k, const std::vector<int>& a) {
        if (k == 0) return (a[1] + 2) % 3;
        return a[0] == 0 ? 1 : (a[0] == 1 ? 0 : 2);
    });
}

// One-way table x1 = 0, x2 = a1 on a 2x3 system.
inline ProcessTable one_way_2x3() {
    std::vector<PartyShape> shapes{PartyShape(1, 2), PartyShape(2, 3)};
    return ProcessTable::from_components(
        shapes, [](int k, const std::vector<int>& a) { return k == 0 ? 0 : a[0]; });
}

// Two-way quasi-process x1 = [a2 = 2], x2 = a1 on a 2x3 system.
inline ProcessTable two_way_2x3() {
    std::vector<PartyShape> shapes{PartyShape(2, 2), PartyShape(2, 3)};
    return ProcessTable::from_components(shapes, [](int k, const std::vector<int>& a) {
        return k == 0 ? (a[1] == 2 ? 1 : 0) : a[0];
    });
}

// ---------------------------------------------------------------------------
// Local vectors and unitaries
// ---------------------------------------------------------------------------

inline Cvec ket(std::initializer_list<double> entries) {
    Cvec v;
    for (double d : entries) v.e.emplace_back(d, 0);
    return v;
}

inline Cvec q0() { return Cvec::basis_vector(2, 0); }
inline Cvec q1() { return Cvec::basis_vector(2, 1); }
inline Cvec qplus() { const double s = 1 / std::sqrt(2.0); return ket({s, s}); }
inline Cvec qminus() { const double s = 1 / std::sqrt(2.0); return ket({s, -s}); }

inline Cvec t0() { return Cvec::basis_vector(3, 0); }
inline Cvec t1() { return Cvec::basis_vector(3, 1); }
inline Cvec t2() { return Cvec::basis_vector(3, 2); }
// (|0> +- |1>)/sqrt2 and (|1> +- |2>)/sqrt2 as qutrit vectors
inline Cvec t01p() { const double s = 1 / std::sqrt(2.0); return ket({s, s, 0}); }
inline Cvec t01m() { const double s = 1 / std::sqrt(2.0); return ket({s, -s, 0}); }
inline Cvec t12p() { const double s = 1 / std::sqrt(2.0); return ket({0, s, s}); }
inline Cvec t12m() { const double s = 1 / std::sqrt(2.0); return ket({0, s, -s}); }

inline Cvec alpha3(int i) { return fourier(3).column(i); }

// A second mutually unbiased-enough qutrit basis: sign-twisted Fourier
// columns.  Every overlap with the computational and alpha bases is nonzero.
inline Matrix beta3_matrix() {
    Matrix d = Matrix::identity(3);
    d.at(1, 1) = cplx(-1, 0);
    return d * fourier(3);
}
inline Cvec beta3(int i) { return beta3_matrix().column(i); }

inline UnitaryFamily qubit_family_IH(int parties) {
    UnitaryFamily u;
    for (int k = 0; k < parties; ++k)
        u.parties.push_back({Matrix::identity(2), hadamard2()});
    return u;
}

inline UnitaryFamily qutrit_family_IFB(int parties) {
    UnitaryFamily u;
    for (int k = 0; k < parties; ++k)
        u.parties.push_back({Matrix::identity(3), fourier(3), beta3_matrix()});
    return u;
}

// {I3, H3} on the trit party, {I2, H} on the bit parties.
inline UnitaryFamily fourpartite_trit_family() {
    UnitaryFamily u;
    u.parties.push_back({Matrix::identity(3), fourier(3)});
    for (int k = 0; k < 3; ++k) u.parties.push_back({Matrix::identity(2), hadamard2()});
    return u;
}

// ---------------------------------------------------------------------------
// Product bases
// ---------------------------------------------------------------------------

inline ProductState st(std::vector<Cvec> locals) { return ProductState{std::move(locals)}; }

inline ProductBasis shift_basis() {
    ProductBasis S;
    S.dims = {2, 2, 2};
    S.states = {
        st({q0(), q0(), q0()}),     st({qplus(), q0(), q1()}),
        st({q0(), q1(), qplus()}),  st({q0(), q1(), qminus()}),
        st({q1(), qplus(), q0()}),  st({qminus(), q0(), q1()}),
        st({q1(), qminus(), q0()}), st({q1(), q1(), q1()}),
    };
    return S;
}

inline ProductBasis qutrit_lugano_basis() {
    ProductBasis S;
    S.dims = {3, 3, 3};
    S.states = {
        st({t0(), t0(), t0()}),     st({alpha3(0), t0(), t1()}), st({beta3(0), t0(), t2()}),
        st({t0(), t1(), alpha3(0)}), st({t0(), t1(), alpha3(1)}), st({t0(), t1(), alpha3(2)}),
        st({t0(), t2(), beta3(0)}),  st({t0(), t2(), beta3(1)}),  st({t0(), t2(), beta3(2)}),
        st({t1(), alpha3(0), t0()}), st({alpha3(1), t0(), t1()}), st({beta3(1), t0(), t2()}),
        st({t1(), alpha3(1), t0()}), st({t1(), t1(), t1()}),      st({t1(), t1(), t2()}),
        st({t1(), alpha3(2), t0()}), st({t1(), t2(), t1()}),      st({t1(), t2(), t2()}),
        st({t2(), beta3(0), t0()}),  st({alpha3(2), t0(), t1()}), st({beta3(2), t0(), t2()}),
        st({t2(), beta3(1), t0()}),  st({t2(), t1(), t1()}),      st({t2(), t1(), t2()}),
        st({t2(), beta3(2), t0()}),  st({t2(), t2(), t1()}),      st({t2(), t2(), t2()}),
    };
    return S;
}

inline ProductBasis fourpartite_trit_basis() {
    ProductBasis S;
    S.dims = {3, 2, 2, 2};
    S.states = {
        st({alpha3(0), q0(), q0(), q0()}), st({t0(), q0(), q0(), q1()}),
        st({t0(), q0(), q1(), qplus()}),   st({t0(), q0(), q1(), qminus()}),
        st({t0(), q1(), qplus(), q0()}),   st({t0(), q1(), q0(), q1()}),
        st({t0(), q1(), qminus(), q0()}),  st({alpha3(0), q1(), q1(), q1()}),
        st({alpha3(1), q0(), q0(), q0()}), st({t1(), qplus(), q0(), q1()}),
        st({t1(), q0(), q1(), qplus()}),   st({t1(), q0(), q1(), qminus()}),
        st({t1(), q1(), q0(), q0()}),      st({t1(), qminus(), q0(), q1()}),
        st({t1(), q1(), q1(), q0()}),      st({alpha3(1), q1(), q1(), q1()}),
        st({alpha3(2), q0(), q0(), q0()}), st({t2(), qplus(), q0(), q1()}),
        st({t2(), q0(), q1(), q0()}),      st({t2(), q0(), q1(), q1()}),
        st({t2(), q1(), qplus(), q0()}),   st({t2(), qminus(), q0(), q1()}),
        st({t2(), q1(), qminus(), q0()}),  st({alpha3(2), q1(), q1(), q1()}),
    };
    return S;
}

inline ProductBasis controlled_lugano_basis() {
    ProductBasis S;
    S.dims = {2, 2, 2, 2};
    S.states = {
        st({q0(), q0(), q0(), q0()}),      st({q0(), qplus(), q0(), q1()}),
        st({q0(), q0(), q1(), qplus()}),   st({q0(), q0(), q1(), qminus()}),
        st({q0(), q1(), qplus(), q0()}),   st({q0(), qminus(), q0(), q1()}),
        st({q0(), q1(), qminus(), q0()}),  st({q0(), q1(), q1(), q1()}),
        st({q1(), q0(), q0(), q0()}),      st({q1(), q0(), qplus(), q1()}),
        st({q1(), qplus(), q1(), q0()}),   st({q1(), q0(), qminus(), q1()}),
        st({q1(), q1(), q0(), qplus()}),   st({q1(), q1(), q0(), qminus()}),
        st({q1(), qminus(), q1(), q0()}),  st({q1(), q1(), q1(), q1()}),
    };
    return S;
}

inline ProductBasis domino_basis() {
    ProductBasis S;
    S.dims = {3, 3};
    S.states = {
        st({t0(), t01p()}), st({t0(), t01m()}), st({t01p(), t2()}),
        st({t12p(), t0()}), st({t1(), t1()}),   st({t01m(), t2()}),
        st({t12m(), t0()}), st({t2(), t12p()}), st({t2(), t12m()}),
    };
    S.labels = EventLabeling{
        {{0, 0}, {2, 1}}, {{0, 1}, {0, 1}}, {{0, 2}, {1, 1}},
        {{1, 0}, {2, 0}}, {{1, 1}, {0, 0}}, {{1, 2}, {1, 0}},
        {{2, 0}, {2, 2}}, {{2, 1}, {0, 2}}, {{2, 2}, {1, 2}},
    };
    return S;
}

inline ProductBasis app_d2_basis() {
    ProductBasis S;
    S.dims = {2, 3};
    S.states = {
        st({q0(), t0()}),   st({q0(), t1()}),   st({q0(), t2()}),
        st({q1(), t01p()}), st({q1(), t01m()}), st({q1(), t2()}),
    };
    S.labels = EventLabeling{
        {{0, 0}, {0, 0}}, {{0, 1}, {0, 0}}, {{0, 2}, {0, 0}},
        {{1, 0}, {0, 1}}, {{1, 1}, {0, 1}}, {{1, 2}, {0, 1}},
    };
    return S;
}

inline ProductBasis app_d3_basis() {
    ProductBasis S;
    S.dims = {2, 3};
    S.states = {
        st({q0(), t0()}),   st({q0(), t1()}),   st({q1(), t01p()}),
        st({q1(), t01m()}), st({qplus(), t2()}), st({qminus(), t2()}),
    };
    S.labels = EventLabeling{
        {{0, 0}, {0, 0}}, {{0, 1}, {0, 0}}, {{1, 0}, {0, 1}},
        {{1, 1}, {0, 1}}, {{0, 2}, {1, 0}}, {{1, 2}, {1, 1}},
    };
    return S;
}

inline ProductBasis app_e_weak_basis() {
    const double r3 = 1 / std::sqrt(3.0);
    const double r2 = 1 / std::sqrt(2.0);
    const double r6 = 1 / std::sqrt(6.0);
    ProductBasis S;
    S.dims = {2, 3};
    S.states = {
        st({q0(), t0()}),
        st({q0(), t1()}),
        st({q0(), t2()}),
        st({q1(), ket({r3, r3, r3})}),
        st({q1(), ket({r2, -r2, 0})}),
        st({q1(), ket({r6, r6, -2 * r6})}),
    };
    S.labels = EventLabeling{
        {{0, 0}, {0, 0}}, {{0, 1}, {0, 0}}, {{0, 2}, {0, 0}},
        {{1, 0}, {0, 1}}, {{1, 1}, {0, 1}}, {{1, 2}, {0, 1}},
    };
    return S;
}

inline ProductBasis computational_basis(const std::vector<int>& dims) {
    ProductBasis S;
    S.dims = dims;
    JointIndexer idx(dims);
    std::vector<int> a(dims.size(), 0);
    do {
        ProductState s;
        for (std::size_t k = 0; k < dims.size(); ++k)
            s.locals.push_back(Cvec::basis_vector(dims[k], a[k]));
        S.states.push_back(std::move(s));
    } while (idx.next(a));
    return S;
}

// ---------------------------------------------------------------------------
// Entries
// ---------------------------------------------------------------------------

struct Expected {
    std::optional<bool> valid;
    std::optional<Causality> causality;
    std::optional<bool> global_past;
    std::optional<BasisKind> basis_kind;
    std::optional<bool> weakly_unambiguous;
    std::optional<bool> labels_exclusive;
    std::optional<Fraction> causal_bound_value;
    std::optional<Fraction> best_causal;
    std::optional<Fraction> swap;
};

struct CatalogEntry {
    std::string name;
    std::string kind;  // "pf" | "basis" | "unitaries"
    std::string provenance;
    std::optional<ProcessTable> pf;
    std::optional<ProductBasis> basis;
    std::optional<UnitaryFamily> unitaries;
    Expected expected;
};

inline std::vector<CatalogEntry> entries() {
    std::vector<CatalogEntry> out;

    {
        CatalogEntry e{"lugano", "pf", "Lugano (AF/BW) tripartite process", lugano(),
                       std::nullopt, std::nullopt, {}};
        e.expected.valid = true;
        e.expected.causality = Causality::non_causal;
        e.expected.global_past = false;
        e.expected.causal_bound_value = Fraction(7, 8);
        e.expected.best_causal = Fraction(3, 4);
        e.expected.swap = Fraction(1, 1);
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"gyni3", "pf", "tripartite guess-your-neighbour-input loop",
                       gyni3(), std::nullopt, std::nullopt, {}};
        e.expected.valid = false;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"qutrit-lugano", "pf", "three-qutrit Lugano-like process",
                       qutrit_lugano(), std::nullopt, std::nullopt, {}};
        e.expected.valid = true;
        e.expected.causality = Causality::non_causal;
        e.expected.global_past = false;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"ngpf", "pf",
                       "party 4 controls a fixed order or a Lugano round", ngpf(),
                       std::nullopt, std::nullopt, {}};
        e.expected.valid = true;
        e.expected.causality = Causality::non_causal;
        e.expected.global_past = true;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"fourpartite-trit", "pf",
                       "four parties, one trit output, no global past",
                       fourpartite_trit(), std::nullopt, std::nullopt, {}};
        e.expected.valid = true;
        e.expected.causality = Causality::non_causal;
        e.expected.global_past = false;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"controlled-lugano", "pf",
                       "party 1 classically controls two Lugano rounds",
                       controlled_lugano(), std::nullopt, std::nullopt, {}};
        e.expected.valid = true;
        e.expected.causality = Causality::non_causal;
        e.expected.global_past = true;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"shift", "basis", "three-qubit SHIFT basis", std::nullopt,
                       shift_basis(), std::nullopt, {}};
        e.expected.basis_kind = BasisKind::unambiguous_qnlwe;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"qutrit-lugano-basis", "basis", "three-qutrit QNLWE basis",
                       qutrit_lugano(), qutrit_lugano_basis(), qutrit_family_IFB(3), {}};
        e.expected.basis_kind = BasisKind::unambiguous_qnlwe;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"fourpartite-trit-basis", "basis",
                       "QNLWE basis encoding the four-partite trit process",
                       fourpartite_trit(), fourpartite_trit_basis(),
                       fourpartite_trit_family(), {}};
        e.expected.basis_kind = BasisKind::unambiguous_qnlwe;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"controlled-lugano-basis", "basis",
                       "QNLWE basis encoding the controlled-Lugano process",
                       controlled_lugano(), controlled_lugano_basis(),
                       qubit_family_IH(4), {}};
        e.expected.basis_kind = BasisKind::unambiguous_qnlwe;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"domino", "basis", "two-qutrit domino basis",
                       domino_quasi_pf(), domino_basis(), std::nullopt, {}};
        e.expected.valid = false;
        e.expected.basis_kind = BasisKind::ambiguous;
        e.expected.weakly_unambiguous = false;
        e.expected.labels_exclusive = false;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"app-d2", "basis",
                       "ambiguous 2x3 basis with a consistent one-way labeling",
                       one_way_2x3(), app_d2_basis(), std::nullopt, {}};
        e.expected.valid = true;
        e.expected.causality = Causality::causal;
        e.expected.basis_kind = BasisKind::ambiguous;
        e.expected.weakly_unambiguous = false;
        e.expected.labels_exclusive = true;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"app-d3", "basis",
                       "ambiguous 2x3 basis whose labeling signals both ways",
                       two_way_2x3(), app_d3_basis(), std::nullopt, {}};
        e.expected.valid = false;
        e.expected.basis_kind = BasisKind::ambiguous;
        e.expected.weakly_unambiguous = false;
        e.expected.labels_exclusive = false;
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e{"app-e-weak", "basis",
                       "weakly unambiguous 2x3 basis with an accidental orthogonality",
                       one_way_2x3(), app_e_weak_basis(), std::nullopt, {}};
        e.expected.valid = true;
        e.expected.causality = Causality::causal;
        e.expected.basis_kind = BasisKind::ambiguous;
        e.expected.weakly_unambiguous = true;
        e.expected.labels_exclusive = true;
        out.push_back(std::move(e));
    }
    {
        UnitaryFamily h;
        h.parties.push_back({Matrix::identity(2), hadamard2()});
        CatalogEntry e{"hadamard2", "unitaries", "qubit {identity, Hadamard} pair",
                       std::nullopt, std::nullopt, std::move(h), {}};
        out.push_back(std::move(e));
    }
    {
        UnitaryFamily f;
        f.parties.push_back({Matrix::identity(3), fourier(3)});
        CatalogEntry e{"fourier3", "unitaries", "qutrit {identity, Fourier} pair",
                       std::nullopt, std::nullopt, std::move(f), {}};
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<std::string> list() {
    std::vector<std::string> names;
    for (const auto& e : entries()) names.push_back(e.name);
    return names;
}

inline CatalogEntry get(const std::string& name) {
    for (auto& e : entries())
        if (e.name == name) return e;
    throw InputError("catalog: unknown entry '" + name + "'");
}

// Reruns every entry's expectations through the live pipeline; returns the
// list of mismatches (empty when the catalog is self-consistent).
inline std::vector<std::string> self_test(double tol = kDefaultTol,
                                          std::uint64_t cap = kDefaultInterventionCap) {
    std::vector<std::string> failures;
    auto note = [&](const std::string& name, const std::string& what) {
        failures.push_back(name + ": " + what);
    };
    for (const auto& e : entries()) {
        if (e.pf && e.expected.valid) {
            Verdict v = classify(*e.pf, cap);
            if ((v.validity == Validity::valid) != *e.expected.valid)
                note(e.name, "validity mismatch");
            if (e.expected.causality && v.causality != *e.expected.causality)
                note(e.name, "causality mismatch");
            if (e.expected.global_past && v.has_global_past != *e.expected.global_past)
                note(e.name, "global-past mismatch");
        }
        if (e.pf && e.expected.best_causal) {
            if (!(best_causal_value(*e.pf, cap).value == *e.expected.best_causal))
                note(e.name, "best causal value mismatch");
            if (!(causal_bound(i_sizes(e.pf->shapes())) == *e.expected.causal_bound_value))
                note(e.name, "causal bound mismatch");
            if (!(swap_value(*e.pf, cap) == *e.expected.swap))
                note(e.name, "swap value mismatch");
        }
        if (e.basis && e.expected.basis_kind) {
            if (classify_basis(*e.basis, tol, cap).kind != *e.expected.basis_kind)
                note(e.name, "basis kind mismatch");
        }
        if (e.basis && e.expected.labels_exclusive) {
            if (!e.basis->labels) {
                note(e.name, "labels expected but missing");
            } else if (pairwise_exclusivity(*e.basis->labels).exclusive !=
                       *e.expected.labels_exclusive) {
                note(e.name, "exclusivity mismatch");
            }
        }
        if (e.basis && e.expected.weakly_unambiguous) {
            if (is_weakly_unambiguous(*e.basis, tol).weakly_unambiguous !=
                *e.expected.weakly_unambiguous)
                note(e.name, "weak-unambiguity mismatch");
        }
        if (e.unitaries) {
            for (const auto& fam : e.unitaries->parties)
                for (const auto& m : fam)
                    if (!is_unitary(m, tol)) note(e.name, "non-unitary fixture");
        }
    }
    return failures;
}

}  // namespace pfb::catalog
