// Acceptance suite: reproduces every catalogued claim end to end and prints
// one pass/fail line per criterion.  Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pfbasis/catalog.hpp"
#include "pfbasis/causality.hpp"
#include "pfbasis/correspondence.hpp"
#include "pfbasis/io.hpp"

using namespace pfb;
using namespace pfb::catalog;

namespace {

int failures = 0;

struct Criterion {
    std::string name;
    double limit_seconds;
    std::function<void(std::vector<std::string>&)> body;
};

void require(std::vector<std::string>& problems, bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
}

ProcessTable tripartite_binary(int m0, int m1, int m2) {
    const int m[3] = {m0, m1, m2};
    std::vector<PartyShape> shapes(3, PartyShape(2, 2));
    return ProcessTable::from_components(shapes, [&](int k, const std::vector<int>& a) {
        const int idx = a[(k + 1) % 3] * 2 + a[(k + 2) % 3];
        return (m[k] >> idx) & 1;
    });
}

std::vector<ProcessTable> all_valid_tripartite;

void run(const Criterion& c) {
    std::vector<std::string> problems;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        c.body(problems);
    } catch (const std::exception& e) {
        problems.push_back(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds)
        problems.push_back("runtime " + std::to_string(secs) + "s exceeds " +
                           std::to_string(c.limit_seconds) + "s");
    if (problems.empty()) {
        std::printf("[PASS] %-28s (%.3f s)\n", c.name.c_str(), secs);
    } else {
        ++failures;
        std::printf("[FAIL] %-28s (%.3f s)\n", c.name.c_str(), secs);
        for (const auto& p : problems) std::printf("       - %s\n", p.c_str());
    }
    std::fflush(stdout);
}

}  // namespace

int main() {
    std::vector<Criterion> criteria;

    criteria.push_back({"01 lugano classification", 1.0, [](auto& problems) {
        Verdict v = classify(lugano());
        require(problems, v.validity == Validity::valid, "not valid");
        require(problems, v.causality == Causality::non_causal, "not non-causal");
        require(problems, !v.has_global_past, "global past detected");
        require(problems, v.genuinely_non_causal, "not genuinely non-causal");
        require(problems, v.bruteforce_crosschecked, "validators did not both run");
        require(problems,
                is_valid_bruteforce(lugano()).valid == is_valid_recursive(lugano()).valid,
                "validators disagree");
    }});

    criteria.push_back({"02 lugano game values", 10.0, [](auto& problems) {
        GameValue g = best_causal_value(lugano());
        require(problems, g.value == Fraction(3, 4),
                "best causal value " + g.value.str() + " != 3/4");
        require(problems, causal_bound({2, 2, 2}) == Fraction(7, 8),
                "causal bound != 7/8");
        require(problems, swap_value(lugano()) == Fraction(1, 1), "swap value != 1");
    }});

    criteria.push_back({"03 gyni diagnosis", 5.0, [](auto& problems) {
        auto r = is_valid_bruteforce(gyni3());
        require(problems, !r.valid, "gyni judged valid");
        require(problems, r.witness.has_value(), "no witness intervention");
        require(problems,
                r.witness && fixed_points(gyni3(), *r.witness).size() != 1,
                "witness has a unique fixed point");
        for (int k = 0; k < 3; ++k)
            for (int a = 0; a < 2; ++a)
                require(problems, is_valid_bruteforce(output_reduce(gyni3(), k, a)).valid,
                        "output reduction judged invalid");
        for (int k = 0; k < 3; ++k) {
            auto red = reduce(gyni3(), k, {0, 1});
            require(problems, !is_valid_bruteforce(red).valid,
                    "identity reduction judged valid");
            bool c0 = true, c1 = true;
            for (const auto& row : red.rows()) {
                if (row[0] != red.rows().front()[0]) c0 = false;
                if (row[1] != red.rows().front()[1]) c1 = false;
            }
            require(problems, !c0 && !c1, "identity reduction is not two-way");
        }
    }});

    criteria.push_back({"04 shift <-> lugano", 5.0, [](auto& problems) {
        auto decoded = basis_to_pf(shift_basis());
        require(problems, decoded.table == lugano(), "decoded table is not lugano");
        const EventLabeling expected{
            {{0, 0, 0}, {0, 0, 0}}, {{0, 0, 1}, {1, 0, 0}}, {{0, 1, 0}, {0, 0, 1}},
            {{0, 1, 1}, {0, 0, 1}}, {{1, 0, 0}, {0, 1, 0}}, {{1, 0, 1}, {1, 0, 0}},
            {{1, 1, 0}, {0, 1, 0}}, {{1, 1, 1}, {0, 0, 0}},
        };
        require(problems, decoded.labels == expected, "labels differ from the eight events");
        auto S = pf_to_basis(lugano(), qubit_family_IH(3));
        require(problems, basis_set_match(S, shift_basis()).has_value(),
                "encoded basis is not the shift state set");
    }});

    criteria.push_back({"05 qutrit pair", 5.0, [](auto& problems) {
        auto decoded = basis_to_pf(qutrit_lugano_basis());
        require(problems, decoded.table == qutrit_lugano(),
                "decoded table differs from the qutrit table");
        Verdict v = classify(qutrit_lugano());
        require(problems, v.validity == Validity::valid, "not valid");
        require(problems, v.causality == Causality::non_causal, "not non-causal");
        require(problems, !v.has_global_past, "global past detected");
    }});

    criteria.push_back({"06 four-partite pairs", 10.0, [](auto& problems) {
        auto S35 = pf_to_basis(fourpartite_trit(), fourpartite_trit_family());
        require(problems, basis_set_match(S35, fourpartite_trit_basis()).has_value(),
                "trit table does not encode to its basis");
        auto S37 = pf_to_basis(controlled_lugano(), qubit_family_IH(4));
        require(problems, basis_set_match(S37, controlled_lugano_basis()).has_value(),
                "controlled table does not encode to its basis");
        Verdict v37 = classify(controlled_lugano());
        require(problems,
                v37.causality == Causality::non_causal && v37.has_global_past &&
                    v37.global_past_parties == std::vector<int>{0},
                "controlled table misclassified");
        Verdict v10 = classify(ngpf());
        require(problems,
                v10.causality == Causality::non_causal && v10.has_global_past &&
                    v10.global_past_parties == std::vector<int>{3},
                "controlled-order table misclassified");
    }});

    criteria.push_back({"07 exhaustive oracle suite", 60.0, [](auto& problems) {
        int valid = 0, non_causal = 0, disagreements = 0;
        for (int m0 = 0; m0 < 16; ++m0)
            for (int m1 = 0; m1 < 16; ++m1)
                for (int m2 = 0; m2 < 16; ++m2) {
                    auto w = tripartite_binary(m0, m1, m2);
                    const bool bf = is_valid_bruteforce(w).valid;
                    const bool rc = is_valid_recursive(w).valid;
                    if (bf != rc) ++disagreements;
                    if (bf) {
                        ++valid;
                        if (!is_causal(w).causal) ++non_causal;
                        all_valid_tripartite.push_back(std::move(w));
                    }
                }
        require(problems, disagreements == 0,
                std::to_string(disagreements) + " validator disagreements");
        // frozen oracle counts
        require(problems, valid == 744,
                "valid count " + std::to_string(valid) + " != 744");
        require(problems, non_causal == 64,
                "valid non-causal count " + std::to_string(non_causal) + " != 64");
    }});

    criteria.push_back({"08 bipartite no-go", 120.0, [](auto& problems) {
        int valid_count = 0, derived = 0;
        for (int x1 = 1; x1 <= 3; ++x1)
        for (int a1 = 1; a1 <= 3; ++a1)
        for (int x2 = 1; x2 <= 3; ++x2)
        for (int a2 = 1; a2 <= 3; ++a2) {
            std::vector<PartyShape> shapes{PartyShape(x1, a1), PartyShape(x2, a2)};
            JointIndexer c1(std::vector<int>(a2, x1));
            JointIndexer c2(std::vector<int>(a1, x2));
            std::vector<int> f1(a2, 0);
            do {
                std::vector<int> f2(a1, 0);
                do {
                    auto w = ProcessTable::from_components(
                        shapes, [&](int k, const std::vector<int>& a) {
                            return k == 0 ? f1[a[1]] : f2[a[0]];
                        });
                    if (!is_valid_bruteforce(w).valid) continue;
                    ++valid_count;
                    if (!is_causal(w).causal) {
                        problems.push_back("non-causal bipartite table found");
                        return;
                    }
                    // encode whenever a disjoint-settings family can exist
                    if ((x1 == 1 || a1 >= 2) && (x2 == 1 || a2 >= 2)) {
                        auto S = pf_to_basis(w, default_unitaries(shapes, 0));
                        ++derived;
                        if (classify_basis(S).kind == BasisKind::unambiguous_qnlwe) {
                            problems.push_back("bipartite basis classified QNLWE");
                            return;
                        }
                    }
                } while (c2.next(f2));
            } while (c1.next(f1));
        }
        require(problems, valid_count > 0 && derived > 0, "sweep found nothing");
    }});

    criteria.push_back({"09 causal bound property", 60.0, [](auto& problems) {
        const Fraction bound(7, 8), one(1, 1);
        int nontrivial = 0;
        for (const auto& w : all_valid_tripartite) {
            const Fraction best = best_causal_value(w).value;
            if (constant_input_parties(w).empty()) {
                ++nontrivial;
                if (!(best <= bound))
                    problems.push_back("bound violated: best " + best.str());
                if (!(best < one))
                    problems.push_back("non-trivial table reaches value 1");
            } else if (is_causal(w).causal && !(best == one)) {
                problems.push_back("causal table with best value " + best.str());
            }
        }
        require(problems, nontrivial == 64,
                "expected 64 non-trivial tables, saw " + std::to_string(nontrivial));
    }});

    criteria.push_back({"10 ambiguity diagnostics", 10.0, [](auto& problems) {
        auto dom = domino_basis();
        require(problems, classify_basis(dom).kind == BasisKind::ambiguous,
                "domino not ambiguous");
        auto pr = orthogonality_partition(dom, 1);
        require(problems,
                !pr.ok && pr.witness &&
                    same_up_to_phase(pr.catalog.vectors[pr.witness->rep_u], t2()),
                "Bob's ambiguity witness is not |2>");
        auto ex = pairwise_exclusivity(*dom.labels);
        require(problems, !ex.exclusive, "domino labeling passes exclusivity");
        // |11> is state 4 and |+2> state 2 in the listing
        require(problems, !events_exclusive((*dom.labels)[4], (*dom.labels)[2]),
                "the |11>, |+2> pair is not a violation");

        auto d2 = app_d2_basis();
        require(problems, pairwise_exclusivity(*d2.labels).exclusive,
                "d2 labeling fails exclusivity");
        auto d2pf = basis_to_pf(d2);
        require(problems, d2pf.table == one_way_2x3(), "d2 table is not x1=0, x2=a1");
        require(problems, d2pf.validity.valid && is_causal(d2pf.table).causal,
                "d2 table not valid causal");

        auto d3pf = basis_to_pf(app_d3_basis());
        require(problems, d3pf.table == two_way_2x3(), "d3 quasi-table mismatch");
        require(problems, !d3pf.validity.valid, "d3 quasi-table judged valid");
        bool c0 = true, c1 = true;
        for (const auto& row : d3pf.table.rows()) {
            if (row[0] != d3pf.table.rows().front()[0]) c0 = false;
            if (row[1] != d3pf.table.rows().front()[1]) c1 = false;
        }
        require(problems, !c0 && !c1, "d3 quasi-table is not two-way");
    }});

    criteria.push_back({"11 weak unambiguity repair", 10.0, [](auto& problems) {
        auto S = app_e_weak_basis();
        auto weak = is_weakly_unambiguous(S);
        require(problems, weak.weakly_unambiguous, "example not weakly unambiguous");
        require(problems, !is_unambiguous(S).unambiguous, "example already unambiguous");
        auto R = repair_rotation(S, 0);
        require(problems, is_unambiguous(R).unambiguous, "repair failed");
        require(problems, is_complete_orthonormal(R).complete, "repair broke the basis");
        auto before = basis_to_pf(S);
        auto after = basis_to_pf(R);
        require(problems, before.table == after.table, "repair changed the table");
        require(problems, R.labels == S.labels, "repair changed the labels");
    }});

    criteria.push_back({"12 distributed measurement", 10.0, [](auto& problems) {
        struct Pair {
            const char* name;
            ProcessTable w;
            UnitaryFamily u;
        };
        std::vector<Pair> pairs;
        pairs.push_back({"lugano", lugano(), qubit_family_IH(3)});
        pairs.push_back({"qutrit", qutrit_lugano(), qutrit_family_IFB(3)});
        pairs.push_back({"fourpartite", fourpartite_trit(), fourpartite_trit_family()});
        pairs.push_back({"controlled", controlled_lugano(), qubit_family_IH(4)});
        for (const auto& p : pairs) {
            auto r = dpvm_check(p.w, p.u);
            if (!r.ok || r.max_deviation >= 1e-9)
                problems.push_back(std::string(p.name) + ": deviation " +
                                   std::to_string(r.max_deviation));
        }
        auto bad = dpvm_check(gyni3(), qubit_family_IH(3));
        require(problems, !bad.ok, "gyni wiring passed the measurement check");
        require(problems, std::abs(bad.max_deviation - std::pow(2.0, -1.5)) < 1e-12,
                "gyni completeness defect is not 2^{-3/2}");
    }});

    for (const auto& c : criteria) run(c);
    if (failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
