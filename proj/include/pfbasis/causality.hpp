#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pfbasis/core.hpp"
#include "pfbasis/errors.hpp"
#include "pfbasis/fraction.hpp"
#include "pfbasis/validate.hpp"

namespace pfb {

// ---------------------------------------------------------------------------
// Global past and causal classification
// ---------------------------------------------------------------------------

// Parties whose component w_k is constant over all joint outcomes: nobody can
// signal to them, so they may sit in the global past.
inline std::vector<int> constant_input_parties(const ProcessTable& w) {
    std::vector<int> out;
    for (int k = 0; k < w.parties(); ++k) {
        bool constant = true;
        const int x0 = w.rows().front()[k];
        for (const auto& row : w.rows()) {
            if (row[k] != x0) {
                constant = false;
                break;
            }
        }
        if (constant) out.push_back(k);
    }
    return out;
}

struct CausalWitness {
    // Output reductions taken before causality failed, as (party, fixed a)
    // in original party numbering.
    std::vector<std::pair<int, int>> path;
    std::string reason;  // what failed at the end of the path
};

struct CausalReport {
    bool causal = false;
    std::optional<CausalWitness> witness;
};

namespace detail {

struct CausalNode {
    bool causal = false;
    std::vector<std::pair<int, int>> path;  // node-local party indices
    std::string reason;
};

class CausalChecker {
public:
    CausalNode check(const ProcessTable& w) {
        const std::string key = w.bytes();
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        CausalNode v = eval(w);
        memo_.emplace(std::move(key), v);
        return v;
    }

private:
    CausalNode eval(const ProcessTable& w) {
        if (w.parties() == 1) return {true, {}, ""};
        std::vector<int> past = constant_input_parties(w);
        if (past.empty()) return {false, {}, "no constant-input party"};
        for (int k : past) {
            for (int a = 0; a < w.shape(k).a_size; ++a) {
                CausalNode sub = check(output_reduce(w, k, a));
                if (!sub.causal) {
                    CausalNode v;
                    v.causal = false;
                    v.reason = sub.reason;
                    v.path.emplace_back(k, a);
                    for (auto [j, aj] : sub.path)
                        v.path.emplace_back(j < k ? j : j + 1, aj);
                    return v;
                }
            }
        }
        return {true, {}, ""};
    }

    std::unordered_map<std::string, CausalNode> memo_;
};

}  // namespace detail

// A valid table is causal iff some party has a constant input and, for every
// such party, all of its output reductions are recursively causal.
inline CausalReport is_causal(const ProcessTable& w,
                              std::uint64_t cap = kDefaultInterventionCap) {
    ValidityReport vr = is_valid_recursive(w, cap);
    if (!vr.valid)
        throw ConsistencyError("is_causal: table is not a valid process function");
    detail::CausalChecker cc;
    detail::CausalNode node = cc.check(w);
    CausalReport report;
    report.causal = node.causal;
    if (!node.causal) report.witness = CausalWitness{node.path, node.reason};
    return report;
}

enum class Validity { invalid, valid };
enum class Causality { causal, non_causal, not_applicable };

struct Verdict {
    Validity validity = Validity::invalid;
    Causality causality = Causality::not_applicable;
    bool has_global_past = false;
    bool genuinely_non_causal = false;
    std::vector<int> global_past_parties;
    std::optional<CausalWitness> causal_witness;
    ValidityReport validity_report;
    bool bruteforce_crosschecked = false;
    bool crosscheck_skipped_by_cap = false;
};

// Full classification: recursive validity with a brute-force cross-check when
// the intervention space fits under the cap, then causality and global past.
inline Verdict classify(const ProcessTable& w,
                        std::uint64_t cap = kDefaultInterventionCap) {
    Verdict v;
    v.validity_report = is_valid_recursive(w, cap);
    InterventionSpace space(w.shapes());
    if (!space.exceeds(cap)) {
        ValidityReport bf = is_valid_bruteforce(w, cap);
        v.bruteforce_crosschecked = true;
        if (bf.valid != v.validity_report.valid)
            throw ConsistencyError("classify: recursive and brute-force validators "
                                   "disagree (internal error)");
    } else {
        v.crosscheck_skipped_by_cap = true;
    }
    v.global_past_parties = constant_input_parties(w);
    v.has_global_past = !v.global_past_parties.empty();
    if (!v.validity_report.valid) {
        v.validity = Validity::invalid;
        v.causality = Causality::not_applicable;
        return v;
    }
    v.validity = Validity::valid;
    detail::CausalChecker cc;
    detail::CausalNode node = cc.check(w);
    v.causality = node.causal ? Causality::causal : Causality::non_causal;
    if (!node.causal) v.causal_witness = CausalWitness{node.path, node.reason};
    v.genuinely_non_causal = !node.causal && !v.has_global_past;
    return v;
}

// ---------------------------------------------------------------------------
// Correlations under extended interventions
// ---------------------------------------------------------------------------

// For each joint external input i, solves the unique fixed point of
// x = w(f_a(x, i)) and records o = f_o(x*, i).  Throws when some i admits no
// or several fixed points.
inline std::vector<std::vector<int>> correlations(const ProcessTable& w,
                                                  const ExtendedIntervention& f) {
    if (static_cast<int>(f.tables.size()) != w.parties())
        throw ShapeError("correlations: intervention party count mismatch");
    JointIndexer i_idx(i_sizes(w.shapes()));
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(i_idx.size()));
    std::vector<int> i(w.parties(), 0);
    do {
        std::vector<std::vector<int>> fps;
        std::vector<int> x(w.parties(), 0);
        std::vector<int> a(w.parties());
        do {
            for (int k = 0; k < w.parties(); ++k)
                a[k] = f.eval(w.shape(k), k, x[k], i[k]).a;
            if (w.apply(a) == x) fps.push_back(x);
        } while (w.x_index().next(x));
        if (fps.size() != 1) {
            std::string msg = "correlations: input i=(";
            for (std::size_t k = 0; k < i.size(); ++k)
                msg += (k ? "," : "") + std::to_string(i[k]);
            msg += ") yields " + std::to_string(fps.size()) + " fixed points";
            throw ConsistencyError(msg);
        }
        std::vector<int> o(w.parties());
        for (int k = 0; k < w.parties(); ++k) {
            o[k] = f.eval(w.shape(k), k, fps[0][k], i[k]).o;
            if (o[k] < 0 || o[k] >= w.shape(k).o_size)
                throw RangeError("correlations: outcome out of range for party " +
                                 std::to_string(k));
        }
        out.push_back(std::move(o));
    } while (i_idx.next(i));
    return out;
}

// ---------------------------------------------------------------------------
// Guess-the-process games
// ---------------------------------------------------------------------------

// Optimal value over causal correlations of the guess-the-process inequality:
// 1 - 1/prod |I_k|.
inline Fraction causal_bound(const std::vector<int>& input_sizes) {
    std::int64_t prod = 1;
    for (int s : input_sizes) {
        if (s < 1) throw ShapeError("causal_bound: sizes must be >= 1");
        prod *= s;
    }
    return Fraction(prod - 1, prod);
}

inline void require_swap_game_shapes(const ProcessTable& w) {
    for (int k = 0; k < w.parties(); ++k) {
        const auto& p = w.shape(k);
        if (p.i_size != p.a_size || p.o_size != p.x_size)
            throw ShapeError("game requires |I_k| = |A_k| and |O_k| = |X_k| "
                             "(party " + std::to_string(k) + ")");
    }
}

// Success probability of the swap strategy a_k = i_k, o_k = x_k in the game
// "guess w(i)".  Equals 1 for every valid table; invalid tables are rejected
// with their fixed-point witness.
inline Fraction swap_value(const ProcessTable& w,
                           std::uint64_t cap = kDefaultInterventionCap) {
    require_swap_game_shapes(w);
    ValidityReport vr = is_valid_recursive(w, cap);
    if (!vr.valid) {
        std::string msg = "swap_value: not a process function; intervention (";
        for (std::size_t k = 0; k < vr.witness->maps.size(); ++k) {
            if (k) msg += ";";
            for (std::size_t x = 0; x < vr.witness->maps[k].size(); ++x)
                msg += (x ? "," : "") + std::to_string(vr.witness->maps[k][x]);
        }
        msg += ") has " + std::to_string(vr.witness_fixed_points.size()) + " fixed points";
        throw ConsistencyError(msg);
    }
    auto outs = correlations(w, ExtendedIntervention::swap_wiring(w.shapes()));
    JointIndexer i_idx(i_sizes(w.shapes()));
    std::int64_t hits = 0;
    std::vector<int> i(w.parties(), 0);
    std::int64_t j = 0;
    do {
        if (outs[j] == w.apply(i)) ++hits;
        ++j;
    } while (i_idx.next(i));
    return Fraction(hits, i_idx.size());
}

// One branch of a deterministic causal strategy: a first party, its guess per
// own input, and per input a strategy for the remaining parties (which may
// read every upstream input).
struct CausalStrategy {
    int party = -1;
    std::vector<int> guess;                               // indexed by own input
    std::vector<std::shared_ptr<CausalStrategy>> next;    // same indexing; null at depth n
};

struct GameValue {
    Fraction value;
    std::shared_ptr<CausalStrategy> strategy;
};

namespace detail {

struct GameContext {
    const ProcessTable* w = nullptr;
    std::vector<int> inputs;   // -1 when the party has not been placed yet
    std::vector<int> guesses;
};

// Max number of joint inputs on which every party guesses its target,
// over all deterministic causal strategies for the remaining parties.
inline std::pair<std::int64_t, std::shared_ptr<CausalStrategy>> best_branch(
    GameContext& ctx, unsigned remaining) {
    const ProcessTable& w = *ctx.w;
    if (remaining == 0) {
        const auto& target = w.apply(ctx.inputs);
        for (int k = 0; k < w.parties(); ++k)
            if (ctx.guesses[k] != target[k]) return {0, nullptr};
        return {1, nullptr};
    }
    std::int64_t best = -1;
    std::shared_ptr<CausalStrategy> best_strat;
    for (int k = 0; k < w.parties(); ++k) {
        if (!(remaining & (1u << k))) continue;
        auto strat = std::make_shared<CausalStrategy>();
        strat->party = k;
        strat->guess.assign(w.shape(k).i_size, 0);
        strat->next.assign(w.shape(k).i_size, nullptr);
        std::int64_t total = 0;
        for (int ik = 0; ik < w.shape(k).i_size; ++ik) {
            ctx.inputs[k] = ik;
            std::int64_t best_o = -1;
            std::shared_ptr<CausalStrategy> best_sub;
            int best_guess = 0;
            for (int o = 0; o < w.shape(k).o_size; ++o) {
                ctx.guesses[k] = o;
                auto [cnt, sub] = best_branch(ctx, remaining & ~(1u << k));
                if (cnt > best_o) {
                    best_o = cnt;
                    best_sub = std::move(sub);
                    best_guess = o;
                }
            }
            strat->guess[ik] = best_guess;
            strat->next[ik] = std::move(best_sub);
            total += best_o;
        }
        ctx.inputs[k] = -1;
        ctx.guesses[k] = -1;
        if (total > best) {
            best = total;
            best_strat = std::move(strat);
        }
    }
    return {best, best_strat};
}

}  // namespace detail

// Exact optimum of the guess-the-process success probability over all
// deterministic causal strategies, with an achieving strategy.  First parties
// and sub-strategies may be chosen adaptively per upstream input.
inline GameValue best_causal_value(const ProcessTable& w,
                                   std::uint64_t cap = kDefaultInterventionCap) {
    require_swap_game_shapes(w);
    if (w.parties() > 16) throw SizeError("best_causal_value: too many parties");
    long double work = 1.0L;
    for (int k = 0; k < w.parties(); ++k) {
        work *= static_cast<long double>(w.shape(k).i_size) * w.shape(k).o_size;
        work *= (k + 1);
    }
    if (work > static_cast<long double>(cap))
        throw SizeError("best_causal_value: strategy space of about " +
                        std::to_string(static_cast<double>(work)) +
                        " branches exceeds cap " + std::to_string(cap));
    detail::GameContext ctx;
    ctx.w = &w;
    ctx.inputs.assign(w.parties(), -1);
    ctx.guesses.assign(w.parties(), -1);
    auto [count, strat] = detail::best_branch(ctx, (1u << w.parties()) - 1u);
    JointIndexer i_idx(i_sizes(w.shapes()));
    return {Fraction(count, i_idx.size()), strat};
}

}  // namespace pfb
