// Command-line front end: validate, classify and convert process tables and
// product bases stored as JSON documents.
//
// Exit codes: 0 for any successful judgment (including "invalid" and
// "ambiguous" verdicts), 2 for malformed input or an operation that cannot
// produce its output; errors go to stderr as a JSON report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "pfbasis/catalog.hpp"
#include "pfbasis/causality.hpp"
#include "pfbasis/correspondence.hpp"
#include "pfbasis/io.hpp"

namespace {

using json = nlohmann::json;
using namespace pfb;

struct GlobalOpts {
    double tol = kDefaultTol;
    std::uint64_t cap = kDefaultInterventionCap;
    std::uint64_t seed = 0;
    std::string format = "text";
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

void emit(const GlobalOpts& g, const json& machine, const std::string& human) {
    if (g.format == "json")
        std::cout << machine.dump(2) << "\n";
    else
        std::cout << human;
}

json intervention_to_json(const Intervention& f) {
    json maps = json::array();
    for (const auto& m : f.maps) maps.push_back(m);
    return maps;
}

json validity_to_json(const ValidityReport& r) {
    json j{{"valid", r.valid},
           {"method", r.method},
           {"interventions_examined", r.interventions_examined},
           {"used_bruteforce_fallback", r.used_bruteforce_fallback}};
    if (r.witness) {
        j["witness"] = json{{"intervention", intervention_to_json(*r.witness)},
                            {"fixed_points", r.witness_fixed_points}};
    }
    return j;
}

std::string validity_text(const ValidityReport& r) {
    std::string s = std::string(r.valid ? "valid" : "invalid") + " (" + r.method + ", " +
                    std::to_string(r.interventions_examined) +
                    (r.method == "bruteforce" ? " interventions)" : " nodes)");
    if (r.used_bruteforce_fallback) s += " [bruteforce fallback used]";
    if (r.witness) {
        s += "\n  witness intervention:";
        for (const auto& m : r.witness->maps) {
            s += " (";
            for (std::size_t x = 0; x < m.size(); ++x)
                s += (x ? "," : "") + std::to_string(m[x]);
            s += ")";
        }
        s += "\n  fixed points: " + std::to_string(r.witness_fixed_points.size());
    }
    return s + "\n";
}

const char* causality_str(Causality c) {
    switch (c) {
        case Causality::causal: return "causal";
        case Causality::non_causal: return "non_causal";
        default: return "n/a";
    }
}

json verdict_to_json(const Verdict& v) {
    json j{{"validity", v.validity == Validity::valid ? "valid" : "invalid"},
           {"causality", causality_str(v.causality)},
           {"has_global_past", v.has_global_past},
           {"genuinely_non_causal", v.genuinely_non_causal},
           {"global_past_parties", v.global_past_parties},
           {"methods",
            json{{"recursive", true},
                 {"bruteforce_crosschecked", v.bruteforce_crosschecked},
                 {"crosscheck_skipped_by_cap", v.crosscheck_skipped_by_cap}}}};
    if (v.causal_witness) {
        json path = json::array();
        for (auto [k, a] : v.causal_witness->path) path.push_back(json::array({k, a}));
        j["causal_witness"] = json{{"path", path}, {"reason", v.causal_witness->reason}};
    }
    if (v.validity_report.witness)
        j["validity_witness"] =
            json{{"intervention", intervention_to_json(*v.validity_report.witness)},
                 {"fixed_points", v.validity_report.witness_fixed_points}};
    return j;
}

std::string verdict_text(const Verdict& v) {
    std::string s = "validity: ";
    s += v.validity == Validity::valid ? "valid" : "invalid";
    s += "\ncausality: ";
    s += causality_str(v.causality);
    s += "\nglobal past: ";
    if (v.has_global_past) {
        s += "yes (parties";
        for (int k : v.global_past_parties) s += " " + std::to_string(k);
        s += ")";
    } else {
        s += "no";
    }
    s += "\ngenuinely non-causal: ";
    s += v.genuinely_non_causal ? "yes" : "no";
    return s + "\n";
}

json strategy_to_json(const std::shared_ptr<CausalStrategy>& s) {
    if (!s) return nullptr;
    json responses = json::array();
    for (std::size_t i = 0; i < s->guess.size(); ++i)
        responses.push_back(json{{"input", i},
                                 {"guess", s->guess[i]},
                                 {"then", strategy_to_json(s->next[i])}});
    return json{{"party", s->party}, {"responses", responses}};
}

json ambiguity_to_json(const std::optional<AmbiguityWitness>& w) {
    if (!w) return nullptr;
    return json{{"party", w->party},
                {"vector", w->rep_u},
                {"other_vector", w->rep_v},
                {"description", w->description}};
}

int run_pf_validate(const GlobalOpts& g, const std::string& file, const std::string& method) {
    ProcessTable w = io::pf_from_json(load_json_file(file));
    json out;
    std::string text;
    if (method == "brute" || method == "both") {
        auto r = is_valid_bruteforce(w, g.cap);
        out["bruteforce"] = validity_to_json(r);
        text += "bruteforce: " + validity_text(r);
    }
    if (method == "recursive" || method == "both") {
        auto r = is_valid_recursive(w, g.cap);
        out["recursive"] = validity_to_json(r);
        text += "recursive: " + validity_text(r);
    }
    if (method == "both") {
        const bool agree = out["bruteforce"]["valid"] == out["recursive"]["valid"];
        out["agree"] = agree;
        text += std::string("methods agree: ") + (agree ? "yes" : "NO") + "\n";
    }
    emit(g, out, text);
    return 0;
}

int run_pf_classify(const GlobalOpts& g, const std::string& file) {
    ProcessTable w = io::pf_from_json(load_json_file(file));
    Verdict v = classify(w, g.cap);
    emit(g, verdict_to_json(v), verdict_text(v));
    return 0;
}

int run_pf_game(const GlobalOpts& g, const std::string& file) {
    ProcessTable w = io::pf_from_json(load_json_file(file));
    Fraction bound = causal_bound(i_sizes(w.shapes()));
    GameValue best = best_causal_value(w, g.cap);
    Fraction swp = swap_value(w, g.cap);
    json out{{"causal_bound", bound.str()},
             {"best_causal_value", best.value.str()},
             {"swap_value", swp.str()},
             {"strategy", strategy_to_json(best.strategy)}};
    std::string text = "causal bound: " + bound.str() +
                       "\nbest causal value: " + best.value.str() +
                       "\nswap value: " + swp.str() + "\n";
    emit(g, out, text);
    return 0;
}

int run_pf_to_basis(const GlobalOpts& g, const std::string& file,
                    const std::string& unitaries_file) {
    ProcessTable w = io::pf_from_json(load_json_file(file));
    UnitaryFamily U = unitaries_file.empty()
                          ? default_unitaries(w.shapes(), g.seed, g.tol)
                          : io::unitaries_from_json(load_json_file(unitaries_file), g.tol);
    ProductBasis S = pf_to_basis(w, U, g.tol, g.cap);
    json out = io::basis_to_json(S);
    emit(g, out, out.dump(2) + "\n");
    return 0;
}

int run_basis_check(const GlobalOpts& g, const std::string& file) {
    ProductBasis S = io::basis_from_json(load_json_file(file), g.tol);
    auto comp = is_complete_orthonormal(S, g.tol);
    json out{{"complete", comp.complete},
             {"count_ok", comp.count_ok},
             {"max_deviation", comp.max_deviation},
             {"unambiguous", nullptr},
             {"ambiguity_witness", nullptr},
             {"weakly_unambiguous", nullptr},
             {"exclusivity", nullptr}};
    std::string text = std::string("complete: ") + (comp.complete ? "yes" : "no") +
                       " (max deviation " + std::to_string(comp.max_deviation) + ")\n";
    if (comp.complete) {
        auto ua = is_unambiguous(S, g.tol);
        out["unambiguous"] = ua.unambiguous;
        out["ambiguity_witness"] = ambiguity_to_json(ua.witness);
        text += std::string("unambiguous: ") + (ua.unambiguous ? "yes" : "no") + "\n";
        if (ua.witness) text += "  " + ua.witness->description + "\n";
    }
    if (S.labels) {
        auto weak = is_weakly_unambiguous(S, g.tol);
        out["weakly_unambiguous"] = weak.weakly_unambiguous;
        auto ex = pairwise_exclusivity(*S.labels);
        out["exclusivity"] = ex.exclusive;
        if (ex.violating_pair)
            out["exclusivity_violation"] =
                json::array({ex.violating_pair->first, ex.violating_pair->second});
        text += std::string("weakly unambiguous: ") +
                (weak.weakly_unambiguous ? "yes" : "no") + "\n";
        text += std::string("labels pairwise exclusive: ") + (ex.exclusive ? "yes" : "no");
        if (ex.violating_pair)
            text += " (states " + std::to_string(ex.violating_pair->first) + ", " +
                    std::to_string(ex.violating_pair->second) + ")";
        text += "\n";
    }
    emit(g, out, text);
    return 0;
}

int run_basis_to_pf(const GlobalOpts& g, const std::string& file) {
    ProductBasis S = io::basis_from_json(load_json_file(file), g.tol);
    BasisToPfResult r = basis_to_pf(S, g.tol, g.cap);
    json labels = json::array();
    for (const auto& l : r.labels) labels.push_back(json{{"a", l.a}, {"x", l.x}});
    json out{{"pf", io::pf_to_json(r.table)},
             {"labels", labels},
             {"validity", validity_to_json(r.validity)}};
    emit(g, out, out.dump(2) + "\n");
    return 0;
}

int run_basis_classify(const GlobalOpts& g, const std::string& file) {
    ProductBasis S = io::basis_from_json(load_json_file(file), g.tol);
    BasisVerdict v = classify_basis(S, g.tol, g.cap);
    json out{{"kind", to_string(v.kind)},
             {"completeness",
              json{{"complete", v.completeness.complete},
                   {"count_ok", v.completeness.count_ok},
                   {"max_deviation", v.completeness.max_deviation}}},
             {"ambiguity_witness", ambiguity_to_json(v.ambiguity_witness)}};
    if (v.derived_pf) out["derived_pf"] = io::pf_to_json(*v.derived_pf);
    if (v.pf_verdict) out["pf_verdict"] = verdict_to_json(*v.pf_verdict);
    std::string text = std::string("kind: ") + to_string(v.kind) + "\n";
    if (v.ambiguity_witness) text += "  " + v.ambiguity_witness->description + "\n";
    if (v.pf_verdict) text += verdict_text(*v.pf_verdict);
    emit(g, out, text);
    return 0;
}

int run_basis_repair(const GlobalOpts& g, const std::string& file) {
    ProductBasis S = io::basis_from_json(load_json_file(file), g.tol);
    ProductBasis out = repair_rotation(S, g.seed, g.tol);
    json doc = io::basis_to_json(out);
    emit(g, doc, doc.dump(2) + "\n");
    return 0;
}

int run_catalog_list(const GlobalOpts& g) {
    json out = json::array();
    std::string text;
    for (const auto& e : catalog::entries()) {
        out.push_back(json{{"name", e.name}, {"kind", e.kind}, {"provenance", e.provenance}});
        text += e.name + "  [" + e.kind + "]  " + e.provenance + "\n";
    }
    emit(g, json{{"entries", out}}, text);
    return 0;
}

int run_catalog_show(const GlobalOpts& g, const std::string& name,
                     const std::string& export_dir) {
    catalog::CatalogEntry e = catalog::get(name);
    json out{{"name", e.name}, {"kind", e.kind}, {"provenance", e.provenance}};
    if (e.pf) out["pf"] = io::pf_to_json(*e.pf);
    if (e.basis) out["basis"] = io::basis_to_json(*e.basis);
    if (e.unitaries) out["unitaries"] = io::unitaries_to_json(*e.unitaries);
    if (!export_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(export_dir);
        auto write = [&](const std::string& suffix, const json& doc) {
            const std::string path = (fs::path(export_dir) / (name + suffix)).string();
            std::ofstream f(path);
            if (!f) throw InputError("cannot write " + path);
            f << doc.dump(2) << "\n";
        };
        if (e.pf) write(".pf.json", io::pf_to_json(*e.pf));
        if (e.basis) write(".basis.json", io::basis_to_json(*e.basis));
        if (e.unitaries) write(".unitaries.json", io::unitaries_to_json(*e.unitaries));
    }
    emit(g, out, out.dump(2) + "\n");
    return 0;
}

const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const InputError*>(&e)) return "input";
    if (dynamic_cast<const RangeError*>(&e)) return "range";
    if (dynamic_cast<const ShapeError*>(&e)) return "shape";
    if (dynamic_cast<const SizeError*>(&e)) return "size";
    if (dynamic_cast<const ConsistencyError*>(&e)) return "consistency";
    return "error";
}

}  // namespace

int main(int argc, char** argv) {
    GlobalOpts g;
    CLI::App app{"process-table and product-basis toolkit"};
    app.require_subcommand(1);
    app.add_option("--tol", g.tol, "numerical tolerance")->capture_default_str();
    app.add_option("--cap", g.cap, "cap on exhaustive search sizes")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for generated unitaries")->capture_default_str();
    app.add_option("--format", g.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    std::string file, unitaries_file, method = "both", name, export_dir;

    auto* pf = app.add_subcommand("pf", "operations on process tables");
    pf->fallthrough();
    pf->require_subcommand(1);
    auto* pf_validate = pf->add_subcommand("validate", "decide validity");
    pf_validate->fallthrough();
    pf_validate->add_option("file", file)->required();
    pf_validate->add_option("--method", method, "brute|recursive|both")
        ->check(CLI::IsMember({"brute", "recursive", "both"}));
    auto* pf_classify = pf->add_subcommand("classify", "validity + causal structure");
    pf_classify->fallthrough();
    pf_classify->add_option("file", file)->required();
    auto* pf_game = pf->add_subcommand("game", "guess-the-process game values");
    pf_game->fallthrough();
    pf_game->add_option("file", file)->required();
    auto* pf_to_basis = pf->add_subcommand("to-basis", "encode into a product basis");
    pf_to_basis->fallthrough();
    pf_to_basis->add_option("file", file)->required();
    pf_to_basis->add_option("--unitaries", unitaries_file, "unitaries document");

    auto* basis = app.add_subcommand("basis", "operations on product bases");
    basis->fallthrough();
    basis->require_subcommand(1);
    auto* basis_check = basis->add_subcommand("check", "completeness and unambiguity");
    basis_check->fallthrough();
    basis_check->add_option("file", file)->required();
    auto* basis_to_pf_cmd = basis->add_subcommand("to-pf", "derive the process table");
    basis_to_pf_cmd->fallthrough();
    basis_to_pf_cmd->add_option("file", file)->required();
    auto* basis_classify = basis->add_subcommand("classify", "full basis verdict");
    basis_classify->fallthrough();
    basis_classify->add_option("file", file)->required();
    auto* basis_repair = basis->add_subcommand("repair", "rotate away accidental orthogonality");
    basis_repair->fallthrough();
    basis_repair->add_option("file", file)->required();

    auto* cat = app.add_subcommand("catalog", "built-in named instances");
    cat->fallthrough();
    cat->require_subcommand(1);
    cat->add_subcommand("list", "list catalog entries")->fallthrough();
    auto* cat_show = cat->add_subcommand("show", "print one entry");
    cat_show->fallthrough();
    cat_show->add_option("name", name)->required();
    cat_show->add_option("--export", export_dir, "write documents into this directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pf_validate->parsed()) return run_pf_validate(g, file, method);
        if (pf_classify->parsed()) return run_pf_classify(g, file);
        if (pf_game->parsed()) return run_pf_game(g, file);
        if (pf_to_basis->parsed()) return run_pf_to_basis(g, file, unitaries_file);
        if (basis_check->parsed()) return run_basis_check(g, file);
        if (basis_to_pf_cmd->parsed()) return run_basis_to_pf(g, file);
        if (basis_classify->parsed()) return run_basis_classify(g, file);
        if (basis_repair->parsed()) return run_basis_repair(g, file);
        if (cat->get_subcommand("list")->parsed()) return run_catalog_list(g);
        if (cat_show->parsed()) return run_catalog_show(g, name, export_dir);
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", {{"kind", error_kind(e)}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
    std::cerr << R"({"error":{"kind":"usage","message":"no subcommand"}})" << "\n";
    return 2;
}
