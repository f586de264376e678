#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "pfbasis/basis.hpp"
#include "pfbasis/core.hpp"
#include "pfbasis/correspondence.hpp"
#include "pfbasis/errors.hpp"

namespace pfb::io {

using json = nlohmann::json;

inline void reject_unknown_fields(const json& j, std::initializer_list<const char*> allowed,
                                  const char* doc) {
    if (!j.is_object()) throw InputError(std::string(doc) + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok)
            throw InputError(std::string(doc) + ": unknown field '" + it.key() + "'");
    }
}

// ---------------------------------------------------------------------------
// PfDocument
// ---------------------------------------------------------------------------

inline json pf_to_json(const ProcessTable& w) {
    json parties = json::array();
    for (const auto& p : w.shapes()) {
        json jp{{"x_size", p.x_size}, {"a_size", p.a_size}};
        if (p.i_size != p.a_size) jp["i_size"] = p.i_size;
        if (p.o_size != p.x_size) jp["o_size"] = p.o_size;
        parties.push_back(std::move(jp));
    }
    return json{{"parties", std::move(parties)}, {"table", w.rows()}};
}

inline ProcessTable pf_from_json(const json& j) {
    reject_unknown_fields(j, {"parties", "table"}, "PfDocument");
    if (!j.contains("parties") || !j.contains("table"))
        throw InputError("PfDocument: 'parties' and 'table' are required");
    std::vector<PartyShape> shapes;
    for (const auto& jp : j.at("parties")) {
        reject_unknown_fields(jp, {"x_size", "a_size", "i_size", "o_size"},
                              "PfDocument.parties");
        if (!jp.contains("x_size") || !jp.contains("a_size"))
            throw InputError("PfDocument: party needs x_size and a_size");
        shapes.emplace_back(jp.at("x_size").get<int>(), jp.at("a_size").get<int>(),
                            jp.value("i_size", 0), jp.value("o_size", 0));
    }
    std::vector<std::vector<int>> table;
    for (const auto& row : j.at("table")) table.push_back(row.get<std::vector<int>>());
    return ProcessTable(std::move(shapes), std::move(table));
}

// ---------------------------------------------------------------------------
// Complex helpers
// ---------------------------------------------------------------------------

inline json cplx_to_json(const cplx& c) { return json::array({c.real(), c.imag()}); }

inline cplx cplx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw InputError("complex numbers are [re, im] pairs");
    return cplx(j.at(0).get<double>(), j.at(1).get<double>());
}

inline json cvec_to_json(const Cvec& v) {
    json out = json::array();
    for (const auto& c : v.e) out.push_back(cplx_to_json(c));
    return out;
}

inline Cvec cvec_from_json(const json& j) {
    Cvec v;
    for (const auto& c : j) v.e.push_back(cplx_from_json(c));
    return v;
}

// ---------------------------------------------------------------------------
// BasisDocument
// ---------------------------------------------------------------------------

inline json basis_to_json(const ProductBasis& S) {
    json states = json::array();
    for (const auto& st : S.states) {
        json locals = json::array();
        for (const auto& v : st.locals) locals.push_back(cvec_to_json(v));
        states.push_back(std::move(locals));
    }
    json out{{"dims", S.dims}, {"states", std::move(states)}};
    if (S.labels) {
        json labels = json::array();
        for (const auto& l : *S.labels) labels.push_back(json{{"a", l.a}, {"x", l.x}});
        out["labels"] = std::move(labels);
    }
    return out;
}

inline ProductBasis basis_from_json(const json& j, double tol = kDefaultTol,
                                    double* tol_out = nullptr) {
    reject_unknown_fields(j, {"dims", "states", "labels", "tol"}, "BasisDocument");
    if (!j.contains("dims") || !j.contains("states"))
        throw InputError("BasisDocument: 'dims' and 'states' are required");
    if (j.contains("tol") && tol_out) *tol_out = j.at("tol").get<double>();
    const double use_tol = j.value("tol", tol);
    ProductBasis S;
    S.dims = j.at("dims").get<std::vector<int>>();
    for (int d : S.dims)
        if (d < 1) throw InputError("BasisDocument: dims must be >= 1");
    for (const auto& js : j.at("states")) {
        ProductState st;
        for (const auto& jv : js) st.locals.push_back(cvec_from_json(jv));
        S.states.push_back(std::move(st));
    }
    if (j.contains("labels")) {
        EventLabeling labels;
        for (const auto& jl : j.at("labels")) {
            reject_unknown_fields(jl, {"a", "x"}, "BasisDocument.labels");
            labels.push_back(EventLabel{jl.at("a").get<std::vector<int>>(),
                                        jl.at("x").get<std::vector<int>>()});
        }
        S.labels = std::move(labels);
    }
    S.check_shape();
    for (const auto& st : S.states)
        for (const auto& v : st.locals)
            if (std::abs(norm(v) - 1.0) > use_tol)
                throw InputError("BasisDocument: local vector is not normalized");
    return S;
}

// ---------------------------------------------------------------------------
// UnitariesDocument
// ---------------------------------------------------------------------------

inline json unitaries_to_json(const UnitaryFamily& U) {
    json parties = json::array();
    for (const auto& fam : U.parties) {
        json jf = json::array();
        for (const auto& m : fam) {
            json rows = json::array();
            for (int r = 0; r < m.rows; ++r) {
                json row = json::array();
                for (int c = 0; c < m.cols; ++c) row.push_back(cplx_to_json(m.at(r, c)));
                rows.push_back(std::move(row));
            }
            jf.push_back(std::move(rows));
        }
        parties.push_back(std::move(jf));
    }
    return json{{"parties", std::move(parties)}};
}

inline UnitaryFamily unitaries_from_json(const json& j, double tol = kDefaultTol) {
    reject_unknown_fields(j, {"parties"}, "UnitariesDocument");
    if (!j.contains("parties"))
        throw InputError("UnitariesDocument: 'parties' is required");
    UnitaryFamily U;
    for (const auto& jf : j.at("parties")) {
        std::vector<Matrix> fam;
        for (const auto& jm : jf) {
            const int rows = static_cast<int>(jm.size());
            Matrix m(rows, rows);
            int r = 0;
            for (const auto& jrow : jm) {
                if (static_cast<int>(jrow.size()) != rows)
                    throw InputError("UnitariesDocument: matrices must be square");
                for (int c = 0; c < rows; ++c) m.at(r, c) = cplx_from_json(jrow.at(c));
                ++r;
            }
            if (!is_unitary(m, tol))
                throw InputError("UnitariesDocument: matrix is not unitary within tol");
            fam.push_back(std::move(m));
        }
        U.parties.push_back(std::move(fam));
    }
    return U;
}

}  // namespace pfb::io
