#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfbasis/errors.hpp"

namespace pfb {

// Local alphabet sizes of one party.  x is the value the party receives from
// the shared process, a the value it feeds back; i/o are the freely chosen
// external input and the reported outcome.  i defaults to a, o defaults to x
// (the swap-game convention).
struct PartyShape {
    int x_size = 1;
    int a_size = 1;
    int i_size = 0;  // 0 = default to a_size
    int o_size = 0;  // 0 = default to x_size

    PartyShape() = default;
    PartyShape(int xs, int as, int is = 0, int os = 0)
        : x_size(xs), a_size(as), i_size(is ? is : as), o_size(os ? os : xs) {
        if (x_size < 1 || a_size < 1 || i_size < 1 || o_size < 1)
            throw ShapeError("PartyShape: all alphabet sizes must be >= 1");
    }

    friend bool operator==(const PartyShape& a, const PartyShape& b) {
        return a.x_size == b.x_size && a.a_size == b.a_size &&
               a.i_size == b.i_size && a.o_size == b.o_size;
    }
};

// Mixed-radix encoding of digit vectors.  Row-major with the LAST party's
// digit varying fastest; every file format and enumeration in this library
// uses this one order.
class JointIndexer {
public:
    JointIndexer() = default;
    explicit JointIndexer(std::vector<int> sizes) : sizes_(std::move(sizes)) {
        strides_.assign(sizes_.size(), 1);
        total_ = 1;
        for (int k = static_cast<int>(sizes_.size()) - 1; k >= 0; --k) {
            if (sizes_[k] < 1) throw ShapeError("JointIndexer: sizes must be >= 1");
            strides_[k] = total_;
            total_ *= sizes_[k];
        }
    }

    std::int64_t size() const { return total_; }
    int digits() const { return static_cast<int>(sizes_.size()); }
    const std::vector<int>& sizes() const { return sizes_; }

    std::int64_t encode(const std::vector<int>& v) const {
        if (static_cast<int>(v.size()) != digits())
            throw ShapeError("encode: expected " + std::to_string(digits()) +
                             " digits, got " + std::to_string(v.size()));
        std::int64_t idx = 0;
        for (int k = 0; k < digits(); ++k) {
            if (v[k] < 0 || v[k] >= sizes_[k])
                throw RangeError("encode: digit " + std::to_string(v[k]) +
                                 " out of range for party " + std::to_string(k));
            idx += strides_[k] * v[k];
        }
        return idx;
    }

    std::vector<int> decode(std::int64_t idx) const {
        if (idx < 0 || idx >= total_)
            throw RangeError("decode: index " + std::to_string(idx) + " out of range");
        std::vector<int> v(digits());
        for (int k = 0; k < digits(); ++k) {
            v[k] = static_cast<int>((idx / strides_[k]) % sizes_[k]);
        }
        return v;
    }

    // In-place odometer step; returns false after the last vector.
    bool next(std::vector<int>& v) const {
        for (int k = digits() - 1; k >= 0; --k) {
            if (++v[k] < sizes_[k]) return true;
            v[k] = 0;
        }
        return false;
    }

private:
    std::vector<int> sizes_;
    std::vector<std::int64_t> strides_;
    std::int64_t total_ = 1;
};

inline std::vector<int> x_sizes(const std::vector<PartyShape>& shapes) {
    std::vector<int> s;
    s.reserve(shapes.size());
    for (const auto& p : shapes) s.push_back(p.x_size);
    return s;
}

inline std::vector<int> a_sizes(const std::vector<PartyShape>& shapes) {
    std::vector<int> s;
    s.reserve(shapes.size());
    for (const auto& p : shapes) s.push_back(p.a_size);
    return s;
}

inline std::vector<int> i_sizes(const std::vector<PartyShape>& shapes) {
    std::vector<int> s;
    s.reserve(shapes.size());
    for (const auto& p : shapes) s.push_back(p.i_size);
    return s;
}

// A candidate deterministic process: one stored x-vector per joint a-index.
// Deliberately stores raw candidates ("quasi-processes") with no validity
// judgment attached; whether the table is a process function is decided
// separately.
class ProcessTable {
public:
    ProcessTable() = default;

    // table[j] is the x-vector returned for the joint a-index j.
    ProcessTable(std::vector<PartyShape> shapes, std::vector<std::vector<int>> table)
        : shapes_(std::move(shapes)),
          a_index_(a_sizes(shapes_)),
          x_index_(x_sizes(shapes_)),
          table_(std::move(table)) {
        if (shapes_.empty()) throw ShapeError("ProcessTable: no parties");
        if (static_cast<std::int64_t>(table_.size()) != a_index_.size())
            throw ShapeError("ProcessTable: table has " + std::to_string(table_.size()) +
                             " rows, expected " + std::to_string(a_index_.size()));
        for (const auto& row : table_) {
            if (static_cast<int>(row.size()) != parties())
                throw ShapeError("ProcessTable: row arity mismatch");
            for (int k = 0; k < parties(); ++k) {
                if (row[k] < 0 || row[k] >= shapes_[k].x_size)
                    throw RangeError("ProcessTable: x digit " + std::to_string(row[k]) +
                                     " out of range for party " + std::to_string(k));
            }
        }
    }

    // Convenience: build from per-party component functions of the joint a-vector.
    template <typename Fn>
    static ProcessTable from_components(std::vector<PartyShape> shapes, Fn&& component) {
        JointIndexer ai(a_sizes(shapes));
        std::vector<std::vector<int>> table;
        table.reserve(static_cast<std::size_t>(ai.size()));
        std::vector<int> a(shapes.size(), 0);
        do {
            std::vector<int> x(shapes.size());
            for (int k = 0; k < static_cast<int>(shapes.size()); ++k)
                x[k] = component(k, a);
            table.push_back(std::move(x));
        } while (ai.next(a));
        return ProcessTable(std::move(shapes), std::move(table));
    }

    int parties() const { return static_cast<int>(shapes_.size()); }
    const std::vector<PartyShape>& shapes() const { return shapes_; }
    const PartyShape& shape(int k) const { return shapes_.at(k); }
    const JointIndexer& a_index() const { return a_index_; }
    const JointIndexer& x_index() const { return x_index_; }
    const std::vector<std::vector<int>>& rows() const { return table_; }

    // x = w(a).  Pure and total on in-range arguments.
    const std::vector<int>& apply(const std::vector<int>& a) const {
        return table_[a_index_.encode(a)];
    }
    const std::vector<int>& apply_at(std::int64_t a_idx) const {
        if (a_idx < 0 || a_idx >= a_index_.size())
            throw RangeError("apply_at: joint index out of range");
        return table_[a_idx];
    }
    int component(int k, const std::vector<int>& a) const { return apply(a)[k]; }

    friend bool operator==(const ProcessTable& a, const ProcessTable& b) {
        return a.shapes_ == b.shapes_ && a.table_ == b.table_;
    }
    friend bool operator!=(const ProcessTable& a, const ProcessTable& b) { return !(a == b); }

    // Canonical serialization; used as a memoization key.
    std::string bytes() const {
        std::string s;
        s.reserve(table_.size() * shapes_.size() + shapes_.size() * 4 + 8);
        for (const auto& p : shapes_) {
            s.push_back(static_cast<char>(p.x_size));
            s.push_back(static_cast<char>(p.a_size));
        }
        s.push_back('|');
        for (const auto& row : table_)
            for (int d : row) s.push_back(static_cast<char>(d));
        return s;
    }

private:
    std::vector<PartyShape> shapes_;
    JointIndexer a_index_;
    JointIndexer x_index_;
    std::vector<std::vector<int>> table_;
};

// A joint deterministic intervention: per party, the graph of f_k as a list
// of a-values indexed by x_k.
struct Intervention {
    std::vector<std::vector<int>> maps;

    int parties() const { return static_cast<int>(maps.size()); }
    int eval(int k, int x) const { return maps[k].at(x); }

    static Intervention identity(const std::vector<PartyShape>& shapes) {
        Intervention f;
        for (const auto& p : shapes) {
            std::vector<int> m(p.x_size);
            for (int x = 0; x < p.x_size; ++x) {
                if (x >= p.a_size)
                    throw ShapeError("identity intervention needs x_size <= a_size");
                m[x] = x;
            }
            f.maps.push_back(std::move(m));
        }
        return f;
    }

    static Intervention constant(const std::vector<PartyShape>& shapes,
                                 const std::vector<int>& a) {
        Intervention f;
        for (std::size_t k = 0; k < shapes.size(); ++k)
            f.maps.push_back(std::vector<int>(shapes[k].x_size, a.at(k)));
        return f;
    }

    friend bool operator==(const Intervention& a, const Intervention& b) {
        return a.maps == b.maps;
    }
};

inline void check_intervention(const ProcessTable& w, const Intervention& f) {
    if (f.parties() != w.parties())
        throw ShapeError("intervention party count mismatch");
    for (int k = 0; k < w.parties(); ++k) {
        if (static_cast<int>(f.maps[k].size()) != w.shape(k).x_size)
            throw ShapeError("intervention map length mismatch for party " + std::to_string(k));
        for (int a : f.maps[k])
            if (a < 0 || a >= w.shape(k).a_size)
                throw RangeError("intervention value " + std::to_string(a) +
                                 " out of range for party " + std::to_string(k));
    }
}

// The composed self-map x -> w(f(x)) as a table over joint x-indices.
inline std::vector<std::vector<int>> compose(const ProcessTable& w, const Intervention& f) {
    check_intervention(w, f);
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(w.x_index().size()));
    std::vector<int> x(w.parties(), 0);
    std::vector<int> a(w.parties());
    do {
        for (int k = 0; k < w.parties(); ++k) a[k] = f.eval(k, x[k]);
        out.push_back(w.apply(a));
    } while (w.x_index().next(x));
    return out;
}

// Full extended local channels f_k : X_k x I_k -> A_k x O_k, stored as a
// flat (x-major) table per party.
struct ExtendedIntervention {
    struct Entry {
        int a = 0;
        int o = 0;
    };
    // tables[k][x * i_size + i]
    std::vector<std::vector<Entry>> tables;

    static ExtendedIntervention make(const std::vector<PartyShape>& shapes) {
        ExtendedIntervention f;
        for (const auto& p : shapes)
            f.tables.emplace_back(static_cast<std::size_t>(p.x_size) * p.i_size);
        return f;
    }

    // a_k := i_k, o_k := x_k.  Feeds the external input straight into the
    // process and reports what the process handed back.
    static ExtendedIntervention swap_wiring(const std::vector<PartyShape>& shapes) {
        ExtendedIntervention f = make(shapes);
        for (std::size_t k = 0; k < shapes.size(); ++k) {
            if (shapes[k].i_size > shapes[k].a_size || shapes[k].x_size > shapes[k].o_size)
                throw ShapeError("swap wiring needs |I|<=|A| and |X|<=|O|");
            for (int x = 0; x < shapes[k].x_size; ++x)
                for (int i = 0; i < shapes[k].i_size; ++i)
                    f.tables[k][static_cast<std::size_t>(x) * shapes[k].i_size + i] = {i, x};
        }
        return f;
    }

    // a_k := x_k, o_k := x_k, ignoring i.
    static ExtendedIntervention identity_wiring(const std::vector<PartyShape>& shapes) {
        ExtendedIntervention f = make(shapes);
        for (std::size_t k = 0; k < shapes.size(); ++k) {
            if (shapes[k].x_size > shapes[k].a_size || shapes[k].x_size > shapes[k].o_size)
                throw ShapeError("identity wiring needs |X|<=|A| and |X|<=|O|");
            for (int x = 0; x < shapes[k].x_size; ++x)
                for (int i = 0; i < shapes[k].i_size; ++i)
                    f.tables[k][static_cast<std::size_t>(x) * shapes[k].i_size + i] = {x, x};
        }
        return f;
    }

    ExtendedIntervention::Entry eval(const PartyShape& shape, int k, int x, int i) const {
        return tables[k].at(static_cast<std::size_t>(x) * shape.i_size + i);
    }
};

}  // namespace pfb
