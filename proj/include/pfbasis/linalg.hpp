#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "pfbasis/errors.hpp"

namespace pfb {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;

// A vector in C^d.
struct Cvec {
    std::vector<cplx> e;

    Cvec() = default;
    explicit Cvec(std::vector<cplx> entries) : e(std::move(entries)) {}
    int dim() const { return static_cast<int>(e.size()); }
    static Cvec basis_vector(int d, int j) {
        Cvec v;
        v.e.assign(d, cplx(0, 0));
        v.e.at(j) = cplx(1, 0);
        return v;
    }
};

inline cplx inner(const Cvec& u, const Cvec& v) {
    if (u.dim() != v.dim()) throw ShapeError("inner: dimension mismatch");
    cplx s(0, 0);
    for (int i = 0; i < u.dim(); ++i) s += std::conj(u.e[i]) * v.e[i];
    return s;
}

inline double norm(const Cvec& u) { return std::sqrt(std::abs(inner(u, u))); }

inline Cvec normalized(Cvec u) {
    const double n = norm(u);
    if (n == 0.0) throw ShapeError("normalized: zero vector");
    for (auto& c : u.e) c /= n;
    return u;
}

// Equality up to a global phase.
inline bool same_up_to_phase(const Cvec& u, const Cvec& v, double tol = kDefaultTol) {
    return std::abs(inner(u, v)) > 1.0 - tol;
}

inline bool orthogonal(const Cvec& u, const Cvec& v, double tol = kDefaultTol) {
    return std::abs(inner(u, v)) < tol;
}

// Dense complex matrix, row-major.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> e;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), e(static_cast<std::size_t>(r) * c, cplx(0, 0)) {}

    cplx& at(int r, int c) { return e[static_cast<std::size_t>(r) * cols + c]; }
    const cplx& at(int r, int c) const { return e[static_cast<std::size_t>(r) * cols + c]; }

    static Matrix identity(int d) {
        Matrix m(d, d);
        for (int i = 0; i < d; ++i) m.at(i, i) = cplx(1, 0);
        return m;
    }

    Matrix adjoint() const {
        Matrix m(cols, rows);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m.at(c, r) = std::conj(at(r, c));
        return m;
    }

    Cvec column(int c) const {
        Cvec v;
        v.e.resize(rows);
        for (int r = 0; r < rows; ++r) v.e[r] = at(r, c);
        return v;
    }
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw ShapeError("matrix product: dimension mismatch");
    Matrix m(a.rows, b.cols);
    for (int r = 0; r < a.rows; ++r)
        for (int k = 0; k < a.cols; ++k) {
            const cplx av = a.at(r, k);
            if (av == cplx(0, 0)) continue;
            for (int c = 0; c < b.cols; ++c) m.at(r, c) += av * b.at(k, c);
        }
    return m;
}

inline Cvec operator*(const Matrix& m, const Cvec& v) {
    if (m.cols != v.dim()) throw ShapeError("matrix*vector: dimension mismatch");
    Cvec out;
    out.e.assign(m.rows, cplx(0, 0));
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) out.e[r] += m.at(r, c) * v.e[c];
    return out;
}

inline double unitarity_deviation(const Matrix& u) {
    if (u.rows != u.cols) return 1.0;
    Matrix g = u.adjoint() * u;
    double dev = 0.0;
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) {
            const double target = (r == c) ? 1.0 : 0.0;
            dev = std::max(dev, std::abs(g.at(r, c) - cplx(target, 0)));
        }
    return dev;
}

inline bool is_unitary(const Matrix& u, double tol = kDefaultTol) {
    return u.rows == u.cols && unitarity_deviation(u) < tol;
}

// H = (1/sqrt2) [[1,1],[1,-1]]
inline Matrix hadamard2() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    m.at(0, 0) = s;
    m.at(0, 1) = s;
    m.at(1, 0) = s;
    m.at(1, 1) = -s;
    return m;
}

// Discrete Fourier matrix: F|a> = (1/sqrt d) sum_j w^{ja} |j>, w = exp(2 pi i / d).
inline Matrix fourier(int d) {
    Matrix m(d, d);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
        for (int a = 0; a < d; ++a) {
            const double phi = 2.0 * M_PI * j * a / d;
            m.at(j, a) = cplx(s * std::cos(phi), s * std::sin(phi));
        }
    return m;
}

// Portable deterministic pseudo-random stream (the standard distributions are
// implementation-defined, so roll uniforms and Box-Muller by hand).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : rng_(seed) {}

    double uniform01() {
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 1e-300) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    cplx gaussian_cplx() {
        const double re = gaussian();
        const double im = gaussian();
        return cplx(re, im);
    }

private:
    std::mt19937_64 rng_;
};

// Haar-like random unitary: Gram-Schmidt on a random complex Gaussian matrix.
inline Matrix random_unitary(int d, RandomStream& rng) {
    while (true) {
        std::vector<Cvec> cols;
        bool ok = true;
        for (int c = 0; c < d && ok; ++c) {
            Cvec v;
            v.e.resize(d);
            for (int r = 0; r < d; ++r) v.e[r] = rng.gaussian_cplx();
            for (const auto& prev : cols) {
                const cplx ip = inner(prev, v);
                for (int r = 0; r < d; ++r) v.e[r] -= ip * prev.e[r];
            }
            if (norm(v) < 1e-6) {
                ok = false;  // degenerate draw, start over
                break;
            }
            cols.push_back(normalized(std::move(v)));
        }
        if (!ok) continue;
        Matrix m(d, d);
        for (int c = 0; c < d; ++c)
            for (int r = 0; r < d; ++r) m.at(r, c) = cols[c].e[r];
        return m;
    }
}

}  // namespace pfb
