#ifndef SUQ2_SPARSE_OPERATOR_HPP
#define SUQ2_SPARSE_OPERATOR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "suq2/basis.hpp"
#include "suq2/errors.hpp"

namespace suq2 {

using cplx = std::complex<double>;

// Sparse matrix between truncated spaces, compressed-sparse-column, immutable
// after construction.  `band` is the largest |n2(row) - n2(col)| the operator
// can produce; columns in interior(band) are truncation-exact.
class SparseOperator {
public:
    struct Triplet {
        std::int64_t row;
        std::int64_t col;
        cplx val;
    };

    static SparseOperator from_triplets(TruncatedSpace domain, TruncatedSpace codomain, int band,
                                        std::vector<Triplet> trips) {
        SparseOperator A(std::move(domain), std::move(codomain), band);
        std::sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
            return a.col != b.col ? a.col < b.col : a.row < b.row;
        });
        const std::int64_t ncols = A.domain_.dim();
        A.col_ptr_.assign(static_cast<std::size_t>(ncols) + 1, 0);
        A.rows_.reserve(trips.size());
        A.vals_.reserve(trips.size());
        for (std::size_t t = 0; t < trips.size(); ++t) {
            if (t > 0 && trips[t].col == trips[t - 1].col && trips[t].row == trips[t - 1].row)
                throw config_error("from_triplets: duplicate (row,col) entry");
            if (trips[t].row < 0 || trips[t].row >= A.codomain_.dim() || trips[t].col < 0 ||
                trips[t].col >= ncols)
                throw config_error("from_triplets: ordinal out of range");
            A.rows_.push_back(trips[t].row);
            A.vals_.push_back(trips[t].val);
            ++A.col_ptr_[static_cast<std::size_t>(trips[t].col) + 1];
        }
        for (std::size_t c = 1; c < A.col_ptr_.size(); ++c) A.col_ptr_[c] += A.col_ptr_[c - 1];
        return A;
    }

    static SparseOperator identity(const TruncatedSpace& s) {
        std::vector<Triplet> t;
        t.reserve(static_cast<std::size_t>(s.dim()));
        for (std::int64_t k = 0; k < s.dim(); ++k) t.push_back({k, k, cplx(1.0, 0.0)});
        return from_triplets(s, s, 0, std::move(t));
    }

    static SparseOperator zero(const TruncatedSpace& s) {
        return from_triplets(s, s, 0, {});
    }

    const TruncatedSpace& domain() const { return domain_; }
    const TruncatedSpace& codomain() const { return codomain_; }
    int band() const { return band_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(vals_.size()); }

    cplx entry(std::int64_t row, std::int64_t col) const {
        const auto b = col_ptr_[static_cast<std::size_t>(col)];
        const auto e = col_ptr_[static_cast<std::size_t>(col) + 1];
        const auto it = std::lower_bound(rows_.begin() + b, rows_.begin() + e, row);
        if (it != rows_.begin() + e && *it == row)
            return vals_[static_cast<std::size_t>(it - rows_.begin())];
        return cplx(0.0, 0.0);
    }

    template <class Fn> // fn(row, col, val)
    void for_each_entry(Fn&& fn) const {
        for (std::int64_t c = 0; c < domain_.dim(); ++c)
            for (auto t = col_ptr_[static_cast<std::size_t>(c)];
                 t < col_ptr_[static_cast<std::size_t>(c) + 1]; ++t)
                fn(rows_[static_cast<std::size_t>(t)], c, vals_[static_cast<std::size_t>(t)]);
    }

    // y = A x, using only columns [0, col_limit)
    void apply(std::span<const cplx> x, std::span<cplx> y, std::int64_t col_limit = -1) const {
        if (col_limit < 0) col_limit = domain_.dim();
        std::fill(y.begin(), y.end(), cplx(0.0, 0.0));
        for (std::int64_t c = 0; c < col_limit; ++c) {
            const cplx xc = x[static_cast<std::size_t>(c)];
            if (xc == cplx(0.0, 0.0)) continue;
            for (auto t = col_ptr_[static_cast<std::size_t>(c)];
                 t < col_ptr_[static_cast<std::size_t>(c) + 1]; ++t)
                y[static_cast<std::size_t>(rows_[static_cast<std::size_t>(t)])] +=
                    vals_[static_cast<std::size_t>(t)] * xc;
        }
    }

    // y = A^H x, reporting only components [0, col_limit)
    void apply_adjoint(std::span<const cplx> x, std::span<cplx> y,
                       std::int64_t col_limit = -1) const {
        if (col_limit < 0) col_limit = domain_.dim();
        std::fill(y.begin(), y.end(), cplx(0.0, 0.0));
        for (std::int64_t c = 0; c < col_limit; ++c) {
            cplx acc(0.0, 0.0);
            for (auto t = col_ptr_[static_cast<std::size_t>(c)];
                 t < col_ptr_[static_cast<std::size_t>(c) + 1]; ++t)
                acc += std::conj(vals_[static_cast<std::size_t>(t)]) *
                       x[static_cast<std::size_t>(rows_[static_cast<std::size_t>(t)])];
            y[static_cast<std::size_t>(c)] = acc;
        }
    }

    SparseOperator multiply(const SparseOperator& rhs) const { // this * rhs
        if (!(domain_ == rhs.codomain_))
            throw space_mismatch("multiply: inner spaces differ");
        std::vector<Triplet> out;
        std::vector<cplx> acc(static_cast<std::size_t>(codomain_.dim()), cplx(0, 0));
        std::vector<std::int64_t> touched;
        for (std::int64_t c = 0; c < rhs.domain_.dim(); ++c) {
            touched.clear();
            for (auto t = rhs.col_ptr_[static_cast<std::size_t>(c)];
                 t < rhs.col_ptr_[static_cast<std::size_t>(c) + 1]; ++t) {
                const std::int64_t mid = rhs.rows_[static_cast<std::size_t>(t)];
                const cplx w = rhs.vals_[static_cast<std::size_t>(t)];
                for (auto u = col_ptr_[static_cast<std::size_t>(mid)];
                     u < col_ptr_[static_cast<std::size_t>(mid) + 1]; ++u) {
                    const std::int64_t r = rows_[static_cast<std::size_t>(u)];
                    if (acc[static_cast<std::size_t>(r)] == cplx(0, 0))
                        touched.push_back(r);
                    acc[static_cast<std::size_t>(r)] += vals_[static_cast<std::size_t>(u)] * w;
                }
            }
            std::sort(touched.begin(), touched.end());
            for (const std::int64_t r : touched) {
                const cplx v = acc[static_cast<std::size_t>(r)];
                acc[static_cast<std::size_t>(r)] = cplx(0, 0);
                if (v != cplx(0, 0)) out.push_back({r, c, v});
            }
        }
        return from_triplets(rhs.domain_, codomain_, band_ + rhs.band_, std::move(out));
    }

    SparseOperator axpy(cplx a, const SparseOperator& other) const { // this + a*other
        if (!(domain_ == other.domain_) || !(codomain_ == other.codomain_))
            throw space_mismatch("axpy: spaces differ");
        std::vector<Triplet> out;
        out.reserve(vals_.size() + other.vals_.size());
        for_each_entry([&](std::int64_t r, std::int64_t c, cplx v) { out.push_back({r, c, v}); });
        other.for_each_entry(
            [&](std::int64_t r, std::int64_t c, cplx v) { out.push_back({r, c, a * v}); });
        std::sort(out.begin(), out.end(), [](const Triplet& x, const Triplet& y) {
            return x.col != y.col ? x.col < y.col : x.row < y.row;
        });
        std::vector<Triplet> merged;
        merged.reserve(out.size());
        for (const auto& t : out) {
            if (!merged.empty() && merged.back().col == t.col && merged.back().row == t.row)
                merged.back().val += t.val;
            else
                merged.push_back(t);
        }
        std::erase_if(merged, [](const Triplet& t) { return t.val == cplx(0, 0); });
        return from_triplets(domain_, codomain_, std::max(band_, other.band_), std::move(merged));
    }

    SparseOperator scaled(cplx a) const {
        std::vector<Triplet> out;
        out.reserve(vals_.size());
        for_each_entry([&](std::int64_t r, std::int64_t c, cplx v) { out.push_back({r, c, a * v}); });
        return from_triplets(domain_, codomain_, band_, std::move(out));
    }

    SparseOperator adjoint() const {
        std::vector<Triplet> out;
        out.reserve(vals_.size());
        for_each_entry([&](std::int64_t r, std::int64_t c, cplx v) {
            out.push_back({c, r, std::conj(v)});
        });
        return from_triplets(codomain_, domain_, band_, std::move(out));
    }

    double max_abs(std::int64_t col_limit = -1) const {
        if (col_limit < 0) col_limit = domain_.dim();
        double m = 0.0;
        for (std::int64_t c = 0; c < col_limit; ++c)
            for (auto t = col_ptr_[static_cast<std::size_t>(c)];
                 t < col_ptr_[static_cast<std::size_t>(c) + 1]; ++t)
                m = std::max(m, std::abs(vals_[static_cast<std::size_t>(t)]));
        return m;
    }

    double column_norm(std::int64_t c) const {
        double s = 0.0;
        for (auto t = col_ptr_[static_cast<std::size_t>(c)];
             t < col_ptr_[static_cast<std::size_t>(c) + 1]; ++t)
            s += std::norm(vals_[static_cast<std::size_t>(t)]);
        return std::sqrt(s);
    }

private:
    SparseOperator(TruncatedSpace dom, TruncatedSpace cod, int band)
        : domain_(std::move(dom)), codomain_(std::move(cod)), band_(band) {}

    TruncatedSpace domain_;
    TruncatedSpace codomain_;
    int band_;
    std::vector<std::int64_t> col_ptr_;
    std::vector<std::int64_t> rows_;
    std::vector<cplx> vals_;
};

inline SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
    return a.multiply(b);
}
inline SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
    return a.axpy(cplx(1, 0), b);
}
inline SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
    return a.axpy(cplx(-1, 0), b);
}

// Largest singular value of the submatrix formed by columns [0, col_limit),
// by power iteration on A^H A.  Deterministic start vector; the estimate
// converges to sigma_max from below, so "<= bound" checks are conservative.
inline double largest_singular_value(const SparseOperator& A, std::int64_t col_limit = -1,
                                     int max_iters = 30000, double rel_tol = 1e-13) {
    if (col_limit < 0) col_limit = A.domain().dim();
    if (col_limit == 0 || A.nnz() == 0) return 0.0;
    const auto nrows = static_cast<std::size_t>(A.codomain().dim());
    std::vector<cplx> v(static_cast<std::size_t>(col_limit));
    std::vector<cplx> w(nrows), z(static_cast<std::size_t>(col_limit));
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& x : v) x = cplx(u(rng), 0.0);
    auto normalize = [](std::vector<cplx>& x) {
        double s = 0.0;
        for (const auto& c : x) s += std::norm(c);
        s = std::sqrt(s);
        if (s > 0.0)
            for (auto& c : x) c /= s;
        return s;
    };
    normalize(v);
    double sigma = 0.0;
    int stable = 0;
    for (int it = 0; it < max_iters; ++it) {
        A.apply(v, w, col_limit);
        double nw = 0.0;
        for (const auto& c : w) nw += std::norm(c);
        nw = std::sqrt(nw);
        if (nw == 0.0) return 0.0;
        A.apply_adjoint(w, z, col_limit);
        const double nz = normalize(z);
        v.swap(z);
        const double est = nz / nw; // ||A^H w|| / ||w|| with w = A v: Rayleigh-style estimate
        const double prev = sigma;
        sigma = std::max(est, nw); // nw = ||A v|| is itself a lower bound
        if (std::abs(sigma - prev) <= rel_tol * std::max(1.0, sigma)) {
            if (++stable >= 3) break;
        } else {
            stable = 0;
        }
    }
    return sigma;
}

} // namespace suq2

#endif
