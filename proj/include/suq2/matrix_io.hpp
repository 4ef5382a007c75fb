#ifndef SUQ2_MATRIX_IO_HPP
#define SUQ2_MATRIX_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "suq2/sparse_operator.hpp"

namespace suq2 {

namespace detail {

// Shortest-exact decimal for a double: 17 significant digits, always with a
// decimal point or exponent so the file is unambiguous ("1" -> "1.0").
inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos &&
        s.find_first_of("nN") == std::string::npos)
        s += ".0";
    return s;
}

} // namespace detail

// Text format, line 1: "rows cols nnz band", then one line per entry
// "row col real imag" in column-major order with 0-based ordinals.
inline void export_matrix(const SparseOperator& A, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("export_matrix: cannot open " + path);
    os << A.codomain().dim() << ' ' << A.domain().dim() << ' ' << A.nnz() << ' ' << A.band()
       << '\n';
    A.for_each_entry([&](std::int64_t r, std::int64_t c, cplx v) {
        os << r << ' ' << c << ' ' << detail::format_real(v.real()) << ' '
           << detail::format_real(v.imag()) << '\n';
    });
    if (!os) throw std::runtime_error("export_matrix: write failed for " + path);
}

// Inverse of export_matrix.  Both dimensions must equal the dimension of some
// TruncatedSpace (full-space operators only).
inline SparseOperator import_matrix(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("import_matrix: cannot open " + path);
    std::int64_t rows = 0, cols = 0, nnz = 0;
    int band = 0;
    if (!(is >> rows >> cols >> nnz >> band))
        throw std::runtime_error("import_matrix: bad header in " + path);
    auto space_for = [&](std::int64_t d) {
        for (int n2 = 0;; ++n2) {
            TruncatedSpace s(n2);
            if (s.dim() == d) return s;
            if (s.dim() > d)
                throw std::runtime_error("import_matrix: dimension matches no truncation");
        }
    };
    TruncatedSpace cod = space_for(rows);
    TruncatedSpace dom = space_for(cols);
    std::vector<SparseOperator::Triplet> trips;
    trips.reserve(static_cast<std::size_t>(nnz));
    for (std::int64_t t = 0; t < nnz; ++t) {
        std::int64_t r = 0, c = 0;
        double re = 0, im = 0;
        if (!(is >> r >> c >> re >> im))
            throw std::runtime_error("import_matrix: truncated entry list in " + path);
        trips.push_back({r, c, cplx(re, im)});
    }
    return SparseOperator::from_triplets(std::move(dom), std::move(cod), band, std::move(trips));
}

} // namespace suq2

#endif
