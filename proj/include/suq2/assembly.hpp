#ifndef SUQ2_ASSEMBLY_HPP
#define SUQ2_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "suq2/coefficients.hpp"
#include "suq2/sparse_operator.hpp"

namespace suq2 {

enum class GeneratorTag { alpha, alpha_star, beta, beta_star, a0, a1, a1_star, identity };

constexpr const char* to_string(GeneratorTag g) {
    switch (g) {
        case GeneratorTag::alpha: return "alpha";
        case GeneratorTag::alpha_star: return "alpha_star";
        case GeneratorTag::beta: return "beta";
        case GeneratorTag::beta_star: return "beta_star";
        case GeneratorTag::a0: return "A0";
        case GeneratorTag::a1: return "A1";
        case GeneratorTag::a1_star: return "A1_star";
        case GeneratorTag::identity: return "identity";
    }
    return "?";
}

namespace detail {

// Entry weight of the dual generator A1: e^(n)_{ij} -> w(n,j) e^(n)_{i,j+1},
// zero at j=n.  The argument of the square root is (q^{-2n}+q^{2n+2}) -
// (q^{-2j}+q^{2j+2}) >= 0 for |j| <= n.
inline double a1_weight(double q, int n2, int j2) {
    const double v = qpow(q, -n2) + qpow(q, n2 + 2) - qpow(q, -j2) - qpow(q, j2 + 2);
    return std::sqrt(v);
}

} // namespace detail

// Matrix of a single generator on the truncation.  Components whose target
// leaves the truncation are dropped; measurements are made on interior
// columns where the column is exact.
inline SparseOperator build_generator(const TruncatedSpace& space, const DeformationParam& p,
                                      GeneratorTag g) {
    if (space.dim() == 0) throw config_error("build_generator: empty space");
    if (!p.is_quantum() &&
        (g == GeneratorTag::a0 || g == GeneratorTag::a1 || g == GeneratorTag::a1_star))
        throw config_error("build_generator: dual generators exist on the quantum branch only");

    std::vector<SparseOperator::Triplet> trips;
    const std::int64_t dim = space.dim();

    auto push = [&](BasisLabel target, std::int64_t col, double v) {
        if (v != 0.0 && space.contains(target))
            trips.push_back({space.index_of(target), col, cplx(v, 0.0)});
    };

    for (std::int64_t c = 0; c < dim; ++c) {
        const BasisLabel x = space.label_at(c);
        switch (g) {
            case GeneratorTag::identity:
                trips.push_back({c, c, cplx(1.0, 0.0)});
                break;
            case GeneratorTag::alpha:
                push(coeff_target(CoeffKind::a_plus, x), c, rep_coefficient(p, CoeffKind::a_plus, x));
                push(coeff_target(CoeffKind::a_minus, x), c,
                     rep_coefficient(p, CoeffKind::a_minus, x));
                break;
            case GeneratorTag::beta:
                push(coeff_target(CoeffKind::b_plus, x), c, rep_coefficient(p, CoeffKind::b_plus, x));
                push(coeff_target(CoeffKind::b_minus, x), c,
                     rep_coefficient(p, CoeffKind::b_minus, x));
                break;
            case GeneratorTag::beta_star:
                push(coeff_target(CoeffKind::bstar_plus, x), c,
                     rep_coefficient(p, CoeffKind::bstar_plus, x));
                push(coeff_target(CoeffKind::bstar_minus, x), c,
                     rep_coefficient(p, CoeffKind::bstar_minus, x));
                break;
            case GeneratorTag::alpha_star:
                push(x.shifted(+1, +1, +1), c, alpha_star_up(p, x));
                push(x.shifted(-1, +1, +1), c, alpha_star_down(p, x));
                break;
            case GeneratorTag::a0:
                trips.push_back({c, c, cplx(std::pow(p.q(), 0.5 * x.j2), 0.0)});
                break;
            case GeneratorTag::a1:
                if (x.j2 < x.n2)
                    push(x.shifted(0, 0, +2), c, detail::a1_weight(p.q(), x.n2, x.j2));
                break;
            case GeneratorTag::a1_star:
                if (x.j2 > -x.n2)
                    push(x.shifted(0, 0, -2), c, detail::a1_weight(p.q(), x.n2, x.j2 - 2));
                break;
        }
    }
    int band = 1;
    if (g == GeneratorTag::a0 || g == GeneratorTag::a1 || g == GeneratorTag::a1_star ||
        g == GeneratorTag::identity)
        band = 0;
    return SparseOperator::from_triplets(space, space, band, std::move(trips));
}

// alpha_p beta^s (beta^*)^t with alpha_p = alpha^p (p >= 0) or (alpha^*)^{-p}.
inline SparseOperator build_monomial(const TruncatedSpace& space, const DeformationParam& p, int pw,
                                     int s, int t) {
    if (s < 0 || t < 0) throw config_error("build_monomial: s,t must be >= 0");
    const int band = std::abs(pw) + s + t;
    if (band > space.n2_max())
        throw truncation_error("build_monomial: |p|+s+t exceeds n2_max");
    SparseOperator M = SparseOperator::identity(space);
    const SparseOperator bs = build_generator(space, p, GeneratorTag::beta_star);
    for (int k = 0; k < t; ++k) M = bs.multiply(M);
    const SparseOperator b = build_generator(space, p, GeneratorTag::beta);
    for (int k = 0; k < s; ++k) M = b.multiply(M);
    if (pw != 0) {
        const SparseOperator a = build_generator(
            space, p, pw > 0 ? GeneratorTag::alpha : GeneratorTag::alpha_star);
        for (int k = 0; k < std::abs(pw); ++k) M = a.multiply(M);
    }
    // products of band-1 factors; report the nominal band
    return SparseOperator::from_triplets(space, space, band, [&] {
        std::vector<SparseOperator::Triplet> v;
        M.for_each_entry([&](std::int64_t r, std::int64_t c, cplx val) { v.push_back({r, c, val}); });
        return v;
    }());
}

// Smallest r with q^{2r} < 1/2 (then automatically 1/2 <= q^{2r-2}).
// boundary_equality notes the measure-zero case q^{2k} == 1/2 hit exactly.
struct RChoice {
    int r = 1;
    bool boundary_equality = false;
};
inline RChoice choose_r(const DeformationParam& p) {
    if (!p.is_quantum()) throw config_error("choose_r: quantum branch only");
    RChoice out;
    double q2r = p.q() * p.q();
    const double q2 = q2r;
    while (q2r >= 0.5) {
        if (q2r == 0.5) out.boundary_equality = true;
        q2r *= q2;
        ++out.r;
    }
    return out;
}

// gamma_r = (beta^* beta)^r (beta - I) + I, by sparse products.
inline SparseOperator build_gamma(const TruncatedSpace& space, const DeformationParam& p, int r) {
    if (r < 0) throw config_error("build_gamma: r must be >= 0");
    if (2 * r + 1 > space.n2_max())
        throw truncation_error("build_gamma: band 2r+1 exceeds n2_max");
    const SparseOperator b = build_generator(space, p, GeneratorTag::beta);
    const SparseOperator bs = build_generator(space, p, GeneratorTag::beta_star);
    const SparseOperator eye = SparseOperator::identity(space);
    SparseOperator m = b - eye;
    const SparseOperator bsb = bs.multiply(b);
    for (int k = 0; k < r; ++k) m = bsb.multiply(m);
    SparseOperator g = m + eye;
    std::vector<SparseOperator::Triplet> trips;
    g.for_each_entry([&](std::int64_t rr, std::int64_t cc, cplx v) { trips.push_back({rr, cc, v}); });
    return SparseOperator::from_triplets(space, space, 2 * r + 1, std::move(trips));
}

// Spectral-projection approximation of the K_1 generator:
// u = chi_{(window,1]}(beta^* beta)(beta - I) + I.  beta^* beta preserves
// (i,j) and moves n2 in steps of 2, so it is block tridiagonal over
// (i2,j2)-chains; each chain is diagonalized exactly.  Diagnostic: the
// eigenvalue-1 cluster of the truncated operator is polluted near the cut.
struct UApprox {
    SparseOperator op;
    double window = 0.0;
    std::int64_t projection_rank = 0;
    double cluster_gap = 0.0; // smallest |eigenvalue - window| over all chains
};
inline UApprox build_u_approx(const TruncatedSpace& space, const DeformationParam& p,
                              double window) {
    if (!p.is_quantum()) throw config_error("build_u_approx: quantum branch only");
    if (!(window > p.q() && window < 1.0))
        throw config_error("build_u_approx: window must lie in (q, 1)");
    const SparseOperator b = build_generator(space, p, GeneratorTag::beta);
    const SparseOperator bs = build_generator(space, p, GeneratorTag::beta_star);
    const SparseOperator bsb = bs.multiply(b);
    const int N = space.n2_max();

    std::vector<SparseOperator::Triplet> ptrips;
    std::int64_t rank = 0;
    double gap = 1.0;
    for (int i2 = -N; i2 <= N; ++i2) {
        for (int j2 = -N; j2 <= N; ++j2) {
            if ((i2 - j2) % 2 != 0) continue;
            const int n0 = std::max(std::abs(i2), std::abs(j2));
            std::vector<std::int64_t> chain;
            for (int n2 = n0; n2 <= N; n2 += 2)
                chain.push_back(space.index_of(BasisLabel{n2, i2, j2}));
            const int m = static_cast<int>(chain.size());
            if (m == 0) continue;
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int a = 0; a < m; ++a)
                for (int c = 0; c < m; ++c)
                    T(a, c) = bsb.entry(chain[static_cast<std::size_t>(a)],
                                        chain[static_cast<std::size_t>(c)])
                                  .real();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            const auto& w = es.eigenvalues();
            const auto& V = es.eigenvectors();
            std::vector<int> sel;
            for (int k = 0; k < m; ++k) {
                gap = std::min(gap, std::abs(w(k) - window));
                if (w(k) > window) sel.push_back(k);
            }
            if (sel.empty()) continue;
            rank += static_cast<std::int64_t>(sel.size());
            for (int a = 0; a < m; ++a)
                for (int c = 0; c < m; ++c) {
                    double v = 0.0;
                    for (const int k : sel) v += V(a, k) * V(c, k);
                    if (v != 0.0)
                        ptrips.push_back({chain[static_cast<std::size_t>(a)],
                                          chain[static_cast<std::size_t>(c)], cplx(v, 0.0)});
                }
        }
    }
    SparseOperator proj =
        SparseOperator::from_triplets(space, space, space.n2_max(), std::move(ptrips));
    const SparseOperator eye = SparseOperator::identity(space);
    SparseOperator u = proj.multiply(b - eye) + eye;
    return UApprox{std::move(u), window, rank, gap};
}

inline SparseOperator commutator(const SparseOperator& A, const SparseOperator& B) {
    if (!(A.domain() == B.domain()) || !(A.codomain() == B.codomain()))
        throw space_mismatch("commutator: spaces differ");
    return A.multiply(B) - B.multiply(A);
}

// Operator norm of A restricted to interior columns: exact restriction of the
// infinite operator whenever band >= band(A).
inline double interior_norm(const SparseOperator& A, int band) {
    if (band < A.band())
        throw config_error("interior_norm: band smaller than band(A)");
    const auto in = A.domain().interior(band);
    return largest_singular_value(A, in.count);
}

// Largest interior column 2-norm of each defining relation residual.
inline std::vector<std::pair<std::string, double>> relation_residuals(const TruncatedSpace& space,
                                                                      const DeformationParam& p) {
    if (space.n2_max() < 2) throw config_error("relation_residuals: need n2_max >= 2");
    const SparseOperator a = build_generator(space, p, GeneratorTag::alpha);
    const SparseOperator as = build_generator(space, p, GeneratorTag::alpha_star);
    const SparseOperator b = build_generator(space, p, GeneratorTag::beta);
    const SparseOperator bs = build_generator(space, p, GeneratorTag::beta_star);
    const SparseOperator eye = SparseOperator::identity(space);
    const double q2 = p.q() * p.q();

    const std::int64_t ncols = space.interior(2).count;
    auto max_col = [&](const SparseOperator& R) {
        double m = 0.0;
        for (std::int64_t c = 0; c < ncols; ++c) m = std::max(m, R.column_norm(c));
        return m;
    };

    std::vector<std::pair<std::string, double>> out;
    out.emplace_back("alpha_star_alpha_plus_beta_star_beta_eq_I",
                     max_col(as.multiply(a) + bs.multiply(b) - eye));
    out.emplace_back("alpha_alpha_star_plus_q2_beta_beta_star_eq_I",
                     max_col(a.multiply(as) + b.multiply(bs).scaled(q2) - eye));
    out.emplace_back("alpha_beta_eq_q_beta_alpha",
                     max_col(a.multiply(b) - b.multiply(a).scaled(p.q())));
    out.emplace_back("alpha_beta_star_eq_q_beta_star_alpha",
                     max_col(a.multiply(bs) - bs.multiply(a).scaled(p.q())));
    out.emplace_back("beta_normal", max_col(bs.multiply(b) - b.multiply(bs)));
    return out;
}

// Haar state h(A) = <e^(0)_{00}, A e^(0)_{00}>; ordinal 0 is (0,0,0).
inline cplx haar_state(const SparseOperator& A) {
    if (A.band() > A.domain().n2_max())
        throw truncation_error("haar_state: operator band exceeds truncation");
    return A.entry(0, 0);
}

} // namespace suq2

#endif
