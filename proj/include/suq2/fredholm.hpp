#ifndef SUQ2_FREDHOLM_HPP
#define SUQ2_FREDHOLM_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "suq2/assembly.hpp"
#include "suq2/dirac.hpp"

namespace suq2 {

// P_k projects onto span{ e^(n)_{n-k, j} }, the k-th row of the (n,i) lattice.
struct RowProjection {
    int k = 0;
};

inline std::vector<std::int64_t> row_range_ordinals(const TruncatedSpace& space, int k) {
    if (k < 0 || 2 * k > space.n2_max())
        throw config_error("row projection: need 0 <= 2k <= n2_max");
    std::vector<std::int64_t> out;
    for (int n2 = k; n2 <= space.n2_max(); ++n2) {
        const int i2 = n2 - 2 * k;
        if (i2 < -n2) continue;
        for (int j2 = -n2; j2 <= n2; j2 += 2)
            out.push_back(space.index_of(BasisLabel{n2, i2, j2}));
    }
    return out;
}

inline SparseOperator projection(const TruncatedSpace& space, int k) {
    std::vector<SparseOperator::Triplet> trips;
    for (const std::int64_t c : row_range_ordinals(space, k)) trips.push_back({c, c, cplx(1, 0)});
    return SparseOperator::from_triplets(space, space, 0, std::move(trips));
}

// Rectangular block Q A P between the ranges of two row projections,
// materialized densely (the ranges are O(n2_max^2) small).
struct CompressedBlock {
    std::vector<BasisLabel> row_labels;
    std::vector<BasisLabel> col_labels;
    Eigen::MatrixXd mat;
};

inline CompressedBlock compress(const SparseOperator& A, RowProjection P, RowProjection Q) {
    const TruncatedSpace& space = A.domain();
    const auto cols = row_range_ordinals(space, P.k);
    const auto rows = row_range_ordinals(space, Q.k);
    std::unordered_map<std::int64_t, int> rpos;
    rpos.reserve(rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t) rpos[rows[t]] = static_cast<int>(t);

    CompressedBlock blk;
    blk.mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                    static_cast<Eigen::Index>(cols.size()));
    for (const auto r : rows) blk.row_labels.push_back(space.label_at(r));
    for (const auto c : cols) blk.col_labels.push_back(space.label_at(c));
    // single pass over all entries, keeping those inside the block
    std::unordered_map<std::int64_t, int> cpos;
    cpos.reserve(cols.size());
    for (std::size_t t = 0; t < cols.size(); ++t) cpos[cols[t]] = static_cast<int>(t);
    A.for_each_entry([&](std::int64_t r, std::int64_t c, cplx v) {
        const auto ri = rpos.find(r);
        if (ri == rpos.end()) return;
        const auto ci = cpos.find(c);
        if (ci == cpos.end()) return;
        blk.mat(ri->second, ci->second) = v.real();
    });
    return blk;
}

// One invariant sector of P_k gamma_r P_k.  The compression preserves
// s = n + j and acts on { e^(n)_{n-k, s-n} : n2 = max(s,k) .. n2_max } as a
// lower bidiagonal matrix; entries are the exact epsilon-path sums of the
// (beta beta^*)-expansion, and diag_limit/sub_limit are their closed-form
// n -> infinity limits (1 - q^{2rs} and -q^{2rs+s}).
struct SectorMatrix {
    int s = 0;
    int k = 0;
    int r = 1;
    int n2_first = 0;
    std::vector<double> diag;
    std::vector<double> sub; // one shorter
    double diag_limit = 0.0;
    double sub_limit = 0.0;
};

namespace detail {

// W_m(x) = sum over epsilon-paths of length r with sum epsilon = m of
// prod_t k_{eps_t}(n + partial sums, i, j); dynamic programming over the
// level offset, O(r^2) evaluations of k.
inline std::vector<double> path_weights(const DeformationParam& p, int r, BasisLabel x) {
    std::vector<double> amp(static_cast<std::size_t>(2 * r + 1), 0.0); // offset m -> amp[m+r]
    amp[static_cast<std::size_t>(r)] = 1.0;
    for (int step = 0; step < r; ++step) {
        std::vector<double> nxt(amp.size(), 0.0);
        for (int off = -step; off <= step; ++off) {
            const double a = amp[static_cast<std::size_t>(off + r)];
            if (a == 0.0) continue;
            const BasisLabel cur = x.shifted(2 * off, 0, 0);
            if (!cur.is_valid()) continue;
            for (int eps = -1; eps <= 1; ++eps) {
                const double kv = k_coefficient(p, eps, cur);
                if (kv != 0.0) nxt[static_cast<std::size_t>(off + eps + r)] += a * kv;
            }
        }
        amp.swap(nxt);
    }
    return amp;
}

} // namespace detail

inline std::vector<SectorMatrix> sector_decompose(const DeformationParam& p, int r, int k,
                                                  int n2_max) {
    if (!p.is_quantum()) throw config_error("sector_decompose: quantum branch only");
    if (r < 0 || k < 0) throw config_error("sector_decompose: r,k must be >= 0");
    std::vector<SectorMatrix> out;
    const double q = p.q();
    for (int s = 0; s <= n2_max; ++s) {
        SectorMatrix sm;
        sm.s = s;
        sm.k = k;
        sm.r = r;
        sm.n2_first = std::max(s, k);
        sm.diag_limit = 1.0 - detail::qpow(q, 2 * r * s);
        sm.sub_limit = -detail::qpow(q, 2 * r * s + s);
        for (int n2 = sm.n2_first; n2 <= n2_max; ++n2) {
            const BasisLabel x{n2, n2 - 2 * k, 2 * s - n2};
            const auto W = detail::path_weights(p, r, x);
            const double w0 = W[static_cast<std::size_t>(r)];
            sm.diag.push_back(1.0 - w0);
            if (n2 + 1 <= n2_max) {
                const double w1 = r >= 1 ? W[static_cast<std::size_t>(r + 1)] : 0.0;
                double sub = w0 * rep_coefficient(p, CoeffKind::b_plus, x);
                const BasisLabel up = x.shifted(+2, 0, 0);
                if (w1 != 0.0 && up.is_valid())
                    sub += w1 * rep_coefficient(p, CoeffKind::b_minus, up);
                sm.sub.push_back(sub);
            }
        }
        out.push_back(std::move(sm));
    }
    return out;
}

inline std::vector<SectorMatrix> sector_decompose(const DeformationParam& p, int r, int n2_max) {
    return sector_decompose(p, r, 0, n2_max);
}

// Tail dominance of a lower bidiagonal sector: shift-dominated tails
// (|diag| < |sub|) contribute -1, diagonal-dominated tails 0.
enum class SectorVerdict { minus_one, zero, undetermined };

inline SectorVerdict sector_index(const SectorMatrix& sm) {
    if (sm.diag.size() < 2 || sm.sub.size() < 2)
        throw precondition_error("sector_index: sector too short for a tail test");
    auto converged = [](const std::vector<double>& v) {
        const double a = v[v.size() - 1], b = v[v.size() - 2];
        return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(a));
    };
    if (!converged(sm.diag) || !converged(sm.sub))
        throw precondition_error("sector_index: tail entries have not converged");
    const double d = std::abs(sm.diag.back());
    const double g = std::abs(sm.sub.back());
    if (std::abs(d - g) < 1e-9) return SectorVerdict::undetermined;
    return d < g ? SectorVerdict::minus_one : SectorVerdict::zero;
}

// Total index of P_k gamma_r P_k from the sector structure.  Long sectors are
// judged by their converged tails; sectors too short for that are judged by
// the closed-form limits (the two rules agree wherever both apply).
inline std::optional<int> sector_total_index(const DeformationParam& p, int r, int k, int n2_max,
                                             std::vector<std::pair<int, int>>* per_sector = nullptr) {
    int total = 0;
    for (const auto& sm : sector_decompose(p, r, k, n2_max)) {
        int contrib = 0;
        bool tail_ok = false;
        if (sm.diag.size() >= 3 && sm.sub.size() >= 2) {
            try {
                const SectorVerdict v = sector_index(sm);
                if (v == SectorVerdict::undetermined) return std::nullopt;
                contrib = v == SectorVerdict::minus_one ? -1 : 0;
                tail_ok = true;
            } catch (const precondition_error&) {
                tail_ok = false;
            }
        }
        if (!tail_ok) {
            const double d = std::abs(sm.diag_limit), g = std::abs(sm.sub_limit);
            if (std::abs(d - g) < 1e-9) return std::nullopt;
            contrib = d < g ? -1 : 0;
        }
        if (per_sector) per_sector->emplace_back(sm.s, contrib);
        total += contrib;
    }
    return total;
}

// SVD-based index of one dense compression with the truncation-boundary
// filter.  Near-kernel singular vectors (sigma < tol) are counted through
// the principal angles between their span and the subspace supported on
// shells n2 <= n2_max-2: a direction counts iff its interior mass is >= 90%
// (equivalently, mass on the outermost two shells < 10%).  The subspace
// formulation is what makes the count well-defined when the near-kernel is
// degenerate and the SVD mixes boundary artifacts with bulk vectors.
struct SvdIndexResult {
    int ker = 0;
    int coker = 0;
    bool gap_ok = true;
    double sigma_min_retained = 0.0;
};

namespace detail {

inline int interior_subspace_count(const Eigen::MatrixXd& small_vectors,
                                   const std::vector<int>& shells, int n2_max) {
    if (small_vectors.cols() == 0) return 0;
    std::vector<int> keep;
    for (std::size_t t = 0; t < shells.size(); ++t)
        if (shells[t] <= n2_max - 2) keep.push_back(static_cast<int>(t));
    Eigen::MatrixXd B(static_cast<Eigen::Index>(keep.size()), small_vectors.cols());
    for (std::size_t t = 0; t < keep.size(); ++t) B.row(static_cast<Eigen::Index>(t)) = small_vectors.row(keep[t]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    int count = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double c = svd.singularValues()(i);
        if (c * c >= 0.9) ++count;
    }
    return count;
}

inline SvdIndexResult svd_index(const Eigen::MatrixXd& M, const std::vector<int>& row_shells,
                                const std::vector<int>& col_shells, int n2_max, double tol) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& S = svd.singularValues();
    std::vector<Eigen::Index> small;
    SvdIndexResult res;
    res.sigma_min_retained = -1.0;
    for (Eigen::Index i = 0; i < S.size(); ++i) {
        if (S(i) < tol)
            small.push_back(i);
        else if (res.sigma_min_retained < 0 || S(i) < res.sigma_min_retained)
            res.sigma_min_retained = S(i);
    }
    if (res.sigma_min_retained >= 0 && res.sigma_min_retained <= 10.0 * tol) res.gap_ok = false;
    Eigen::MatrixXd V_small(svd.matrixV().rows(), static_cast<Eigen::Index>(small.size()));
    Eigen::MatrixXd U_small(svd.matrixU().rows(), static_cast<Eigen::Index>(small.size()));
    for (std::size_t t = 0; t < small.size(); ++t) {
        V_small.col(static_cast<Eigen::Index>(t)) = svd.matrixV().col(small[t]);
        U_small.col(static_cast<Eigen::Index>(t)) = svd.matrixU().col(small[t]);
    }
    res.ker = interior_subspace_count(V_small, col_shells, n2_max);
    res.coker = interior_subspace_count(U_small, row_shells, n2_max);
    return res;
}

} // namespace detail

// Index of the square compression of a rebuildable operator onto range(P_k),
// across a schedule of truncation sizes; the stabilized value requires the
// last three sizes to agree.
struct IndexReport {
    std::vector<int> sizes;
    std::vector<int> ker_dims;
    std::vector<int> coker_dims;
    std::vector<bool> gap_flags;
    double tol = 1e-6;
    std::optional<int> stabilized;
    std::vector<std::pair<int, int>> sector_indices; // optional (s, contribution)

    int index_at(std::size_t t) const { return ker_dims[t] - coker_dims[t]; }
};

using OperatorBuilder = std::function<SparseOperator(const TruncatedSpace&)>;

inline IndexReport numerical_index(const OperatorBuilder& build, RowProjection P,
                                   const std::vector<int>& sizes, double tol) {
    if (sizes.size() < 3) throw config_error("numerical_index: need at least 3 sizes");
    for (std::size_t t = 1; t < sizes.size(); ++t)
        if (sizes[t] <= sizes[t - 1]) throw config_error("numerical_index: sizes must increase");
    IndexReport rep;
    rep.tol = tol;
    for (const int N : sizes) {
        const TruncatedSpace space(N);
        const SparseOperator A = build(space);
        const CompressedBlock blk = compress(A, P, P);
        std::vector<int> shells;
        shells.reserve(blk.col_labels.size());
        for (const auto& l : blk.col_labels) shells.push_back(l.n2);
        const auto res = detail::svd_index(blk.mat, shells, shells, N, tol);
        rep.sizes.push_back(N);
        rep.ker_dims.push_back(res.ker);
        rep.coker_dims.push_back(res.coker);
        rep.gap_flags.push_back(res.gap_ok);
    }
    const std::size_t n = rep.sizes.size();
    const int last = rep.index_at(n - 1);
    if (rep.index_at(n - 2) == last && rep.index_at(n - 3) == last) rep.stabilized = last;
    return rep;
}

inline OperatorBuilder gamma_builder(const DeformationParam& p, int r) {
    return [p, r](const TruncatedSpace& s) { return build_gamma(s, p, r); };
}

// K-homology/K-theory pairing <gamma_r, sign D = I - 2 sum_{k in F} P_k>,
// equal to -sum_k index(P_k gamma_r P_k).  Unstable component indices make
// the total unstable, not an exception.
struct PairingResult {
    std::optional<int> value;
    std::vector<IndexReport> per_k;
    std::vector<int> F;
    int r = 1;
};

inline PairingResult pairing(const DeformationParam& p, std::optional<int> r_override,
                             const std::set<int>& F, const std::vector<int>& sizes, double tol) {
    PairingResult out;
    out.r = r_override ? *r_override : choose_r(p).r;
    int total = 0;
    bool ok = true;
    for (const int k : F) {
        out.F.push_back(k);
        IndexReport rep = numerical_index(gamma_builder(p, out.r), RowProjection{k}, sizes, tol);
        std::vector<std::pair<int, int>> per_sector;
        (void)sector_total_index(p, out.r, k, sizes.back(), &per_sector);
        rep.sector_indices = std::move(per_sector);
        if (rep.stabilized)
            total -= *rep.stabilized;
        else
            ok = false;
        out.per_k.push_back(std::move(rep));
    }
    if (ok) out.value = total;
    return out;
}

// Column-norm series of P_to A P_from per source shell; exact for shells with
// n2 <= n2_max - band(A).  Verdict: tail non-increasing (5% slack) toward 0.
struct CompactnessProfile {
    std::vector<int> shells;
    std::vector<double> norms;
    bool compact_consistent = false;
};

inline CompactnessProfile compactness_profile(const SparseOperator& A, RowProjection from,
                                              RowProjection to, int shell_hi) {
    if (from.k == to.k) throw config_error("compactness_profile: need from != to");
    const TruncatedSpace& space = A.domain();
    shell_hi = std::min(shell_hi, space.n2_max() - A.band());
    const CompressedBlock blk = compress(A, from, to);
    CompactnessProfile out;
    for (int n2 = std::max(from.k * 2, from.k); n2 <= shell_hi; ++n2) {
        std::vector<int> cols;
        for (std::size_t c = 0; c < blk.col_labels.size(); ++c)
            if (blk.col_labels[c].n2 == n2) cols.push_back(static_cast<int>(c));
        if (cols.empty()) continue;
        Eigen::MatrixXd sub(blk.mat.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c)
            sub.col(static_cast<Eigen::Index>(c)) = blk.mat.col(cols[c]);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
        out.shells.push_back(n2);
        out.norms.push_back(svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
    }
    const std::size_t n = out.norms.size();
    if (n >= 2) {
        double peak = 0.0;
        for (const double v : out.norms) peak = std::max(peak, v);
        bool tail_ok = true;
        for (std::size_t t = n / 2; t + 1 < n; ++t)
            if (out.norms[t + 1] > out.norms[t] * 1.05 + 1e-12) tail_ok = false;
        out.compact_consistent = tail_ok && out.norms.back() <= 0.05 * peak + 1e-12;
    } else {
        out.compact_consistent = true;
    }
    return out;
}

// Pairing of sign D = I - 2P with the fundamental unitary
// U = [[alpha, -q beta^*], [beta, alpha^*]] (q = 1 on the classical branch),
// compressed by P (+) P.  P is read off the family's uniformly negative rows.
inline IndexReport pairing_fundamental_unitary(const DeformationParam& p, const DiracFamily& fam,
                                               const std::vector<int>& sizes, double tol) {
    if (sizes.size() < 3) throw config_error("pairing_fundamental_unitary: need >= 3 sizes");
    IndexReport rep;
    rep.tol = tol;
    for (const int N : sizes) {
        const TruncatedSpace space(N);
        const std::set<int> F = fam.negative_rows(N);
        std::vector<std::int64_t> ords;
        for (const int k : F) {
            if (2 * k > N) continue;
            const auto r = row_range_ordinals(space, k);
            ords.insert(ords.end(), r.begin(), r.end());
        }
        std::sort(ords.begin(), ords.end());
        rep.sizes.push_back(N);
        if (ords.empty()) { // trivial sign
            rep.ker_dims.push_back(0);
            rep.coker_dims.push_back(0);
            rep.gap_flags.push_back(true);
            continue;
        }
        std::unordered_map<std::int64_t, int> pos;
        pos.reserve(ords.size());
        for (std::size_t t = 0; t < ords.size(); ++t) pos[ords[t]] = static_cast<int>(t);
        const auto m = static_cast<Eigen::Index>(ords.size());

        const SparseOperator a = build_generator(space, p, GeneratorTag::alpha);
        const SparseOperator as = build_generator(space, p, GeneratorTag::alpha_star);
        const SparseOperator b = build_generator(space, p, GeneratorTag::beta);
        const SparseOperator bs = build_generator(space, p, GeneratorTag::beta_star);

        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        auto fill = [&](const SparseOperator& G, Eigen::Index ro, Eigen::Index co, double scale) {
            G.for_each_entry([&](std::int64_t r, std::int64_t c, cplx v) {
                const auto ri = pos.find(r);
                if (ri == pos.end()) return;
                const auto ci = pos.find(c);
                if (ci == pos.end()) return;
                M(ro + ri->second, co + ci->second) = scale * v.real();
            });
        };
        fill(a, 0, 0, 1.0);
        fill(bs, 0, m, -p.q());
        fill(b, m, 0, 1.0);
        fill(as, m, m, 1.0);

        std::vector<int> shells;
        shells.reserve(2 * ords.size());
        for (int half = 0; half < 2; ++half)
            for (const auto o : ords) shells.push_back(space.label_at(o).n2);
        const auto res = detail::svd_index(M, shells, shells, N, tol);
        rep.ker_dims.push_back(res.ker);
        rep.coker_dims.push_back(res.coker);
        rep.gap_flags.push_back(res.gap_ok);
    }
    const std::size_t n = rep.sizes.size();
    const int last = rep.index_at(n - 1);
    if (rep.index_at(n - 2) == last && rep.index_at(n - 3) == last) rep.stabilized = last;
    return rep;
}

} // namespace suq2

#endif
