#ifndef SUQ2_DIRAC_HPP
#define SUQ2_DIRAC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "suq2/assembly.hpp"
#include "suq2/sparse_operator.hpp"

namespace suq2 {

enum class FamilyKind { generic_q, sign_set, classical_staircase, table };

// Eigenvalue rule (n,i) -> d(n,i) of an equivariant Dirac operator.
//   generic_q:  -(2n+1) on the row i=n, 2n+1 elsewhere.
//   sign_set F: -(2n+1) when n-i is in F, 2n+1 otherwise.
//   staircase:  with s = floor(sqrt(2n)), k = ceil(2n/s)-1 and t = n-i:
//               -s at t=0, (t+1)s for 1 <= t <= k-1, 2n for t >= k;
//               shells 2n <= 1 use the fixed edge values -1 (i=n) and 2.
//   table:      explicit map (n2,i2) -> value, zeros rejected.
class DiracFamily {
public:
    static DiracFamily generic() { return DiracFamily(FamilyKind::generic_q); }
    static DiracFamily sign_set(std::set<int> F) {
        for (const int k : F)
            if (k < 0) throw config_error("sign_set: row indices must be >= 0");
        DiracFamily f(FamilyKind::sign_set);
        f.F_ = std::move(F);
        return f;
    }
    static DiracFamily staircase() { return DiracFamily(FamilyKind::classical_staircase); }
    static DiracFamily table(std::map<std::pair<int, int>, double> values) {
        for (const auto& [key, v] : values) {
            const auto [n2, i2] = key;
            if (!(BasisLabel{n2, i2, i2}.is_valid()))
                throw config_error("table: invalid lattice point");
            if (v == 0.0) throw config_error("table: zero d-values are not allowed");
        }
        DiracFamily f(FamilyKind::table);
        f.table_ = std::move(values);
        return f;
    }

    FamilyKind kind() const { return kind_; }
    const std::set<int>& sign_rows() const { return F_; }

    double d(int n2, int i2) const {
        if (!(BasisLabel{n2, i2, i2}.is_valid()))
            throw config_error("DiracFamily::d: invalid lattice point");
        switch (kind_) {
            case FamilyKind::generic_q:
                return i2 == n2 ? -(n2 + 1.0) : (n2 + 1.0);
            case FamilyKind::sign_set:
                return F_.count((n2 - i2) / 2) ? -(n2 + 1.0) : (n2 + 1.0);
            case FamilyKind::classical_staircase: {
                if (n2 <= 1) return i2 == n2 ? -1.0 : 2.0;
                const int s = static_cast<int>(std::sqrt(static_cast<double>(n2)));
                const int k = (n2 + s - 1) / s - 1; // ceil(2n/s) - 1
                const int t = (n2 - i2) / 2;
                if (t == 0) return -static_cast<double>(s);
                if (t <= k - 1) return static_cast<double>(t + 1) * s;
                return static_cast<double>(n2);
            }
            case FamilyKind::table: {
                const auto it = table_.find({n2, i2});
                if (it == table_.end())
                    throw config_error("table family: no value for (n2,i2)");
                return it->second;
            }
        }
        return 0.0;
    }

    // Rows k = n-i whose d-values are negative throughout the scan; used to
    // read off sign D = I - 2 sum P_k.  Throws if some row has mixed sign.
    std::set<int> negative_rows(int n2_scan) const {
        std::set<int> neg;
        for (int k = 0; 2 * k <= n2_scan; ++k) {
            bool all_neg = true, all_pos = true;
            for (int n2 = k; n2 <= n2_scan; ++n2) {
                const int i2 = n2 - 2 * k;
                if (i2 < -n2) break;
                (d(n2, i2) < 0 ? all_pos : all_neg) = false;
            }
            if (!all_neg && !all_pos)
                throw precondition_error("negative_rows: row " + std::to_string(k) +
                                         " has mixed sign over the scan");
            if (all_neg) neg.insert(k);
        }
        return neg;
    }

private:
    explicit DiracFamily(FamilyKind k) : kind_(k) {}
    FamilyKind kind_;
    std::set<int> F_;
    std::map<std::pair<int, int>, double> table_;
};

inline SparseOperator build_dirac(const TruncatedSpace& space, const DiracFamily& fam) {
    std::vector<SparseOperator::Triplet> trips;
    trips.reserve(static_cast<std::size_t>(space.dim()));
    for (std::int64_t c = 0; c < space.dim(); ++c) {
        const BasisLabel x = space.label_at(c);
        trips.push_back({c, c, cplx(fam.d(x.n2, x.i2), 0.0)});
    }
    return SparseOperator::from_triplets(space, space, 0, std::move(trips));
}

// Scaled difference suprema along the two admissible shifts.
//   quantum:   |d(n+1/2,i+1/2)-d(n,i)| = O(1)   and
//              |d(n+1/2,i-1/2)-d(n,i)| = O(n+i+1);
//   classical: both differences scaled by sqrt((n+-i+1)/(2n+2)).
// "Bounded" verdicts are trend tests on the per-shell maxima (non-increasing
// beyond shell n2_scan/2 up to 5%), not analytic proofs; the raw series are
// returned for inspection.
struct GrowthReport {
    double sup_plus = 0.0;
    double sup_minus_scaled = 0.0;
    std::vector<double> shell_max_plus;  // indexed by source shell n2
    std::vector<double> shell_max_minus; // scaled
    bool plus_bounded = false;
    bool minus_bounded = false;
    bool verdict = false;
    int n2_scan = 0;
    Branch branch = Branch::quantum;
};

namespace detail {
inline bool trend_non_increasing(const std::vector<double>& s, int from, double slack) {
    for (std::size_t t = static_cast<std::size_t>(std::max(from, 0)); t + 1 < s.size(); ++t) {
        if (s[t + 1] > s[t] * (1.0 + slack) + 1e-12) return false;
    }
    return true;
}
} // namespace detail

inline GrowthReport check_growth_conditions(const DiracFamily& fam, int n2_scan, Branch branch) {
    if (n2_scan < 4) throw config_error("check_growth_conditions: need n2_scan >= 4");
    GrowthReport rep;
    rep.n2_scan = n2_scan;
    rep.branch = branch;
    rep.shell_max_plus.assign(static_cast<std::size_t>(n2_scan), 0.0);
    rep.shell_max_minus.assign(static_cast<std::size_t>(n2_scan), 0.0);
    for (int n2 = 0; n2 < n2_scan; ++n2) {
        double mp = 0.0, mm = 0.0;
        for (int i2 = -n2; i2 <= n2; i2 += 2) {
            const double d0 = fam.d(n2, i2);
            const double dp = fam.d(n2 + 1, i2 + 1) - d0; // (n+1/2, i+1/2)
            const double dm = fam.d(n2 + 1, i2 - 1) - d0; // (n+1/2, i-1/2)
            double sp, sm;
            if (branch == Branch::quantum) {
                sp = std::abs(dp);
                sm = std::abs(dm) / (0.5 * (n2 + i2) + 1.0); // n+i+1
            } else {
                sp = std::abs(dp) * std::sqrt((0.5 * (n2 + i2) + 1.0) / (n2 + 2.0));
                sm = std::abs(dm) * std::sqrt((0.5 * (n2 - i2) + 1.0) / (n2 + 2.0));
            }
            mp = std::max(mp, sp);
            mm = std::max(mm, sm);
        }
        rep.shell_max_plus[static_cast<std::size_t>(n2)] = mp;
        rep.shell_max_minus[static_cast<std::size_t>(n2)] = mm;
        rep.sup_plus = std::max(rep.sup_plus, mp);
        rep.sup_minus_scaled = std::max(rep.sup_minus_scaled, mm);
    }
    rep.plus_bounded = detail::trend_non_increasing(rep.shell_max_plus, n2_scan / 2, 0.05);
    rep.minus_bounded = detail::trend_non_increasing(rep.shell_max_minus, n2_scan / 2, 0.05);
    rep.verdict = rep.plus_bounded && rep.minus_bounded;
    return rep;
}

// Signs of the lattice sets S(m,n,r) and T(m) over a finite scan window.
// Diagram coordinates: the dot in row a, column b (a,b >= 0) is
// d((a+b)/2, (b-a)/2), i.e. n2 = a+b, i2 = b-a.
enum class SetSign { positive, negative, mixed };

constexpr const char* to_string(SetSign s) {
    switch (s) {
        case SetSign::positive: return "+";
        case SetSign::negative: return "-";
        case SetSign::mixed: return "mixed";
    }
    return "?";
}

struct SignStructure {
    int m = 0;
    int n = 0;
    int scan = 0;
    SetSign sign_T = SetSign::mixed;
    std::vector<SetSign> sign_S; // r = 0..m
};

inline SignStructure sign_structure(const DiracFamily& fam, int m, int n, int scan) {
    if (!(scan > n && scan > m))
        throw config_error("sign_structure: need scan > n and scan > m");
    SignStructure out;
    out.m = m;
    out.n = n;
    out.scan = scan;
    auto classify = [](bool has_pos, bool has_neg) {
        if (has_pos && has_neg) return SetSign::mixed;
        return has_neg ? SetSign::negative : SetSign::positive;
    };
    for (int r = 0; r <= m; ++r) {
        bool pos = false, neg = false;
        for (int b = n + 1; b <= scan; ++b)
            (fam.d(r + b, b - r) > 0 ? pos : neg) = true;
        out.sign_S.push_back(classify(pos, neg));
    }
    bool pos = false, neg = false;
    for (int a = m + 1; a <= scan; ++a)
        for (int b = 0; b <= scan; ++b)
            (fam.d(a + b, b - a) > 0 ? pos : neg) = true;
    out.sign_T = classify(pos, neg);
    return out;
}

// Least-squares slope of log N(Lambda) vs log Lambda, with
// N(Lambda) = #{(n,i,j) : |d(n,i)| <= Lambda} inside the truncation.
// complete_up_to is the smallest |d| on the boundary shell: below it the
// growth bound max_i |d(n,i)| = O(n) guarantees the count is truncation-free.
struct DimensionFit {
    std::vector<double> lambda_grid;
    std::vector<std::int64_t> counting;
    double slope = 0.0;
    double fit_quality = 0.0; // R^2 in log-log coordinates
    double complete_up_to = 0.0;
};

inline DimensionFit spectral_dimension(const DiracFamily& fam, int n2_max, int grid_size) {
    if (n2_max < 20) throw config_error("spectral_dimension: need n2_max >= 20");
    if (grid_size < 5) throw config_error("spectral_dimension: need grid_size >= 5");

    std::vector<std::pair<double, std::int64_t>> vals; // (|d|, multiplicity)
    vals.reserve(static_cast<std::size_t>(n2_max + 1) * (n2_max + 1));
    double complete = 0.0;
    for (int n2 = 0; n2 <= n2_max; ++n2) {
        double shell_min = 0.0;
        for (int i2 = -n2; i2 <= n2; i2 += 2) {
            const double a = std::abs(fam.d(n2, i2));
            vals.emplace_back(a, n2 + 1);
            if (i2 == -n2 || a < shell_min) shell_min = a;
        }
        if (n2 == n2_max) complete = shell_min;
    }
    std::sort(vals.begin(), vals.end());
    std::vector<std::int64_t> cum(vals.size());
    std::int64_t acc = 0;
    for (std::size_t t = 0; t < vals.size(); ++t) cum[t] = (acc += vals[t].second);

    DimensionFit fit;
    fit.complete_up_to = complete;
    const double hi = complete;
    const double lo = std::max(2.0, hi / 2.0); // fit over the top octave; below it the
                                               // counting is still pre-asymptotic
    if (!(hi > lo)) throw config_error("spectral_dimension: degenerate grid");
    std::vector<double> xs, ys;
    for (int g = 0; g < grid_size; ++g) {
        const double lam =
            std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * g / (grid_size - 1.0));
        // count of values <= lam
        const auto it = std::upper_bound(vals.begin(), vals.end(),
                                         std::make_pair(lam, std::numeric_limits<std::int64_t>::max()));
        const std::int64_t N = it == vals.begin() ? 0 : cum[static_cast<std::size_t>(it - vals.begin()) - 1];
        fit.lambda_grid.push_back(lam);
        fit.counting.push_back(N);
        if (N > 0) {
            xs.push_back(std::log(lam));
            ys.push_back(std::log(static_cast<double>(N)));
        }
    }
    if (xs.size() < 5) throw config_error("spectral_dimension: fewer than 5 usable grid points");

    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
        sx += xs[t];
        sy += ys[t];
        sxx += xs[t] * xs[t];
        sxy += xs[t] * ys[t];
        syy += ys[t] * ys[t];
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double b = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
        const double e = ys[t] - (fit.slope * xs[t] + b);
        ss_res += e * e;
        ss_tot += (ys[t] - sy / n) * (ys[t] - sy / n);
    }
    fit.fit_quality = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

// Per-shell witnesses |d(n,i)| <= K sqrt(n) on shells with mixed signs.
struct ShellWitness {
    int n2 = 0;
    bool mixed = false;   // shell has both signs; uniform shells are vacuous
    bool found = false;
    int witness_i2 = 0;
    double witness_abs = 0.0;
};

inline std::vector<ShellWitness> classical_sign_sum_check(const DiracFamily& fam, double K,
                                                          int n2_scan) {
    std::vector<ShellWitness> out;
    for (int n2 = 0; n2 <= n2_scan; ++n2) {
        ShellWitness w;
        w.n2 = n2;
        bool pos = false, neg = false;
        for (int i2 = -n2; i2 <= n2; i2 += 2) (fam.d(n2, i2) > 0 ? pos : neg) = true;
        w.mixed = pos && neg;
        if (w.mixed) {
            const double bound = K * std::sqrt(0.5 * n2); // K sqrt(n)
            for (int i2 = -n2; i2 <= n2; i2 += 2) {
                const double a = std::abs(fam.d(n2, i2));
                if (a <= bound) {
                    w.found = true;
                    w.witness_i2 = i2;
                    w.witness_abs = a;
                    break;
                }
            }
        }
        out.push_back(w);
    }
    return out;
}

// Exact multiplicity of each |D| eigenvalue by direct enumeration, plus the
// log-log growth exponent of multiplicity vs eigenvalue fitted on the window
// of eigenvalues complete within the truncation.
struct MultiplicityProfile {
    std::vector<std::pair<double, std::int64_t>> entries; // (|eigenvalue|, multiplicity)
    double fitted_exponent = 0.0;
    double fit_lo = 0.0;
    double fit_hi = 0.0;
};

inline MultiplicityProfile multiplicity_profile(const DiracFamily& fam, int n2_max) {
    std::map<double, std::int64_t> mult;
    for (int n2 = 0; n2 <= n2_max; ++n2)
        for (int i2 = -n2; i2 <= n2; i2 += 2)
            mult[std::abs(fam.d(n2, i2))] += n2 + 1;
    MultiplicityProfile out;
    out.entries.assign(mult.begin(), mult.end());

    // integer eigenvalue lam is complete once all shells up to (lam+1)^2-1 are
    // present (staircase steps t*floor(sqrt(2n)) with t>=1 stop contributing)
    const int lam_hi = static_cast<int>(std::sqrt(static_cast<double>(n2_max + 1))) - 1;
    const int lam_lo = std::max(3, lam_hi / 2);
    out.fit_lo = lam_lo;
    out.fit_hi = lam_hi;
    std::vector<double> xs, ys;
    for (int lam = lam_lo; lam <= lam_hi; ++lam) {
        const auto it = mult.find(static_cast<double>(lam));
        if (it != mult.end() && it->second > 0) {
            xs.push_back(std::log(static_cast<double>(lam)));
            ys.push_back(std::log(static_cast<double>(it->second)));
        }
    }
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t t = 0; t < xs.size(); ++t) {
            sx += xs[t];
            sy += ys[t];
            sxx += xs[t] * xs[t];
            sxy += xs[t] * ys[t];
        }
        out.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return out;
}

} // namespace suq2

#endif
