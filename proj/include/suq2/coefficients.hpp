#ifndef SUQ2_COEFFICIENTS_HPP
#define SUQ2_COEFFICIENTS_HPP

#include <cmath>
#include <string>

#include "suq2/basis.hpp"
#include "suq2/errors.hpp"

namespace suq2 {

enum class Branch { quantum, classical };

// Deformation parameter with an explicit branch tag: 0 < q < 1 (quantum) or
// q = 1 exactly (classical).  The branch is never inferred from a float
// comparison.
class DeformationParam {
public:
    static DeformationParam quantum(double q) {
        if (!(q > 0.0 && q < 1.0))
            throw config_error("quantum branch requires 0 < q < 1, got q=" + std::to_string(q));
        return DeformationParam(q, Branch::quantum);
    }
    static DeformationParam classical() { return DeformationParam(1.0, Branch::classical); }

    double q() const { return q_; }
    Branch branch() const { return branch_; }
    bool is_quantum() const { return branch_ == Branch::quantum; }

private:
    DeformationParam(double q, Branch b) : q_(q), branch_(b) {}
    double q_;
    Branch branch_;
};

// The six representation coefficients.  Plus-kinds raise n by 1/2, minus-kinds
// lower it; a-kinds shift (i,j) by (-1/2,-1/2), b-kinds by (+1/2,-1/2),
// bstar-kinds by (-1/2,+1/2).
enum class CoeffKind { a_plus, a_minus, b_plus, b_minus, bstar_plus, bstar_minus };

constexpr const char* to_string(CoeffKind k) {
    switch (k) {
        case CoeffKind::a_plus: return "a+";
        case CoeffKind::a_minus: return "a-";
        case CoeffKind::b_plus: return "b+";
        case CoeffKind::b_minus: return "b-";
        case CoeffKind::bstar_plus: return "bstar+";
        case CoeffKind::bstar_minus: return "bstar-";
    }
    return "?";
}

// Target of the shift attached to a coefficient kind, in doubled units.
constexpr BasisLabel coeff_target(CoeffKind k, BasisLabel x) {
    switch (k) {
        case CoeffKind::a_plus: return x.shifted(+1, -1, -1);
        case CoeffKind::a_minus: return x.shifted(-1, -1, -1);
        case CoeffKind::b_plus: return x.shifted(+1, +1, -1);
        case CoeffKind::b_minus: return x.shifted(-1, +1, -1);
        case CoeffKind::bstar_plus: return x.shifted(+1, -1, +1);
        case CoeffKind::bstar_minus: return x.shifted(-1, -1, +1);
    }
    return x;
}

namespace detail {

// q^m for integer m (doubled-exponent convention: q^{2n+2j} has m = n2+j2).
inline double qpow(double q, long m) {
    if (m == 0) return 1.0;
    if (m < 0) return 1.0 / qpow(q, -m);
    double r = 1.0, b = q;
    for (long e = m; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

inline double quantum_coefficient(double q, CoeffKind k, BasisLabel x) {
    const long n2 = x.n2, i2 = x.i2, j2 = x.j2;
    auto f = [&](long m) { return 1.0 - qpow(q, m); }; // 1 - q^m
    switch (k) {
        case CoeffKind::a_plus:
            return std::sqrt(qpow(q, (n2 + i2) + (n2 + j2) + 2) * f(n2 - j2 + 2) * f(n2 - i2 + 2) /
                             (f(2 * n2 + 2) * f(2 * n2 + 4)));
        case CoeffKind::a_minus:
            return std::sqrt(f(n2 + j2) * f(n2 + i2) / (f(2 * n2) * f(2 * n2 + 2)));
        case CoeffKind::b_plus:
            return -std::sqrt(qpow(q, n2 + j2) * f(n2 - j2 + 2) * f(n2 + i2 + 2) /
                              (f(2 * n2 + 2) * f(2 * n2 + 4)));
        case CoeffKind::b_minus:
            return std::sqrt(qpow(q, n2 + i2) * f(n2 + j2) * f(n2 - i2) /
                             (f(2 * n2) * f(2 * n2 + 2)));
        case CoeffKind::bstar_plus:
            return std::sqrt(qpow(q, n2 + i2) * f(n2 + j2 + 2) * f(n2 - i2 + 2) /
                             (f(2 * n2 + 2) * f(2 * n2 + 4)));
        case CoeffKind::bstar_minus:
            return -std::sqrt(qpow(q, n2 + j2) * f(n2 - j2) * f(n2 + i2) /
                              (f(2 * n2) * f(2 * n2 + 2)));
    }
    return 0.0;
}

inline double classical_coefficient(CoeffKind k, BasisLabel x) {
    const double n2 = x.n2, i2 = x.i2, j2 = x.j2;
    // (n-j+1) = (n2-j2+2)/2, (2n+1) = n2+1, etc.
    switch (k) {
        case CoeffKind::a_plus:
            return std::sqrt(0.25 * (n2 - j2 + 2) * (n2 - i2 + 2) / ((n2 + 1) * (n2 + 2)));
        case CoeffKind::a_minus:
            return std::sqrt(0.25 * (n2 + j2) * (n2 + i2) / (n2 * (n2 + 1)));
        case CoeffKind::b_plus:
            return -std::sqrt(0.25 * (n2 - j2 + 2) * (n2 + i2 + 2) / ((n2 + 1) * (n2 + 2)));
        case CoeffKind::b_minus:
            return std::sqrt(0.25 * (n2 + j2) * (n2 - i2) / (n2 * (n2 + 1)));
        case CoeffKind::bstar_plus:
            return std::sqrt(0.25 * (n2 + j2 + 2) * (n2 - i2 + 2) / ((n2 + 1) * (n2 + 2)));
        case CoeffKind::bstar_minus:
            return -std::sqrt(0.25 * (n2 - j2) * (n2 + i2) / (n2 * (n2 + 1)));
    }
    return 0.0;
}

} // namespace detail

// Action coefficient of the generator attached to `kind` on basis vector x.
// The validity guard comes first: if the shifted target leaves the lattice
// the coefficient is 0 by definition, and the closed form (which can reach
// 0/0 at the n=0 edge) is never evaluated.
inline double rep_coefficient(const DeformationParam& p, CoeffKind kind, BasisLabel x) {
    if (!x.is_valid()) throw config_error("rep_coefficient: invalid label");
    if (!coeff_target(kind, x).is_valid()) return 0.0;
    return p.is_quantum() ? detail::quantum_coefficient(p.q(), kind, x)
                          : detail::classical_coefficient(kind, x);
}

// Coefficients of the adjoint action of alpha, derived by shifting the
// arguments of a-: alpha* sends e^(n)_{ij} to the (n+1/2, i+1/2, j+1/2) and
// (n-1/2, i+1/2, j+1/2) targets.  Built from formulas, not by transposing the
// alpha matrix, so that transposition stays an independent test.
inline double alpha_star_up(const DeformationParam& p, BasisLabel x) {
    return rep_coefficient(p, CoeffKind::a_minus, x.shifted(+1, +1, +1));
}
inline double alpha_star_down(const DeformationParam& p, BasisLabel x) {
    const BasisLabel t = x.shifted(-1, +1, +1);
    if (!t.is_valid()) return 0.0;
    return rep_coefficient(p, CoeffKind::a_plus, t);
}

// Coefficient k_eps of beta beta^*: (beta beta^*) e^(n)_{ij} =
// sum_eps k_eps(n,i,j) e^(n+eps)_{ij}.  Quantum branch only.  The target
// guard is applied before the formula; additionally the first summand of k_0
// is dropped when one of its numerator factors vanishes exactly (n=j or
// i=-n), which resolves the 0/0 form at the (0,0,0) corner.
inline double k_coefficient(const DeformationParam& p, int eps, BasisLabel x) {
    if (!p.is_quantum())
        throw config_error("k_coefficient: defined on the quantum branch only");
    if (!x.is_valid()) throw config_error("k_coefficient: invalid label");
    if (eps < -1 || eps > 1) throw config_error("k_coefficient: eps must be in {-1,0,1}");
    if (!x.shifted(2 * eps, 0, 0).is_valid()) return 0.0;

    const double q = p.q();
    const long n2 = x.n2, i2 = x.i2, j2 = x.j2;
    auto f = [&](long m) { return 1.0 - detail::qpow(q, m); };
    using detail::qpow;

    if (eps == 1) {
        const double inner = qpow(q, 2 * n2 + i2 + j2 + 2) * f(n2 + j2 + 2) / f(2 * n2 + 2) *
                             f(n2 - i2 + 2) / f(2 * n2 + 4) * f(n2 - j2 + 2) / f(2 * n2 + 4) *
                             f(n2 + i2 + 2) / f(2 * n2 + 6);
        return -std::sqrt(inner);
    }
    if (eps == 0) {
        double t1 = 0.0;
        if (n2 != j2 && n2 != -i2)
            t1 = qpow(q, n2 + j2) * f(n2 - j2) * f(n2 + i2) / (f(2 * n2) * f(2 * n2 + 2));
        const double t2 = qpow(q, n2 + i2) * f(n2 + j2 + 2) * f(n2 - i2 + 2) /
                          (f(2 * n2 + 2) * f(2 * n2 + 4));
        return t1 + t2;
    }
    const double inner = qpow(q, 2 * n2 + i2 + j2 - 2) * f(n2 - j2) * f(n2 + i2) * f(n2 + j2) *
                         f(n2 - i2) /
                         (f(2 * n2 - 2) * f(2 * n2) * f(2 * n2) * f(2 * n2 + 2));
    return -std::sqrt(inner);
}

// Extremes of a coefficient over the (2n+1)^2 lattice points of one shell.
struct CoeffBounds {
    double min = 0.0;
    double max = 0.0;
};
inline CoeffBounds coefficient_bounds(const DeformationParam& p, CoeffKind kind, int n2) {
    if (!p.is_quantum())
        throw config_error("coefficient_bounds: quantum branch only");
    if (n2 < 0) throw config_error("coefficient_bounds: n2 must be >= 0");
    bool first = true;
    CoeffBounds b;
    for (int i2 = -n2; i2 <= n2; i2 += 2)
        for (int j2 = -n2; j2 <= n2; j2 += 2) {
            const double v = rep_coefficient(p, kind, BasisLabel{n2, i2, j2});
            if (first) {
                b.min = b.max = v;
                first = false;
            } else {
                if (v < b.min) b.min = v;
                if (v > b.max) b.max = v;
            }
        }
    return b;
}

} // namespace suq2

#endif
