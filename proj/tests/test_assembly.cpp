#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <map>

#include "suq2/assembly.hpp"
#include "suq2/dirac.hpp"

using namespace suq2;
using Catch::Matchers::WithinAbs;

namespace {

// test-side epsilon-path weights for (beta beta^*)^r, independent of the
// sparse-product route it checks
std::vector<double> weights(const DeformationParam& p, int r, BasisLabel x) {
    std::vector<double> amp(static_cast<std::size_t>(2 * r + 1), 0.0);
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

} // namespace

TEST_CASE("alpha column at the vacuum") {
    const double q = 0.5;
    const auto p = DeformationParam::quantum(q);
    const TruncatedSpace s(6);
    const auto a = build_generator(s, p, GeneratorTag::alpha);
    // single nonzero: a+(0,0,0) at e^(1/2)_{-1/2,-1/2}
    int nnz_col0 = 0;
    a.for_each_entry([&](std::int64_t r, std::int64_t c, cplx v) {
        if (c == 0) {
            ++nnz_col0;
            CHECK(r == s.index_of(BasisLabel{1, -1, -1}));
            CHECK_THAT(v.real(), WithinAbs(q / std::sqrt(1 + q * q), 1e-15));
        }
    });
    CHECK(nnz_col0 == 1);
}

TEST_CASE("dual generators") {
    const double q = 0.5;
    const auto p = DeformationParam::quantum(q);
    const TruncatedSpace s(6);
    const auto a0 = build_generator(s, p, GeneratorTag::a0);
    for (const int n2 : {0, 3, 6}) { // A0 e^(n)_{nn} = q^n e^(n)_{nn}
        const auto c = s.index_of(BasisLabel{n2, n2, n2});
        CHECK_THAT(a0.entry(c, c).real(), WithinAbs(std::pow(q, 0.5 * n2), 1e-15));
    }
    const auto a1 = build_generator(s, p, GeneratorTag::a1);
    for (const int n2 : {0, 2, 5}) { // column vanishes at j = n
        CHECK(a1.column_norm(s.index_of(BasisLabel{n2, n2, n2})) == 0.0);
    }
    // A1 against its printed weight at j < n
    const BasisLabel x{4, 2, 0};
    const double w = std::sqrt(std::pow(q, -4.0) + std::pow(q, 6.0) - 1.0 - std::pow(q, 2.0));
    CHECK_THAT(a1.entry(s.index_of(x.shifted(0, 0, 2)), s.index_of(x)).real(),
               WithinAbs(w, 1e-12));
    CHECK_THROWS_AS(build_generator(s, DeformationParam::classical(), GeneratorTag::a0),
                    config_error);
    CHECK_THROWS_AS(build_generator(s, DeformationParam::classical(), GeneratorTag::a1),
                    config_error);
}

TEST_CASE("adjoints match transposes on interior columns") {
    for (const auto& p : {DeformationParam::quantum(0.5), DeformationParam::classical()}) {
        const TruncatedSpace s(10);
        const auto lim = s.interior(1).count;
        const auto a = build_generator(s, p, GeneratorTag::alpha);
        const auto as = build_generator(s, p, GeneratorTag::alpha_star);
        const auto b = build_generator(s, p, GeneratorTag::beta);
        const auto bs = build_generator(s, p, GeneratorTag::beta_star);
        CHECK((as - a.adjoint()).max_abs(lim) <= 1e-14);
        CHECK((bs - b.adjoint()).max_abs(lim) <= 1e-14);
        // A1* is the transpose of A1 (real weights)
        if (p.is_quantum()) {
            const auto a1 = build_generator(s, p, GeneratorTag::a1);
            const auto a1s = build_generator(s, p, GeneratorTag::a1_star);
            CHECK((a1s - a1.adjoint()).max_abs() == 0.0);
        }
    }
}

TEST_CASE("defining relations hold on the interior") {
    const TruncatedSpace s(12);
    for (const auto& p : {DeformationParam::quantum(0.5), DeformationParam::classical()}) {
        for (const auto& [name, v] : relation_residuals(s, p)) {
            INFO(name);
            CHECK(v <= 1e-12);
        }
    }
    // normality column-by-column
    const auto p = DeformationParam::quantum(0.5);
    const auto b = build_generator(s, p, GeneratorTag::beta);
    const auto bs = build_generator(s, p, GeneratorTag::beta_star);
    const auto R = bs.multiply(b) - b.multiply(bs);
    for (std::int64_t c = 0; c < s.interior(2).count; ++c) CHECK(R.column_norm(c) <= 1e-13);
}

TEST_CASE("monomials") {
    const auto p = DeformationParam::quantum(0.5);
    const TruncatedSpace s(10);
    const auto eye = SparseOperator::identity(s);
    CHECK((build_monomial(s, p, 0, 0, 0) - eye).max_abs() == 0.0);
    CHECK((build_monomial(s, p, 1, 0, 0) - build_generator(s, p, GeneratorTag::alpha)).max_abs() ==
          0.0);
    CHECK_THROWS_AS(build_monomial(s, p, 6, 3, 2), truncation_error);

    // beta beta^* against the k_eps assembly on interior columns
    const auto m = build_monomial(s, p, 0, 1, 1);
    std::vector<SparseOperator::Triplet> trips;
    for (std::int64_t c = 0; c < s.dim(); ++c) {
        const BasisLabel x = s.label_at(c);
        for (int eps = -1; eps <= 1; ++eps) {
            const BasisLabel t = x.shifted(2 * eps, 0, 0);
            if (!s.contains(t)) continue;
            const double v = k_coefficient(p, eps, x);
            if (v != 0.0) trips.push_back({s.index_of(t), c, cplx(v, 0)});
        }
    }
    const auto K = SparseOperator::from_triplets(s, s, 2, std::move(trips));
    const auto R = m - K;
    for (std::int64_t c = 0; c < s.interior(2).count; ++c) CHECK(R.column_norm(c) <= 1e-12);
}

TEST_CASE("choose_r brackets one half") {
    CHECK(choose_r(DeformationParam::quantum(0.5)).r == 1);
    CHECK(choose_r(DeformationParam::quantum(0.9)).r == 4);
    CHECK(choose_r(DeformationParam::quantum(0.99)).r == 35);
}

TEST_CASE("gamma_0 is beta") {
    const auto p = DeformationParam::quantum(0.5);
    const TruncatedSpace s(8);
    CHECK((build_gamma(s, p, 0) - build_generator(s, p, GeneratorTag::beta)).max_abs() == 0.0);
    CHECK_THROWS_AS(build_gamma(TruncatedSpace(4), p, 2), truncation_error);
}

TEST_CASE("gamma_r columns match the epsilon-path expansion on the interior") {
    const auto p = DeformationParam::quantum(0.5);
    const TruncatedSpace s(14);
    for (const int r : {1, 2}) {
        const auto g = build_gamma(s, p, r);
        const auto lim = s.interior(2 * r + 1).count;
        // assemble expected columns from the expansion
        std::map<std::pair<std::int64_t, std::int64_t>, double> expected;
        for (std::int64_t c = 0; c < lim; ++c) {
            const BasisLabel x = s.label_at(c);
            const auto W = weights(p, r, x);
            expected[{c, c}] += 1.0;
            for (int m = -r; m <= r; ++m) {
                const double w = W[static_cast<std::size_t>(m + r)];
                if (w == 0.0) continue;
                const BasisLabel lvl = x.shifted(2 * m, 0, 0);
                expected[{s.index_of(lvl), c}] -= w;
                const double bp = rep_coefficient(p, CoeffKind::b_plus, lvl);
                if (bp != 0.0) expected[{s.index_of(lvl.shifted(1, 1, -1)), c}] += w * bp;
                const double bm = rep_coefficient(p, CoeffKind::b_minus, lvl);
                if (bm != 0.0) expected[{s.index_of(lvl.shifted(-1, 1, -1)), c}] += w * bm;
            }
        }
        double worst = 0.0;
        for (const auto& [rc, v] : expected)
            worst = std::max(worst, std::abs(g.entry(rc.first, rc.second).real() - v));
        g.for_each_entry([&](std::int64_t row, std::int64_t col, cplx v) {
            if (col < lim && !expected.count({row, col}))
                worst = std::max(worst, std::abs(v));
        });
        INFO("r = " << r);
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("contraction norms") {
    const auto p = DeformationParam::quantum(0.5);
    const TruncatedSpace s(16);
    CHECK_THAT(interior_norm(SparseOperator::identity(s), 0), WithinAbs(1.0, 1e-12));
    for (const auto g : {GeneratorTag::alpha, GeneratorTag::beta, GeneratorTag::beta_star})
        CHECK(interior_norm(build_generator(s, p, g), 1) <= 1.0 + 1e-12);
    const auto gam = build_gamma(s, p, 1);
    CHECK(interior_norm(gam, 3) <= 3.0 + 1e-12);
    // monotone in the truncation size
    const TruncatedSpace s2(20);
    CHECK(interior_norm(build_generator(s2, p, GeneratorTag::alpha), 1) + 1e-12 >=
          interior_norm(build_generator(s, p, GeneratorTag::alpha), 1));
}

TEST_CASE("haar state") {
    const double q = 0.5;
    const auto p = DeformationParam::quantum(q);
    const TruncatedSpace s(8);
    CHECK(haar_state(SparseOperator::identity(s)).real() == 1.0);
    CHECK(haar_state(build_generator(s, p, GeneratorTag::beta)) == cplx(0, 0));
    CHECK_THAT(haar_state(build_monomial(s, p, 0, 1, 1)).real(),
               WithinAbs(1.0 / (1 + q * q), 1e-14));
    // classical value of h(beta beta^*) is 1/2
    CHECK_THAT(haar_state(build_monomial(s, DeformationParam::classical(), 0, 1, 1)).real(),
               WithinAbs(0.5, 1e-14));
}

TEST_CASE("commutators with the dual generators vanish identically") {
    const auto p = DeformationParam::quantum(0.5);
    const TruncatedSpace s(10);
    const auto D = build_dirac(s, DiracFamily::generic());
    CHECK(commutator(D, build_generator(s, p, GeneratorTag::a0)).max_abs() == 0.0);
    CHECK(commutator(D, build_generator(s, p, GeneratorTag::a1)).max_abs() == 0.0);
    CHECK(commutator(D, build_generator(s, p, GeneratorTag::a1_star)).max_abs() == 0.0);
    const auto b = build_generator(s, p, GeneratorTag::beta);
    CHECK(commutator(SparseOperator::identity(s), b).max_abs() == 0.0);
}

TEST_CASE("commutator with alpha carries the d-difference") {
    const auto p = DeformationParam::quantum(0.5);
    const TruncatedSpace s(10);
    const auto fam = DiracFamily::generic();
    const auto C = commutator(build_dirac(s, fam), build_generator(s, p, GeneratorTag::alpha));
    for (const BasisLabel x : {BasisLabel{2, 2, 0}, BasisLabel{5, -1, 3}, BasisLabel{7, 7, -7}}) {
        const auto c = s.index_of(x);
        const BasisLabel up = coeff_target(CoeffKind::a_plus, x);
        const double want_up = rep_coefficient(p, CoeffKind::a_plus, x) *
                               (fam.d(up.n2, up.i2) - fam.d(x.n2, x.i2));
        CHECK_THAT(C.entry(s.index_of(up), c).real(), WithinAbs(want_up, 1e-13));
        const BasisLabel dn = coeff_target(CoeffKind::a_minus, x);
        if (dn.is_valid()) {
            const double want_dn = rep_coefficient(p, CoeffKind::a_minus, x) *
                                   (fam.d(dn.n2, dn.i2) - fam.d(x.n2, x.i2));
            CHECK_THAT(C.entry(s.index_of(dn), c).real(), WithinAbs(want_dn, 1e-13));
        }
    }
}

TEST_CASE("nondegeneracy: monomial commutators with the generic D do not vanish") {
    const auto p = DeformationParam::quantum(0.5);
    const TruncatedSpace s(20);
    const auto D = build_dirac(s, DiracFamily::generic());
    for (int pw = -3; pw <= 3; ++pw)
        for (int sd = 0; sd <= 3; ++sd)
            for (int td = 0; td <= 3; ++td) {
                const int deg = std::abs(pw) + sd + td;
                if (deg < 1 || deg > 3) continue;
                const auto M = build_monomial(s, p, pw, sd, td);
                const double nrm = interior_norm(commutator(D, M), deg + 0);
                INFO("monomial (" << pw << "," << sd << "," << td << ")");
                CHECK(nrm > 1e-6);
            }
}

TEST_CASE("u_approx") {
    const auto p = DeformationParam::quantum(0.5);
    const TruncatedSpace s(20);
    CHECK_THROWS_AS(build_u_approx(s, p, 0.4), config_error);
    CHECK_THROWS_AS(build_u_approx(s, p, 1.0), config_error);
    const auto u = build_u_approx(s, p, 0.75);
    CHECK(u.projection_rank > 0);
    CHECK(u.cluster_gap > 0.05); // window sits inside a genuine spectral gap
    // distance to gamma_1 measured on interior columns
    const auto g = build_gamma(s, p, 1);
    const auto diff = g - u.op;
    const double dist = largest_singular_value(diff, s.shell_end(s.n2_max() - 6));
    CHECK(dist <= 0.6);
}
