#ifndef SUQ2_RUN_HPP
#define SUQ2_RUN_HPP

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "suq2/fredholm.hpp"
#include "suq2/matrix_io.hpp"

namespace suq2 {

// Exit-code contract: 0 all checks pass, 1 config error, 2 unstable or failed
// numerical check.
enum ExitCode { exit_ok = 0, exit_config = 1, exit_numerical = 2 };

struct RunConfig {
    double q = 0.5;
    Branch branch = Branch::quantum;
    int n2_max = 20;
    int band = 2;
    int r = -1; // -1 = auto via choose_r
    std::string family = "generic";
    std::vector<int> F = {0};
    double tol = 1e-6;
    std::vector<int> sizes = {24, 32, 40};
    std::string out_dir = ".";

    void validate() const {
        if (branch == Branch::quantum) {
            if (!(q > 0.0 && q < 1.0))
                throw config_error("quantum branch requires q in (0,1)");
        } else if (q != 1.0) {
            throw config_error("classical branch requires q = 1");
        }
        if (n2_max < 4) throw config_error("n2_max must be >= 4");
        if (band < 0) throw config_error("band must be >= 0");
        if (tol <= 0) throw config_error("tol must be positive");
        if (sizes.size() < 3) throw config_error("need at least 3 sizes");
        for (std::size_t t = 1; t < sizes.size(); ++t)
            if (sizes[t] <= sizes[t - 1]) throw config_error("sizes must be strictly increasing");
        for (const int k : F)
            if (k < 0) throw config_error("F entries must be >= 0");
    }

    DeformationParam param() const {
        return branch == Branch::quantum ? DeformationParam::quantum(q)
                                         : DeformationParam::classical();
    }

    DiracFamily parse_family() const {
        if (family == "generic") return DiracFamily::generic();
        if (family == "staircase") return DiracFamily::staircase();
        if (family.rfind("signset:", 0) == 0) {
            std::set<int> F2;
            std::stringstream ss(family.substr(8));
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) F2.insert(std::stoi(tok));
            return DiracFamily::sign_set(std::move(F2));
        }
        if (family.rfind("table:", 0) == 0) {
            std::ifstream is(family.substr(6));
            if (!is) throw config_error("family table file not found: " + family.substr(6));
            std::map<std::pair<int, int>, double> vals;
            int n2 = 0, i2 = 0;
            double v = 0;
            while (is >> n2 >> i2 >> v) vals[{n2, i2}] = v;
            return DiracFamily::table(std::move(vals));
        }
        throw config_error("unknown family spec: " + family +
                           " (expected generic | staircase | signset:k,... | table:path)");
    }
};

// Flat key-value report with nested section names; deterministic apart from
// the timestamp line.
class Report {
public:
    explicit Report(std::string command) : command_(std::move(command)) {}

    void add(const std::string& key, const std::string& value) {
        lines_.emplace_back(key, value);
    }
    void add(const std::string& key, double v) {
        lines_.emplace_back(key, detail::format_real(v));
    }
    void add(const std::string& key, std::int64_t v) { lines_.emplace_back(key, std::to_string(v)); }
    void add(const std::string& key, int v) { lines_.emplace_back(key, std::to_string(v)); }
    void add(const std::string& key, bool v) { lines_.emplace_back(key, v ? "true" : "false"); }

    std::string text(bool with_timestamp = true) const {
        std::ostringstream os;
        os << "schema: suq2-report-v1\n";
        os << "command: " << command_ << "\n";
        if (with_timestamp) {
            const std::time_t now = std::time(nullptr);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
            os << "timestamp: " << buf << "\n";
        }
        for (const auto& [k, v] : lines_) os << k << ": " << v << "\n";
        return os.str();
    }

    void write(const std::string& out_dir) const {
        std::filesystem::create_directories(out_dir);
        const auto path = std::filesystem::path(out_dir) / (command_ + "_report.txt");
        std::ofstream os(path);
        os << text();
        if (!os) throw std::runtime_error("cannot write " + path.string());
    }

private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> lines_;
};

namespace detail {

inline void write_csv(const std::string& out_dir, const std::string& name,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& cols) {
    std::filesystem::create_directories(out_dir);
    std::ofstream os(std::filesystem::path(out_dir) / name);
    for (std::size_t h = 0; h < header.size(); ++h)
        os << header[h] << (h + 1 < header.size() ? ',' : '\n');
    std::size_t n = 0;
    for (const auto& c : cols) n = std::max(n, c.size());
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t h = 0; h < cols.size(); ++h) {
            if (t < cols[h].size()) os << format_real(cols[h][t]);
            os << (h + 1 < cols.size() ? ',' : '\n');
        }
    }
}

inline void echo_config(Report& rep, const RunConfig& cfg) {
    rep.add("config.q", cfg.q);
    rep.add("config.branch", std::string(cfg.branch == Branch::quantum ? "quantum" : "classical"));
    rep.add("config.n2_max", cfg.n2_max);
    rep.add("config.band", cfg.band);
    rep.add("config.r", cfg.r);
    rep.add("config.family", cfg.family);
    rep.add("config.tol", cfg.tol);
    std::string sz;
    for (const int s : cfg.sizes) sz += (sz.empty() ? "" : " ") + std::to_string(s);
    rep.add("config.sizes", sz);
}

} // namespace detail

struct CommandResult {
    Report report;
    int exit_code = exit_ok;
};

// Relation residuals, adjoint consistency, and the beta beta^* oracle.
inline CommandResult cmd_verify(const RunConfig& cfg) {
    cfg.validate();
    Report rep("verify");
    detail::echo_config(rep, cfg);
    const auto p = cfg.param();
    const TruncatedSpace space(cfg.n2_max);
    bool pass = true;
    std::string first_fail;
    auto check = [&](const std::string& key, double v) {
        rep.add(key, v);
        rep.add(key + ".pass", v <= cfg.tol);
        if (v > cfg.tol && pass) {
            pass = false;
            first_fail = key;
        }
    };

    for (const auto& [name, v] : relation_residuals(space, p))
        check("relations." + name, v);

    const auto interior = space.interior(1).count;
    const SparseOperator a = build_generator(space, p, GeneratorTag::alpha);
    const SparseOperator as = build_generator(space, p, GeneratorTag::alpha_star);
    const SparseOperator b = build_generator(space, p, GeneratorTag::beta);
    const SparseOperator bs = build_generator(space, p, GeneratorTag::beta_star);
    check("adjoint.alpha", (as - a.adjoint()).max_abs(interior));
    check("adjoint.beta", (bs - b.adjoint()).max_abs(interior));

    if (p.is_quantum()) {
        // k_eps assembly against the composed product beta beta^*
        std::vector<SparseOperator::Triplet> trips;
        for (std::int64_t c = 0; c < space.dim(); ++c) {
            const BasisLabel x = space.label_at(c);
            for (int eps = -1; eps <= 1; ++eps) {
                const BasisLabel t = x.shifted(2 * eps, 0, 0);
                if (!space.contains(t)) continue;
                const double v = k_coefficient(p, eps, x);
                if (v != 0.0) trips.push_back({space.index_of(t), c, cplx(v, 0)});
            }
        }
        const SparseOperator K =
            SparseOperator::from_triplets(space, space, 2, std::move(trips));
        const SparseOperator R = b.multiply(bs) - K;
        double worst = 0.0;
        for (std::int64_t c = 0; c < space.interior(2).count; ++c)
            worst = std::max(worst, R.column_norm(c));
        check("k_oracle.beta_beta_star", worst);
    } else {
        rep.add("k_oracle.beta_beta_star", std::string("skipped"));
    }

    rep.add("verdict", pass);
    if (!pass) rep.add("first_failure", first_fail);
    rep.write(cfg.out_dir);
    return {std::move(rep), pass ? exit_ok : exit_numerical};
}

// Growth conditions, sign structure, spectral dimension, commutator norms.
inline CommandResult cmd_analyze(const RunConfig& cfg) {
    cfg.validate();
    Report rep("analyze");
    detail::echo_config(rep, cfg);
    const auto p = cfg.param();
    const DiracFamily fam = cfg.parse_family();
    bool unstable = false;

    const GrowthReport growth = check_growth_conditions(fam, cfg.n2_max, cfg.branch);
    rep.add("growth.sup_plus", growth.sup_plus);
    rep.add("growth.sup_minus_scaled", growth.sup_minus_scaled);
    rep.add("growth.plus_bounded", growth.plus_bounded);
    rep.add("growth.minus_bounded", growth.minus_bounded);
    rep.add("growth.verdict", growth.verdict);
    detail::write_csv(cfg.out_dir, "growth_shell_maxima.csv", {"n2", "max_plus", "max_minus"},
                      {[&] {
                           std::vector<double> v;
                           for (std::size_t t = 0; t < growth.shell_max_plus.size(); ++t)
                               v.push_back(static_cast<double>(t));
                           return v;
                       }(),
                       growth.shell_max_plus, growth.shell_max_minus});

    const SignStructure ss = sign_structure(fam, 2, 2, std::max(cfg.n2_max, 8));
    rep.add("signs.T", std::string(to_string(ss.sign_T)));
    for (std::size_t r = 0; r < ss.sign_S.size(); ++r)
        rep.add("signs.S" + std::to_string(r), std::string(to_string(ss.sign_S[r])));

    if (cfg.n2_max >= 20) {
        const DimensionFit fit = spectral_dimension(fam, cfg.n2_max, 25);
        rep.add("dimension.slope", fit.slope);
        rep.add("dimension.fit_quality", fit.fit_quality);
        rep.add("dimension.complete_up_to", fit.complete_up_to);
        std::vector<double> lam(fit.lambda_grid), cnt;
        for (const auto c : fit.counting) cnt.push_back(static_cast<double>(c));
        detail::write_csv(cfg.out_dir, "counting_function.csv", {"lambda", "count"}, {lam, cnt});
        if (fit.fit_quality < 0.9) unstable = true;
    } else {
        rep.add("dimension", std::string("skipped (n2_max < 20)"));
    }

    // commutator norms across the size schedule
    std::vector<double> na, nb, szs;
    for (const int N : cfg.sizes) {
        const TruncatedSpace s(N);
        const SparseOperator D = build_dirac(s, fam);
        const SparseOperator al = build_generator(s, p, GeneratorTag::alpha);
        const SparseOperator be = build_generator(s, p, GeneratorTag::beta);
        na.push_back(interior_norm(commutator(D, al), 1));
        nb.push_back(interior_norm(commutator(D, be), 1));
        szs.push_back(N);
    }
    for (std::size_t t = 0; t < szs.size(); ++t) {
        rep.add("commutator.alpha.n" + std::to_string(cfg.sizes[t]), na[t]);
        rep.add("commutator.beta.n" + std::to_string(cfg.sizes[t]), nb[t]);
    }
    detail::write_csv(cfg.out_dir, "commutator_norms.csv", {"n2_max", "D_alpha", "D_beta"},
                      {szs, na, nb});
    const bool grows = na.back() > 1.2 * na.front() || nb.back() > 1.2 * nb.front();
    rep.add("commutator.trend", std::string(grows ? "unbounded-trend" : "stable"));

    if (cfg.branch == Branch::classical) {
        const auto witnesses = classical_sign_sum_check(fam, 2.0, cfg.n2_max);
        int mixed = 0, found = 0;
        for (const auto& w : witnesses)
            if (w.mixed) {
                ++mixed;
                if (w.found) ++found;
            }
        rep.add("sign_sum.mixed_shells", mixed);
        rep.add("sign_sum.witnessed", found);
        if (fam.kind() == FamilyKind::classical_staircase) {
            const MultiplicityProfile mp = multiplicity_profile(fam, cfg.n2_max);
            rep.add("multiplicity.exponent", mp.fitted_exponent);
        }
    }

    rep.add("verdict", !unstable);
    rep.write(cfg.out_dir);
    return {std::move(rep), unstable ? exit_numerical : exit_ok};
}

// Index pairings: per-row indices of gamma_r, sector table, compactness,
// gamma-vs-u distance, fundamental-unitary pairing.
inline CommandResult cmd_pair(const RunConfig& cfg) {
    cfg.validate();
    Report rep("pair");
    detail::echo_config(rep, cfg);
    bool unstable = false;

    const DiracFamily fam = cfg.parse_family();
    if (cfg.branch == Branch::quantum) {
        const auto p = cfg.param();
        const std::optional<int> r_over = cfg.r >= 0 ? std::optional<int>(cfg.r) : std::nullopt;
        const std::set<int> F(cfg.F.begin(), cfg.F.end());
        const PairingResult pr = pairing(p, r_over, F, cfg.sizes, cfg.tol);
        rep.add("pairing.r", pr.r);
        for (std::size_t t = 0; t < pr.per_k.size(); ++t) {
            const auto& ir = pr.per_k[t];
            const std::string key = "index.P" + std::to_string(pr.F[t]);
            if (ir.stabilized)
                rep.add(key, *ir.stabilized);
            else {
                rep.add(key, std::string("unstable"));
                unstable = true;
            }
            const auto st = sector_total_index(p, pr.r, pr.F[t], cfg.sizes.back());
            rep.add(key + ".sector_method", st ? std::to_string(*st) : "undetermined");
            if (ir.stabilized && st && *st != *ir.stabilized) unstable = true;
        }
        if (pr.value)
            rep.add("pairing.total", *pr.value);
        else {
            rep.add("pairing.total", std::string("unstable"));
            unstable = true;
        }

        // compactness of the off-diagonal compressions
        const TruncatedSpace s(cfg.sizes.back());
        const SparseOperator g = build_gamma(s, p, pr.r);
        for (int l = 1; l <= 2; ++l) {
            const auto prof =
                compactness_profile(g, RowProjection{0}, RowProjection{l}, s.n2_max());
            rep.add("compactness.P0_to_P" + std::to_string(l),
                    std::string(prof.compact_consistent ? "compact-consistent" : "suspect"));
            if (!prof.norms.empty())
                rep.add("compactness.P0_to_P" + std::to_string(l) + ".tail", prof.norms.back());
        }

        // distance to the spectral-projection unitary (diagnostic)
        const TruncatedSpace su(std::min(cfg.n2_max, cfg.sizes.back()));
        const double window = 0.5 * (1.0 + p.q());
        const UApprox u = build_u_approx(su, p, window);
        const SparseOperator gg = build_gamma(su, p, pr.r);
        const SparseOperator diff = gg - u.op;
        const double dist =
            largest_singular_value(diff, su.shell_end(std::max(0, su.n2_max() - 6)));
        rep.add("u_approx.window", window);
        rep.add("u_approx.cluster_gap", u.cluster_gap);
        rep.add("u_approx.distance_interior", dist);
    } else {
        rep.add("pairing", std::string("skipped (gamma_r pairing is quantum-only)"));
    }

    const IndexReport fu = pairing_fundamental_unitary(cfg.param(), fam, cfg.sizes, cfg.tol);
    if (fu.stabilized)
        rep.add("fundamental_unitary.index", *fu.stabilized);
    else {
        rep.add("fundamental_unitary.index", std::string("unstable"));
        unstable = true;
    }

    rep.add("verdict", !unstable);
    rep.write(cfg.out_dir);
    return {std::move(rep), unstable ? exit_numerical : exit_ok};
}

// Writes the requested operator(s) in the export_matrix format.
inline CommandResult cmd_export(const RunConfig& cfg, const std::string& what) {
    cfg.validate();
    Report rep("export");
    detail::echo_config(rep, cfg);
    const auto p = cfg.param();
    const TruncatedSpace space(cfg.n2_max);
    std::filesystem::create_directories(cfg.out_dir);

    auto emit = [&](const std::string& name, const SparseOperator& A) {
        const auto path = (std::filesystem::path(cfg.out_dir) / (name + ".mtx")).string();
        export_matrix(A, path);
        rep.add("file." + name, path);
    };
    const bool all = what == "all";
    if (all || what == "alpha") emit("alpha", build_generator(space, p, GeneratorTag::alpha));
    if (all || what == "alpha_star")
        emit("alpha_star", build_generator(space, p, GeneratorTag::alpha_star));
    if (all || what == "beta") emit("beta", build_generator(space, p, GeneratorTag::beta));
    if (all || what == "beta_star")
        emit("beta_star", build_generator(space, p, GeneratorTag::beta_star));
    if (p.is_quantum()) {
        if (all || what == "a0") emit("A0", build_generator(space, p, GeneratorTag::a0));
        if (all || what == "a1") emit("A1", build_generator(space, p, GeneratorTag::a1));
        if (all || what == "gamma") {
            const int r = cfg.r >= 0 ? cfg.r : choose_r(p).r;
            emit("gamma_r" + std::to_string(r), build_gamma(space, p, r));
        }
    }
    if (all || what == "dirac") emit("dirac", build_dirac(space, cfg.parse_family()));
    rep.write(cfg.out_dir);
    return {std::move(rep), exit_ok};
}

} // namespace suq2

#endif
