// Command-line front end: verify / analyze / pair / export.
#include <CLI11.hpp>
#include <iostream>

#include "suq2/run.hpp"

namespace {

void add_common(CLI::App* cmd, suq2::RunConfig& cfg, std::string& branch) {
    cmd->add_option("--q", cfg.q, "deformation parameter (default 0.5)");
    cmd->add_option("--branch", branch, "quantum | classical")
        ->check(CLI::IsMember({"quantum", "classical"}));
    cmd->add_option("--n2max", cfg.n2_max, "truncation cutoff 2n_max (default 20)");
    cmd->add_option("--band", cfg.band, "interior band for residual checks (default 2)");
    cmd->add_option("--r", cfg.r, "power r in gamma_r; -1 = choose from q");
    cmd->add_option("--family", cfg.family,
                    "dirac family: generic | staircase | signset:k,... | table:path");
    cmd->add_option("--F", cfg.F, "row set F defining sign D = I - 2 sum P_k")->delimiter(',');
    cmd->add_option("--tol", cfg.tol, "kernel threshold / residual tolerance");
    cmd->add_option("--sizes", cfg.sizes, "truncation schedule for index runs")->delimiter(',');
    cmd->add_option("--out", cfg.out_dir, "output directory for reports and CSV");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"equivariant Dirac operators on quantum SU(2): verification, "
                 "summability analysis and Fredholm index pairings"};
    app.require_subcommand(1);

    suq2::RunConfig cfg;
    std::string branch = "quantum";
    std::string what = "all";

    auto* verify = app.add_subcommand("verify", "check the defining relations and oracles");
    add_common(verify, cfg, branch);
    auto* analyze = app.add_subcommand("analyze", "growth, sign structure, spectral dimension");
    add_common(analyze, cfg, branch);
    auto* pair = app.add_subcommand("pair", "Fredholm index pairings");
    add_common(pair, cfg, branch);
    auto* exp = app.add_subcommand("export", "write operator matrices to text files");
    add_common(exp, cfg, branch);
    exp->add_option("--what", what,
                    "alpha | alpha_star | beta | beta_star | a0 | a1 | gamma | dirac | all");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.branch = branch == "classical" ? suq2::Branch::classical : suq2::Branch::quantum;
        if (cfg.branch == suq2::Branch::classical) cfg.q = 1.0;

        suq2::CommandResult res = [&] {
            if (verify->parsed()) return suq2::cmd_verify(cfg);
            if (analyze->parsed()) return suq2::cmd_analyze(cfg);
            if (pair->parsed()) return suq2::cmd_pair(cfg);
            return suq2::cmd_export(cfg, what);
        }();
        std::cout << res.report.text();
        return res.exit_code;
    } catch (const suq2::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return suq2::exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return suq2::exit_numerical;
    }
}
