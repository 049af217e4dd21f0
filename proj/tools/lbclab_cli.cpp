// Command-line driver for the stability sweeps, convergence runs,
// forward-fraction table, boundary-treatment comparison, call pricing and
// the acceptance suite.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lbclab/analytic.hpp"
#include "lbclab/csv.hpp"
#include "lbclab/experiments.hpp"
#include "lbclab/timestepper.hpp"

namespace {

struct CommonOpts {
    double r = 0.1, sigma = 0.3, E = 100.0, c = 20.0, S = 400.0, T = 5.0, theta = 0.5;
    int steps = 4000;
    std::vector<int> m_list;
    std::string scheme = "all";
    std::string treatment = "lbc1";
    std::string out = "out.csv";
    bool paper_scale = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--r", o.r, "risk-neutral interest rate");
    cmd->add_option("--sigma", o.sigma, "volatility");
    cmd->add_option("--E", o.E, "strike");
    cmd->add_option("--c", o.c, "grid clustering parameter");
    cmd->add_option("--S", o.S, "domain cap");
    cmd->add_option("--T", o.T, "maturity");
    cmd->add_option("--theta", o.theta, "theta-method parameter in [1/2, 1]");
    cmd->add_option("--steps", o.steps, "number of time steps");
    cmd->add_option("--m-list", o.m_list, "interior dimensions")->delimiter(',');
    cmd->add_option("--scheme", o.scheme,
                    "forward|central-a|central-b|mixed-a|mixed-b|all");
    cmd->add_option("--treatment", o.treatment, "lbc1|lbc2");
    cmd->add_option("--out", o.out, "output CSV path");
    cmd->add_flag("--paper-scale", o.paper_scale, "full-scale dimension lists and step counts");
}

std::vector<lbc::SchemeKind> scheme_list(const std::string& name) {
    if (name == "all")
        return {lbc::SchemeKind::Forward, lbc::SchemeKind::CentralA, lbc::SchemeKind::CentralB,
                lbc::SchemeKind::MixedA, lbc::SchemeKind::MixedB};
    return {lbc::scheme_from_string(name)};
}

lbc::ExperimentPreset make_preset(const CommonOpts& o) {
    lbc::ExperimentPreset p;
    p.r = o.r;
    p.sigma = o.sigma;
    p.E = o.E;
    p.c = o.c;
    p.S = o.S;
    p.T = o.T;
    p.theta = o.theta;
    p.N = o.paper_scale ? 10000 : o.steps;
    p.m_list = o.m_list;
    p.schemes = scheme_list(o.scheme);
    p.treatment = lbc::treatment_from_string(o.treatment);
    p.paper_scale = o.paper_scale;
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference Black--Scholes laboratory for the linear boundary condition"};
    app.require_subcommand(1);

    CommonOpts stab, conv, frac, cmp, price, verify;
    auto* cmd_stab = app.add_subcommand("stability", "max-norm sweeps of e^{tM}");
    auto* cmd_conv = app.add_subcommand("convergence", "spatial error against the analytic call");
    auto* cmd_frac = app.add_subcommand("fractions", "forward fraction of the mixed schemes");
    auto* cmd_cmp = app.add_subcommand("lbc-compare", "paired errors for both boundary treatments");
    auto* cmd_price = app.add_subcommand("price", "solve one call option and dump a snapshot");
    auto* cmd_verify = app.add_subcommand("verify", "run the acceptance suite");
    add_common(cmd_stab, stab);
    add_common(cmd_conv, conv);
    add_common(cmd_frac, frac);
    add_common(cmd_cmp, cmp);
    add_common(cmd_price, price);
    int price_m = 500;
    cmd_price->add_option("--m", price_m, "interior dimension");
    bool skip_slow = false;
    cmd_verify->add_flag("--skip-slow", skip_slow, "skip the slow convergence-order criterion");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_stab->parsed()) {
            auto p = make_preset(stab);
            if (p.m_list.empty())
                for (int m = 50; m <= (p.paper_scale ? 1000 : 400); m += 50) p.m_list.push_back(m);
            lbc::run_stability(p, stab.out);
            std::printf("wrote %s\n", stab.out.c_str());
        } else if (cmd_conv->parsed()) {
            auto p = make_preset(conv);
            if (p.m_list.empty()) p.m_list = lbc::canonical_m_list(p.paper_scale ? 10000 : 2154);
            auto result = lbc::run_convergence(p, conv.out);
            for (const auto& [scheme, order] : result.fitted_orders)
                std::printf("%-10s fitted order %.3f\n", lbc::to_string(scheme), order);
            std::printf("wrote %s\n", conv.out.c_str());
        } else if (cmd_frac->parsed()) {
            auto p = make_preset(frac);
            p.r = frac.r;
            if (p.m_list.empty()) p.m_list = lbc::canonical_m_list(10000);
            for (const auto& row : lbc::run_fractions(p, frac.out))
                std::printf("m=%-6d  %.1f%%  %.1f%%\n", row.m, row.pct_a, row.pct_b);
            std::printf("wrote %s\n", frac.out.c_str());
        } else if (cmd_cmp->parsed()) {
            auto p = make_preset(cmp);
            if (p.m_list.empty()) p.m_list = lbc::canonical_m_list(2154);
            lbc::run_lbc_comparison(p, cmp.out);
            std::printf("wrote %s\n", cmp.out.c_str());
        } else if (cmd_price->parsed()) {
            const lbc::Grid grid = lbc::build_sinh_grid(price.E, price.c, price.S, price_m);
            const lbc::ModelParams params{price.r, price.sigma, price.S, price.E, price.T};
            const lbc::DiscreteOperator op =
                lbc::assemble(grid, params, lbc::scheme_from_string(
                                                price.scheme == "all" ? "central-a" : price.scheme),
                              lbc::treatment_from_string(price.treatment));
            const lbc::CallOption option{price.E, price.r, price.sigma};
            auto result = lbc::solve(op, lbc::payoff_vector(grid, price.E), nullptr,
                                     lbc::ThetaConfig{price.theta, price.steps, 2}, price.T);
            std::FILE* f = std::fopen(price.out.c_str(), "w");
            if (!f) throw std::runtime_error("cannot open " + price.out);
            std::fprintf(f, "s_j,U_j,analytic_j,error_j\n");
            double at_strike = 0.0;
            for (int j = 1; j <= grid.unknowns(); ++j) {
                const double s = grid.node(j);
                const double u = result.U[static_cast<size_t>(j - 1)];
                const double a = lbc::call_price(s, price.T, option);
                std::fprintf(f, "%s,%s,%s,%s\n", lbc::csv_double(s).c_str(),
                             lbc::csv_double(u).c_str(), lbc::csv_double(a).c_str(),
                             lbc::csv_double(u - a).c_str());
                if (j > 1 && grid.node(j - 1) <= price.E && price.E < s) {
                    const double w = (price.E - grid.node(j - 1)) / (s - grid.node(j - 1));
                    at_strike = (1.0 - w) * result.U[static_cast<size_t>(j - 2)] + w * u;
                }
            }
            std::fclose(f);
            std::printf("value at strike: %.10f  (analytic %.10f)\n", at_strike,
                        lbc::call_price(price.E, price.T, option));
            std::printf("wrote %s\n", price.out.c_str());
        } else if (cmd_verify->parsed()) {
            int failed = 0;
            for (const auto& res : lbc::run_acceptance(!skip_slow)) {
                std::printf("criterion %2d %s  %s\n    %s\n", res.id,
                            res.pass ? "PASS" : "FAIL", res.name.c_str(), res.detail.c_str());
                if (!res.pass) ++failed;
            }
            return failed == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
