#include "lbclab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "lbclab/csv.hpp"

namespace lbc {

namespace {
constexpr double kRelSlack = 1e-8;

bool integer_samples(const std::vector<double>& t) {
    for (double v : t)
        if (!(v >= 0.0) || v != std::floor(v)) return false;
    return true;
}
}  // namespace

DenseMatrix exp_tC_closed_form(const Grid& grid, double r, double t) {
    const double h = grid.last_width();
    const double s = grid.node(grid.m + 1), S = grid.S;
    const double e = std::exp(-r * t);
    DenseMatrix X(2, 2);
    X(0, 0) = (S * e - s) / h;
    X(0, 1) = s * (1.0 - e) / h;
    X(1, 0) = S * (e - 1.0) / h;
    X(1, 1) = (S - s * e) / h;
    return X;
}

double norm_exp_tC(const Grid& grid, double r, double t) {
    const double e = std::exp(-r * t);
    return e + (1.0 - e) * 2.0 * grid.S / grid.last_width();
}

Inclusion theoretical_inclusion(const Grid& grid, double r, double t) {
    const double e = std::exp(-r * t);
    const double ratio = 2.0 * grid.S / grid.last_width();
    return {e + (1.0 - e) * ratio, e + (1.0 + 3.0 * e) * ratio};
}

double lower_left_block_max(const DiscreteOperator& op, double t) {
    const DenseMatrix E = expm(op.to_dense().scaled(t));
    const int m = op.m();
    double mx = 0.0;
    for (int i = m; i < op.size(); ++i)
        for (int j = 0; j < m; ++j) mx = std::max(mx, std::abs(E(i, j)));
    return mx;
}

StabilityReport verify_semidiscrete_inclusion(const DiscreteOperator& op,
                                              const std::vector<double>& t_samples) {
    StabilityReport rep;
    rep.context = std::string(to_string(op.scheme)) + "/" + to_string(op.treatment);
    const ConditionVerdict verdict = check_stability_condition(op);
    rep.condition_holds = verdict.holds;
    if (!verdict.holds) {
        rep.verifiable = false;
        return rep;
    }
    rep.verifiable = true;

    const DenseMatrix M = op.to_dense();
    std::vector<double> measured(t_samples.size());
    if (integer_samples(t_samples) && std::is_sorted(t_samples.begin(), t_samples.end())) {
        // One exponential plus repeated multiplies covers every integer sample.
        const DenseMatrix E = expm(M);
        DenseMatrix P = DenseMatrix::identity(M.rows());
        int t = 0;
        for (size_t k = 0; k < t_samples.size(); ++k) {
            const int target = static_cast<int>(t_samples[k]);
            for (; t < target; ++t) P = P * E;
            measured[k] = norm_inf(P);
        }
    } else {
        for (size_t k = 0; k < t_samples.size(); ++k)
            measured[k] = norm_inf(expm(M.scaled(t_samples[k])));
    }

    rep.all_within = true;
    for (size_t k = 0; k < t_samples.size(); ++k) {
        const Inclusion inc = theoretical_inclusion(op.grid, op.params.r, t_samples[k]);
        StabilityRecord rec{t_samples[k], measured[k], inc.lower, inc.upper,
                            measured[k] >= inc.lower * (1.0 - kRelSlack) &&
                                measured[k] <= inc.upper * (1.0 + kRelSlack)};
        rep.all_within = rep.all_within && rec.within;
        rep.records.push_back(rec);
    }
    return rep;
}

SweepResult max_norm_sweep(const DiscreteOperator& op, int t_max) {
    SweepResult out;
    const PowerNorms powers = matrix_power_norms(expm(op.to_dense()), t_max);
    out.overflow = powers.overflow;
    out.max_norm = *std::max_element(powers.norms.begin(), powers.norms.end());
    return out;
}

double theta_phi(double z, double theta) { return (1.0 + (1.0 - theta) * z) / (1.0 - theta * z); }

double phi_power_norm_C(const Grid& grid, double r, double theta, double dt, int n) {
    if (n < 0) throw std::invalid_argument("phi_power_norm_C: need n >= 0");
    const double xn = std::pow(theta_phi(-r * dt, theta), n);
    return xn + (1.0 - xn) * 2.0 * grid.S / grid.last_width();
}

double measure_K(const DiscreteOperator& op, double theta, double dt, int N) {
    const DenseMatrix PhiA = theta_stability_matrix(op.a_block(), theta, dt);
    const PowerNorms powers = matrix_power_norms(PhiA, N);
    return *std::max_element(powers.norms.begin(), powers.norms.end());
}

StabilityReport verify_discrete_inclusion(const DiscreteOperator& op, double theta, double dt, int N) {
    StabilityReport rep;
    rep.context = std::string(to_string(op.scheme)) + "/" + to_string(op.treatment);
    const ConditionVerdict verdict = check_stability_condition(op);
    rep.condition_holds = verdict.holds;
    if (!verdict.holds) {
        rep.verifiable = false;
        return rep;
    }
    rep.verifiable = true;
    rep.measured_K = measure_K(op, theta, dt, N);

    const double x = theta_phi(-op.params.r * dt, theta);
    const double Sh = op.grid.S / op.grid.last_width();
    const double upper = rep.measured_K + 4.0 * (rep.measured_K + 1.0) * Sh;

    const DenseMatrix PhiM = theta_stability_matrix(op.tri, theta, dt);
    DenseMatrix P = DenseMatrix::identity(PhiM.rows());
    rep.all_within = true;
    for (int n = 1; n <= N; ++n) {
        P = P * PhiM;
        const double measured = norm_inf(P);
        const double lower = std::pow(x, n) + (1.0 - std::pow(x, n)) * 2.0 * Sh;
        StabilityRecord rec{static_cast<double>(n), measured, lower, upper,
                            measured >= lower * (1.0 - kRelSlack) &&
                                measured <= upper * (1.0 + kRelSlack)};
        rep.all_within = rep.all_within && rec.within;
        rep.records.push_back(rec);
    }
    return rep;
}

void write_stability_csv(const StabilityReport& report, int m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "m,t_or_n,norm,lower,upper,verdict\n";
    for (const StabilityRecord& rec : report.records)
        out << m << ',' << csv_double(rec.t_or_n) << ',' << csv_double(rec.measured) << ','
            << csv_double(rec.lower) << ',' << csv_double(rec.upper) << ','
            << (rec.within ? "within" : "outside") << '\n';
}

}  // namespace lbc
