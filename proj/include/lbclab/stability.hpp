#pragma once

#include <string>
#include <vector>

#include "lbclab/discrete_operator.hpp"
#include "lbclab/grid.hpp"
#include "lbclab/linalg.hpp"

namespace lbc {

/// One sampled norm with its theoretical bracket.
struct StabilityRecord {
    double t_or_n;
    double measured;
    double lower;
    double upper;
    bool within;
};

struct StabilityReport {
    std::vector<StabilityRecord> records;
    bool condition_holds = false;
    bool verifiable = false;  ///< false when the sufficient condition failed
    bool all_within = false;
    double measured_K = 1.0;  ///< only meaningful for the fully discrete check
    std::string context;
};

/// Closed form of the boundary-block exponential e^{tC}.
DenseMatrix exp_tC_closed_form(const Grid& grid, double r, double t);

/// ||e^{tC}||_inf = e^{-rt} + (1 - e^{-rt}) * 2S/h_{m+2}.
double norm_exp_tC(const Grid& grid, double r, double t);

struct Inclusion {
    double lower;
    double upper;
};

/// Bracket for ||e^{tM}||_inf under the sufficient stability condition.
Inclusion theoretical_inclusion(const Grid& grid, double r, double t);

/// Measured ||e^{tM}||_inf at each sample against the theoretical bracket,
/// plus a block-triangularity check of e^{tM}. Operators failing the
/// sufficient condition yield a report flagged unverifiable.
StabilityReport verify_semidiscrete_inclusion(const DiscreteOperator& op,
                                              const std::vector<double>& t_samples);

/// Largest entry of the lower-left m-column block of e^{tM} (exact zero in
/// theory for lbc1 operators).
double lower_left_block_max(const DiscreteOperator& op, double t);

struct SweepResult {
    double max_norm = 0.0;
    bool overflow = false;
};

/// max{ ||e^{tM}||_inf : t = 0..t_max } computed as powers of expm(M).
SweepResult max_norm_sweep(const DiscreteOperator& op, int t_max = 100);

/// Stability function of the theta-method.
double theta_phi(double z, double theta);

/// Closed form ||phi(dt C)^n||_inf = x^n + (1 - x^n) 2S/h_{m+2},
/// x = phi(-r dt).
double phi_power_norm_C(const Grid& grid, double r, double theta, double dt, int n);

/// Largest ||phi(dt A)^n||_inf over n = 0..N (the empirical K).
double measure_K(const DiscreteOperator& op, double theta, double dt, int N);

/// Measured ||phi(dt M)^n||_inf for n = 1..N against the fully discrete
/// bracket, with K measured from the interior block.
StabilityReport verify_discrete_inclusion(const DiscreteOperator& op, double theta, double dt, int N);

/// CSV dump with columns (m, t_or_n, norm, lower, upper, verdict).
void write_stability_csv(const StabilityReport& report, int m, const std::string& path);

}  // namespace lbc
