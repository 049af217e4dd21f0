#pragma once

#include <string>
#include <vector>

#include "lbclab/discrete_operator.hpp"

namespace lbc {

/// Named parameter bundle for one experiment run.
struct ExperimentPreset {
    double r = 0.1;
    double sigma = 0.3;
    double E = 100.0;
    double c = 20.0;
    double S = 400.0;
    double T = 5.0;
    double theta = 0.5;
    int N = 4000;
    std::vector<int> m_list;
    std::vector<SchemeKind> schemes;
    BoundaryTreatment treatment = BoundaryTreatment::LBC1;
    bool paper_scale = false;
};

/// The canonical log-spaced dimension sequence 100..10000.
std::vector<int> canonical_m_list(int m_max);

struct StabilityRow {
    SchemeKind scheme;
    BoundaryTreatment treatment;
    int m;
    double max_norm;
    double two_s_over_h;
    bool condition_holds;
    bool overflow;
};

std::vector<StabilityRow> run_stability(const ExperimentPreset& preset, const std::string& out_csv);

struct ConvergenceRow {
    SchemeKind scheme;
    BoundaryTreatment treatment;
    int m;
    double error;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    std::vector<std::pair<SchemeKind, double>> fitted_orders;
};

ConvergenceResult run_convergence(const ExperimentPreset& preset, const std::string& out_csv);

struct FractionRow {
    int m;
    double pct_a;  ///< percent, rounded to 0.1
    double pct_b;
};

std::vector<FractionRow> run_fractions(const ExperimentPreset& preset, const std::string& out_csv);

struct LbcComparisonRow {
    SchemeKind scheme;
    int m;
    double error_lbc1;
    double error_lbc2;
    double ratio;
};

std::vector<LbcComparisonRow> run_lbc_comparison(const ExperimentPreset& preset,
                                                 const std::string& out_csv);

/// Max-norm spatial error of the fully discrete solve against the analytic
/// call on the sinh grid.
double spatial_error(SchemeKind scheme, BoundaryTreatment treatment, double r, double sigma,
                     double E, double c, double S, double T, int m, int N);

/// Least-squares slope of log(error) against log(1/m) over m <= window_max.
double fit_order(const std::vector<int>& ms, const std::vector<double>& errors, double window_max);

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

/// Acceptance suite; the slow convergence-order criterion is skipped when
/// include_slow is false (reported as skipped, not failed).
std::vector<CriterionResult> run_acceptance(bool include_slow);

}  // namespace lbc
