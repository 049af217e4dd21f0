#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lbclab/grid.hpp"
#include "lbclab/linalg.hpp"
#include "lbclab/model.hpp"

namespace lbc {

enum class SchemeKind { Forward, CentralA, CentralB, MixedA, MixedB };
enum class BoundaryTreatment { LBC1, LBC2 };

const char* to_string(SchemeKind s);
const char* to_string(BoundaryTreatment t);
SchemeKind scheme_from_string(const std::string& name);
BoundaryTreatment treatment_from_string(const std::string& name);

/// Row coefficients (beta_j, alpha_j, gamma_j) of one interior stencil.
struct RowCoeffs {
    double beta, alpha, gamma;
};

/// First-order forward advection + central diffusion + reaction.
RowCoeffs coefficients_forward(const Grid& grid, const ModelParams& params, int j);
/// Second-order central advection (variant A) + central diffusion + reaction.
RowCoeffs coefficients_central_a(const Grid& grid, const ModelParams& params, int j);
/// Second-order central advection (variant B) + central diffusion + reaction.
RowCoeffs coefficients_central_b(const Grid& grid, const ModelParams& params, int j);

enum class MixedVariant { A, B };

/// True when the downwind weight of the central scheme stays nonnegative at
/// node j, i.e. 0 < r <= (s_j/h_j) sigma^2 (variant A) or with h_{j+1}
/// (variant B). Equality selects the central scheme.
bool central_admissible(const Grid& grid, const ModelParams& params, int j, MixedVariant variant);

/// Central coefficients where admissible, forward otherwise.
RowCoeffs mixed_select(const Grid& grid, const ModelParams& params, int j, MixedVariant variant);

/// Fraction of the nodes j = 1..m where the forward stencil is selected.
double forward_fraction(const Grid& grid, const ModelParams& params, MixedVariant variant);

using DirichletFn = std::function<double(double)>;

/// Semidiscrete operator: tridiagonal matrix over the unknowns s_1..s_{m+2}
/// with the boundary rows for the linear boundary condition, plus the
/// Dirichlet hook feeding the source vector b(t) = beta_1 g0(t) e_1.
///
/// Immutable after assembly.
struct DiscreteOperator {
    Tridiagonal tri;
    Grid grid;
    ModelParams params;
    SchemeKind scheme;
    BoundaryTreatment treatment;
    double beta1 = 0.0;          ///< stencil weight at s_0, routed into b(t)
    DirichletFn g0;              ///< Dirichlet value at s = 0
    std::vector<uint8_t> forward_at;  ///< per-row audit: 1 where forward was selected

    int size() const { return tri.size(); }
    int m() const { return grid.m; }

    /// Stencil application including the Dirichlet closure term:
    /// returns M u + beta_1 * boundary_value * e_1.
    std::vector<double> apply(std::span<const double> u, double boundary_value = 0.0) const;

    /// Source vector b(t), nonzero only in its first entry.
    std::vector<double> source_vector(double t) const;

    DenseMatrix to_dense() const { return tri.to_dense(); }
    /// Leading m-by-m tridiagonal block.
    Tridiagonal a_block() const { return tri.leading_block(m()); }
    /// Coupling entry gamma_m of the B block.
    double gamma_m() const { return tri.super[static_cast<size_t>(m()) - 1]; }
    /// Trailing 2-by-2 boundary block.
    DenseMatrix c_block() const;
};

DiscreteOperator assemble(const Grid& grid, const ModelParams& params, SchemeKind scheme,
                          BoundaryTreatment treatment, DirichletFn g0 = nullptr);

/// Verdict of the sufficient stability condition for the block form:
/// rI+A invertible (certified structurally), mu_inf[rI+A] <= 0, and
/// r + alpha_m + |beta_m| + |gamma_m| <= 0.
struct ConditionVerdict {
    bool holds = false;
    bool mu_clause = false;         ///< mu_inf[rI+A] <= 0
    bool last_row_clause = false;   ///< r + alpha_m + |beta_m| + |gamma_m| <= 0
    bool invertible_clause = false; ///< structural sign conditions on rI+A
    std::string reason;             ///< empty when the condition holds

    explicit operator bool() const { return holds; }
};

/// Only defined for LBC1 operators; throws for LBC2.
ConditionVerdict check_stability_condition(const DiscreteOperator& op);

/// CSV dump with columns (j, beta_j, alpha_j, gamma_j, chosen_scheme_at_j).
void write_operator_csv(const DiscreteOperator& op, const std::string& path);

}  // namespace lbc
