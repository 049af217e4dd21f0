#include "lbclab/discrete_operator.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "lbclab/csv.hpp"

namespace lbc {

const char* to_string(SchemeKind s) {
    switch (s) {
        case SchemeKind::Forward: return "forward";
        case SchemeKind::CentralA: return "central-a";
        case SchemeKind::CentralB: return "central-b";
        case SchemeKind::MixedA: return "mixed-a";
        case SchemeKind::MixedB: return "mixed-b";
    }
    return "?";
}

const char* to_string(BoundaryTreatment t) {
    return t == BoundaryTreatment::LBC1 ? "lbc1" : "lbc2";
}

SchemeKind scheme_from_string(const std::string& name) {
    if (name == "forward") return SchemeKind::Forward;
    if (name == "central-a") return SchemeKind::CentralA;
    if (name == "central-b") return SchemeKind::CentralB;
    if (name == "mixed-a") return SchemeKind::MixedA;
    if (name == "mixed-b") return SchemeKind::MixedB;
    throw std::invalid_argument("unknown scheme: " + name);
}

BoundaryTreatment treatment_from_string(const std::string& name) {
    if (name == "lbc1") return BoundaryTreatment::LBC1;
    if (name == "lbc2") return BoundaryTreatment::LBC2;
    throw std::invalid_argument("unknown treatment: " + name);
}

namespace {

void check_index(const Grid& grid, int j) {
    // j = m+1 is reachable only when the interior scheme is extended there.
    if (j < 1 || j > grid.m + 1)
        throw std::out_of_range("coefficient index out of range");
}

}  // namespace

RowCoeffs coefficients_forward(const Grid& grid, const ModelParams& params, int j) {
    check_index(grid, j);
    const double s = grid.node(j), h = grid.width(j), h1 = grid.width(j + 1);
    const double H = h + h1, r = params.r, s2 = params.sigma * params.sigma;
    return {s2 * s * s / (h * H),
            -r - r * s / h1 - s2 * s * s / (h * h1),
            r * s / h1 + s2 * s * s / (h1 * H)};
}

RowCoeffs coefficients_central_a(const Grid& grid, const ModelParams& params, int j) {
    check_index(grid, j);
    const double s = grid.node(j), h = grid.width(j), h1 = grid.width(j + 1);
    const double H = h + h1, r = params.r, s2 = params.sigma * params.sigma;
    return {-r * s / H + s2 * s * s / (h * H),
            -r - s2 * s * s / (h * h1),
            r * s / H + s2 * s * s / (h1 * H)};
}

RowCoeffs coefficients_central_b(const Grid& grid, const ModelParams& params, int j) {
    check_index(grid, j);
    const double s = grid.node(j), h = grid.width(j), h1 = grid.width(j + 1);
    const double H = h + h1, r = params.r, s2 = params.sigma * params.sigma;
    return {-r * s * h1 / (h * H) + s2 * s * s / (h * H),
            -r + r * s * (h1 - h) / (h * h1) - s2 * s * s / (h * h1),
            r * s * h / (h1 * H) + s2 * s * s / (h1 * H)};
}

bool central_admissible(const Grid& grid, const ModelParams& params, int j, MixedVariant variant) {
    const double h = variant == MixedVariant::A ? grid.width(j) : grid.width(j + 1);
    const double r = params.r;
    return r > 0.0 && r <= grid.node(j) / h * params.sigma * params.sigma;
}

RowCoeffs mixed_select(const Grid& grid, const ModelParams& params, int j, MixedVariant variant) {
    if (central_admissible(grid, params, j, variant))
        return variant == MixedVariant::A ? coefficients_central_a(grid, params, j)
                                          : coefficients_central_b(grid, params, j);
    return coefficients_forward(grid, params, j);
}

double forward_fraction(const Grid& grid, const ModelParams& params, MixedVariant variant) {
    int count = 0;
    for (int j = 1; j <= grid.m; ++j)
        if (!central_admissible(grid, params, j, variant)) ++count;
    return static_cast<double>(count) / grid.m;
}

DiscreteOperator assemble(const Grid& grid, const ModelParams& params, SchemeKind scheme,
                          BoundaryTreatment treatment, DirichletFn g0) {
    params.validate();
    const int m = grid.m, n = m + 2;

    DiscreteOperator op{Tridiagonal(n), grid, params, scheme, treatment, 0.0,
                        std::move(g0), std::vector<uint8_t>(static_cast<size_t>(n), 0)};

    auto row = [&](int j) -> RowCoeffs {
        switch (scheme) {
            case SchemeKind::Forward:
                op.forward_at[static_cast<size_t>(j - 1)] = 1;
                return coefficients_forward(grid, params, j);
            case SchemeKind::CentralA: return coefficients_central_a(grid, params, j);
            case SchemeKind::CentralB: return coefficients_central_b(grid, params, j);
            case SchemeKind::MixedA:
                op.forward_at[static_cast<size_t>(j - 1)] =
                    !central_admissible(grid, params, j, MixedVariant::A);
                return mixed_select(grid, params, j, MixedVariant::A);
            case SchemeKind::MixedB:
                op.forward_at[static_cast<size_t>(j - 1)] =
                    !central_admissible(grid, params, j, MixedVariant::B);
                return mixed_select(grid, params, j, MixedVariant::B);
        }
        throw std::logic_error("unreachable");
    };

    const int interior_last = treatment == BoundaryTreatment::LBC1 ? m : m + 1;
    for (int j = 1; j <= interior_last; ++j) {
        const RowCoeffs c = row(j);
        const int i = j - 1;
        if (j == 1)
            op.beta1 = c.beta;  // weight at the Dirichlet node s_0, kept out of M
        else
            op.tri.sub[static_cast<size_t>(i - 1)] = c.beta;
        op.tri.diag[static_cast<size_t>(i)] = c.alpha;
        op.tri.super[static_cast<size_t>(i)] = c.gamma;
    }

    // Boundary rows: first-order one-sided advection with the diffusion
    // term dropped; upwind at s_{m+1}, downwind at s_{m+2}.
    const double h = grid.last_width();
    const double cl = -params.r * grid.S / h;
    const double cr = params.r * grid.node(m + 1) / h;
    if (treatment == BoundaryTreatment::LBC1) {
        op.tri.sub[static_cast<size_t>(m) - 1] = 0.0;
        op.tri.diag[static_cast<size_t>(m)] = cl;
        op.tri.super[static_cast<size_t>(m)] = cr;
    }
    op.tri.sub[static_cast<size_t>(m)] = cl;
    op.tri.diag[static_cast<size_t>(m) + 1] = cr;
    return op;
}

std::vector<double> DiscreteOperator::apply(std::span<const double> u, double boundary_value) const {
    std::vector<double> y = tri.apply(u);
    y[0] += beta1 * boundary_value;
    return y;
}

std::vector<double> DiscreteOperator::source_vector(double t) const {
    std::vector<double> b(static_cast<size_t>(size()), 0.0);
    if (g0) b[0] = beta1 * g0(t);
    return b;
}

DenseMatrix DiscreteOperator::c_block() const {
    const int k = m();
    DenseMatrix C(2, 2);
    C(0, 0) = tri.diag[static_cast<size_t>(k)];
    C(0, 1) = tri.super[static_cast<size_t>(k)];
    C(1, 0) = tri.sub[static_cast<size_t>(k)];
    C(1, 1) = tri.diag[static_cast<size_t>(k) + 1];
    return C;
}

ConditionVerdict check_stability_condition(const DiscreteOperator& op) {
    if (op.treatment != BoundaryTreatment::LBC1)
        throw std::invalid_argument(
            "check_stability_condition: defined only for the lbc1 block structure");

    const int m = op.m();
    const double r = op.params.r;
    const auto& tri = op.tri;

    auto beta = [&](int j) { return j == 1 ? op.beta1 : tri.sub[static_cast<size_t>(j) - 2]; };
    auto alpha = [&](int j) { return tri.diag[static_cast<size_t>(j) - 1]; };
    auto gamma = [&](int j) { return tri.super[static_cast<size_t>(j) - 1]; };

    // Row scale for the zero-comparison tolerances.
    double scale = 0.0;
    for (int j = 1; j <= m; ++j)
        scale = std::max(scale, std::abs(alpha(j)) + std::abs(beta(j)) + std::abs(gamma(j)));
    const double tol = 1e-12 * std::max(scale, 1.0);

    ConditionVerdict v;

    // mu_inf[rI+A] by the row formula; beta_1 sits outside A.
    double mu = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= m; ++j) {
        double row = r + alpha(j) + std::abs(gamma(j));
        if (j > 1) row += std::abs(beta(j));
        mu = std::max(mu, row);
    }
    v.mu_clause = mu <= tol;

    v.last_row_clause = r + alpha(m) + std::abs(beta(m)) + std::abs(gamma(m)) <= tol;

    // Structural sign conditions certifying invertibility of rI+A.
    bool inv = true;
    for (int j = 2; j <= m && inv; ++j) inv = beta(j) >= -tol;
    for (int j = 1; j <= m - 1 && inv; ++j) inv = gamma(j) > tol;
    if (inv) inv = r + alpha(1) + gamma(1) <= tol;
    for (int j = 2; j <= m - 1 && inv; ++j)
        inv = std::abs(r + alpha(j) + beta(j) + gamma(j)) <= tol;
    if (inv) inv = r + alpha(m) + beta(m) < -tol;
    v.invertible_clause = inv;

    v.holds = v.mu_clause && v.last_row_clause && v.invertible_clause;
    if (!v.holds) {
        if (!v.mu_clause) v.reason += "mu_inf[rI+A] > 0; ";
        if (!v.last_row_clause) v.reason += "last-row inequality fails; ";
        if (!v.invertible_clause) v.reason += "structural invertibility conditions fail; ";
    }
    return v;
}

void write_operator_csv(const DiscreteOperator& op, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "j,beta_j,alpha_j,gamma_j,chosen_scheme_at_j\n";
    const int n = op.size();
    for (int j = 1; j <= n; ++j) {
        const double beta = j == 1 ? op.beta1 : op.tri.sub[static_cast<size_t>(j) - 2];
        const double gamma = j < n ? op.tri.super[static_cast<size_t>(j) - 1] : 0.0;
        const char* chosen = "boundary";
        if (j <= op.m() || (op.treatment == BoundaryTreatment::LBC2 && j == op.m() + 1))
            chosen = op.forward_at[static_cast<size_t>(j - 1)] ? "forward" : "central";
        out << j << ',' << csv_double(beta) << ',' << csv_double(op.tri.diag[static_cast<size_t>(j) - 1])
            << ',' << csv_double(gamma) << ',' << chosen << '\n';
    }
}

}  // namespace lbc
