#include "lbclab/grid.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "lbclab/csv.hpp"

namespace lbc {

namespace {

// log-form inverse sinh with a symmetric branch for x < 0, so that
// asinh(-x) == -asinh(x) exactly and the left endpoint does not suffer
// cancellation.
double asinh_stable(double x) {
    double ax = std::abs(x);
    double v = std::log(ax + std::sqrt(ax * ax + 1.0));
    return x < 0.0 ? -v : v;
}

Grid finalize(std::vector<double> nodes, int m, double S) {
    Grid g;
    g.m = m;
    g.S = S;
    nodes.front() = 0.0;  // snap endpoints: the boundary rows divide by h_{m+2}
    nodes.back() = S;     // and the analysis needs s_{m+2} = S exactly
    g.widths.resize(nodes.size() - 1);
    for (size_t j = 1; j < nodes.size(); ++j) {
        g.widths[j - 1] = nodes[j] - nodes[j - 1];
        if (!(g.widths[j - 1] > 0.0))
            throw std::runtime_error("grid: node sequence is not strictly increasing");
    }
    g.nodes = std::move(nodes);
    return g;
}

}  // namespace

Grid build_sinh_grid(double E, double c, double S, int m) {
    if (!(E > 0.0 && E < S)) throw std::invalid_argument("build_sinh_grid: need 0 < E < S");
    if (!(c > 0.0)) throw std::invalid_argument("build_sinh_grid: need c > 0");
    if (m < 1) throw std::invalid_argument("build_sinh_grid: need m >= 1");

    const double a = asinh_stable(-E / c);
    const double b = asinh_stable((S - E) / c);
    const double dxi = (b - a) / (m + 2);

    std::vector<double> nodes(static_cast<size_t>(m) + 3);
    for (int j = 0; j <= m + 2; ++j)
        nodes[static_cast<size_t>(j)] = E + c * std::sinh(a + j * dxi);
    return finalize(std::move(nodes), m, S);
}

Grid build_uniform_grid(double S, int m) {
    if (!(S > 0.0)) throw std::invalid_argument("build_uniform_grid: need S > 0");
    if (m < 1) throw std::invalid_argument("build_uniform_grid: need m >= 1");

    const double h = S / (m + 2);
    std::vector<double> nodes(static_cast<size_t>(m) + 3);
    for (int j = 0; j <= m + 2; ++j) nodes[static_cast<size_t>(j)] = j * h;
    return finalize(std::move(nodes), m, S);
}

void write_grid_csv(const Grid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "j,s_j,h_j\n";
    for (size_t j = 0; j < grid.nodes.size(); ++j) {
        out << j << ',' << csv_double(grid.nodes[j]) << ',';
        if (j > 0) out << csv_double(grid.widths[j - 1]);
        out << '\n';
    }
}

}  // namespace lbc
