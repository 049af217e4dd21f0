#pragma once

#include <string>
#include <vector>

namespace lbc {

/// Spatial grid 0 = s_0 < s_1 < ... < s_{m+2} = S.
///
/// Immutable after construction; safe to share read-only between workers.
/// widths[j-1] holds h_j = s_j - s_{j-1} (1 <= j <= m+2), recomputed from
/// the snapped node coordinates so that nodes and widths stay consistent.
struct Grid {
    std::vector<double> nodes;   ///< s_0 .. s_{m+2}, size m+3
    std::vector<double> widths;  ///< h_1 .. h_{m+2}, size m+2
    int m = 0;                   ///< interior block dimension
    double S = 0.0;

    double node(int j) const { return nodes[static_cast<size_t>(j)]; }
    /// h_j for 1 <= j <= m+2.
    double width(int j) const { return widths[static_cast<size_t>(j - 1)]; }
    /// H_j = h_j + h_{j+1} for 1 <= j <= m+1.
    double big_width(int j) const { return width(j) + width(j + 1); }
    double last_width() const { return widths.back(); }
    int unknowns() const { return m + 2; }
};

/// Non-uniform grid clustered around the strike via s = E + c*sinh(xi)
/// on an equidistant xi grid; endpoints snapped exactly to 0 and S.
Grid build_sinh_grid(double E, double c, double S, int m);

/// Equidistant grid with h_j = S/(m+2).
Grid build_uniform_grid(double S, int m);

/// CSV dump with columns (j, s_j, h_j); h is empty for j = 0.
void write_grid_csv(const Grid& grid, const std::string& path);

}  // namespace lbc
