#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "nlslab/errors.hpp"

namespace nlslab {

// Periodic box [-L/2, L/2)^d sampled on N^d points, N a power of two.
// Coordinates x_j = -L/2 + j*h, frequencies xi_k = 2*pi*k/L for
// k in [-N/2, N/2).
class Grid {
  public:
    Grid(int d, double L, std::size_t N) : d_(d), L_(L), N_(N) {
        if (d != 1 && d != 2) throw DimensionError("Grid: dimension must be 1 or 2");
        if (N < 8 || (N & (N - 1)) != 0)
            throw ConfigError("Grid: N must be a power of two >= 8");
        if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("Grid: L must be positive");
        h_ = L_ / static_cast<double>(N_);
    }

    int dim() const { return d_; }
    double extent() const { return L_; }
    std::size_t points_per_axis() const { return N_; }
    double spacing() const { return h_; }
    std::size_t size() const { return d_ == 1 ? N_ : N_ * N_; }
    // Quadrature weight h^d.
    double cell_volume() const { return d_ == 1 ? h_ : h_ * h_; }

    // Coordinate of sample j along one axis; the box center x=0 sits at
    // index N/2.
    double coord(std::size_t j) const { return -0.5 * L_ + h_ * static_cast<double>(j); }

    // Signed wavenumber index for FFT bin i (i in [0,N)).
    long ksigned(std::size_t i) const {
        return i < N_ / 2 ? static_cast<long>(i)
                          : static_cast<long>(i) - static_cast<long>(N_);
    }
    // Frequency of FFT bin i along one axis.
    double freq(std::size_t i) const {
        return 2.0 * std::numbers::pi * static_cast<double>(ksigned(i)) / L_;
    }
    double freq_max() const { return std::numbers::pi * static_cast<double>(N_) / L_; }

    bool operator==(const Grid& o) const {
        return d_ == o.d_ && N_ == o.N_ && L_ == o.L_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

  private:
    int d_;
    double L_;
    std::size_t N_;
    double h_;
};

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (a != b) throw GridMismatchError("fields live on different grids");
}

}  // namespace nlslab
