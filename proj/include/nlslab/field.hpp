#pragma once

#include <complex>
#include <vector>

#include "nlslab/grid.hpp"

namespace nlslab {

using cplx = std::complex<double>;

// Complex samples of u on a Grid, row-major in d=2 (index = i1*N + i2 with
// i1 the x-axis, i2 the y-axis).
struct Field {
    Grid grid;
    std::vector<cplx> v;
    // Set when an operation produced a result whose tail mass outside the
    // box exceeded its stated bound; the samples are still usable.
    bool warn_unresolved = false;

    explicit Field(const Grid& g) : grid(g), v(g.size(), cplx(0.0, 0.0)) {}
    Field(const Grid& g, std::vector<cplx> samples) : grid(g), v(std::move(samples)) {}

    std::size_t size() const { return v.size(); }
    cplx& operator[](std::size_t i) { return v[i]; }
    const cplx& operator[](std::size_t i) const { return v[i]; }
};

// Unitary spectral coefficients of a Field: c[i] = (+/-) DFT(v)[i] / sqrt(N^d)
// in the box-centered phase convention, FFT bin ordering per axis.
// sum |c|^2 == sum |v|^2.
struct SpectralField {
    Grid grid;
    std::vector<cplx> c;

    explicit SpectralField(const Grid& g) : grid(g), c(g.size(), cplx(0.0, 0.0)) {}

    std::size_t size() const { return c.size(); }
    cplx& operator[](std::size_t i) { return c[i]; }
    const cplx& operator[](std::size_t i) const { return c[i]; }
};

}  // namespace nlslab
