#include "nlslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlslab {

double lp_norm(const Field& f, double p) {
    if (p == std::numeric_limits<double>::infinity()) {
        double m = 0.0;
        for (const auto& z : f.v) m = std::max(m, std::abs(z));
        return m;
    }
    if (p < 1.0) throw DomainError("lp_norm: p must be >= 1 or infinity");
    double s = 0.0;
    if (p == 2.0) {
        for (const auto& z : f.v) s += std::norm(z);
    } else {
        for (const auto& z : f.v) s += std::pow(std::abs(z), p);
    }
    return std::pow(f.grid.cell_volume() * s, 1.0 / p);
}

cplx inner_product(const Field& f, const Field& g) {
    require_same_grid(f.grid, g.grid);
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * std::conj(g.v[i]);
    return f.grid.cell_volume() * s;
}

double spectral_l2(const SpectralField& F) {
    double s = 0.0;
    for (const auto& z : F.c) s += std::norm(z);
    return std::sqrt(F.grid.cell_volume() * s);
}

double gradient_norm_sq(const SpectralField& F) {
    const Grid& g = F.grid;
    const std::size_t N = g.points_per_axis();
    double s = 0.0;
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < N; ++i) {
            double xi = g.freq(i);
            s += xi * xi * std::norm(F.c[i]);
        }
    } else {
        for (std::size_t i1 = 0; i1 < N; ++i1) {
            double xi1 = g.freq(i1);
            for (std::size_t i2 = 0; i2 < N; ++i2) {
                double xi2 = g.freq(i2);
                s += (xi1 * xi1 + xi2 * xi2) * std::norm(F.c[i1 * N + i2]);
            }
        }
    }
    return g.cell_volume() * s;
}

double gradient_norm_sq(const Field& f) { return gradient_norm_sq(forward_transform(f)); }

void apply_multiplier(SpectralField& F, const std::function<cplx(double, double)>& fn) {
    const Grid& g = F.grid;
    const std::size_t N = g.points_per_axis();
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < N; ++i) F.c[i] *= fn(g.freq(i), 0.0);
    } else {
        for (std::size_t i1 = 0; i1 < N; ++i1)
            for (std::size_t i2 = 0; i2 < N; ++i2)
                F.c[i1 * N + i2] *= fn(g.freq(i1), g.freq(i2));
    }
}

void apply_real_multiplier(SpectralField& F,
                           const std::function<double(double, double)>& fn) {
    apply_multiplier(F, [&fn](double x1, double x2) { return cplx(fn(x1, x2), 0.0); });
}

Field laplacian(const Field& f) {
    SpectralField F = forward_transform(f);
    apply_real_multiplier(F, [](double x1, double x2) { return -(x1 * x1 + x2 * x2); });
    return inverse_transform(F);
}

Field derivative(const Field& f, int axis) {
    if (axis < 0 || axis >= f.grid.dim()) throw DomainError("derivative: bad axis");
    SpectralField F = forward_transform(f);
    apply_multiplier(F, [axis](double x1, double x2) {
        return cplx(0.0, axis == 0 ? x1 : x2);
    });
    return inverse_transform(F);
}

Field spectral_shift(const Field& f, double sx, double sy) {
    SpectralField F = forward_transform(f);
    apply_multiplier(F, [sx, sy](double x1, double x2) {
        double ph = -(x1 * sx + x2 * sy);
        return cplx(std::cos(ph), std::sin(ph));
    });
    return inverse_transform(F);
}

namespace {

// Bluestein evaluation of z_j = sum_{m=0}^{N-1} d_m e^{i alpha m j} for
// j = 0..N-1 in O(N log N): e^{i alpha m j} = C_m C_j conj(C_{j-m}) with
// the chirp C_n = e^{i alpha n^2 / 2}, so z is a chirped convolution.
// Chirp phases are accumulated in long double; they grow like alpha N^2.
struct CztPlan {
    std::size_t N, M;
    std::vector<cplx> chirp;  // C_n, n = 0..N-1
    std::vector<cplx> hhat;   // DFT of the padded conj-chirp kernel

    CztPlan(std::size_t n, double alpha) : N(n) {
        M = 1;
        while (M < 2 * N) M <<= 1;
        chirp.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            long double ph = 0.5L * static_cast<long double>(alpha) *
                             static_cast<long double>(i) * static_cast<long double>(i);
            chirp[i] = cplx(static_cast<double>(cosl(ph)),
                            static_cast<double>(sinl(ph)));
        }
        std::vector<cplx> h(M, cplx(0.0, 0.0));
        h[0] = cplx(1.0, 0.0);
        for (std::size_t i = 1; i < N; ++i) {
            cplx c = std::conj(chirp[i]);
            h[i] = c;
            h[M - i] = c;
        }
        raw_dft(h, -1);
        hhat = std::move(h);
    }

    void apply(const cplx* d, cplx* z) const {
        std::vector<cplx> p(M, cplx(0.0, 0.0));
        for (std::size_t m = 0; m < N; ++m) p[m] = d[m] * chirp[m];
        raw_dft(p, -1);
        for (std::size_t i = 0; i < M; ++i) p[i] *= hhat[i];
        raw_dft(p, +1);
        const double scale = 1.0 / static_cast<double>(M);
        for (std::size_t j = 0; j < N; ++j) z[j] = p[j] * chirp[j] * scale;
    }
};

// Samples of the trig interpolant along one axis at the points a x_j + b:
// out_j = (1/sqrt(N)) sum_k c_k e^{i xi_k (a x_j + b)}. Writing the signed
// wavenumber as ks = m - N/2 reduces the sum to a chirp-z transform.
struct AxisResample {
    std::size_t N;
    std::vector<cplx> pre;   // e^{i ks c0} per FFT bin, c0 = 2 pi (b/L - a/2)
    std::vector<cplx> post;  // e^{-i alpha (N/2) j} / sqrt(N)
    std::vector<char> valid;  // a x_j + b inside the fundamental domain
    CztPlan plan;

    AxisResample(const Grid& g, double a, double b)
        : N(g.points_per_axis()), plan(N, 2.0 * std::numbers::pi * a / N) {
        // The interpolant is periodic, so points mapped outside the box would
        // silently wrap around and alias in spurious translated copies of the
        // field. Those samples are zeroed instead; only |a| = 1 (a plain
        // translation or reflection, a genuine torus map) keeps the wrap.
        valid.assign(N, 1);
        if (std::abs(a) != 1.0) {
            const double half = 0.5 * g.extent();
            const double tol = 1e-9 * g.extent();
            for (std::size_t j = 0; j < N; ++j) {
                double y = a * g.coord(j) + b;
                if (y < -half - tol || y > half + tol) valid[j] = 0;
            }
        }
        const double c0 =
            2.0 * std::numbers::pi * (b / g.extent() - 0.5 * a);
        pre.resize(N);
        for (std::size_t k = 0; k < N; ++k) {
            double ph = c0 * static_cast<double>(g.ksigned(k));
            pre[k] = cplx(std::cos(ph), std::sin(ph));
        }
        post.resize(N);
        const double alpha_half_n = std::numbers::pi * a;  // alpha * N / 2
        const double norm = 1.0 / std::sqrt(static_cast<double>(N));
        for (std::size_t j = 0; j < N; ++j) {
            long double ph = -static_cast<long double>(alpha_half_n) *
                             static_cast<long double>(j);
            post[j] = norm * cplx(static_cast<double>(cosl(ph)),
                                  static_cast<double>(sinl(ph)));
        }
    }

    // c: N spectral coefficients with stride, FFT bin order; out: N samples.
    void run(const cplx* c, std::size_t stride, cplx* out, std::size_t out_stride,
             std::vector<cplx>& d, std::vector<cplx>& z) const {
        for (std::size_t m = 0; m < N; ++m) {
            std::size_t k = m < N / 2 ? m + N / 2 : m - N / 2;  // ks = m - N/2
            d[m] = c[k * stride] * pre[k];
        }
        plan.apply(d.data(), z.data());
        for (std::size_t j = 0; j < N; ++j)
            out[j * out_stride] = valid[j] ? z[j] * post[j] : cplx(0.0, 0.0);
    }
};

}  // namespace

Field affine_resample(const Field& f, double a, double bx, double by) {
    const Grid& g = f.grid;
    const std::size_t N = g.points_per_axis();
    if (a == 0.0 || !std::isfinite(a)) throw DomainError("affine_resample: bad scale");
    SpectralField F = forward_transform(f);
    Field out(g);
    std::vector<cplx> d(N), z(N);
    if (g.dim() == 1) {
        AxisResample ax(g, a, bx);
        ax.run(F.c.data(), 1, out.v.data(), 1, d, z);
    } else {
        AxisResample ax(g, a, bx);
        // Second axis first: rows of c over k2 -> samples in j2.
        std::vector<cplx> A(N * N);
        if (by == bx) {
            for (std::size_t k1 = 0; k1 < N; ++k1)
                ax.run(&F.c[k1 * N], 1, &A[k1 * N], 1, d, z);
        } else {
            AxisResample ay(g, a, by);
            for (std::size_t k1 = 0; k1 < N; ++k1)
                ay.run(&F.c[k1 * N], 1, &A[k1 * N], 1, d, z);
        }
        // Then columns over k1 -> samples in j1.
        for (std::size_t j2 = 0; j2 < N; ++j2)
            ax.run(&A[j2], N, &out.v[j2], N, d, z);
    }
    return out;
}

double spectral_tail_fraction(const SpectralField& F) {
    const Grid& g = F.grid;
    const std::size_t N = g.points_per_axis();
    const long kcut = static_cast<long>(N) / 3;
    double tail = 0.0, total = 0.0;
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < N; ++i) {
            double m = std::norm(F.c[i]);
            total += m;
            if (std::labs(g.ksigned(i)) >= kcut) tail += m;
        }
    } else {
        for (std::size_t i1 = 0; i1 < N; ++i1)
            for (std::size_t i2 = 0; i2 < N; ++i2) {
                double m = std::norm(F.c[i1 * N + i2]);
                total += m;
                if (std::labs(g.ksigned(i1)) >= kcut || std::labs(g.ksigned(i2)) >= kcut)
                    tail += m;
            }
    }
    return total > 0.0 ? tail / total : 0.0;
}

double spectral_tail_fraction(const Field& f) {
    return spectral_tail_fraction(forward_transform(f));
}

double boundary_mass_fraction(const Field& f) {
    const Grid& g = f.grid;
    const std::size_t N = g.points_per_axis();
    const double edge = 0.45 * g.extent();
    double tail = 0.0, total = 0.0;
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < N; ++i) {
            double m = std::norm(f.v[i]);
            total += m;
            if (std::abs(g.coord(i)) >= edge) tail += m;
        }
    } else {
        for (std::size_t i1 = 0; i1 < N; ++i1)
            for (std::size_t i2 = 0; i2 < N; ++i2) {
                double m = std::norm(f.v[i1 * N + i2]);
                total += m;
                if (std::abs(g.coord(i1)) >= edge || std::abs(g.coord(i2)) >= edge)
                    tail += m;
            }
    }
    return total > 0.0 ? tail / total : 0.0;
}

void dealias(SpectralField& F) {
    const Grid& g = F.grid;
    const std::size_t N = g.points_per_axis();
    const long kcut = static_cast<long>(N) / 3;
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < N; ++i)
            if (std::labs(g.ksigned(i)) >= kcut) F.c[i] = cplx(0.0, 0.0);
    } else {
        for (std::size_t i1 = 0; i1 < N; ++i1)
            for (std::size_t i2 = 0; i2 < N; ++i2)
                if (std::labs(g.ksigned(i1)) >= kcut || std::labs(g.ksigned(i2)) >= kcut)
                    F.c[i1 * N + i2] = cplx(0.0, 0.0);
    }
}

bool all_finite(const Field& f) {
    for (const auto& z : f.v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

}  // namespace nlslab
