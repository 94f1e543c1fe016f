#include "nlslab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace nlslab {

namespace {

// FFTW plan creation is not thread safe; execution via fftw_execute_dft on
// distinct buffers is. Plans are cached per (d, N, sign) and reused with
// new-array execution for deterministic, concurrent transforms.
struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans;

    fftw_plan get(int d, std::size_t N, int sign) {
        std::scoped_lock lock(mu);
        auto key = std::make_tuple(d, N, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        std::size_t n = d == 1 ? N : N * N;
        std::vector<cplx> buf(n);
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        fftw_plan plan =
            d == 1 ? fftw_plan_dft_1d(static_cast<int>(N), p, p, sign, FFTW_ESTIMATE)
                   : fftw_plan_dft_2d(static_cast<int>(N), static_cast<int>(N), p, p,
                                      sign, FFTW_ESTIMATE);
        plans.emplace(key, plan);
        return plan;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

// Parity sign (-1)^(k1+k2) folding the -L/2 origin shift into the spectrum,
// so that c_k are coefficients of e^{i xi_k x} with x measured from the box
// center.
inline double center_sign(const Grid& g, std::size_t idx) {
    if (g.dim() == 1) return (idx & 1) ? -1.0 : 1.0;
    std::size_t N = g.points_per_axis();
    return ((idx / N + idx % N) & 1) ? -1.0 : 1.0;
}

}  // namespace

SpectralField forward_transform(const Field& f) {
    const Grid& g = f.grid;
    SpectralField out(g);
    out.c = f.v;
    fftw_plan plan = cache().get(g.dim(), g.points_per_axis(), FFTW_FORWARD);
    auto* p = reinterpret_cast<fftw_complex*>(out.c.data());
    fftw_execute_dft(plan, p, p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] *= scale * center_sign(g, i);
    return out;
}

Field inverse_transform(const SpectralField& F) {
    const Grid& g = F.grid;
    Field out(g);
    out.v = F.c;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= center_sign(g, i);
    fftw_plan plan = cache().get(g.dim(), g.points_per_axis(), FFTW_BACKWARD);
    auto* p = reinterpret_cast<fftw_complex*>(out.v.data());
    fftw_execute_dft(plan, p, p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
    for (auto& z : out.v) z *= scale;
    return out;
}

void raw_dft(std::vector<cplx>& buf, int sign) {
    // Reuse the plan cache with d = 1; lengths need not be grid sizes.
    fftw_plan plan = cache().get(1, buf.size(), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plan, p, p);
}

}  // namespace nlslab
