#pragma once

#include <array>

#include "nlslab/field.hpp"

namespace nlslab {

using Vec2 = std::array<double, 2>;

// Element of the symmetry group G: translation x0, frequency shift xi0,
// scale lambda0 > 0 and the time parameter t0 of the embedded free
// propagator. The y components are ignored in d=1.
struct GroupElement {
    Vec2 x0{0.0, 0.0};
    Vec2 xi0{0.0, 0.0};
    double lambda0 = 1.0;
    double t0 = 0.0;
};

// g f(x) = lambda0^{-d/2} e^{i x xi0} (e^{-i (t0/lambda0^2) Lap} f)((x-x0)/lambda0).
// Factor order exactly as stated: propagate, rescale/translate, modulate.
Field apply_group(const GroupElement& g, const Field& f);

// Composition law of G, derived from the generator relations (see README):
//   lambda = lambda1*lambda2
//   xi     = xi2 + xi1/lambda2
//   x0     = x2 + lambda2*(x1 - 2*(t2/lambda2^2)*xi1)
//   t0     = lambda2^2*t1 + t2
// G closes only modulo a global phase exp(i*phase); compose returns both.
struct ComposedElement {
    GroupElement g;
    double phase;
};
ComposedElement compose(const GroupElement& g2, const GroupElement& g1);

// The five equation symmetries, applied to a fixed-time snapshot.
Field galilean(const Field& u, double t, const Vec2& xi);
Field scale_sym(const Field& u, double lambda);
Field phase_sym(const Field& u, double theta);
Field translate_sym(const Field& u, const Vec2& x0);

// Pseudo-conformal image of the time-t snapshot; the result lives at time
// 1/t. t must be nonzero and |t| large enough that x/t stays resolved.
Field pseudo_conformal(const Field& u_at_t, double t);

// The minimal-mass blow-up solution S(t, x) = |t|^{-d/2} Q(x/t)
// * exp(i(|x|^2/(4t) - 1/t)) for d=1, evaluated directly from the sech
// closed form. Blows up as t -> 0^-.
Field analytic_minimal_blowup_1d(const Grid& grid, double t);

}  // namespace nlslab
