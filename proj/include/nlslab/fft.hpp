#pragma once

#include "nlslab/field.hpp"

namespace nlslab {

// Unitary discrete Fourier pair; inverse(forward(f)) == f to machine
// precision and sum|c|^2 == sum|v|^2 (Parseval without scale factors).
SpectralField forward_transform(const Field& f);
Field inverse_transform(const SpectralField& F);

// Unnormalized in-place 1-d DFT of arbitrary length (cached plans);
// sign is the exponent sign (-1 forward, +1 backward).
void raw_dft(std::vector<cplx>& buf, int sign);

}  // namespace nlslab
