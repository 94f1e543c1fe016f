#pragma once

#include <string>

#include "nlslab/field.hpp"

namespace nlslab {

// Field snapshot file: "NLSF" magic, version u32, d u32, N u32, L f64, t f64,
// then N^d little-endian (re, im) f64 pairs, row-major in d=2.
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const Field& f, double t);

struct Snapshot {
    Field field;
    double t;
};

Snapshot read_snapshot(const std::string& path);

}  // namespace nlslab
