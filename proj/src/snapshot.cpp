#include "nlslab/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "nlslab/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace nlslab {

namespace {
constexpr char kMagic[4] = {'N', 'L', 'S', 'F'};

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}
void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), 8);
}
std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
double get_f64(std::istream& is) {
    double v;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
}  // namespace

void write_snapshot(const std::string& path, const Field& f, double t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IOError("cannot open snapshot for writing: " + path);
    os.write(kMagic, 4);
    put_u32(os, kSnapshotVersion);
    put_u32(os, static_cast<std::uint32_t>(f.grid.dim()));
    put_u32(os, static_cast<std::uint32_t>(f.grid.points_per_axis()));
    put_f64(os, f.grid.extent());
    put_f64(os, t);
    for (const auto& z : f.v) {
        put_f64(os, z.real());
        put_f64(os, z.imag());
    }
    if (!os) throw IOError("short write on snapshot: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IOError("cannot open snapshot: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw IOError("bad snapshot magic in " + path);
    std::uint32_t version = get_u32(is);
    if (version != kSnapshotVersion) throw IOError("unsupported snapshot version");
    std::uint32_t d = get_u32(is);
    std::uint32_t N = get_u32(is);
    double L = get_f64(is);
    double t = get_f64(is);
    Grid g(static_cast<int>(d), L, N);
    Field f(g);
    for (auto& z : f.v) {
        double re = get_f64(is);
        double im = get_f64(is);
        z = cplx(re, im);
    }
    if (!is) throw IOError("truncated snapshot: " + path);
    return Snapshot{std::move(f), t};
}

}  // namespace nlslab
