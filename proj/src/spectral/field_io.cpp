#include "kpb/spectral/field_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace kpb::spectral {

namespace {

constexpr std::array<char, 5> kMagic = {'K', 'P', 'B', 'F', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (std::size_t b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xffu);
    out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) throw std::runtime_error("read_field: truncated stream");
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    return v;
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_field(std::ostream& out, const SpectralField2D& field) {
    const Grid2D& g = field.grid();
    out.write(kMagic.data(), kMagic.size());
    put_u64(out, g.nx());
    put_u64(out, g.ny());
    put_f64(out, g.lx());
    put_f64(out, g.ly());
    for (const cplx& c : field.coeffs()) {
        put_f64(out, c.real());
        put_f64(out, c.imag());
    }
    if (!out) throw std::runtime_error("write_field: stream error");
}

SpectralField2D read_field(std::istream& in) {
    std::array<char, 5> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw std::runtime_error("read_field: bad magic, expected KPBF1");
    const std::uint64_t nx = get_u64(in);
    const std::uint64_t ny = get_u64(in);
    const double lx = get_f64(in);
    const double ly = get_f64(in);
    if (nx > (1u << 16) || ny > (1u << 16)) throw std::runtime_error("read_field: implausible grid size");
    Grid2D grid(nx, ny, lx, ly);
    std::vector<cplx> coeffs(grid.size());
    for (auto& c : coeffs) {
        const double re = get_f64(in);
        const double im = get_f64(in);
        c = cplx{re, im};
    }
    return SpectralField2D(grid, std::move(coeffs));
}

void save_field(const std::filesystem::path& path, const SpectralField2D& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_field: cannot open " + path.string());
    write_field(out, field);
}

SpectralField2D load_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_field: cannot open " + path.string());
    return read_field(in);
}

}  // namespace kpb::spectral
