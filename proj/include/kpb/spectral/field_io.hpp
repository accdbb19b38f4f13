#pragma once

#include <filesystem>
#include <iosfwd>

#include "kpb/spectral/field.hpp"

namespace kpb::spectral {

/// Binary grid-field format (see docs/field-format.md):
///   "KPBF1" | nx:u64 | ny:u64 | lx:f64 | ly:f64 | nx*ny x (re:f64, im:f64)
/// All multi-byte values are little-endian; coefficients follow storage order.
void write_field(std::ostream& out, const SpectralField2D& field);
SpectralField2D read_field(std::istream& in);

void save_field(const std::filesystem::path& path, const SpectralField2D& field);
SpectralField2D load_field(const std::filesystem::path& path);

}  // namespace kpb::spectral
