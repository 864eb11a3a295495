#pragma once

#include "nrqed/grid.hpp"

#include <filesystem>
#include <string>
#include <variant>

namespace nrqed {

/// Binary field snapshot.
///
/// Layout: a 64-byte ASCII header "NRQEDF1 nx ny nz L t kind" padded with
/// spaces and terminated by '\n' in the last byte, followed by little-endian
/// IEEE doubles. Complex samples are interleaved (re, im); vector fields are
/// written component-major (all x, then all y, then all z). Samples follow
/// grid storage order, x fastest.
///
/// kind is one of "rscalar", "cscalar", "rvector".
struct Snapshot {
  double time = 0.0;
  std::variant<RealScalarField, ComplexScalarField, RealVectorField> field;
};

inline constexpr std::size_t snapshot_header_bytes = 64;

void write_snapshot(const std::filesystem::path& path, const RealScalarField& f, double time);
void write_snapshot(const std::filesystem::path& path, const ComplexScalarField& f, double time);
void write_snapshot(const std::filesystem::path& path, const RealVectorField& f, double time);

Snapshot read_snapshot(const std::filesystem::path& path);

/// Header line (without padding) for a field of the given kind.
std::string snapshot_header(const Grid3& grid, double time, const std::string& kind);

}  // namespace nrqed
