#pragma once

#include <filesystem>

#include "ipm/field.hpp"

namespace ipm {

/// Binary field file: "IPM1", u32 n1, u32 n2, f64 box, f64 s, f64 t, then
/// n1*n2 f64 samples in row-major order, all little-endian.
struct Snapshot {
  RealField field;
  double time = 0.0;
};

/// Throws IoError if the file exists and overwrite is false, or on write
/// failure.
void write_snapshot(const RealField& f, double t, const std::filesystem::path& path,
                    bool overwrite = false);

/// Throws SnapshotFormatError (with the byte offset) on malformed content.
Snapshot read_snapshot(const std::filesystem::path& path);

/// As above, and throws ValidationError naming both values when the stored
/// lattice differs from `expected`.
Snapshot read_snapshot(const std::filesystem::path& path, const Grid& expected);

}  // namespace ipm
