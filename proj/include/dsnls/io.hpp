#pragma once

#include <string>

#include "dsnls/fields.hpp"
#include "dsnls/trajectory.hpp"

namespace ds {

// DSFLD1: magic "DSFLD1\0\0", u8 n, per axis u64 N and f64 L, f64 time,
// then prod N (re, im) f64 pairs, row-major with axis 1 slowest.
// DSTRJ1: magic "DSTRJ1\0\0", u64 slice count, f64 dt, then DSFLD1 records.
// Everything little-endian.

void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path);

void write_trajectory(const std::string& path, const Trajectory& u);
Trajectory read_trajectory(const std::string& path);

enum class FileKind { Field, Trajectory };
/// Inspects the magic bytes; IoError on anything else.
FileKind sniff_file(const std::string& path);

}  // namespace ds
