#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dsnls/errors.hpp"
#include "dsnls/io.hpp"

namespace ds {

namespace {

constexpr char kFieldMagic[8] = {'D', 'S', 'F', 'L', 'D', '1', '\0', '\0'};
constexpr char kTrajMagic[8] = {'D', 'S', 'T', 'R', 'J', '1', '\0', '\0'};

template <class T>
T byteswap_if_needed(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ostream& os, T v) {
  v = byteswap_if_needed(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::string& path) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError(path + ": truncated file");
  return byteswap_if_needed(v);
}

void write_field_record(std::ostream& os, const Field& f) {
  const GridSpec& g = f.spec();
  os.write(kFieldMagic, 8);
  put<std::uint8_t>(os, std::uint8_t(g.dim));
  for (int a = 0; a < g.dim; ++a) {
    put<std::uint64_t>(os, g.points[a]);
    put<double>(os, g.length[a]);
  }
  put<double>(os, f.time());
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(f.samples().data()), std::streamsize(f.size() * sizeof(cplx)));
  } else {
    for (const auto& z : f.samples()) {
      put<double>(os, z.real());
      put<double>(os, z.imag());
    }
  }
}

Field read_field_record(std::istream& is, const std::string& path) {
  char magic[8];
  if (!is.read(magic, 8)) throw IoError(path + ": truncated file");
  if (std::memcmp(magic, kFieldMagic, 8) != 0) throw IoError(path + ": bad DSFLD1 magic");
  GridSpec g;
  g.dim = get<std::uint8_t>(is, path);
  if (g.dim != 2 && g.dim != 3) throw IoError(path + ": unsupported dimension in header");
  for (int a = 0; a < g.dim; ++a) {
    g.points[a] = std::size_t(get<std::uint64_t>(is, path));
    g.length[a] = get<double>(is, path);
  }
  try {
    g.validate();
  } catch (const ConfigError& e) {
    throw IoError(path + ": invalid grid in header: " + e.what());
  }
  const double t = get<double>(is, path);
  std::vector<cplx> v(g.size());
  if constexpr (std::endian::native == std::endian::little) {
    if (!is.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(cplx))))
      throw IoError(path + ": truncated sample block");
  } else {
    for (auto& z : v) {
      const double re = get<double>(is, path);
      z = cplx(re, get<double>(is, path));
    }
  }
  return Field(g, std::move(v), t);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return is;
}

}  // namespace

void write_field(const std::string& path, const Field& f) {
  auto os = open_out(path);
  write_field_record(os, f);
  if (!os) throw IoError("write failed: " + path);
}

Field read_field(const std::string& path) {
  auto is = open_in(path);
  return read_field_record(is, path);
}

void write_trajectory(const std::string& path, const Trajectory& u) {
  auto os = open_out(path);
  os.write(kTrajMagic, 8);
  put<std::uint64_t>(os, u.size());
  put<double>(os, u.dt());
  for (const auto& s : u.slices()) write_field_record(os, s);
  if (!os) throw IoError("write failed: " + path);
}

Trajectory read_trajectory(const std::string& path) {
  auto is = open_in(path);
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kTrajMagic, 8) != 0) throw IoError(path + ": bad DSTRJ1 magic");
  const auto count = get<std::uint64_t>(is, path);
  const double dt = get<double>(is, path);
  if (count == 0) throw IoError(path + ": empty trajectory");
  std::vector<Field> slices;
  slices.reserve(count);
  for (std::uint64_t j = 0; j < count; ++j) slices.push_back(read_field_record(is, path));
  const double t0 = slices.front().time();
  try {
    return Trajectory(std::move(slices), t0, dt);
  } catch (const Error& e) {
    throw IoError(path + ": " + e.what());
  }
}

FileKind sniff_file(const std::string& path) {
  auto is = open_in(path);
  char magic[8];
  if (!is.read(magic, 8)) throw IoError(path + ": too short to be a field file");
  if (std::memcmp(magic, kFieldMagic, 8) == 0) return FileKind::Field;
  if (std::memcmp(magic, kTrajMagic, 8) == 0) return FileKind::Trajectory;
  throw IoError(path + ": unrecognized file magic");
}

}  // namespace ds
