#include "ipm/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <iterator>
#include <vector>

#include "ipm/error.hpp"

namespace ipm {
namespace {

constexpr char kMagic[4] = {'I', 'P', 'M', '1'};
constexpr std::size_t kHeader = 4 + 4 + 4 + 8 + 8 + 8;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

void put_f64(std::vector<unsigned char>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= std::uint32_t(p[b]) << (8 * b);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= std::uint64_t(p[b]) << (8 * b);
  return std::bit_cast<double>(v);
}

}  // namespace

void write_snapshot(const RealField& f, double t, const std::filesystem::path& path,
                    bool overwrite) {
  if (!overwrite && std::filesystem::exists(path)) {
    throw IoError(fmt::format("{} exists; pass --force to overwrite", path.string()));
  }
  const Grid& g = f.grid();
  std::vector<unsigned char> buf;
  buf.reserve(kHeader + 8 * g.size());
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put_u32(buf, static_cast<std::uint32_t>(g.n1()));
  put_u32(buf, static_cast<std::uint32_t>(g.n2()));
  put_f64(buf, g.box_length());
  put_f64(buf, g.s());
  put_f64(buf, t);
  for (double v : f.samples()) put_f64(buf, v);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  if (buf.size() < 4) throw SnapshotFormatError("truncated magic", buf.size());
  if (std::memcmp(buf.data(), kMagic, 4) != 0) throw SnapshotFormatError("bad magic", 0);
  if (buf.size() < kHeader) throw SnapshotFormatError("truncated header", buf.size());
  const std::uint32_t n1 = get_u32(buf.data() + 4);
  const std::uint32_t n2 = get_u32(buf.data() + 8);
  const double box = get_f64(buf.data() + 12);
  const double s = get_f64(buf.data() + 20);
  const double t = get_f64(buf.data() + 28);
  if (n1 < 8 || n1 % 2 != 0 || n1 > (1u << 16)) throw SnapshotFormatError("invalid n1", 4);
  if (n2 < 8 || n2 % 2 != 0 || n2 > (1u << 16)) throw SnapshotFormatError("invalid n2", 8);
  if (!(box > 0.0) || !std::isfinite(box)) throw SnapshotFormatError("invalid box length", 12);
  if (!(s > 2.0) || !std::isfinite(s)) throw SnapshotFormatError("invalid Sobolev exponent", 20);
  if (!std::isfinite(t)) throw SnapshotFormatError("invalid time", 28);
  const std::size_t count = std::size_t(n1) * n2;
  const std::size_t expected = kHeader + 8 * count;
  if (buf.size() < expected) throw SnapshotFormatError("truncated payload", buf.size());
  if (buf.size() > expected) throw SnapshotFormatError("trailing bytes", expected);

  const Grid grid(static_cast<int>(n1), static_cast<int>(n2), box, s);
  std::vector<double> samples(count);
  for (std::size_t k = 0; k < count; ++k) samples[k] = get_f64(buf.data() + kHeader + 8 * k);
  return {RealField(grid, std::move(samples)), t};
}

Snapshot read_snapshot(const std::filesystem::path& path, const Grid& expected) {
  Snapshot snap = read_snapshot(path);
  const Grid& g = snap.field.grid();
  if (g.box_length() != expected.box_length()) {
    throw ValidationError(fmt::format("{}: box length {} does not match the requested {}",
                                      path.string(), g.box_length(), expected.box_length()));
  }
  if (g.n1() != expected.n1() || g.n2() != expected.n2()) {
    throw ValidationError(fmt::format("{}: lattice {}x{} does not match the requested {}x{}",
                                      path.string(), g.n1(), g.n2(), expected.n1(), expected.n2()));
  }
  return snap;
}

}  // namespace ipm
