#include "nrqed/snapshot.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nrqed {

namespace {

// Shortest representation that round-trips.
std::string shortest(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("cannot format value for snapshot header");
  return std::string(buf, end);
}

void put_double(std::vector<char>& out, double x) {
  auto bits = std::bit_cast<std::uint64_t>(x);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

double get_double(const char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= std::uint64_t{static_cast<unsigned char>(p[b])} << (8 * b);
  return std::bit_cast<double>(bits);
}

void write_file(const std::filesystem::path& path, const Grid3& grid, double time, const std::string& kind,
                const std::vector<char>& payload) {
  std::string header = snapshot_header(grid, time, kind);
  if (header.size() > snapshot_header_bytes - 1)
    throw std::runtime_error("snapshot header exceeds 64 bytes: " + header);
  header.resize(snapshot_header_bytes - 1, ' ');
  header.push_back('\n');
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open snapshot for writing: " + path.string());
  os.write(header.data(), static_cast<std::streamsize>(header.size()));
  os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!os) throw std::runtime_error("failed writing snapshot: " + path.string());
}

}  // namespace

std::string snapshot_header(const Grid3& grid, double time, const std::string& kind) {
  std::ostringstream os;
  os << "NRQEDF1 " << grid.nx() << ' ' << grid.ny() << ' ' << grid.nz() << ' ' << shortest(grid.length()) << ' '
     << shortest(time) << ' ' << kind;
  return os.str();
}

void write_snapshot(const std::filesystem::path& path, const RealScalarField& f, double time) {
  std::vector<char> payload;
  payload.reserve(static_cast<std::size_t>(f.values.size()) * 8);
  for (double x : f.values) put_double(payload, x);
  write_file(path, f.grid, time, "rscalar", payload);
}

void write_snapshot(const std::filesystem::path& path, const ComplexScalarField& f, double time) {
  std::vector<char> payload;
  payload.reserve(static_cast<std::size_t>(f.values.size()) * 16);
  for (const complex& z : f.values) {
    put_double(payload, z.real());
    put_double(payload, z.imag());
  }
  write_file(path, f.grid, time, "cscalar", payload);
}

void write_snapshot(const std::filesystem::path& path, const RealVectorField& f, double time) {
  std::vector<char> payload;
  payload.reserve(static_cast<std::size_t>(f.grid.size()) * 24);
  for (int a = 0; a < 3; ++a)
    for (double x : f[a]) put_double(payload, x);
  write_file(path, f.grid, time, "rvector", payload);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open snapshot: " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (bytes.size() < snapshot_header_bytes || bytes[snapshot_header_bytes - 1] != '\n')
    throw std::runtime_error("not a snapshot file: " + path.string());

  std::istringstream header(std::string(bytes.data(), snapshot_header_bytes - 1));
  std::string magic, kind, length_text, time_text;
  int nx = 0, ny = 0, nz = 0;
  header >> magic >> nx >> ny >> nz >> length_text >> time_text >> kind;
  if (magic != "NRQEDF1" || !header) throw std::runtime_error("bad snapshot header in " + path.string());
  double length = 0.0, time = 0.0;
  std::from_chars(length_text.data(), length_text.data() + length_text.size(), length);
  std::from_chars(time_text.data(), time_text.data() + time_text.size(), time);
  const Grid3 grid(nx, ny, nz, length);

  const std::size_t n = static_cast<std::size_t>(grid.size());
  const char* p = bytes.data() + snapshot_header_bytes;
  const std::size_t available = bytes.size() - snapshot_header_bytes;
  auto need = [&](std::size_t doubles) {
    if (available != doubles * 8) throw std::runtime_error("snapshot payload size mismatch in " + path.string());
  };

  Snapshot snap{time, RealScalarField(grid)};
  if (kind == "rscalar") {
    need(n);
    RealScalarField f(grid);
    for (std::size_t i = 0; i < n; ++i) f.values[static_cast<Eigen::Index>(i)] = get_double(p + 8 * i);
    snap.field = std::move(f);
  } else if (kind == "cscalar") {
    need(2 * n);
    ComplexScalarField f(grid);
    for (std::size_t i = 0; i < n; ++i)
      f.values[static_cast<Eigen::Index>(i)] = complex(get_double(p + 16 * i), get_double(p + 16 * i + 8));
    snap.field = std::move(f);
  } else if (kind == "rvector") {
    need(3 * n);
    RealVectorField f(grid);
    for (int a = 0; a < 3; ++a)
      for (std::size_t i = 0; i < n; ++i)
        f[a][static_cast<Eigen::Index>(i)] = get_double(p + 8 * (static_cast<std::size_t>(a) * n + i));
    snap.field = std::move(f);
  } else {
    throw std::runtime_error("unknown snapshot kind '" + kind + "'");
  }
  return snap;
}

}  // namespace nrqed
