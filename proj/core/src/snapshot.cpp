#include "vpfv/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "vpfv/error.hpp"

namespace vpfv {

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ofstream& o, T v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& p) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorKind::io, "truncated snapshot " + p.string());
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const DistField& f, double time) {
  const auto& g = f.grid();
  if (g.is_subgrid()) throw Error(ErrorKind::unsupported, "snapshots hold whole grids only");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream o(path, std::ios::binary);
  if (!o) throw Error(ErrorKind::io, "cannot write " + path.string());
  o.write("VPFV", 4);
  put<std::uint32_t>(o, snapshot_version);
  put<std::uint32_t>(o, g.d);
  put<std::uint32_t>(o, g.v);
  for (int k = 0; k < g.dims(); ++k) put<std::uint32_t>(o, g.N[k]);
  for (int k = 0; k < g.dims(); ++k) put<double>(o, g.lo[k]);
  for (int k = 0; k < g.dims(); ++k) put<double>(o, g.hi[k]);
  put<std::uint32_t>(o, static_cast<std::uint32_t>(f.species().size()));
  o.write(f.species().data(), static_cast<std::streamsize>(f.species().size()));
  put<double>(o, time);
  const int L = g.dims() - 1;
  for_each_interior(g, [&](const MultiIndex& mi, std::int64_t off) {
    if (mi[L] == 0) o.write(reinterpret_cast<const char*>(f.data() + off), sizeof(double) * g.N[L]);
  });
  if (!o) throw Error(ErrorKind::io, "write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "VPFV", 4) != 0)
    throw Error(ErrorKind::io, path.string() + " is not a snapshot");
  const auto version = get<std::uint32_t>(in, path);
  if (version != snapshot_version) throw Error(ErrorKind::io, "unsupported snapshot version " + std::to_string(version));
  Snapshot s;
  s.d = static_cast<int>(get<std::uint32_t>(in, path));
  s.v = static_cast<int>(get<std::uint32_t>(in, path));
  const int D = s.d + s.v;
  if (D < 2 || D > max_dims) throw Error(ErrorKind::io, "bad dimensionality in " + path.string());
  std::int64_t n = 1;
  for (int k = 0; k < D; ++k) {
    s.N.push_back(static_cast<int>(get<std::uint32_t>(in, path)));
    n *= s.N.back();
  }
  for (int k = 0; k < D; ++k) s.lo.push_back(get<double>(in, path));
  for (int k = 0; k < D; ++k) s.hi.push_back(get<double>(in, path));
  const auto len = get<std::uint32_t>(in, path);
  s.species.resize(len);
  if (len && !in.read(s.species.data(), len)) throw Error(ErrorKind::io, "truncated snapshot " + path.string());
  s.time = get<double>(in, path);
  s.values.resize(n);
  if (!in.read(reinterpret_cast<char*>(s.values.data()), static_cast<std::streamsize>(sizeof(double) * n)))
    throw Error(ErrorKind::io, "truncated snapshot " + path.string());
  return s;
}

DistField to_field(const Snapshot& s) {
  DistField f(s.species, make_grid(s.d, s.v, s.N, s.lo, s.hi));
  std::size_t i = 0;
  for_each_interior(f.grid(), [&](const MultiIndex&, std::int64_t off) { f.data()[off] = s.values[i++]; });
  return f;
}

}  // namespace vpfv
