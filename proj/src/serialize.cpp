#include <critnls/serialize.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace critnls {

namespace {

constexpr char kFieldMagic[8] = {'C', 'N', 'L', 'S', 'F', 'L', 'D', '1'};
constexpr char kTrajMagic[8] = {'C', 'N', 'L', 'S', 'T', 'R', 'J', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("container: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double d) { put_u64(os, std::bit_cast<std::uint64_t>(d)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

void put_grid(std::ostream& os, const Grid& g) {
  put_u64(os, static_cast<std::uint64_t>(g.dim()));
  put_u64(os, g.mode() == GridMode::full_tensor ? 0 : 1);
  if (g.mode() == GridMode::full_tensor) {
    put_u64(os, static_cast<std::uint64_t>(g.points_per_axis()));
    put_f64(os, g.extent());
  } else {
    put_u64(os, static_cast<std::uint64_t>(g.radial_points()));
    put_u64(os, static_cast<std::uint64_t>(g.freq_points()));
    put_f64(os, g.radial_nodes().front());
    put_f64(os, g.radial_nodes().back());
    put_f64(os, g.freq_nodes().front());
    put_f64(os, g.freq_nodes().back());
  }
}

Grid get_grid(std::istream& is) {
  const int n = static_cast<int>(get_u64(is));
  const std::uint64_t mode = get_u64(is);
  if (mode == 0) {
    const int M = static_cast<int>(get_u64(is));
    const double L = get_f64(is);
    return Grid::tensor(n, M, L);
  }
  const int Mr = static_cast<int>(get_u64(is));
  const int Mrho = static_cast<int>(get_u64(is));
  const double r0 = get_f64(is), r1 = get_f64(is);
  const double p0 = get_f64(is), p1 = get_f64(is);
  return Grid::radial(n, Mr, r0, r1, Mrho, p0, p1);
}

void put_samples(std::ostream& os, const Field& f) {
  put_u64(os, f.rep == Rep::physical ? 0 : 1);
  put_u64(os, f.v.size());
  for (const auto& z : f.v) {
    put_f64(os, z.real());
    put_f64(os, z.imag());
  }
}

Field get_samples(std::istream& is, const Grid& g) {
  const Rep rep = get_u64(is) == 0 ? Rep::physical : Rep::frequency;
  const std::uint64_t count = get_u64(is);
  Field f(g, rep);
  if (count != f.v.size()) throw std::runtime_error("container: sample count mismatch");
  for (auto& z : f.v) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    z = {re, im};
  }
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("container: cannot write " + path);
  return os;
}

std::ifstream open_in(const std::string& path, const char (&magic)[8]) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("container: cannot read " + path);
  char got[8];
  is.read(got, 8);
  if (!is || std::memcmp(got, magic, 8) != 0)
    throw std::runtime_error("container: bad magic in " + path);
  return is;
}

}  // namespace

void save_field(const Field& f, const std::string& path) {
  auto os = open_out(path);
  os.write(kFieldMagic, 8);
  put_grid(os, f.grid);
  put_samples(os, f);
  if (!os) throw std::runtime_error("container: write failure on " + path);
}

Field load_field(const std::string& path) {
  auto is = open_in(path, kFieldMagic);
  const Grid g = get_grid(is);
  return get_samples(is, g);
}

void save_trajectory(const Trajectory& t, const std::string& path) {
  auto os = open_out(path);
  os.write(kTrajMagic, 8);
  put_grid(os, t.grid);
  put_u64(os, t.times.size());
  for (double tv : t.times) put_f64(os, tv);
  for (const auto& s : t.slices) put_samples(os, s);
  if (!os) throw std::runtime_error("container: write failure on " + path);
}

Trajectory load_trajectory(const std::string& path) {
  auto is = open_in(path, kTrajMagic);
  const Grid g = get_grid(is);
  const std::uint64_t count = get_u64(is);
  std::vector<double> times(count);
  for (auto& tv : times) tv = get_f64(is);
  std::vector<Field> slices;
  slices.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) slices.push_back(get_samples(is, g));
  return Trajectory(g, std::move(times), std::move(slices));
}

}  // namespace critnls
