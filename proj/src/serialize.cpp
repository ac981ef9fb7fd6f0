#include "grushin/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "grushin/error.hpp"

namespace grushin {

namespace {

constexpr char kFieldMagic[8] = {'G', 'R', 'S', 'H', 'F', 'L', 'D', '1'};
constexpr char kCoeffMagic[8] = {'G', 'R', 'S', 'H', 'C', 'O', 'F', '1'};

void put(std::ostream& out, double v) {
  auto u = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw PreconditionError("truncated grushin binary file");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(u);
}

void put_values(std::ostream& out, const std::vector<cplx>& v) {
  put(out, static_cast<double>(v.size()));
  for (const auto& z : v) {
    put(out, z.real());
    put(out, z.imag());
  }
}

std::vector<cplx> get_values(std::istream& in, std::size_t expected, const char* what) {
  const auto n = static_cast<std::size_t>(get(in));
  if (n != expected) {
    std::ostringstream os;
    os << what << ": file holds " << n << " entries, grid expects " << expected;
    throw PreconditionError(os.str());
  }
  std::vector<cplx> v(n);
  for (auto& z : v) {
    const double re = get(in);
    z = {re, get(in)};
  }
  return v;
}

void put_header(std::ostream& out, const char* magic, const GridParams& p) {
  out.write(magic, 8);
  for (double v : {double(p.dims.d1), double(p.dims.d2), p.xp_halfwidth, double(p.np_points), p.xpp_period,
                   double(p.npp_points), double(p.hermite_cutoff), p.resolution_margin})
    put(out, v);
}

GridPtr get_header(std::istream& in, const char* magic, const std::string& path) {
  char m[8];
  if (!in.read(m, 8) || std::memcmp(m, magic, 8) != 0)
    throw PreconditionError(path + ": not a " + std::string(magic, 8) + " file");
  GridParams p;
  p.dims.d1 = static_cast<int>(get(in));
  p.dims.d2 = static_cast<int>(get(in));
  p.xp_halfwidth = get(in);
  p.np_points = static_cast<int>(get(in));
  p.xpp_period = get(in);
  p.npp_points = static_cast<int>(get(in));
  p.hermite_cutoff = static_cast<int>(get(in));
  p.resolution_margin = get(in);
  return make_grid(p);
}

void write_meta(const std::string& path, const char* kind, const TorusGrid& g, std::size_t entries) {
  std::ofstream m(path + ".meta");
  const auto& p = g.params();
  m.precision(17);
  m << "kind=" << kind << "\nd1=" << p.dims.d1 << "\nd2=" << p.dims.d2 << "\nxp_halfwidth=" << p.xp_halfwidth
    << "\nnp_points=" << p.np_points << "\nxpp_period=" << p.xpp_period << "\nnpp_points=" << p.npp_points
    << "\nhermite_cutoff=" << p.hermite_cutoff << "\nresolution_margin=" << p.resolution_margin
    << "\nentries=" << entries << "\nlayout=little-endian f64, interleaved re/im\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path);
  return in;
}

}  // namespace

void save_field(const Field& f, const std::string& path) {
  auto out = open_out(path);
  put_header(out, kFieldMagic, f.grid->params());
  put_values(out, f.samples);
  write_meta(path, "field", *f.grid, f.samples.size());
}

Field load_field(const std::string& path) {
  auto in = open_in(path);
  auto g = get_header(in, kFieldMagic, path);
  return Field(g, get_values(in, g->samples(), "field samples"));
}

void save_coeffs(const SpectralCoeffs& c, const std::string& path) {
  auto out = open_out(path);
  put_header(out, kCoeffMagic, c.grid->params());
  put_values(out, c.amplitudes);
  put_values(out, c.zero_mode);
  put(out, c.residual);
  put(out, c.zero_mode_passthrough ? 1.0 : 0.0);
  write_meta(path, "coefficients", *c.grid, c.amplitudes.size() + c.zero_mode.size());
}

SpectralCoeffs load_coeffs(const std::string& path) {
  auto in = open_in(path);
  auto g = get_header(in, kCoeffMagic, path);
  SpectralCoeffs c(g);
  c.amplitudes = get_values(in, g->amplitude_count(), "amplitudes");
  c.zero_mode = get_values(in, c.zero_mode.size(), "zero mode");
  c.residual = get(in);
  c.zero_mode_passthrough = get(in) != 0.0;
  return c;
}

}  // namespace grushin
