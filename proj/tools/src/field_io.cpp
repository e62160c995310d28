#include "tomolab/app/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "tomolab/error.hpp"

namespace tomolab::app {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little, "binary format assumes a little-endian host");

[[noreturn]] void io_error(const fs::path& p, const std::string& what) {
  fail(ErrorKind::Io, p.string() + ": " + what);
}

void append(std::string& s, double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  s.append(buf, r.ptr);
}

void append(std::string& s, long long x) {
  char buf[24];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  s.append(buf, r.ptr);
}

double parse_double(std::string_view s, const fs::path& p) {
  double x = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) io_error(p, "bad number '" + std::string(s) + "'");
  return x;
}

long long parse_int(std::string_view s, const fs::path& p) {
  long long x = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) io_error(p, "bad integer '" + std::string(s) + "'");
  return x;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) io_error(p, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_bytes(const fs::path& p, const char* data, std::size_t n) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) io_error(p, "cannot open for writing");
  out.write(data, static_cast<std::streamsize>(n));
  if (!out) io_error(p, "write failed");
}

std::map<std::string, std::string_view> parse_header(std::string_view line, const fs::path& p) {
  if (line.size() < 2 || line.substr(0, 2) != "# ") io_error(p, "missing '# ' header line");
  std::map<std::string, std::string_view> kv;
  for (auto item : split(line.substr(2), ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) io_error(p, "malformed header entry '" + std::string(item) + "'");
    kv[std::string(item.substr(0, eq))] = item.substr(eq + 1);
  }
  return kv;
}

std::string_view need(const std::map<std::string, std::string_view>& kv, const char* key, const fs::path& p) {
  auto it = kv.find(key);
  if (it == kv.end()) io_error(p, std::string("header lacks '") + key + "'");
  return it->second;
}

fs::path sidecar(const fs::path& p) { return fs::path(p.string() + ".json"); }

std::vector<double> interleave(const CMatrix& m) {
  // Row-major, re/im interleaved.
  std::vector<double> out(static_cast<std::size_t>(m.size()) * 2);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out[k++] = m(r, c).real();
      out[k++] = m(r, c).imag();
    }
  return out;
}

CMatrix deinterleave(const std::string& bytes, Eigen::Index rows, Eigen::Index cols, const fs::path& p) {
  const std::size_t n = static_cast<std::size_t>(rows * cols) * 2;
  if (bytes.size() != n * sizeof(double)) io_error(p, "binary size does not match sidecar shape");
  std::vector<double> buf(n);
  std::memcpy(buf.data(), bytes.data(), bytes.size());
  CMatrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, k += 2) m(r, c) = cplx(buf[k], buf[k + 1]);
  return m;
}

json read_sidecar(const fs::path& p) {
  try {
    return json::parse(read_all(sidecar(p)));
  } catch (const json::exception& e) {
    io_error(sidecar(p), std::string("bad sidecar: ") + e.what());
  }
}

json binary_layout(Eigen::Index rows, Eigen::Index cols) {
  return {{"shape", {rows, cols}},
          {"dtype", "complex128"},
          {"endianness", "little"},
          {"order", "row-major"},
          {"layout", "re/im interleaved float64"}};
}

}  // namespace

std::string field_file_name(const std::string& stem, FieldFormat fmt) {
  return stem + (fmt == FieldFormat::GridCsv ? ".csv" : ".bin");
}

void write_text(const fs::path& path, const std::string& text) { write_bytes(path, text.data(), text.size()); }

void write_field(const ScattererField& v, const fs::path& path, FieldFormat fmt) {
  const Grid2D& g = v.grid;
  if (fmt == FieldFormat::GridCsv) {
    std::string s = "# nx=";
    append(s, static_cast<long long>(g.nx()));
    s += ",ny=";
    append(s, static_cast<long long>(g.ny()));
    s += ",h=";
    append(s, g.h());
    s += ",origin_x=";
    append(s, g.origin().x);
    s += ",origin_y=";
    append(s, g.origin().y);
    s += ",omega=";
    append(s, v.omega());
    s += ",c0=";
    append(s, v.wave.c0());
    s += ",support_radius=";
    if (g.support_radius()) append(s, *g.support_radius());
    else s += "none";
    s += '\n';
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nx(); ++ix) {
        const cplx z = v.values[static_cast<Eigen::Index>(g.index(ix, iy))];
        append(s, static_cast<long long>(ix));
        s += ',';
        append(s, static_cast<long long>(iy));
        s += ',';
        append(s, z.real());
        s += ',';
        append(s, z.imag());
        s += '\n';
      }
    write_text(path, s);
    return;
  }
  // Rows are y, columns x, matching the cell index iy * nx + ix.
  CMatrix m(g.ny(), g.nx());
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) m(iy, ix) = v.values[static_cast<Eigen::Index>(g.index(ix, iy))];
  const auto data = interleave(m);
  write_bytes(path, reinterpret_cast<const char*>(data.data()), data.size() * sizeof(double));
  json meta = binary_layout(g.ny(), g.nx());
  meta["kind"] = "scatterer";
  meta["grid"] = {{"nx", g.nx()},
                  {"ny", g.ny()},
                  {"h", g.h()},
                  {"origin_x", g.origin().x},
                  {"origin_y", g.origin().y},
                  {"support_radius", g.support_radius() ? json(*g.support_radius()) : json(nullptr)}};
  meta["omega"] = v.omega();
  meta["c0"] = v.wave.c0();
  write_text(sidecar(path), meta.dump(2) + "\n");
}

ScattererField read_field(const fs::path& path, FieldFormat fmt) {
  if (fmt == FieldFormat::GridCsv) {
    const std::string text = read_all(path);
    std::string_view rest(text);
    const auto nl = rest.find('\n');
    const auto kv = parse_header(rest.substr(0, nl), path);
    const int nx = static_cast<int>(parse_int(need(kv, "nx", path), path));
    const int ny = static_cast<int>(parse_int(need(kv, "ny", path), path));
    const double h = parse_double(need(kv, "h", path), path);
    const Point o{parse_double(need(kv, "origin_x", path), path), parse_double(need(kv, "origin_y", path), path)};
    const double omega = parse_double(need(kv, "omega", path), path);
    const double c0 = parse_double(need(kv, "c0", path), path);
    std::optional<double> support;
    if (auto s = need(kv, "support_radius", path); s != "none") support = parse_double(s, path);
    ScattererField v(Grid2D(o, nx, ny, h, support), Wavenumber(omega, c0));
    std::size_t rows = 0;
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    while (!rest.empty()) {
      const auto e = rest.find('\n');
      const auto line = rest.substr(0, e);
      rest = e == std::string_view::npos ? std::string_view{} : rest.substr(e + 1);
      if (line.empty()) continue;
      const auto f = split(line, ',');
      if (f.size() != 4) io_error(path, "expected ix,iy,re,im");
      const auto ix = parse_int(f[0], path), iy = parse_int(f[1], path);
      if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) io_error(path, "cell index out of range");
      v.values[static_cast<Eigen::Index>(v.grid.index(static_cast<int>(ix), static_cast<int>(iy)))] =
          cplx(parse_double(f[2], path), parse_double(f[3], path));
      ++rows;
    }
    if (rows != v.grid.size()) io_error(path, "row count does not match nx*ny");
    return v;
  }
  const json meta = read_sidecar(path);
  try {
    const auto& g = meta.at("grid");
    std::optional<double> support;
    if (!g.at("support_radius").is_null()) support = g.at("support_radius").get<double>();
    Grid2D grid({g.at("origin_x").get<double>(), g.at("origin_y").get<double>()}, g.at("nx").get<int>(),
                g.at("ny").get<int>(), g.at("h").get<double>(), support);
    const CMatrix m = deinterleave(read_all(path), grid.ny(), grid.nx(), path);
    ScattererField v(grid, Wavenumber(meta.at("omega").get<double>(), meta.at("c0").get<double>()));
    for (int iy = 0; iy < grid.ny(); ++iy)
      for (int ix = 0; ix < grid.nx(); ++ix) v.values[static_cast<Eigen::Index>(grid.index(ix, iy))] = m(iy, ix);
    return v;
  } catch (const json::exception& e) {
    io_error(sidecar(path), std::string("bad sidecar: ") + e.what());
  }
}

void write_amplitude(const AmplitudeGrid& f, const fs::path& path, FieldFormat fmt) {
  if (fmt == FieldFormat::GridCsv) {
    std::string s = "# n_phi=";
    append(s, static_cast<long long>(f.phis.size()));
    s += ",n_phi_prime=";
    append(s, static_cast<long long>(f.phis_prime.size()));
    s += ",omega=";
    append(s, f.omega);
    s += '\n';
    for (std::size_t i = 0; i < f.phis.size(); ++i)
      for (std::size_t j = 0; j < f.phis_prime.size(); ++j) {
        const cplx z = f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        append(s, static_cast<long long>(i));
        s += ',';
        append(s, static_cast<long long>(j));
        s += ',';
        append(s, f.phis[i]);
        s += ',';
        append(s, f.phis_prime[j]);
        s += ',';
        append(s, z.real());
        s += ',';
        append(s, z.imag());
        s += '\n';
      }
    write_text(path, s);
    return;
  }
  const auto data = interleave(f.values);
  write_bytes(path, reinterpret_cast<const char*>(data.data()), data.size() * sizeof(double));
  json meta = binary_layout(f.values.rows(), f.values.cols());
  meta["kind"] = "amplitude";
  meta["phi"] = f.phis;
  meta["phi_prime"] = f.phis_prime;
  meta["omega"] = f.omega;
  write_text(sidecar(path), meta.dump(2) + "\n");
}

AmplitudeGrid read_amplitude(const fs::path& path, FieldFormat fmt) {
  if (fmt == FieldFormat::GridCsv) {
    const std::string text = read_all(path);
    std::string_view rest(text);
    const auto nl = rest.find('\n');
    const auto kv = parse_header(rest.substr(0, nl), path);
    const auto ni = static_cast<std::size_t>(parse_int(need(kv, "n_phi", path), path));
    const auto nj = static_cast<std::size_t>(parse_int(need(kv, "n_phi_prime", path), path));
    AmplitudeGrid f = AmplitudeGrid::zeros(std::vector<double>(ni), std::vector<double>(nj),
                                           parse_double(need(kv, "omega", path), path));
    std::size_t rows = 0;
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    while (!rest.empty()) {
      const auto e = rest.find('\n');
      const auto line = rest.substr(0, e);
      rest = e == std::string_view::npos ? std::string_view{} : rest.substr(e + 1);
      if (line.empty()) continue;
      const auto c = split(line, ',');
      if (c.size() != 6) io_error(path, "expected i,j,phi,phi_prime,re,im");
      const auto i = parse_int(c[0], path), j = parse_int(c[1], path);
      if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= ni || static_cast<std::size_t>(j) >= nj)
        io_error(path, "angle index out of range");
      f.phis[static_cast<std::size_t>(i)] = parse_double(c[2], path);
      f.phis_prime[static_cast<std::size_t>(j)] = parse_double(c[3], path);
      f.values(i, j) = cplx(parse_double(c[4], path), parse_double(c[5], path));
      ++rows;
    }
    if (rows != ni * nj) io_error(path, "row count does not match the angle grid");
    return f;
  }
  const json meta = read_sidecar(path);
  try {
    AmplitudeGrid f;
    f.phis = meta.at("phi").get<std::vector<double>>();
    f.phis_prime = meta.at("phi_prime").get<std::vector<double>>();
    f.omega = meta.at("omega").get<double>();
    f.values = deinterleave(read_all(path), static_cast<Eigen::Index>(f.phis.size()),
                            static_cast<Eigen::Index>(f.phis_prime.size()), path);
    return f;
  } catch (const json::exception& e) {
    io_error(sidecar(path), std::string("bad sidecar: ") + e.what());
  }
}

}  // namespace tomolab::app
