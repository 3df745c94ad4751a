#include "yinyang/field_dump.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "yinyang/error.hpp"

namespace yy {

namespace {

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parse_hex(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(ErrorKind::Format, "field dump: bad number '" + s + "'");
  return v;
}

template <class T>
T expect(std::istream& in, const char* key) {
  std::string k;
  if (!(in >> k) || k != key) fail(ErrorKind::Format, std::string("field dump: expected '") + key + "'");
  T v{};
  if constexpr (std::is_same_v<T, std::string>) {
    if (!(in >> v)) fail(ErrorKind::Format, std::string("field dump: missing value for ") + key);
  } else {
    if (!(in >> v)) fail(ErrorKind::Format, std::string("field dump: bad value for ") + key);
  }
  return v;
}

}  // namespace

const Field& FieldDump::get(const std::string& name) const {
  for (const auto& [n, f] : quantities)
    if (n == name) return f;
  fail(ErrorKind::InvalidArgument, "field dump has no quantity " + name);
}

const char* layout_name(const Layout& l) {
  if (l == kCellLayout) return "cell";
  if (l == kFaceRLayout) return "face_r";
  if (l == kFaceThetaLayout) return "face_theta";
  if (l == kFacePhiLayout) return "face_phi";
  return "other";
}

Layout layout_from_name(const std::string& s) {
  if (s == "cell") return kCellLayout;
  if (s == "face_r") return kFaceRLayout;
  if (s == "face_theta") return kFaceThetaLayout;
  if (s == "face_phi") return kFacePhiLayout;
  fail(ErrorKind::Format, "field dump: unknown staggering '" + s + "'");
}

void write_field_dump(const std::string& path, const FieldDump& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write field dump " + path);
  out << "YYDUMP 1\n"
      << "chart " << chart_name(d.chart) << "\n"
      << "time " << hex(d.time) << "\n"
      << "step " << d.step << "\n"
      << "grid " << d.grid.n_r << " " << d.grid.n_theta << " " << d.grid.n_phi << "\n"
      << "extents " << hex(d.extents.r_inner) << " " << hex(d.extents.r_outer) << " " << hex(d.extents.epsilon)
      << "\n"
      << "quantities " << d.quantities.size() << "\n";
  for (const auto& [name, f] : d.quantities)
    out << name << " " << layout_name(f.layout()) << " " << f.dim(0) << " " << f.dim(1) << " " << f.dim(2) << "\n";
  out << "data\n";
  for (const auto& q : d.quantities)
    out.write(reinterpret_cast<const char*>(q.second.data()),
              static_cast<std::streamsize>(q.second.size() * sizeof(double)));
  if (!out) fail(ErrorKind::Io, "error writing field dump " + path);
}

FieldDump read_field_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open field dump " + path);
  FieldDump d;
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "YYDUMP") fail(ErrorKind::Format, "not a field dump: " + path);
  if (version != 1) fail(ErrorKind::Format, "unsupported field dump version " + std::to_string(version));
  const std::string chart = expect<std::string>(in, "chart");
  if (chart == "yin") d.chart = Chart::Yin;
  else if (chart == "yang") d.chart = Chart::Yang;
  else fail(ErrorKind::Format, "field dump: unknown chart '" + chart + "'");
  d.time = parse_hex(expect<std::string>(in, "time"));
  d.step = expect<long>(in, "step");
  d.grid.n_r = expect<int>(in, "grid");
  if (!(in >> d.grid.n_theta >> d.grid.n_phi)) fail(ErrorKind::Format, "field dump: bad grid line");
  d.extents.r_inner = parse_hex(expect<std::string>(in, "extents"));
  std::string a, b;
  if (!(in >> a >> b)) fail(ErrorKind::Format, "field dump: bad extents line");
  d.extents.r_outer = parse_hex(a);
  d.extents.epsilon = parse_hex(b);
  const long nq = expect<long>(in, "quantities");
  if (nq < 0 || nq > 1000) fail(ErrorKind::Format, "field dump: bad quantity count");
  for (long q = 0; q < nq; ++q) {
    std::string name, lay;
    std::array<int, 3> n{};
    if (!(in >> name >> lay >> n[0] >> n[1] >> n[2])) fail(ErrorKind::Format, "field dump: bad quantity line");
    for (int v : n)
      if (v < 1 || v > (1 << 20)) fail(ErrorKind::Format, "field dump: bad dimensions for " + name);
    d.quantities.emplace_back(name, Field(layout_from_name(lay), n));
  }
  std::string data;
  if (!(in >> data) || data != "data") fail(ErrorKind::Format, "field dump: missing data marker");
  in.get();  // the newline after "data"
  for (auto& q : d.quantities) {
    const auto bytes = static_cast<std::streamsize>(q.second.size() * sizeof(double));
    in.read(reinterpret_cast<char*>(q.second.data()), bytes);
    if (in.gcount() != bytes) fail(ErrorKind::Format, "field dump truncated in quantity " + q.first);
  }
  if (in.peek() != std::char_traits<char>::eof()) fail(ErrorKind::Format, "field dump: trailing bytes");
  return d;
}

FieldDump make_state_dump(const YinYangDomain& dom, const GlobalState& s, Chart c) {
  const ChartState& cs = s.charts[static_cast<int>(c)];
  FieldDump d;
  d.chart = c;
  d.time = s.t;
  d.step = s.steps;
  d.grid = dom.spec;
  d.extents = dom.extents;
  static const char* comp[3] = {"r", "theta", "phi"};
  d.quantities.emplace_back("T", cs.thermal.T_n);
  for (int sys = 1; sys <= 2; ++sys) {
    for (int k = 0; k < 3; ++k)
      d.quantities.emplace_back("u" + std::to_string(sys) + "_" + comp[k], cs.flow.u_n(sys)[k]);
    d.quantities.emplace_back("p" + std::to_string(sys), cs.flow.p_n(sys));
  }
  return d;
}

void write_vtk(const std::string& path, const YinYangDomain& dom, const FieldDump& d) {
  const MacGrid& g = dom.grid(d.chart);
  const int nr = g.cells(Dir::R), nt = g.cells(Dir::Theta), np = g.cells(Dir::Phi);
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out.precision(10);
  out << "# vtk DataFile Version 3.0\n"
      << chart_name(d.chart) << " chart t=" << d.time << "\n"
      << "ASCII\nDATASET STRUCTURED_GRID\n"
      << "DIMENSIONS " << np << " " << nt << " " << nr << "\n"
      << "POINTS " << nr * nt * np << " double\n";
  for (int i = 1; i <= nr; ++i)
    for (int j = 1; j <= nt; ++j)
      for (int k = 1; k <= np; ++k) {
        const Vec3 x = chart_to_cartesian(d.chart, g.node(kCellLayout, i, j, k));
        out << x[0] << " " << x[1] << " " << x[2] << "\n";
      }
  out << "POINT_DATA " << nr * nt * np << "\n";
  for (const auto& [name, f] : d.quantities) {
    if (!(f.layout() == kCellLayout)) continue;
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int i = 1; i <= nr; ++i)
      for (int j = 1; j <= nt; ++j)
        for (int k = 1; k <= np; ++k) out << f(i, j, k) << "\n";
  }
  if (!out) fail(ErrorKind::Io, "error writing " + path);
}

}  // namespace yy
