#pragma once
/// Self-describing field dumps: a text header followed by raw doubles.
///
///   YYDUMP 1
///   chart yin
///   time 0x1.999999999999ap-4      (hex float, exact)
///   step 10
///   grid 6 18 36                   (MAC cells n_r n_theta n_phi)
///   extents <r_inner> <r_outer> <epsilon>   (hex floats)
///   quantities 3
///   T cell 8 20 38                 (name, staggering, extended node dims)
///   ...
///   data
///   <native little-endian IEEE doubles, quantity after quantity,
///    index (i*Nt + j)*Np + k>

#include <string>
#include <utility>
#include <vector>

#include "yinyang/coupling.hpp"

namespace yy {

struct FieldDump {
  Chart chart = Chart::Yin;
  double time = 0;
  long step = 0;
  GridSpec grid;
  ShellExtents extents;
  std::vector<std::pair<std::string, Field>> quantities;
  const Field& get(const std::string& name) const;
};

const char* layout_name(const Layout& l);
Layout layout_from_name(const std::string& s);

void write_field_dump(const std::string& path, const FieldDump& d);
/// Throws Format on malformed / truncated input, Io when unreadable.
FieldDump read_field_dump(const std::string& path);

/// T, u1_r, u1_theta, u1_phi, p1, u2_*, p2 of one chart.
FieldDump make_state_dump(const YinYangDomain& dom, const GlobalState& s, Chart c);

/// Legacy-VTK structured grid of the interior cell centres (Cartesian
/// points) with every cell-centred quantity as point data.
void write_vtk(const std::string& path, const YinYangDomain& dom, const FieldDump& d);

}  // namespace yy
