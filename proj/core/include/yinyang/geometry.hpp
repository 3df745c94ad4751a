#pragma once
/// Yin and Yang charts, their staggered (MAC) grids and coordinate maps.
///
/// Both charts use the box r in [R1,R2], theta in [pi/4-eps, 3pi/4+eps],
/// phi in [pi/4-eps, 7pi/4+eps]. Every field is stored on an "extended node"
/// array per direction: for a cell-centred direction the nodes are
/// [face_0, centre_0 .. centre_{n-1}, face_n] (n+2 nodes), for a face
/// direction they are the n+1 faces. Index 0 and N-1 are the boundary layer.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace yy {

using Vec3 = std::array<double, 3>;

enum class Chart : int { Yin = 0, Yang = 1 };
constexpr Chart other(Chart c) { return c == Chart::Yin ? Chart::Yang : Chart::Yin; }
const char* chart_name(Chart c);

enum class Dir : int { R = 0, Theta = 1, Phi = 2 };
constexpr int idx(Dir d) { return static_cast<int>(d); }
const char* dir_name(Dir d);

enum class Stagger : std::uint8_t { Center, Face };

struct Layout {
  std::array<Stagger, 3> s{Stagger::Center, Stagger::Center, Stagger::Center};
  Stagger operator[](int d) const { return s[d]; }
  bool operator==(const Layout&) const = default;
};

inline constexpr Layout kCellLayout{{Stagger::Center, Stagger::Center, Stagger::Center}};
inline constexpr Layout kFaceRLayout{{Stagger::Face, Stagger::Center, Stagger::Center}};
inline constexpr Layout kFaceThetaLayout{{Stagger::Center, Stagger::Face, Stagger::Center}};
inline constexpr Layout kFacePhiLayout{{Stagger::Center, Stagger::Center, Stagger::Face}};
/// Layout of velocity component c (0=r, 1=theta, 2=phi).
Layout component_layout(int c);

struct Spherical {
  double r = 0, theta = 0, phi = 0;
};

struct ShellExtents {
  double r_inner = 1.0;
  double r_outer = 2.0;
  double epsilon = 0.1;
  void validate() const;
};

struct GridSpec {
  int n_r = 4, n_theta = 12, n_phi = 24;
  /// Optional per-direction normalised face positions (n+1 values, strictly
  /// increasing from 0 to 1). Empty means uniform.
  std::array<std::vector<double>, 3> stretching;
  int count(Dir d) const { return d == Dir::R ? n_r : d == Dir::Theta ? n_theta : n_phi; }
  void validate() const;
};

/// Node coordinates of one staggering along one direction plus the 1D
/// finite-difference tables used by all operators.
struct NodeAxis {
  std::vector<double> x;      // node coordinates
  std::vector<double> dual;   // N-1 points between consecutive nodes
  std::vector<double> width;  // control width per node (dual spacing)
  // conservative weighted second derivative (1/(w V)) d/dx (w d/dx), interior nodes
  std::vector<double> d2lo, d2up;
  // nonuniform centred first derivative, interior nodes
  std::vector<double> d1lo, d1di, d1up;
  // outer derivative of a conservative divergence, d/dx( (1/W) d/dx (w f) ),
  // used for the own-direction grad-div term of a face-staggered component
  std::vector<double> gdlo, gddi, gdup;
  int size() const { return static_cast<int>(x.size()); }
};

/// Linear interpolation table between two node axes of one direction.
struct Transfer1D {
  std::vector<int> lo;       // left source index per target node
  std::vector<double> w;     // weight of lo+1
};

class MacGrid {
 public:
  MacGrid() = default;
  /// General box grid. theta1 / r_hat are the frozen coefficients used by the
  /// hat operators (for a chart: pi/4-eps and R1).
  MacGrid(Chart chart, const Vec3& lo, const Vec3& hi, const GridSpec& spec,
          double r_hat, double theta1);

  Chart chart() const { return chart_; }
  const GridSpec& spec() const { return spec_; }
  int cells(Dir d) const { return spec_.count(d); }
  double lo(Dir d) const { return lo_[idx(d)]; }
  double hi(Dir d) const { return hi_[idx(d)]; }
  double r_hat() const { return r_hat_; }
  double theta1() const { return theta1_; }

  const std::vector<double>& faces(Dir d) const { return faces_[idx(d)]; }
  const std::vector<double>& centers(Dir d) const { return centers_[idx(d)]; }
  const NodeAxis& axis(Dir d, Stagger s) const { return axes_[idx(d)][static_cast<int>(s)]; }
  const NodeAxis& axis(const Layout& l, int d) const { return axes_[d][static_cast<int>(l[d])]; }
  const Transfer1D& transfer(Dir d, Stagger from, Stagger to) const {
    return transfers_[idx(d)][static_cast<int>(from)][static_cast<int>(to)];
  }
  std::array<int, 3> dims(const Layout& l) const;
  Spherical node(const Layout& l, int i, int j, int k) const;

 private:
  Chart chart_ = Chart::Yin;
  GridSpec spec_;
  Vec3 lo_{}, hi_{};
  double r_hat_ = 1, theta1_ = 0;
  std::array<std::vector<double>, 3> faces_, centers_;
  std::array<std::array<NodeAxis, 2>, 3> axes_;
  std::array<std::array<std::array<Transfer1D, 2>, 2>, 3> transfers_;
};

struct CellLocation {
  std::array<int, 3> cell{};
  std::array<double, 3> offset{};
};

/// Cell containing p; a coordinate on an interior face goes to the lower cell.
CellLocation locate_cell(const MacGrid& grid, const Spherical& p);

Vec3 chart_to_cartesian(Chart chart, const Spherical& p);
/// Inverse of chart_to_cartesian, phi returned in [0, 2pi).
Spherical cartesian_to_chart(Chart chart, const Vec3& x);
/// Coordinates of the same physical point in the other chart.
Spherical sibling_coords(Chart chart, const Spherical& p);
/// Unit vectors (e_r, e_theta, e_phi) in Cartesian components.
std::array<Vec3, 3> spherical_basis(Chart chart, const Spherical& p);

struct YinYangDomain {
  ShellExtents extents;
  GridSpec spec;
  MacGrid yin, yang;
  const MacGrid& grid(Chart c) const { return c == Chart::Yin ? yin : yang; }
};

YinYangDomain build_domain(const ShellExtents& extents, const GridSpec& spec);

struct CoverageReport {
  bool covered = false;             // every sample lies in some chart box
  bool boundary_inside = false;     // each chart's lateral boundary strictly inside the other
  double min_margin = 0;            // smallest sibling distance of a boundary point to the box edge
  int samples = 0;
};
CoverageReport check_coverage(const YinYangDomain& domain, int samples = 10000);

bool inside_box(const MacGrid& grid, const Spherical& p, double tol = 0);

/// Largest / smallest Cartesian diameter (longest body diagonal) over cells.
double max_cell_diameter(const MacGrid& grid);
double min_cell_diameter(const MacGrid& grid);

}  // namespace yy
