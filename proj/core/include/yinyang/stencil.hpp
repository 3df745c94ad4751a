#pragma once
/// Three-point directional stencils and the factorised operator
/// F = prod_d (I - tau/2 S_d) used by every split solve.

#include <array>
#include <vector>

#include "yinyang/field.hpp"

namespace yy {

class WorkerPool;

/// S f (n) = lo(n) f(n - e_d) + di(n) f(n) + up(n) f(n + e_d), defined at
/// every node that is interior along `dir` (other indices unrestricted).
struct Stencil {
  Dir dir = Dir::R;
  Layout layout;
  std::array<int, 3> dims{};
  std::vector<double> lo, di, up;

  Stencil() = default;
  Stencil(Dir d, const Layout& l, const std::array<int, 3>& n);
  /// out(n) += scale * S f at nodes interior along dir and inside [first,last] per direction.
  void apply_add(const Field& f, double scale, Field& out, bool interior_only = true) const;
};

/// Adds coefficient c(i,j,k) times a 1D three-point table (tlo, tdi, tup)
/// indexed along the stencil direction.
template <class Coef>
void add_line_table(Stencil& s, const std::vector<double>& tlo, const std::vector<double>& tdi,
                    const std::vector<double>& tup, Coef&& coef) {
  const int d = idx(s.dir);
  const auto& n = s.dims;
  for (int i = 0; i < n[0]; ++i)
    for (int j = 0; j < n[1]; ++j)
      for (int k = 0; k < n[2]; ++k) {
        const int q = d == 0 ? i : d == 1 ? j : k;
        if (q == 0 || q == n[d] - 1) continue;
        const std::size_t m = (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k;
        const double c = coef(i, j, k);
        if (c == 0.0) continue;
        s.lo[m] += c * tlo[q];
        s.di[m] += c * tdi[q];
        s.up[m] += c * tup[q];
      }
}

/// Adds a diagonal (zeroth-order) coefficient.
template <class Coef>
void add_diagonal(Stencil& s, Coef&& coef) {
  const int d = idx(s.dir);
  const auto& n = s.dims;
  for (int i = 0; i < n[0]; ++i)
    for (int j = 0; j < n[1]; ++j)
      for (int k = 0; k < n[2]; ++k) {
        const int q = d == 0 ? i : d == 1 ? j : k;
        if (q == 0 || q == n[d] - 1) continue;
        s.di[(static_cast<std::size_t>(i) * n[1] + j) * n[2] + k] += coef(i, j, k);
      }
}

struct FactorSet {
  double tau = 0;
  std::array<Stencil, 3> ops;                       // indexed by direction
  std::array<Dir, 3> order{Dir::R, Dir::Theta, Dir::Phi};  // leftmost factor first

  const Stencil& op(Dir d) const { return ops[idx(d)]; }
};

/// Solves F c = rhs for c with homogeneous boundary values; rhs is given at
/// interior nodes, the result overwrites it (boundary layer set to zero).
void solve_factors(const FactorSet& F, Field& rhs, WorkerPool* pool = nullptr);

/// F x evaluated at interior nodes, using the boundary layer of x.
Field apply_factors(const FactorSet& F, const Field& x);

/// (I - tau/2 sum_d S_d) x at interior nodes.
Field apply_unsplit(const FactorSet& F, const Field& x);

/// Smallest row dominance margin |1 - tau/2 di| - tau/2 (|lo| + |up|) over
/// all factors' interior rows.
double dominance_margin(const FactorSet& F);
/// Throws when a factor is not diagonally dominant.
void require_dominance(const FactorSet& F, const char* what);

/// Error-reduction right-hand side: G - (I - tau/2 sum S_d) increment
/// (returns G unchanged on the first iterate).
Field error_reduction_rhs(const FactorSet& F, const Field& G, const Field& increment, int k);

/// One split solve for an increment delta = psi^{n+1} - psi^n.
///   g        : tau * explicit right-hand side (interior nodes)
///   prev     : previous iterate of the increment, with the boundary layer it
///              was computed with (all zeros when error reduction is off)
///   boundary : the new increment's boundary-layer values
/// With error_reduction the result solves F c = g - (I - tau/2 L)prev for the
/// correction c; otherwise it is the plain factored solve
/// delta = lift + F^{-1}(g - F lift). Boundary of the result = boundary.
Field split_update(const FactorSet& F, const Field& g, const Field& prev, const Field& boundary,
                   bool error_reduction, WorkerPool* pool = nullptr);

}  // namespace yy
