#include "yinyang/tridiag.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "yinyang/error.hpp"
#include "yinyang/parallel.hpp"

namespace yy {

namespace {

[[noreturn]] void singular(const std::string& where, int row, double pivot) {
  std::ostringstream os;
  os << "singular tridiagonal system (" << where << "): pivot " << pivot << " at row " << row;
  fail(ErrorKind::Singular, os.str());
}

// Plain Thomas on raw arrays; x may alias d. Returns row of breakdown or -1.
int thomas_raw(int n, const double* a, const double* b, const double* c, const double* d, double* x,
               double* cp) {
  double m = b[0];
  if (std::abs(m) < kPivotTolerance) return 0;
  cp[0] = c[0] / m;
  x[0] = d[0] / m;
  for (int q = 1; q < n; ++q) {
    m = b[q] - a[q] * cp[q - 1];
    if (std::abs(m) < kPivotTolerance) return q;
    cp[q] = c[q] / m;
    x[q] = (d[q] - a[q] * x[q - 1]) / m;
  }
  for (int q = n - 2; q >= 0; --q) x[q] = x[q] - cp[q] * x[q + 1];
  return -1;
}

}  // namespace

void TridiagonalSystem::validate() const {
  const std::size_t n = diag.size();
  if (n == 0) fail(ErrorKind::InvalidArgument, "tridiagonal system must have at least one unknown");
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    fail(ErrorKind::Shape, "tridiagonal arrays must all have length n");
}

std::vector<double> thomas_solve(const TridiagonalSystem& sys, long line_id) {
  sys.validate();
  const int n = sys.size();
  std::vector<double> x(n), cp(n);
  const int bad = thomas_raw(n, sys.lower.data(), sys.diag.data(), sys.upper.data(), sys.rhs.data(), x.data(),
                             cp.data());
  if (bad >= 0) {
    std::string where = "thomas";
    if (line_id >= 0) where += ", line " + std::to_string(line_id);
    singular(where, bad, bad == 0 ? sys.diag[0] : 0.0);
  }
  return x;
}

int LineBatch::line_count() const {
  const int d = idx(dir);
  int count = 1;
  for (int e = 0; e < 3; ++e)
    if (e != d) count *= dims[e] - 2;
  return count;
}

namespace {

struct Failure {
  bool any = false;
  long line = 0;
  int row = 0;
};

[[noreturn]] void batch_failure(const LineBatch& b, long line, int row) {
  std::ostringstream os;
  os << "batch solve along " << dir_name(b.dir) << ", line " << line;
  singular(os.str(), row, 0.0);
}

// Lines along phi: contiguous.
void solve_phi(const LineBatch& b, int lo, int hi, Failure& f) {
  const int nt = b.dims[1], np = b.dims[2];
  const int n = np - 2;
  std::vector<double> a(n), bb(n), c(n), cp(n);
  for (int line = lo; line < hi; ++line) {
    const int i = 1 + line / (nt - 2);
    const int j = 1 + line % (nt - 2);
    const std::size_t base = (static_cast<std::size_t>(i) * nt + j) * np + 1;
    for (int q = 0; q < n; ++q) {
      a[q] = b.alpha * b.lower[base + q];
      bb[q] = b.beta + b.alpha * b.diag[base + q];
      c[q] = b.alpha * b.upper[base + q];
    }
    double* x = b.rhs + base;
    const int bad = thomas_raw(n, a.data(), bb.data(), c.data(), x, x, cp.data());
    if (bad >= 0 && !f.any) f = {true, line, bad};
  }
}

// Lines along r (d=0) or theta (d=1); the phi index is the vector lane.
// outer ranges over the remaining direction (theta for r-lines, r for theta-lines).
void solve_strided(const LineBatch& b, int d, int lo, int hi, Failure& f) {
  const int nr = b.dims[0], nt = b.dims[1], np = b.dims[2];
  const int n = (d == 0 ? nr : nt) - 2;
  const int w = np - 2;
  const std::size_t stride = d == 0 ? static_cast<std::size_t>(nt) * np : static_cast<std::size_t>(np);
  std::vector<double> cp(static_cast<std::size_t>(n) * w);
  for (int o = lo; o < hi; ++o) {
    const int outer = 1 + o;
    const std::size_t first = d == 0 ? (static_cast<std::size_t>(1) * nt + outer) * np + 1
                                     : (static_cast<std::size_t>(outer) * nt + 1) * np + 1;
    // forward sweep
    for (int q = 0; q < n; ++q) {
      const std::size_t row = first + q * stride;
      double* x = b.rhs + row;
      double* cq = cp.data() + static_cast<std::size_t>(q) * w;
      const double* L = b.lower + row;
      const double* D = b.diag + row;
      const double* U = b.upper + row;
      if (q == 0) {
        for (int k = 0; k < w; ++k) {
          const double m = b.beta + b.alpha * D[k];
          if (std::abs(m) < kPivotTolerance && !f.any) f = {true, static_cast<long>(o) * w + k, 0};
          cq[k] = (b.alpha * U[k]) / m;
          x[k] = x[k] / m;
        }
      } else {
        const double* cprev = cq - w;
        const double* xprev = x - stride;
        for (int k = 0; k < w; ++k) {
          const double a = b.alpha * L[k];
          const double m = (b.beta + b.alpha * D[k]) - a * cprev[k];
          if (std::abs(m) < kPivotTolerance && !f.any) f = {true, static_cast<long>(o) * w + k, q};
          cq[k] = (b.alpha * U[k]) / m;
          x[k] = (x[k] - a * xprev[k]) / m;
        }
      }
    }
    for (int q = n - 2; q >= 0; --q) {
      double* x = b.rhs + first + q * stride;
      const double* xn = x + stride;
      const double* cq = cp.data() + static_cast<std::size_t>(q) * w;
      for (int k = 0; k < w; ++k) x[k] = x[k] - cq[k] * xn[k];
    }
  }
}

}  // namespace

void batch_solve(const LineBatch& b, WorkerPool* pool) {
  const int d = idx(b.dir);
  for (int e = 0; e < 3; ++e)
    if (b.dims[e] < 3) return;  // no interior unknowns
  std::vector<Failure> fails(pool ? pool->size() : 1);
  if (d == 2) {
    const int lines = b.line_count();
    std::mutex mu;
    Failure first;
    parallel_for(pool, 0, lines, [&](int lo, int hi) {
      Failure f;
      solve_phi(b, lo, hi, f);
      if (f.any) {
        std::lock_guard lock(mu);
        if (!first.any || f.line < first.line) first = f;
      }
    });
    if (first.any) batch_failure(b, first.line, first.row);
    return;
  }
  const int outer = (d == 0 ? b.dims[1] : b.dims[0]) - 2;
  std::mutex mu;
  Failure first;
  parallel_for(pool, 0, outer, [&](int lo, int hi) {
    Failure f;
    solve_strided(b, d, lo, hi, f);
    if (f.any) {
      std::lock_guard lock(mu);
      if (!first.any || f.line < first.line) first = f;
    }
  });
  if (first.any) batch_failure(b, first.line, first.row);
}

void batch_solve_lines(const LineBatch& b) {
  const int d = idx(b.dir);
  const int n = b.dims[d] - 2;
  if (n <= 0) return;
  const std::size_t stride = d == 2 ? 1 : d == 1 ? b.dims[2] : static_cast<std::size_t>(b.dims[1]) * b.dims[2];
  TridiagonalSystem sys;
  sys.lower.resize(n);
  sys.diag.resize(n);
  sys.upper.resize(n);
  sys.rhs.resize(n);
  long line = 0;
  for (int i = 1; i < b.dims[0] - 1; ++i)
    for (int j = 1; j < b.dims[1] - 1; ++j)
      for (int k = 1; k < b.dims[2] - 1; ++k) {
        const int q0 = d == 0 ? i : d == 1 ? j : k;
        if (q0 != 1) continue;
        const std::size_t first = (static_cast<std::size_t>(i) * b.dims[1] + j) * b.dims[2] + k;
        for (int q = 0; q < n; ++q) {
          const std::size_t m = first + q * stride;
          sys.lower[q] = b.alpha * b.lower[m];
          sys.diag[q] = b.beta + b.alpha * b.diag[m];
          sys.upper[q] = b.alpha * b.upper[m];
          sys.rhs[q] = b.rhs[m];
        }
        const auto x = thomas_solve(sys, line++);
        for (int q = 0; q < n; ++q) b.rhs[first + q * stride] = x[q];
      }
}

PartitionPlan make_partition_plan(const TridiagonalSystem& sys, int segments) {
  sys.validate();
  const int n = sys.size();
  if (segments < 1 || segments > n + 1)
    fail(ErrorKind::InvalidArgument, "partition needs between 1 and n+1 segments");
  PartitionPlan p;
  p.n = n;
  p.segments = segments;
  p.lower = sys.lower;
  p.diag = sys.diag;
  p.upper = sys.upper;
  for (int m = 1; m < segments; ++m)
    p.interfaces.push_back(static_cast<int>(static_cast<long>(m) * (n + 1) / segments) - 1);
  int start = 0;
  for (int m = 0; m < segments; ++m) {
    const int stop = m + 1 < segments ? p.interfaces[m] : n;
    p.ranges.push_back({start, stop});
    start = stop + 1;
  }
  // segment responses to unit interface values
  p.g.resize(segments);
  p.h.resize(segments);
  for (int m = 0; m < segments; ++m) {
    const auto [a, b] = p.ranges[m];
    const int len = b - a;
    if (len <= 0) continue;
    std::vector<double> cp(len), e(len, 0.0);
    p.g[m].assign(len, 0.0);
    p.h[m].assign(len, 0.0);
    if (m > 0) {
      e.assign(len, 0.0);
      e[0] = sys.lower[a];
      if (thomas_raw(len, &sys.lower[a], &sys.diag[a], &sys.upper[a], e.data(), p.g[m].data(), cp.data()) >= 0)
        singular("partition segment " + std::to_string(m), 0, 0.0);
    }
    if (m + 1 < segments) {
      e.assign(len, 0.0);
      e[len - 1] = sys.upper[b - 1];
      if (thomas_raw(len, &sys.lower[a], &sys.diag[a], &sys.upper[a], e.data(), p.h[m].data(), cp.data()) >= 0)
        singular("partition segment " + std::to_string(m), 0, 0.0);
    }
  }
  // Schur matrix on interfaces
  const int ni = segments - 1;
  std::vector<double> sl(ni, 0.0), sd(ni, 0.0), su(ni, 0.0);
  for (int m = 0; m < ni; ++m) {
    const int q = p.interfaces[m];
    const auto& left = p.ranges[m];
    const auto& right = p.ranges[m + 1];
    double dd = sys.diag[q];
    if (q > 0) {
      if (left[1] > left[0]) {
        const int last = left[1] - left[0] - 1;
        if (m > 0) sl[m] = -sys.lower[q] * p.g[m][last];
        dd -= sys.lower[q] * p.h[m][last];
      } else if (m > 0) {
        sl[m] = sys.lower[q];
      }
    }
    if (q + 1 < n) {
      if (right[1] > right[0]) {
        if (m + 1 < ni) su[m] = -sys.upper[q] * p.h[m + 1][0];
        dd -= sys.upper[q] * p.g[m + 1][0];
      } else if (m + 1 < ni) {
        su[m] = sys.upper[q];
      }
    }
    sd[m] = dd;
  }
  p.s_lower = sl;
  p.s_cprime.assign(ni, 0.0);
  p.s_inv_pivot.assign(ni, 0.0);
  for (int m = 0; m < ni; ++m) {
    const double piv = sd[m] - (m > 0 ? sl[m] * p.s_cprime[m - 1] : 0.0);
    if (std::abs(piv) < kPivotTolerance) {
      std::ostringstream os;
      os << "singular Schur matrix at interface " << m << " (unknown " << p.interfaces[m] << ")";
      fail(ErrorKind::Singular, os.str());
    }
    p.s_inv_pivot[m] = 1.0 / piv;
    p.s_cprime[m] = su[m] / piv;
  }
  return p;
}

std::vector<double> partitioned_solve(const TridiagonalSystem& sys, const PartitionPlan& p) {
  sys.validate();
  if (sys.size() != p.n) fail(ErrorKind::Shape, "partition plan built for a different system size");
  const int n = p.n;
  std::vector<double> x(n, 0.0);
  // independent segment solves y = A_m^{-1} b_m
  std::vector<std::vector<double>> y(p.segments);
  for (int m = 0; m < p.segments; ++m) {
    const auto [a, b] = p.ranges[m];
    const int len = b - a;
    if (len <= 0) continue;
    std::vector<double> cp(len);
    y[m].assign(len, 0.0);
    if (thomas_raw(len, &p.lower[a], &p.diag[a], &p.upper[a], &sys.rhs[a], y[m].data(), cp.data()) >= 0)
      singular("partition segment " + std::to_string(m), 0, 0.0);
  }
  // interface system
  const int ni = p.segments - 1;
  std::vector<double> X(ni);
  for (int m = 0; m < ni; ++m) {
    const int q = p.interfaces[m];
    double r = sys.rhs[q];
    const auto& left = p.ranges[m];
    const auto& right = p.ranges[m + 1];
    if (q > 0 && left[1] > left[0]) r -= p.lower[q] * y[m][left[1] - left[0] - 1];
    if (q + 1 < n && right[1] > right[0]) r -= p.upper[q] * y[m + 1][0];
    if (m > 0) r -= p.s_lower[m] * X[m - 1];
    X[m] = r * p.s_inv_pivot[m];
  }
  for (int m = ni - 2; m >= 0; --m) X[m] -= p.s_cprime[m] * X[m + 1];
  for (int m = 0; m < ni; ++m) x[p.interfaces[m]] = X[m];
  // back-substitution into segments
  for (int m = 0; m < p.segments; ++m) {
    const auto [a, b] = p.ranges[m];
    for (int q = a; q < b; ++q) {
      double v = y[m][q - a];
      if (m > 0) v -= X[m - 1] * p.g[m][q - a];
      if (m + 1 < p.segments) v -= X[m] * p.h[m][q - a];
      x[q] = v;
    }
  }
  return x;
}

}  // namespace yy
