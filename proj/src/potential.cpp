#include "logfactor/potential.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace logfactor {

std::vector<double> GridSpec::points() const {
  if (extent <= 0.0 || step <= 0.0) throw std::invalid_argument("GridSpec: extent and step must be positive");
  const int half = static_cast<int>(std::llround(extent / step));
  if (half < 2) throw std::invalid_argument("GridSpec: fewer than five grid points");
  std::vector<double> xi(2 * half + 1);
  for (int i = -half; i <= half; ++i) xi[static_cast<std::size_t>(i + half)] = i * step;
  return xi;
}

namespace {

/// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes).
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
    const std::size_t n = x_.size();
    if (n < 2) throw std::invalid_argument("MonotoneCubic: need at least two points");
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double dx = x_[i + 1] - x_[i];
      if (dx <= 0.0) throw std::invalid_argument("MonotoneCubic: abscissae must increase");
      d[i] = (y_[i + 1] - y_[i]) / dx;
    }
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0) {
        m_[i] = 0.0;
      } else {
        double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
        double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
        m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
  }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front() + m_.front() * (x - x_.front());
    if (x >= x_.back()) return y_.back() + m_.back() * (x - x_.back());
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    double hseg = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / hseg;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * y_[i] + h10 * hseg * m_[i] + h01 * y_[i + 1] + h11 * hseg * m_[i + 1];
  }

  double derivative(double x) const {
    if (x <= x_.front()) return m_.front();
    if (x >= x_.back()) return m_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    double hseg = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / hseg;
    double g00 = 6 * t * t - 6 * t;
    double g10 = 3 * t * t - 4 * t + 1;
    double g01 = -g00;
    double g11 = 3 * t * t - 2 * t;
    return g00 * y_[i] / hseg + g10 * m_[i] + g01 * y_[i + 1] / hseg + g11 * m_[i + 1];
  }

 private:
  std::vector<double> x_, y_, m_;
};

/// Semiclassical starting potential: invert the level-counting function
/// N(E) interpolated through (E_l, l + 1/2). The half width of the well at
/// height V is x(V) = sqrt(2) * integral_0^sqrt(V-Em) N'(V - s^2) ds.
std::vector<double> wkb_initial_potential(const std::vector<double>& targets,
                                          const std::vector<double>& xi) {
  const std::size_t m = targets.size();
  double e_min = targets[0] - 0.5 * (targets[1] - targets[0]);
  std::vector<double> pe(m + 1), pn(m + 1);
  pe[0] = e_min;
  pn[0] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    pe[i + 1] = targets[i];
    pn[i + 1] = static_cast<double>(i) + 0.5;
  }
  MonotoneCubic counting(std::move(pe), std::move(pn));

  const double top = targets.back();
  auto half_width = [&](double v_level) {
    if (v_level <= e_min) return 0.0;
    const int steps = 400;  // Simpson over s in [0, sqrt(V - Em)]
    double s_max = std::sqrt(v_level - e_min);
    double sum = 0.0;
    auto slope = [&](double e) { return counting.derivative(std::min(e, top)); };
    for (int i = 0; i <= steps; ++i) {
      double s = s_max * i / steps;
      double f = slope(v_level - s * s);
      sum += (i == 0 || i == steps) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
    }
    return std::numbers::sqrt2 * sum * (s_max / steps) / 3.0;
  };

  double v_max = top + 1.0;
  while (half_width(v_max) < xi.back()) v_max += 1.0;
  const int ladder = 1500;
  std::vector<double> vs, xs;
  vs.reserve(ladder);
  xs.reserve(ladder);
  for (int i = 0; i < ladder; ++i) {
    double v_level = e_min + (v_max - e_min) * i / (ladder - 1);
    double x = half_width(v_level);
    if (!xs.empty() && x <= xs.back() + 1e-12) continue;
    xs.push_back(x);
    vs.push_back(v_level);
  }
  MonotoneCubic inverse(std::move(xs), std::move(vs));
  std::vector<double> v(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) v[i] = inverse(std::abs(xi[i]));
  return v;
}

void fix_sign(std::vector<double>& phi, int level) {
  const std::size_t mid = phi.size() / 2;
  double peak = 0.0;
  for (double p : phi) peak = std::max(peak, std::abs(p));
  double anchor = (level % 2 == 0) ? phi[mid] : phi[mid + 1];
  if (std::abs(anchor) < 1e-12 * peak) anchor = phi[mid + 1];
  if (anchor < 0.0)
    for (double& p : phi) p = -p;
}

double suggest_extent(const std::vector<double>& xi, const std::vector<double>& v,
                      double top_energy) {
  // Last crossing of the top energy plus generous decay room.
  double turning = xi.back();
  for (std::size_t i = xi.size(); i-- > 0;) {
    if (v[i] <= top_energy) {
      turning = std::abs(xi[i]);
      break;
    }
  }
  return std::max(1.5 * xi.back(), 1.6 * turning + 10.0);
}

/// Solve (sym. positive definite) Q x = b in place; Q column-major m x m.
void solve_spd(std::vector<double>& q, std::vector<double>& b, int m) {
  lapack_int info = LAPACKE_dposv(LAPACK_COL_MAJOR, 'L', m, 1, q.data(), m, b.data(), m);
  if (info != 0) throw std::runtime_error("dposv failed, info=" + std::to_string(info));
}

}  // namespace

EigenSolution solve_eigenproblem(const std::vector<double>& xi, const std::vector<double>& v,
                                 int levels) {
  const auto n = static_cast<lapack_int>(xi.size());
  if (xi.size() != v.size()) throw std::invalid_argument("solve_eigenproblem: xi/v size mismatch");
  if (n < 5) throw std::invalid_argument("solve_eigenproblem: grid too coarse");
  if (levels < 1 || levels > n - 2)
    throw std::invalid_argument("solve_eigenproblem: bad level count");
  const double h = xi[1] - xi[0];

  std::vector<double> diag(v), off(static_cast<std::size_t>(n) - 1, -0.5 / (h * h));
  for (auto& d : diag) d += 1.0 / (h * h);

  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) * levels);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(levels));
  lapack_int found = 0;
  lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(),
                                   0.0, 0.0, 1, levels, LAPACKE_dlamch('S'), &found, w.data(),
                                   z.data(), n, isuppz.data());
  if (info != 0) throw std::runtime_error("dstevr failed, info=" + std::to_string(info));
  if (found != levels) throw std::runtime_error("dstevr returned too few eigenpairs");

  EigenSolution sol;
  sol.values.assign(w.begin(), w.begin() + levels);
  sol.functions.resize(static_cast<std::size_t>(levels));
  const double scale = 1.0 / std::sqrt(h);
  for (int l = 0; l < levels; ++l) {
    auto& phi = sol.functions[static_cast<std::size_t>(l)];
    phi.resize(static_cast<std::size_t>(n));
    for (lapack_int i = 0; i < n; ++i)
      phi[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(l) * n + i] * scale;
    fix_sign(phi, l);
  }

  const auto& top = sol.functions.back();
  double edge = std::max(std::max(std::abs(top.front()), std::abs(top[1])),
                         std::max(std::abs(top.back()), std::abs(top[top.size() - 2])));
  if (edge > 1e-10)
    throw GridTooSmall(xi.back(), suggest_extent(xi, v, sol.values.back()));
  return sol;
}

PotentialGrid::PotentialGrid(std::vector<double> xi, std::vector<double> v, EigenSolution eigen,
                             int sweeps, std::vector<double> residual_history)
    : xi_(std::move(xi)),
      v_(std::move(v)),
      eigen_(std::move(eigen)),
      sweeps_(sweeps),
      residuals_(std::move(residual_history)) {
  if (xi_.size() != v_.size()) throw std::invalid_argument("PotentialGrid: xi/v size mismatch");
}

const std::vector<double>& PotentialGrid::eigenfunction(int level) const {
  if (level < 0 || level >= levels())
    throw std::out_of_range("PotentialGrid: level " + std::to_string(level) +
                            " not computed (have " + std::to_string(levels()) + ")");
  return eigen_.functions[static_cast<std::size_t>(level)];
}

namespace {

void write_value(std::ostream& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  out << buf;
}

}  // namespace

void PotentialGrid::write_potential_csv(std::ostream& out) const {
  out << "xi,v\n";
  for (std::size_t i = 0; i < xi_.size(); ++i) {
    write_value(out, xi_[i]);
    out << ',';
    write_value(out, v_[i]);
    out << '\n';
  }
}

void PotentialGrid::write_eigenfunctions_csv(std::ostream& out) const {
  out << "xi";
  for (int l = 0; l < levels(); ++l) out << ",phi" << l;
  out << '\n';
  for (std::size_t i = 0; i < xi_.size(); ++i) {
    write_value(out, xi_[i]);
    for (int l = 0; l < levels(); ++l) {
      out << ',';
      write_value(out, eigen_.functions[static_cast<std::size_t>(l)][i]);
    }
    out << '\n';
  }
}

int count_nodes(const std::vector<double>& f) {
  double peak = 0.0;
  for (double x : f) peak = std::max(peak, std::abs(x));
  const double floor = 1e-8 * peak;
  int nodes = 0;
  int last_sign = 0;
  for (double x : f) {
    if (std::abs(x) < floor) continue;
    int sign = x > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

PotentialGrid build_potential(const std::vector<double>& targets, const BuildOptions& options) {
  const int m = static_cast<int>(targets.size());
  if (m < 2) throw std::invalid_argument("build_potential: need at least two target levels");
  for (int i = 1; i < m; ++i)
    if (!(targets[i] > targets[i - 1]))
      throw std::invalid_argument("build_potential: targets must be strictly increasing");

  const std::vector<double> xi = options.grid.points();
  const double h = options.grid.step;
  const std::size_t n = xi.size();

  std::vector<double> v;
  if (!options.initial_potential.empty()) {
    if (options.initial_potential.size() != n)
      throw std::invalid_argument("build_potential: initial potential size mismatch");
    v = options.initial_potential;
  } else if (options.initial_omega > 0.0) {
    v.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = 0.5 * options.initial_omega * options.initial_omega * xi[i] * xi[i];
  } else {
    v = wkb_initial_potential(targets, xi);
  }

  double eta = options.damping;
  std::vector<double> history;
  double best_resid = std::numeric_limits<double>::infinity();
  std::vector<double> best_v;
  EigenSolution best_sol;

  for (int sweep = 0; sweep <= options.max_sweeps; ++sweep) {
    EigenSolution sol = solve_eigenproblem(xi, v, m);
    double resid = 0.0;
    const double shift = targets[0] - sol.values[0];
    for (int l = 0; l < m; ++l)
      resid = std::max(resid, std::abs(sol.values[static_cast<std::size_t>(l)] + shift -
                                       targets[static_cast<std::size_t>(l)]));
    history.push_back(resid);

    if (resid < 0.8 * options.tolerance) {
      // Gauge: pin the ground energy to its target exactly.
      for (auto& x : v) x += shift;
      for (auto& e : sol.values) e += shift;
      return PotentialGrid(xi, std::move(v), std::move(sol), sweep, std::move(history));
    }
    if (sweep == options.max_sweeps) break;

    if (resid < best_resid) {
      best_resid = resid;
      best_v = v;
      best_sol = sol;
      eta = std::min(1.0, eta * 1.2);
    } else {
      eta = std::max(5e-3, eta * 0.5);
      v = best_v;
      sol = best_sol;
    }

    // First-order update dV = sum_l c_l phi_l^2 with <phi_m|dV|phi_m> = dE_m.
    // The curvature penalty keeps each sweep smooth; the unregularized solve
    // can satisfy the same constraints with narrow spikes instead.
    std::vector<double> phi2(n * static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
      const auto& phi = sol.functions[static_cast<std::size_t>(l)];
      for (std::size_t i = 0; i < n; ++i)
        phi2[static_cast<std::size_t>(l) * n + i] = phi[i] * phi[i];
    }
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> p(static_cast<std::size_t>(m) * m, 0.0);
    for (int l1 = 0; l1 < m; ++l1) {
      for (int l2 = l1; l2 < m; ++l2) {
        const double* f = &phi2[static_cast<std::size_t>(l1) * n];
        const double* g = &phi2[static_cast<std::size_t>(l2) * n];
        double sa = 0.0, sp = 0.0;
        for (std::size_t i = 0; i < n; ++i) sa += f[i] * g[i];
        for (std::size_t i = 1; i + 1 < n; ++i) {
          double cf = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h);
          double cg = (g[i + 1] - 2 * g[i] + g[i - 1]) / (h * h);
          sp += cf * cg;
        }
        a[static_cast<std::size_t>(l1) * m + l2] = a[static_cast<std::size_t>(l2) * m + l1] = sa * h;
        p[static_cast<std::size_t>(l1) * m + l2] = p[static_cast<std::size_t>(l2) * m + l1] = sp * h;
      }
    }
    // Normal equations Q c = A^T dE with Q = A^T A + lam_s P + lam_r I.
    std::vector<double> de(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l)
      de[static_cast<std::size_t>(l)] =
          targets[static_cast<std::size_t>(l)] - sol.values[static_cast<std::size_t>(l)];
    std::vector<double> q(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(m), 0.0);
    double tr_ata = 0.0, tr_p = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int k = 0; k < m; ++k)
          s += a[static_cast<std::size_t>(k) * m + i] * a[static_cast<std::size_t>(k) * m + j];
        q[static_cast<std::size_t>(j) * m + i] = s;  // column-major
        if (i == j) tr_ata += s;
      }
      tr_p += p[static_cast<std::size_t>(i) * m + i];
      double s = 0.0;
      for (int k = 0; k < m; ++k)
        s += a[static_cast<std::size_t>(k) * m + i] * de[static_cast<std::size_t>(k)];
      rhs[static_cast<std::size_t>(i)] = s;
    }
    const double lam_smooth = 1e-3 * tr_ata / std::max(tr_p, 1e-300);
    const double lam_ridge = 1e-8 * tr_ata / m;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        q[static_cast<std::size_t>(j) * m + i] +=
            lam_smooth * p[static_cast<std::size_t>(j) * m + i] + (i == j ? lam_ridge : 0.0);
    solve_spd(q, rhs, m);

    std::vector<double> dv(n, 0.0);
    for (int l = 0; l < m; ++l) {
      const double c = rhs[static_cast<std::size_t>(l)];
      const double* f = &phi2[static_cast<std::size_t>(l) * n];
      for (std::size_t i = 0; i < n; ++i) dv[i] += c * f[i];
    }
    double peak = 0.0;
    for (double x : dv) peak = std::max(peak, std::abs(x));
    double step_scale = eta * (peak > options.update_cap ? options.update_cap / peak : 1.0);
    for (std::size_t i = 0; i < n; ++i) v[i] += step_scale * dv[i];
    // Exact parity each sweep.
    for (std::size_t i = 0, j = n - 1; i < j; ++i, --j) {
      double mean = 0.5 * (v[i] + v[j]);
      v[i] = v[j] = mean;
    }
  }

  throw BuildFailure("build_potential: no convergence within " +
                         std::to_string(options.max_sweeps) + " sweeps (best residual " +
                         std::to_string(best_resid) + ")",
                     std::move(history));
}

PotentialGrid build_potential(const Spectrum& target, int levels, const BuildOptions& options) {
  if (levels < 2) throw std::invalid_argument("build_potential: need at least two levels");
  std::vector<double> targets(static_cast<std::size_t>(levels));
  for (int l = 0; l < levels; ++l) targets[static_cast<std::size_t>(l)] = target.energy(l);
  return build_potential(targets, options);
}

PotentialGrid make_grid(const GridSpec& spec, const std::function<double(double)>& v, int levels) {
  std::vector<double> xi = spec.points();
  std::vector<double> pot(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) pot[i] = v(xi[i]);
  EigenSolution sol = solve_eigenproblem(xi, pot, levels);
  return PotentialGrid(std::move(xi), std::move(pot), std::move(sol));
}

}  // namespace logfactor
