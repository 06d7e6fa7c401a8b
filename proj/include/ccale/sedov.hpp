#ifndef CCALE_SEDOV_HPP
#define CCALE_SEDOV_HPP

// Self-similar point-blast solution, obtained by integrating the similarity ODEs inward from the
// strong shock. Used as the reference for the blast-wave case.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "ccale/error.hpp"

namespace ccale::sedov {

struct Point {
  double rho = 0.0;
  double u = 0.0;
  double p = 0.0;
};

/// u = d (r/t) V, rho = rho0 G, p = rho0 d^2 (r/t)^2 P with d = 2/(n+2) and xi = r/R(t).
class Solution {
 public:
  Solution(double gamma, double e0, double rho0 = 1.0, int dim = 3, double xi_min = 1e-4)
      : gamma_(gamma), rho0_(rho0), n_(dim), delta_(2.0 / (dim + 2.0)) {
    if (!(gamma > 1.0) || !(e0 > 0.0) || !(rho0 > 0.0) || dim < 1 || dim > 3)
      throw Error(ErrorKind::out_of_range, "bad blast-wave parameters");
    integrate(xi_min);
    const double omega = dim == 3 ? 4.0 * std::numbers::pi : dim == 2 ? 2.0 * std::numbers::pi : 2.0;
    alpha_ = omega * delta_ * delta_ * energy_integral_;
    a_ = std::pow(e0 / (alpha_ * rho0), 1.0 / (dim + 2.0));
  }

  /// E0 = alpha rho0 R^(n+2) / t^2.
  double alpha() const { return alpha_; }
  double shock_radius(double t) const { return a_ * std::pow(t, delta_); }

  Point at(double r, double t) const {
    const double rs = shock_radius(t);
    if (r >= rs) return {rho0_, 0.0, 0.0};
    const double xi = r / rs;
    const Row f = lookup(std::log(std::max(xi, 1e-300)));
    const double w = delta_ * r / t;
    return {rho0_ * f[0], w * f[1], rho0_ * w * w * f[2]};
  }

  /// Radius at time t of the particle initially at r0, from mass conservation.
  double lagrangian_radius(double r0, double t) const {
    const double rs = shock_radius(t);
    if (r0 >= rs) return r0;
    const double target = std::pow(r0 / rs, n_) / n_;  // mass inside, in units of rho0 R^n
    // Cumulative mass rises monotonically outward from the center.
    const auto it = std::lower_bound(mass_.begin(), mass_.end(), target);
    if (it == mass_.end()) return rs;
    const std::size_t i = static_cast<std::size_t>(it - mass_.begin());
    if (i == 0) return rs * std::exp(s_.front());
    const double w = (target - mass_[i - 1]) / (mass_[i] - mass_[i - 1]);
    return rs * std::exp(s_[i - 1] + w * (s_[i] - s_[i - 1]));
  }

 private:
  using Row = std::array<double, 3>;  // G, V, P
  using StateVec = std::array<double, 4>;  // G, V, P, energy integral

  // Solves the 3x3 linear system for (G', V', P') in s = ln xi.
  StateVec rhs(const StateVec& y) const {
    const double g = y[0], v = y[1], p = y[2], d = delta_, gm = gamma_;
    const double a11 = v - 1.0, a12 = g, b1 = -n_ * g * v;
    const double a22 = d * (v - 1.0), a23 = d / g, b2 = v - d * v * v - 2.0 * d * p / g;
    const double a31 = -gm * d * (v - 1.0) / g, a33 = d * (v - 1.0) / p, b3 = 2.0 - 2.0 * d * v;
    // Row 1 gives G' from V'; row 3 gives P' from G'. Substitute into row 2.
    // G' = (b1 - a12 V') / a11 ; P' = (b3 - a31 G') / a33
    const double c_g0 = b1 / a11, c_g1 = -a12 / a11;
    const double c_p0 = (b3 - a31 * c_g0) / a33, c_p1 = -a31 * c_g1 / a33;
    const double vs = (b2 - a23 * c_p0) / (a22 + a23 * c_p1);
    const double gs = c_g0 + c_g1 * vs;
    const double ps = c_p0 + c_p1 * vs;
    return {gs, vs, ps, 0.0};
  }

  void integrate(double xi_min) {
    namespace ode = boost::numeric::odeint;
    const double gm = gamma_;
    StateVec y{(gm + 1.0) / (gm - 1.0), 2.0 / (gm + 1.0), 2.0 / (gm + 1.0), 0.0};
    const auto system = [this](const StateVec& x, StateVec& dxds, double s) {
      dxds = rhs(x);
      const double xi = std::exp(s);
      // d/ds of the integral of (G V^2 / 2 + P / (gamma - 1)) xi^(n+1) d xi, integrated inward.
      dxds[3] = (0.5 * x[0] * x[1] * x[1] + x[2] / (gamma_ - 1.0)) * std::pow(xi, n_ + 2);
    };
    const double s_end = std::log(xi_min);
    const int samples = 4000;
    std::vector<double> s_out;
    std::vector<StateVec> y_out;
    auto stepper = ode::make_dense_output(1e-12, 1e-12, ode::runge_kutta_dopri5<StateVec>());
    const double ds = s_end / samples;
    ode::integrate_const(stepper, system, y, 0.0, s_end + 0.5 * ds, ds, [&](const StateVec& x, double s) {
      s_out.push_back(s);
      y_out.push_back(x);
    });
    // Stored from the center outward.
    std::reverse(s_out.begin(), s_out.end());
    std::reverse(y_out.begin(), y_out.end());
    s_ = s_out;
    rows_.clear();
    for (const auto& x : y_out) rows_.push_back({x[0], x[1], x[2]});
    // Inward integration accumulates the negative of the outward integral.
    energy_integral_ = -y_out.front()[3];

    // Mass inside xi: integral of G xi^(n-1) d xi, trapezoidal in s on the fine table.
    mass_.assign(s_.size(), 0.0);
    const double xi0 = std::exp(s_.front());
    mass_[0] = rows_.front()[0] * std::pow(xi0, n_) / n_;
    for (std::size_t i = 1; i < s_.size(); ++i) {
      const double f0 = rows_[i - 1][0] * std::pow(std::exp(s_[i - 1]), n_);
      const double f1 = rows_[i][0] * std::pow(std::exp(s_[i]), n_);
      mass_[i] = mass_[i - 1] + 0.5 * (f0 + f1) * (s_[i] - s_[i - 1]);
    }
  }

  Row lookup(double s) const {
    if (s <= s_.front()) return rows_.front();
    if (s >= s_.back()) return rows_.back();
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - s_.begin());
    const double w = (s - s_[i - 1]) / (s_[i] - s_[i - 1]);
    Row r;
    for (int k = 0; k < 3; ++k) r[k] = rows_[i - 1][k] + w * (rows_[i][k] - rows_[i - 1][k]);
    return r;
  }

  double gamma_, rho0_;
  int n_;
  double delta_;
  double alpha_ = 0.0, a_ = 1.0, energy_integral_ = 0.0;
  std::vector<double> s_;
  std::vector<Row> rows_;
  std::vector<double> mass_;
};

}  // namespace ccale::sedov

#endif  // CCALE_SEDOV_HPP
