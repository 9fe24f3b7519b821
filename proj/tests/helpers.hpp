#pragma once

// Test-only builders and closed-form oracles. Nothing here calls the
// library's root finders.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "enzlogic/kinetics.hpp"

namespace testing_support {

using enzlogic::EnzymeSignal;
using enzlogic::ReactionNetwork;
using enzlogic::Schedule;
using enzlogic::Slot;

/// S1 --E1--> S1p, S1p --P1--> S1.
inline ReactionNetwork not_network(double s0, Schedule e1, double p1_conc, double k_m = 0.1,
                                   double kcat_e1 = 1.0, double kcat_p1 = 1.0) {
  ReactionNetwork net;
  const auto pair = net.add_pair("S1", "S1p", s0);
  const auto e = net.add_enzyme({"E1", kcat_e1, k_m, std::move(e1)});
  const auto p = net.add_enzyme({"P1", kcat_p1, k_m, Schedule::constant(p1_conc)});
  net.add_conversion(pair, Slot::substrate, e);
  net.add_conversion(pair, Slot::product, p);
  return net;
}

/// S2 --E2--> S2p, S2 --E3--> S2p, S2p --P2--> S2.
inline ReactionNetwork two_input_network(double s0, Schedule e2, Schedule e3, double kcat_in,
                                         double p2_rate, double k_m) {
  ReactionNetwork net;
  const auto pair = net.add_pair("S2", "S2p", s0);
  const auto a = net.add_enzyme({"E2", kcat_in, k_m, std::move(e2)});
  const auto b = net.add_enzyme({"E3", kcat_in, k_m, std::move(e3)});
  const auto p = net.add_enzyme({"P2", 1.0, k_m, Schedule::constant(p2_rate)});
  net.add_conversion(pair, Slot::substrate, a);
  net.add_conversion(pair, Slot::substrate, b);
  net.add_conversion(pair, Slot::product, p);
  return net;
}

/// Root in [0,1] of a x^2 + b x + c.
inline double unit_root(long double a, long double b, long double c) {
  if (std::fabs(static_cast<double>(a)) < 1e-15) return static_cast<double>(-c / b);
  const long double disc = b * b - 4 * a * c;
  if (disc < 0) throw std::runtime_error("no real root");
  const long double sq = std::sqrt(disc);
  // Numerically stable pair of roots.
  const long double q = -0.5L * (b + (b >= 0 ? sq : -sq));
  const long double r1 = q / a;
  const long double r2 = c / q;
  for (long double r : {r1, r2})
    if (r >= -1e-12L && r <= 1 + 1e-12L) return static_cast<double>(r);
  throw std::runtime_error("no root in [0,1]");
}

/// NOT-gate equilibrium: V_E e s/(K_E+s) = V_P (1-s)/(K_P+1-s), cleared of
/// denominators.
inline double not_equilibrium_closed_form(double v_e, double e, double k_e, double v_p,
                                          double k_p) {
  if (e == 0.0) return 1.0;
  const long double w = static_cast<long double>(v_e) * e;
  const long double a = v_p - w;
  const long double b = w * (k_p + 1.0L) - v_p * (1.0L - k_e);
  const long double c = -static_cast<long double>(v_p) * k_e;
  return unit_root(a, b, c);
}

/// Two-input equilibrium for the product p with a shared input K_m:
/// W (1-p)/(K+1-p) = V_P p/(K_P+p), W = V_E2 e2 + V_E3 e3.
inline double two_input_equilibrium_closed_form(double w, double k_in, double v_p, double k_p) {
  if (w == 0.0) return 0.0;
  const long double W = w;
  const long double a = v_p - W;
  const long double b = W * (1.0L - k_p) - v_p * (k_in + 1.0L);
  const long double c = W * k_p;
  return unit_root(a, b, c);
}

/// Forward NOT relaxation with E1 absent: dx/dt = -V x/(K+x) for x = 1-s has
/// the implicit solution K ln(x0/x) + (x0 - x) = V t. Returns s(t).
inline double forward_relaxation_exact(double s0, double v_p, double k_m, double t) {
  const double x0 = 1.0 - s0;
  if (x0 == 0.0) return 1.0;
  auto elapsed = [&](double x) { return (k_m * std::log(x0 / x) + (x0 - x)) / v_p; };
  double lo = 0.0, hi = x0;  // elapsed(hi)=0, elapsed(lo)=inf
  lo = x0 * 1e-300;
  for (int i = 0; i < 400; ++i) {
    const double mid = std::sqrt(lo * hi) > 0 && hi / lo > 4 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (elapsed(mid) > t)
      lo = mid;
    else
      hi = mid;
  }
  return 1.0 - 0.5 * (lo + hi);
}

}  // namespace testing_support
