#include "enzlogic/integrator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "enzlogic/errors.hpp"

namespace enzlogic {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::rosenbrock4: return "rosenbrock4";
    case Method::dormand_prince45: return "dopri5";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "rosenbrock" || name == "rosenbrock4") return Method::rosenbrock4;
  if (name == "dopri5" || name == "dormand_prince45" || name == "rk45") return Method::dormand_prince45;
  throw std::invalid_argument("unknown integrator '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Trace

std::vector<std::string> Trace::species_names() const {
  std::vector<std::string> out;
  out.reserve(2 * substrate_names.size());
  for (std::size_t p = 0; p < substrate_names.size(); ++p) {
    out.push_back(substrate_names[p]);
    out.push_back(product_names[p]);
  }
  return out;
}

std::vector<double> Trace::column(std::string_view name) const {
  for (std::size_t p = 0; p < substrate_names.size(); ++p) {
    if (substrate_names[p] == name) return states[p];
    if (product_names[p] == name) {
      std::vector<double> out(states[p].size());
      std::transform(states[p].begin(), states[p].end(), out.begin(),
                     [](double s) { return 1.0 - s; });
      return out;
    }
  }
  for (std::size_t e = 0; e < enzyme_names.size(); ++e)
    if (enzyme_names[e] == name) return enzymes[e];
  throw std::out_of_range("trace has no column '" + std::string(name) + "'");
}

std::vector<double> Trace::state_at(std::size_t k) const {
  std::vector<double> y(states.size());
  for (std::size_t p = 0; p < states.size(); ++p) y[p] = states[p][k];
  return y;
}

void write_csv(std::ostream& os, const Trace& trace) {
  os << 't';
  for (const auto& n : trace.species_names()) os << ',' << n;
  for (const auto& n : trace.enzyme_names) os << ',' << n;
  os << '\n';
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    os << buf;
  };
  for (std::size_t k = 0; k < trace.size(); ++k) {
    put(trace.times[k]);
    for (const auto& col : trace.states) {
      os << ',';
      put(col[k]);
      os << ',';
      put(1.0 - col[k]);
    }
    for (const auto& col : trace.enzymes) {
      os << ',';
      put(col[k]);
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// RateKernel

RateKernel::RateKernel(const ReactionNetwork& network, double t)
    : dim_(network.pairs.size()), frozen_(network.enzymes.size(), 0.0) {
  for (std::size_t e = 0; e < network.enzymes.size(); ++e) {
    if (const auto* c = network.coupling_of(e))
      coupled_.emplace_back(e, c->source);
    else
      frozen_[e] = network.enzymes[e].schedule.at(t);
  }
  for (const auto& c : network.conversions) {
    const auto& enz = network.enzymes[c.enzyme];
    Term term{};
    term.pair = c.pair;
    term.sign = c.from == Slot::product ? 1.0 : -1.0;
    term.x_sign = c.from == Slot::substrate ? 1.0 : -1.0;
    term.k_cat = enz.k_cat;
    term.k_m = enz.k_m;
    if (const auto* cp = network.coupling_of(c.enzyme)) {
      term.coupled = true;
      term.src_pair = cp->source.pair;
      term.src_sign = cp->source.slot == Slot::substrate ? 1.0 : -1.0;
    } else {
      term.coupled = false;
      term.level = frozen_[c.enzyme];
    }
    terms_.push_back(term);
  }
}

namespace {

inline double slot_value(double sign, double s) { return sign > 0.0 ? s : 1.0 - s; }

}  // namespace

void RateKernel::rhs(std::span<const double> y, std::span<double> dy) const {
  std::fill(dy.begin(), dy.end(), 0.0);
  for (const auto& t : terms_) {
    // Stage values may sit a hair outside the box; keep K_m + x away from 0.
    const double x = std::max(slot_value(t.x_sign, y[t.pair]), -0.5 * t.k_m);
    const double e = t.coupled ? slot_value(t.src_sign, y[t.src_pair]) : t.level;
    dy[t.pair] += t.sign * t.k_cat * e * x / (t.k_m + x);
  }
}

void RateKernel::jacobian(std::span<const double> y, std::span<double> jac) const {
  std::fill(jac.begin(), jac.end(), 0.0);
  for (const auto& t : terms_) {
    const double x = std::max(slot_value(t.x_sign, y[t.pair]), -0.5 * t.k_m);
    const double e = t.coupled ? slot_value(t.src_sign, y[t.src_pair]) : t.level;
    const double denom = t.k_m + x;
    jac[t.pair * dim_ + t.pair] += t.sign * t.x_sign * t.k_cat * e * t.k_m / (denom * denom);
    if (t.coupled) jac[t.pair * dim_ + t.src_pair] += t.sign * t.src_sign * t.k_cat * x / denom;
  }
}

std::vector<double> RateKernel::enzyme_levels(std::span<const double> y) const {
  std::vector<double> levels = frozen_;
  for (const auto& [e, src] : coupled_) levels[e] = species_concentration(src, y);
  return levels;
}

// ---------------------------------------------------------------------------
// Steppers

namespace {

class DormandPrince {
 public:
  static constexpr double kOrderExponent = 1.0 / 5.0;

  DormandPrince(const RateKernel& k, IntegrationStats& stats)
      : kernel_(k), stats_(stats), n_(k.dimension()), y0_(n_), y1_(n_), tmp_(n_), err_(n_),
        k_(7, std::vector<double>(n_)) {}

  void reset(std::span<const double> y) {
    std::copy(y.begin(), y.end(), y0_.begin());
    eval(y0_, k_[0]);
  }

  // Returns the scaled error norm.
  double attempt(double h, const IntegratorOptions& opt) {
    h_ = h;
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    auto& k = k_;
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y0_[i] + h * a21 * k[0][i];
    eval(tmp_, k[1]);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y0_[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    eval(tmp_, k[2]);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = y0_[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    eval(tmp_, k[3]);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = y0_[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    eval(tmp_, k[4]);
    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = y0_[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                              a65 * k[4][i]);
    eval(tmp_, k[5]);
    for (std::size_t i = 0; i < n_; ++i)
      y1_[i] = y0_[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] +
                             b6 * k[5][i]);
    eval(y1_, k[6]);
    double norm = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      err_[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                     e7 * k[6][i]);
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y0_[i]), std::abs(y1_[i]));
      norm = std::max(norm, std::abs(err_[i]) / sc);
    }
    return std::isfinite(norm) ? norm : std::numeric_limits<double>::infinity();
  }

  const std::vector<double>& proposed() const { return y1_; }

  void dense(double theta, std::span<double> out) const {
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    const auto& k = k_;
    const double th1 = 1.0 - theta;
    for (std::size_t i = 0; i < n_; ++i) {
      const double ydiff = y1_[i] - y0_[i];
      const double bspl = h_ * k[0][i] - ydiff;
      const double r4 = ydiff - h_ * k[6][i] - bspl;
      const double r5 = h_ * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                              d6 * k[5][i] + d7 * k[6][i]);
      out[i] = y0_[i] + theta * (ydiff + th1 * (bspl + theta * (r4 + th1 * r5)));
    }
  }

  void accept(std::span<const double> y1_clamped) {
    std::copy(y1_clamped.begin(), y1_clamped.end(), y0_.begin());
    // FSAL: the last stage was evaluated at the unclamped y1; clamping moves it
    // by at most the box tolerance, so re-evaluate only if it changed.
    if (!std::equal(y1_clamped.begin(), y1_clamped.end(), y1_.begin()))
      eval(y0_, k_[0]);
    else
      k_[0] = k_[6];
  }

 private:
  void eval(std::span<const double> y, std::vector<double>& dy) {
    kernel_.rhs(y, dy);
    ++stats_.rhs_evals;
  }

  const RateKernel& kernel_;
  IntegrationStats& stats_;
  std::size_t n_;
  double h_ = 0.0;
  std::vector<double> y0_, y1_, tmp_, err_;
  std::vector<std::vector<double>> k_;
};

// Kaps-Rentrop form with Shampine's coefficients. The kernel is autonomous
// within a segment, so the time-derivative terms vanish.
class Rosenbrock {
 public:
  static constexpr double kOrderExponent = 1.0 / 4.0;

  Rosenbrock(const RateKernel& k, IntegrationStats& stats)
      : kernel_(k), stats_(stats), n_(k.dimension()), y0_(n_), y1_(n_), f0_(n_), f1_(n_),
        tmp_(n_), jac_(n_ * n_), g1_(n_), g2_(n_), g3_(n_), g4_(n_), a_(n_, n_), rhs_(n_) {}

  void reset(std::span<const double> y) {
    std::copy(y.begin(), y.end(), y0_.begin());
    eval(y0_, f0_);
    jac_valid_ = false;
  }

  double attempt(double h, const IntegratorOptions& opt) {
    static constexpr double gam = 1.0 / 2.0;
    static constexpr double a21 = 2.0, a31 = 48.0 / 25.0, a32 = 6.0 / 25.0;
    static constexpr double c21 = -8.0, c31 = 372.0 / 25.0, c32 = 12.0 / 5.0;
    static constexpr double c41 = -112.0 / 125.0, c42 = -54.0 / 125.0, c43 = -2.0 / 5.0;
    static constexpr double b1 = 19.0 / 9.0, b2 = 1.0 / 2.0, b3 = 25.0 / 108.0,
                            b4 = 125.0 / 108.0;
    static constexpr double e1 = 17.0 / 54.0, e2 = 7.0 / 36.0, e4 = 125.0 / 108.0;
    h_ = h;
    f1_valid_ = false;
    if (!jac_valid_) {
      kernel_.jacobian(y0_, jac_);
      jac_valid_ = true;
    }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) a_(i, j) = -jac_[i * n_ + j];
    for (std::size_t i = 0; i < n_; ++i) a_(i, i) += 1.0 / (gam * h);
    lu_.compute(a_);

    solve(f0_, g1_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y0_[i] + a21 * g1_[i];
    eval(tmp_, f1_);
    for (std::size_t i = 0; i < n_; ++i) rhs_[i] = f1_[i] + c21 * g1_[i] / h;
    solve(rhs_, g2_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y0_[i] + a31 * g1_[i] + a32 * g2_[i];
    eval(tmp_, f1_);
    for (std::size_t i = 0; i < n_; ++i) rhs_[i] = f1_[i] + (c31 * g1_[i] + c32 * g2_[i]) / h;
    solve(rhs_, g3_);
    for (std::size_t i = 0; i < n_; ++i)
      rhs_[i] = f1_[i] + (c41 * g1_[i] + c42 * g2_[i] + c43 * g3_[i]) / h;
    solve(rhs_, g4_);
    double norm = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      y1_[i] = y0_[i] + b1 * g1_[i] + b2 * g2_[i] + b3 * g3_[i] + b4 * g4_[i];
      const double err = e1 * g1_[i] + e2 * g2_[i] + e4 * g4_[i];
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y0_[i]), std::abs(y1_[i]));
      norm = std::max(norm, std::abs(err) / sc);
    }
    return std::isfinite(norm) ? norm : std::numeric_limits<double>::infinity();
  }

  const std::vector<double>& proposed() const { return y1_; }

  // Cubic Hermite between (y0, f0) and (y1, f1).
  void dense(double theta, std::span<double> out) {
    if (!f1_valid_) {
      eval(y1_, f1_);
      f1_valid_ = true;
    }
    const double t2 = theta * theta, t3 = t2 * theta;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + theta;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    for (std::size_t i = 0; i < n_; ++i)
      out[i] = h00 * y0_[i] + h10 * h_ * f0_[i] + h01 * y1_[i] + h11 * h_ * f1_[i];
  }

  void accept(std::span<const double> y1_clamped) {
    const bool same = std::equal(y1_clamped.begin(), y1_clamped.end(), y1_.begin());
    std::copy(y1_clamped.begin(), y1_clamped.end(), y0_.begin());
    if (same && f1_valid_)
      f0_ = f1_;
    else
      eval(y0_, f0_);
    jac_valid_ = false;
  }

 private:
  void eval(std::span<const double> y, std::vector<double>& dy) {
    kernel_.rhs(y, dy);
    ++stats_.rhs_evals;
  }
  void solve(const std::vector<double>& b, std::vector<double>& x) {
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(n_));
    Eigen::Map<Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(n_));
    xv = lu_.solve(bv);
  }

  const RateKernel& kernel_;
  IntegrationStats& stats_;
  std::size_t n_;
  double h_ = 0.0;
  std::vector<double> y0_, y1_, f0_, f1_, tmp_, jac_, g1_, g2_, g3_, g4_;
  Eigen::MatrixXd a_;
  std::vector<double> rhs_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  bool jac_valid_ = false;
  bool f1_valid_ = false;
};

struct Sample {
  double t;
  std::span<const double> y;
  const RateKernel& kernel;
};
using SampleSink = std::function<void(const Sample&)>;

// Outside the box by more than tol?
bool escapes_box(std::span<const double> y, double tol) {
  for (double v : y)
    if (!(v >= -tol && v <= 1.0 + tol)) return true;
  return false;
}

void clamp_box(std::span<double> y) {
  for (double& v : y) v = std::clamp(v, 0.0, 1.0);
}

[[noreturn]] void fail(const char* what, double t) {
  std::ostringstream os;
  os << "integration failed at t=" << t << ": " << what;
  throw IntegrationError(os.str());
}

template <class Stepper>
void run_segment(const RateKernel& kernel, double a, double b, bool last_segment,
                 std::vector<double>& y, const std::vector<double>& grid, std::size_t& next,
                 const IntegratorOptions& opt, IntegrationStats& stats, const SampleSink& sink) {
  const std::size_t n = y.size();
  auto due = [&](double upto, bool inclusive) {
    return next < grid.size() && (grid[next] < upto || (inclusive && grid[next] == upto));
  };
  if (sink) {
    while (due(a, true)) sink({grid[next++], y, kernel});
  }
  if (b <= a) return;
  Stepper stepper(kernel, stats);
  stepper.reset(y);
  std::vector<double> y1(n), ys(n);
  std::vector<std::pair<double, std::vector<double>>> pending;
  double t = a;
  double h = std::min(opt.initial_step, b - a);
  const double hmin = 1e-14 * std::max(1.0, std::abs(b));
  std::size_t steps = 0;
  while (t < b) {
    if (++steps > opt.max_steps) fail("step budget exhausted", t);
    h = std::min({h, opt.max_step, b - t});
    // Avoid leaving a sliver before the segment end.
    if (b - (t + h) < 1e-10 * h) h = b - t;
    const double t_next = (h == b - t) ? b : t + h;
    double err = stepper.attempt(h, opt);
    bool ok = err <= 1.0;
    const auto& prop = stepper.proposed();
    if (ok && escapes_box(prop, opt.box_tolerance)) ok = false, err = 16.0;
    pending.clear();
    if (ok && sink) {
      // Samples inside this step; the segment end belongs to the next segment
      // unless this is the final one.
      for (std::size_t k = next; k < grid.size(); ++k) {
        const double g = grid[k];
        if (g > t_next || (g == t_next && !last_segment && t_next == b)) break;
        if (g == t_next) {
          ys.assign(prop.begin(), prop.end());
        } else {
          stepper.dense((g - t) / h, ys);
        }
        if (escapes_box(ys, opt.box_tolerance)) {
          ok = false;
          err = 16.0;
          break;
        }
        clamp_box(ys);
        pending.emplace_back(g, ys);
      }
    }
    if (ok) {
      ++stats.accepted;
      y1.assign(prop.begin(), prop.end());
      clamp_box(y1);
      stepper.accept(y1);
      for (const auto& [g, v] : pending) {
        sink({g, v, kernel});
        ++next;
      }
      t = t_next;
      y = y1;
      const double fac = err == 0.0 ? 5.0
                                    : std::clamp(0.9 * std::pow(err, -Stepper::kOrderExponent),
                                                 0.2, 5.0);
      h *= fac;
    } else {
      ++stats.rejected;
      const double fac = std::isfinite(err)
                             ? std::clamp(0.9 * std::pow(err, -Stepper::kOrderExponent), 0.1, 0.5)
                             : 0.1;
      h *= fac;
      if (h < hmin) fail("step size underflow (tolerance or unit-box bound not met)", t);
    }
  }
}

void run(const ReactionNetwork& network, double t0, double t_end, const std::vector<double>& grid,
         const IntegratorOptions& opt, IntegrationStats& stats, std::vector<double>& y,
         const SampleSink& sink) {
  network.validate();
  if (!(t_end > t0)) throw DomainError("integrate: t_end must exceed t0");
  if (!(opt.abs_tol > 0.0) || !(opt.rel_tol >= 0.0))
    throw DomainError("integrate: tolerances must be positive");
  std::vector<double> cuts{t0};
  for (std::size_t e = 0; e < network.enzymes.size(); ++e) {
    if (network.coupling_of(e)) continue;
    const auto& sched = network.enzymes[e].schedule;
    if (!sched.defined_at(t0)) {
      std::ostringstream os;
      os << "schedule of enzyme '" << network.enzymes[e].name << "' undefined at t=" << t0;
      throw ScheduleError(os.str());
    }
    for (double s : sched.switch_points(t0, t_end)) cuts.push_back(s);
  }
  cuts.push_back(t_end);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  y = network.initial_state();
  std::size_t next = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const RateKernel kernel(network, a);
    ++stats.segments;
    const bool last = i + 2 == cuts.size();
    if (kernel.dimension() == 0) {
      if (sink)
        while (next < grid.size() && (grid[next] < b || (last && grid[next] == b)))
          sink({grid[next++], y, kernel});
      continue;
    }
    if (opt.method == Method::rosenbrock4)
      run_segment<Rosenbrock>(kernel, a, b, last, y, grid, next, opt, stats, sink);
    else
      run_segment<DormandPrince>(kernel, a, b, last, y, grid, next, opt, stats, sink);
  }
}

}  // namespace

Trace integrate(const ReactionNetwork& network, double t0, double t_end, double dt_out,
                const IntegratorOptions& options) {
  if (!(dt_out > 0.0) || !std::isfinite(dt_out))
    throw DomainError("integrate: dt_out must be positive");
  if (!(t_end > t0)) throw DomainError("integrate: t_end must exceed t0");

  std::vector<double> switches;
  for (std::size_t e = 0; e < network.enzymes.size(); ++e)
    if (!network.coupling_of(e))
      for (double s : network.enzymes[e].schedule.switch_points(t0, t_end)) switches.push_back(s);
  const auto count = static_cast<std::size_t>(std::floor((t_end - t0) / dt_out + 1e-9));
  std::vector<double> grid;
  grid.reserve(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    double g = t0 + static_cast<double>(k) * dt_out;
    for (double s : switches)
      if (std::abs(g - s) <= 1e-9 * std::max(1.0, std::abs(s))) g = s;
    if (k == count && std::abs(g - t_end) <= 1e-9 * std::max(1.0, std::abs(t_end))) g = t_end;
    grid.push_back(std::min(g, t_end));
  }

  Trace trace;
  for (const auto& p : network.pairs) {
    trace.substrate_names.push_back(p.substrate);
    trace.product_names.push_back(p.product);
  }
  for (const auto& e : network.enzymes) trace.enzyme_names.push_back(e.name);
  trace.times.reserve(grid.size());
  trace.states.assign(network.pairs.size(), {});
  trace.enzymes.assign(network.enzymes.size(), {});
  for (auto& c : trace.states) c.reserve(grid.size());
  for (auto& c : trace.enzymes) c.reserve(grid.size());

  std::vector<double> y;
  run(network, t0, t_end, grid, options, trace.stats, y, [&](const Sample& s) {
    trace.times.push_back(s.t);
    for (std::size_t p = 0; p < s.y.size(); ++p) trace.states[p].push_back(s.y[p]);
    const auto levels = s.kernel.enzyme_levels(s.y);
    for (std::size_t e = 0; e < levels.size(); ++e) trace.enzymes[e].push_back(levels[e]);
  });
  return trace;
}

std::vector<double> integrate_to(const ReactionNetwork& network, double t0, double t_end,
                                 const IntegratorOptions& options) {
  IntegrationStats stats;
  std::vector<double> y;
  run(network, t0, t_end, {}, options, stats, y, {});
  return y;
}

}  // namespace enzlogic
