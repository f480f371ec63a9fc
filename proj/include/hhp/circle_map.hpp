#pragma once

// Orientation-preserving circle maps, represented by a lift theta -> L(theta)
// with L(theta + 2 pi) = L(theta) + 2 pi * degree.
//
// A MapDescriptor is an exact recipe for the lift; a CircleMap pairs it with
// dense samples on a grid and the Fourier coefficients of the periodic part
// L(theta) - degree * theta, which is where derivatives come from.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "hhp/error.hpp"
#include "hhp/fourier.hpp"

namespace hhp {

struct MapDescriptor;

namespace desc {

struct Identity {};

struct Rotation {
  double angle = 0.0;
};

/// theta -> arg(e^{i beta} (e^{i theta} - a) / (1 - conj(a) e^{i theta})), |a| < 1.
struct Moebius {
  cplx a;
  double beta = 0.0;
};

/// theta -> k theta (degree k).
struct Power {
  int k = 1;
};

/// theta -> theta + eps * v(theta) for a real vector field v.
struct Flow {
  CircleFunction field;
  double eps = 0.0;
};

/// theta -> theta - 2 eps sin((m + 2) theta) / (m + 1): the boundary motion
/// whose first-order period-matrix variation is the Beltrami direction zbar^m.
struct RauchFlow {
  int m = 0;
  double eps = 0.0;
};

/// maps[0] o maps[1] o ... o maps.back(); the last entry acts first.
struct Compose {
  std::vector<MapDescriptor> maps;
};

/// Inverse homeomorphism, evaluated by bisection on the lift.
struct Inverse {
  std::shared_ptr<const MapDescriptor> map;
};

/// Lift known only through samples on a grid; evaluated through the
/// trigonometric interpolant of its periodic part.
struct Sampled {
  std::vector<double> lift;
  SampleGrid grid = SampleGrid::uniform(1);
  int degree = 1;
  double mean = 0.0;
  CircleFunction periodic;

  static Sampled from_lift(std::vector<double> lift, const SampleGrid& grid, int degree) {
    if (lift.size() != grid.size()) throw ValidationError("sampled lift does not match its grid");
    if (degree < 1) throw ValidationError("sampled lift needs a positive degree");
    if (grid.size() < 3) throw ValidationError("sampled lift needs at least 3 nodes");
    std::vector<double> periodic_part(lift.size());
    double mean = 0.0;
    for (std::size_t j = 0; j < lift.size(); ++j) {
      periodic_part[j] = lift[j] - degree * grid.theta(j);
      mean += periodic_part[j];
    }
    mean /= static_cast<double>(lift.size());
    const int band = static_cast<int>((grid.size() - 1) / 2);
    Sampled s;
    s.periodic = analyze(periodic_part, grid, band);
    s.lift = std::move(lift);
    s.grid = grid;
    s.degree = degree;
    s.mean = mean;
    return s;
  }
};

}  // namespace desc

struct MapDescriptor {
  using Node = std::variant<desc::Identity, desc::Rotation, desc::Moebius, desc::Power, desc::Flow,
                            desc::RauchFlow, desc::Compose, desc::Inverse, desc::Sampled>;
  Node node;

  MapDescriptor() : node(desc::Identity{}) {}
  template <typename T>
    requires(!std::is_same_v<std::decay_t<T>, MapDescriptor>)
  MapDescriptor(T n) : node(std::move(n)) {}  // NOLINT(google-explicit-constructor)

  static MapDescriptor identity() { return desc::Identity{}; }
  static MapDescriptor rotation(double angle) { return desc::Rotation{angle}; }
  static MapDescriptor moebius(cplx a, double beta) { return desc::Moebius{a, beta}; }
  static MapDescriptor power(int k) { return desc::Power{k}; }
  static MapDescriptor flow(CircleFunction v, double eps) { return desc::Flow{std::move(v), eps}; }
  static MapDescriptor rauch_flow(int m, double eps) { return desc::RauchFlow{m, eps}; }
  static MapDescriptor compose(std::vector<MapDescriptor> maps) { return desc::Compose{std::move(maps)}; }
  static MapDescriptor inverse(MapDescriptor inner) {
    return desc::Inverse{std::make_shared<const MapDescriptor>(std::move(inner))};
  }

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

namespace detail {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

inline double inverse_by_bisection(const MapDescriptor& d, double y);

inline double lift_value(const MapDescriptor& d, double theta) {
  return std::visit(
      overloaded{
          [&](const desc::Identity&) { return theta; },
          [&](const desc::Rotation& r) { return theta + r.angle; },
          [&](const desc::Moebius& m) {
            // Re(1 - conj(a) e^{i theta}) > 0 for |a| < 1, so the principal
            // argument is continuous and the lift gains exactly 2 pi per turn.
            return theta + m.beta - 2.0 * std::arg(1.0 - std::conj(m.a) * std::polar(1.0, theta));
          },
          [&](const desc::Power& p) { return p.k * theta; },
          [&](const desc::Flow& f) { return theta + f.eps * f.field(theta).real(); },
          [&](const desc::RauchFlow& r) {
            return theta - 2.0 * r.eps * std::sin((r.m + 2) * theta) / (r.m + 1);
          },
          [&](const desc::Compose& c) {
            double x = theta;
            for (auto it = c.maps.rbegin(); it != c.maps.rend(); ++it) x = lift_value(*it, x);
            return x;
          },
          [&](const desc::Inverse& inv) { return inverse_by_bisection(*inv.map, theta); },
          [&](const desc::Sampled& s) {
            return s.degree * theta + s.mean + s.periodic(theta).real();
          },
      },
      d.node);
}

/// Solves L(x) = y for an increasing degree-1 lift. Bisection to the last bit.
inline double inverse_by_bisection(const MapDescriptor& d, double y) {
  const double guess = y - (lift_value(d, y) - y);
  double lo = guess - 1.0;
  double hi = guess + 1.0;
  while (lift_value(d, lo) > y) lo -= two_pi;
  while (lift_value(d, hi) < y) hi += two_pi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (lift_value(d, mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline int degree_of(const MapDescriptor& d) {
  return std::visit(detail::overloaded{
                        [](const desc::Power& p) { return p.k; },
                        [](const desc::Compose& c) {
                          int k = 1;
                          for (const auto& m : c.maps) k *= degree_of(m);
                          return k;
                        },
                        [](const desc::Sampled& s) { return s.degree; },
                        [](const auto&) { return 1; },
                    },
                    d.node);
}

/// Smooth descriptors: everything built from closed forms. Sampled lifts
/// carry no smoothness guarantee.
inline bool is_smooth(const MapDescriptor& d) {
  return std::visit(detail::overloaded{
                        [](const desc::Sampled&) { return false; },
                        [](const desc::Compose& c) {
                          return std::all_of(c.maps.begin(), c.maps.end(),
                                             [](const MapDescriptor& m) { return is_smooth(m); });
                        },
                        [](const desc::Inverse& inv) { return is_smooth(*inv.map); },
                        [](const auto&) { return true; },
                    },
                    d.node);
}

/// Static checks that do not need a grid.
inline void validate(const MapDescriptor& d) {
  std::visit(detail::overloaded{
                 [](const desc::Moebius& m) {
                   if (!(std::abs(m.a) < 1.0)) throw ValidationError("moebius map needs |a| < 1");
                 },
                 [](const desc::Power& p) {
                   if (p.k < 1) throw ValidationError("power map needs k >= 1");
                 },
                 [](const desc::Flow& f) {
                   if (!f.field.is_real()) throw ValidationError("flow field must be real");
                   if (!std::isfinite(f.eps)) throw ValidationError("flow eps must be finite");
                 },
                 [](const desc::RauchFlow& r) {
                   if (r.m < 0) throw ValidationError("rauch_flow needs m >= 0");
                   if (!std::isfinite(r.eps)) throw ValidationError("rauch_flow eps must be finite");
                 },
                 [](const desc::Compose& c) {
                   if (c.maps.empty()) throw ValidationError("compose needs at least one map");
                   for (const auto& m : c.maps) validate(m);
                 },
                 [](const desc::Inverse& inv) {
                   if (!inv.map) throw ValidationError("inverse of nothing");
                   validate(*inv.map);
                   if (degree_of(*inv.map) != 1) throw ValidationError("only degree-1 maps invert");
                 },
                 [](const auto&) {},
             },
             d.node);
}

class CircleMap {
 public:
  /// Samples the lift on `grid`, certifies strict monotonicity and computes
  /// the spectral representation of the periodic part.
  CircleMap(MapDescriptor d, const SampleGrid& grid)
      : desc_(std::make_shared<const MapDescriptor>(std::move(d))), grid_(grid) {
    validate(*desc_);
    degree_ = degree_of(*desc_);
    if (grid.size() < 8) throw ValidationError("circle maps need a grid of at least 8 nodes");
    check_field_monotone();

    const std::size_t m = grid.size();
    samples_.resize(m);
    for (std::size_t j = 0; j < m; ++j) samples_[j] = detail::lift_value(*desc_, grid.theta(j));

    min_step_ = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      const double next = j + 1 < m ? samples_[j + 1] : samples_[0] + two_pi * degree_;
      const double step = next - samples_[j];
      if (!(step > 0.0) || !std::isfinite(step))
        throw ValidationError("lift is not strictly increasing near theta = " +
                              std::to_string(grid.theta(j)) + " (forward difference " +
                              std::to_string(step) + ")");
      min_step_ = std::min(min_step_, step);
    }

    std::vector<double> periodic_part(m);
    for (std::size_t j = 0; j < m; ++j) periodic_part[j] = samples_[j] - degree_ * grid.theta(j);
    const auto full = analyze(periodic_part, grid, static_cast<int>((m - 1) / 2));
    // Chop the roundoff plateau; spectral derivatives would amplify it.
    const double floor = 1e-15 * std::max(1.0, full.max_abs_coeff());
    int band = 0;
    for (int n = full.bandlimit(); n >= 1; --n) {
      if (std::abs(full.coeff(n)) > floor) {
        band = n;
        break;
      }
    }
    bandwidth_ = band;
    periodic_ = full.with_bandlimit(std::max(1, band));
    resolved_ = band < static_cast<int>(m / 4);
  }

  const MapDescriptor& descriptor() const { return *desc_; }
  int degree() const { return degree_; }
  const SampleGrid& grid() const { return grid_; }
  const std::vector<double>& samples() const { return samples_; }
  double min_forward_difference() const { return min_step_; }

  /// Highest significant mode of the periodic part (at least 1).
  int bandwidth() const { return std::max(1, bandwidth_); }
  /// False when the periodic part still has significant energy near the
  /// grid's Nyquist range.
  bool resolved() const { return resolved_; }
  bool smooth() const { return is_smooth(*desc_) && resolved_; }

  double lift(double theta) const { return detail::lift_value(*desc_, theta); }

  /// d^k/dtheta^k of the lift, k = 1, 2, 3, by spectral differentiation.
  double derivative(double theta, int order) const {
    if (order < 1) throw ValidationError("derivative order must be positive");
    double sum = 0.0;
    for (int n = 1; n <= periodic_.bandlimit(); ++n) {
      // p(theta) = sum 2 Re(c_n e^{i n theta}); the k-th derivative picks up (i n)^k.
      const cplx term = periodic_.coeff(n) * std::polar(1.0, n * theta) *
                        std::pow(cplx(0.0, static_cast<double>(n)), order);
      sum += 2.0 * term.real();
    }
    return (order == 1 ? degree_ : 0.0) + sum;
  }

  const CircleFunction& periodic_part() const { return periodic_; }

 private:
  void check_field_monotone() const {
    // 1 + eps v' > 0 on the grid for flows (and the Rauch family).
    auto check = [&](auto&& rate, const char* what) {
      for (std::size_t j = 0; j < grid_.size(); ++j) {
        const double r = rate(grid_.theta(j));
        if (!(r > 0.0))
          throw ValidationError(std::string(what) + " is not monotone: 1 + eps v' = " +
                                std::to_string(r) + " at theta = " + std::to_string(grid_.theta(j)));
      }
    };
    if (const auto* f = std::get_if<desc::Flow>(&desc_->node)) {
      const auto dv = f->field.derivative();
      check([&](double t) { return 1.0 + f->eps * dv(t).real(); }, "flow");
    } else if (const auto* r = std::get_if<desc::RauchFlow>(&desc_->node)) {
      const double c = 2.0 * r->eps * (r->m + 2) / (r->m + 1);
      check([&](double t) { return 1.0 - c * std::cos((r->m + 2) * t); }, "rauch_flow");
    }
  }

  std::shared_ptr<const MapDescriptor> desc_;
  SampleGrid grid_;
  int degree_ = 1;
  std::vector<double> samples_;
  double min_step_ = 0.0;
  CircleFunction periodic_;
  int bandwidth_ = 0;
  bool resolved_ = true;
};

inline CircleMap make_map(const MapDescriptor& d, const SampleGrid& grid) { return {d, grid}; }

inline double evaluate_lift(const CircleMap& map, double theta) { return map.lift(theta); }

/// outer o inner, sampled on the finer of the two grids.
inline CircleMap compose(const CircleMap& outer, const CircleMap& inner) {
  std::vector<MapDescriptor> chain;
  auto append = [&](const MapDescriptor& d) {
    if (const auto* c = std::get_if<desc::Compose>(&d.node))
      chain.insert(chain.end(), c->maps.begin(), c->maps.end());
    else if (!d.is<desc::Identity>())
      chain.push_back(d);
  };
  append(outer.descriptor());
  append(inner.descriptor());
  const SampleGrid& grid = outer.grid().size() >= inner.grid().size() ? outer.grid() : inner.grid();
  MapDescriptor d = chain.empty() ? MapDescriptor::identity()
                    : chain.size() == 1 ? chain.front()
                                        : MapDescriptor::compose(std::move(chain));
  try {
    return {std::move(d), grid};
  } catch (const ValidationError& e) {
    throw NumericalError(std::string("composition lost monotonicity certification: ") + e.what());
  }
}

inline CircleMap invert(const CircleMap& map) {
  if (map.degree() != 1) throw ValidationError("only degree-1 maps can be inverted");
  const MapDescriptor& d = map.descriptor();
  if (d.is<desc::Identity>()) return map;
  if (const auto* inv = std::get_if<desc::Inverse>(&d.node)) return {*inv->map, map.grid()};
  return {MapDescriptor::inverse(d), map.grid()};
}

/// Sampled quasisymmetry ratio: max over grid midpoints x and the given
/// half-lengths t of max(rho, 1/rho), rho = (L(x+t) - L(x)) / (L(x) - L(x-t)).
/// A lower bound for the true quasisymmetry constant.
inline double qs_ratio(const CircleMap& map, std::span<const double> scales) {
  if (map.degree() != 1) throw ValidationError("qs_ratio needs a degree-1 map");
  double worst = 1.0;
  for (double t : scales) {
    if (!(t > 0.0) || t >= std::numbers::pi) throw ValidationError("qs_ratio scales must lie in (0, pi)");
    for (std::size_t j = 0; j < map.grid().size(); ++j) {
      const double x = map.grid().theta(j);
      const double mid = map.samples()[j];
      const double rho = (map.lift(x + t) - mid) / (mid - map.lift(x - t));
      worst = std::max({worst, rho, 1.0 / rho});
    }
  }
  return worst;
}

/// Dilatation of the radial extension r e^{i theta} -> r e^{i L(theta)}:
/// sup over the grid of max(L', 1/L').
inline double radial_dilatation(const CircleMap& map) {
  if (map.degree() != 1) throw ValidationError("radial_dilatation needs a degree-1 map");
  if (!map.smooth()) throw ValidationError("radial_dilatation needs a smooth descriptor");
  double k = 1.0;
  for (std::size_t j = 0; j < map.grid().size(); ++j) {
    const double d = map.derivative(map.grid().theta(j), 1);
    if (!(d > 0.0)) throw ValidationError("lift derivative is not positive");
    k = std::max({k, d, 1.0 / d});
  }
  return k;
}

}  // namespace hhp
