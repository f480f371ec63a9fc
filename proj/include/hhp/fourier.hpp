#pragma once

// Truncated Fourier model of mean-zero functions on the circle.
//
// A CircleFunction of bandlimit N stores c_n for n = -N..-1, 1..N. The zero
// mode is never stored: functions are taken modulo constants, so every
// operation below (analysis, pullback, products) drops it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "hhp/error.hpp"

namespace hhp {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Equispaced nodes theta_j = offset + 2*pi*j/M on [0, 2*pi).
class SampleGrid {
 public:
  SampleGrid(std::size_t size, double offset = 0.0) : size_(size), offset_(offset) {
    if (size == 0) throw ValidationError("sample grid must have at least one node");
    if (!(offset >= 0.0) || offset >= two_pi / static_cast<double>(size))
      throw ValidationError("grid offset must lie in [0, 2*pi/M)");
  }

  static SampleGrid uniform(std::size_t size) { return SampleGrid(size, 0.0); }
  /// Nodes shifted by half a cell; used wherever a removable diagonal
  /// singularity must be avoided.
  static SampleGrid half_offset(std::size_t size) {
    return SampleGrid(size, std::numbers::pi / static_cast<double>(size));
  }

  std::size_t size() const { return size_; }
  double offset() const { return offset_; }
  double spacing() const { return two_pi / static_cast<double>(size_); }
  double theta(std::size_t j) const { return offset_ + spacing() * static_cast<double>(j); }

  bool operator==(const SampleGrid&) const = default;

 private:
  std::size_t size_;
  double offset_;
};

class CircleFunction {
 public:
  CircleFunction() = default;

  /// Zero function of the given bandlimit.
  CircleFunction(int bandlimit, bool real) : bandlimit_(bandlimit), real_(real) {
    if (bandlimit < 1) throw ValidationError("bandlimit must be positive");
    coeffs_.assign(2 * static_cast<std::size_t>(bandlimit), cplx{});
  }

  /// `coeffs` is laid out as c_{-N}, ..., c_{-1}, c_1, ..., c_N. With `real`
  /// set, the input must already be conjugate-symmetric to ~1e-12; it is
  /// then symmetrized exactly.
  CircleFunction(int bandlimit, std::vector<cplx> coeffs, bool real)
      : bandlimit_(bandlimit), real_(real), coeffs_(std::move(coeffs)) {
    if (bandlimit < 1) throw ValidationError("bandlimit must be positive");
    if (coeffs_.size() != 2 * static_cast<std::size_t>(bandlimit))
      throw ValidationError("coefficient vector length must be 2*bandlimit");
    for (const auto& c : coeffs_)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw ValidationError("coefficients must be finite");
    if (real_) symmetrize();
  }

  static CircleFunction zero(int bandlimit, bool real = true) { return {bandlimit, real}; }

  /// The single mode e^{i n theta}; complex.
  static CircleFunction mode(int n, int bandlimit, cplx value = 1.0) {
    CircleFunction f(bandlimit, false);
    f.at(n) = value;
    return f;
  }

  /// amplitude * cos(k theta).
  static CircleFunction cosine(int k, int bandlimit, double amplitude = 1.0) {
    CircleFunction f(bandlimit, true);
    f.at(k) = 0.5 * amplitude;
    f.at(-k) = 0.5 * amplitude;
    return f;
  }

  /// amplitude * sin(k theta).
  static CircleFunction sine(int k, int bandlimit, double amplitude = 1.0) {
    CircleFunction f(bandlimit, true);
    f.at(k) = cplx(0.0, -0.5 * amplitude);
    f.at(-k) = cplx(0.0, 0.5 * amplitude);
    return f;
  }

  /// Real function with c_n given for n = 1..positive.size(); c_{-n} = conj(c_n).
  static CircleFunction real_from_positive(std::span<const cplx> positive, int bandlimit) {
    if (static_cast<int>(positive.size()) > bandlimit)
      throw ValidationError("more positive modes than the bandlimit allows");
    CircleFunction f(bandlimit, true);
    for (std::size_t k = 0; k < positive.size(); ++k) {
      const int n = static_cast<int>(k) + 1;
      f.at(n) = positive[k];
      f.at(-n) = std::conj(positive[k]);
    }
    return f;
  }

  int bandlimit() const { return bandlimit_; }
  bool is_real() const { return real_; }
  const std::vector<cplx>& storage() const { return coeffs_; }

  /// c_n; zero outside the stored range and at n = 0.
  cplx coeff(int n) const {
    if (n == 0 || n > bandlimit_ || n < -bandlimit_) return {};
    return coeffs_[index(n)];
  }

  /// Same function at a different bandlimit (truncates or zero-pads).
  CircleFunction with_bandlimit(int bandlimit) const {
    CircleFunction g(bandlimit, real_);
    const int common = std::min(bandlimit, bandlimit_);
    for (int n = 1; n <= common; ++n) {
      g.at(n) = coeff(n);
      g.at(-n) = coeff(-n);
    }
    return g;
  }

  /// Forget the real flag (the coefficients are unchanged).
  CircleFunction as_complex() const {
    CircleFunction g = *this;
    g.real_ = false;
    return g;
  }

  /// Value at a single angle by direct summation.
  cplx operator()(double theta) const {
    cplx sum{};
    for (int n = 1; n <= bandlimit_; ++n) {
      const cplx e = std::polar(1.0, n * theta);
      sum += coeff(n) * e + coeff(-n) * std::conj(e);
    }
    return real_ ? cplx(sum.real(), 0.0) : sum;
  }

  /// k-th derivative in theta: c_n -> (i n)^k c_n.
  CircleFunction derivative(int order = 1) const {
    CircleFunction g = *this;
    for (int n = -bandlimit_; n <= bandlimit_; ++n) {
      if (n == 0) continue;
      g.at(n) *= std::pow(cplx(0.0, static_cast<double>(n)), order);
    }
    return g;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
  }

  friend CircleFunction operator+(const CircleFunction& f, const CircleFunction& g) {
    return combine(f, g, 1.0);
  }
  friend CircleFunction operator-(const CircleFunction& f, const CircleFunction& g) {
    return combine(f, g, -1.0);
  }
  friend CircleFunction operator-(const CircleFunction& f) {
    CircleFunction g = f;
    for (auto& c : g.coeffs_) c = -c;
    return g;
  }
  /// Scaling by a real keeps the real flag; a complex scalar drops it.
  friend CircleFunction operator*(double s, const CircleFunction& f) {
    CircleFunction g = f;
    for (auto& c : g.coeffs_) c *= s;
    return g;
  }
  friend CircleFunction operator*(cplx s, const CircleFunction& f) {
    CircleFunction g = f.as_complex();
    for (auto& c : g.coeffs_) c *= s;
    return g;
  }

  friend bool operator==(const CircleFunction& f, const CircleFunction& g) {
    const int n_max = std::max(f.bandlimit_, g.bandlimit_);
    for (int n = 1; n <= n_max; ++n)
      if (f.coeff(n) != g.coeff(n) || f.coeff(-n) != g.coeff(-n)) return false;
    return true;
  }

  /// Mutable access for the builders in this library; keeps layout private.
  cplx& at(int n) {
    if (n == 0 || n > bandlimit_ || n < -bandlimit_)
      throw ValidationError("mode index " + std::to_string(n) + " outside bandlimit");
    return coeffs_[index(n)];
  }

 private:
  std::size_t index(int n) const {
    return static_cast<std::size_t>(n < 0 ? bandlimit_ + n : bandlimit_ + n - 1);
  }

  void symmetrize() {
    double scale = max_abs_coeff();
    for (int n = 1; n <= bandlimit_; ++n) {
      const cplx pos = coeffs_[index(n)];
      const cplx neg = coeffs_[index(-n)];
      if (std::abs(neg - std::conj(pos)) > 1e-12 * std::max(1.0, scale))
        throw ValidationError("real function requires c_{-n} = conj(c_n) (mode " +
                              std::to_string(n) + ")");
      coeffs_[index(-n)] = std::conj(pos);
    }
  }

  static CircleFunction combine(const CircleFunction& f, const CircleFunction& g, double sign) {
    CircleFunction h(std::max(f.bandlimit_, g.bandlimit_), f.real_ && g.real_);
    for (int n = 1; n <= h.bandlimit_; ++n) {
      h.at(n) = f.coeff(n) + sign * g.coeff(n);
      h.at(-n) = f.coeff(-n) + sign * g.coeff(-n);
    }
    return h;
  }

  int bandlimit_ = 1;
  bool real_ = true;
  std::vector<cplx> coeffs_ = std::vector<cplx>(2);
};

namespace detail {

inline std::vector<cplx> forward_fft(std::vector<cplx> in) {
  Eigen::FFT<double> fft;
  std::vector<cplx> out;
  fft.fwd(out, in);
  return out;
}

/// c_n = (1/M) sum_j s_j e^{-i n theta_j} for |n| <= N, read off one FFT.
inline CircleFunction analyze_impl(std::vector<cplx> samples, const SampleGrid& grid, int bandlimit,
                                   bool real) {
  const std::size_t m = grid.size();
  if (samples.size() != m) throw ValidationError("sample count does not match the grid size");
  if (bandlimit < 1) throw ValidationError("bandlimit must be positive");
  if (m < 2 * static_cast<std::size_t>(bandlimit) + 1)
    throw ValidationError("grid of " + std::to_string(m) + " nodes cannot resolve bandlimit " +
                          std::to_string(bandlimit) + " (needs M >= 2N+1)");
  const auto spectrum = forward_fft(std::move(samples));
  const double inv_m = 1.0 / static_cast<double>(m);
  CircleFunction f(bandlimit, false);
  for (int n = 1; n <= bandlimit; ++n) {
    const std::size_t pos = static_cast<std::size_t>(n);
    const std::size_t neg = m - static_cast<std::size_t>(n);
    f.at(n) = spectrum[pos] * inv_m * std::polar(1.0, -n * grid.offset());
    f.at(-n) = spectrum[neg] * inv_m * std::polar(1.0, n * grid.offset());
  }
  if (!real) return f;
  CircleFunction r(bandlimit, true);
  for (int n = 1; n <= bandlimit; ++n) {
    // Average the two conjugate estimates; exact for real data up to rounding.
    const cplx c = 0.5 * (f.coeff(n) + std::conj(f.coeff(-n)));
    r.at(n) = c;
    r.at(-n) = std::conj(c);
  }
  return r;
}

}  // namespace detail

/// Coefficients of the trigonometric interpolant of real samples, mean dropped.
inline CircleFunction analyze(std::span<const double> samples, const SampleGrid& grid, int bandlimit) {
  return detail::analyze_impl(std::vector<cplx>(samples.begin(), samples.end()), grid, bandlimit, true);
}

/// Complex samples give a complex CircleFunction.
inline CircleFunction analyze(std::span<const cplx> samples, const SampleGrid& grid, int bandlimit) {
  return detail::analyze_impl(std::vector<cplx>(samples.begin(), samples.end()), grid, bandlimit, false);
}

/// Values sum c_n e^{i n theta_j} on the grid (imaginary part exactly zero for real f).
inline std::vector<cplx> synthesize(const CircleFunction& f, const SampleGrid& grid) {
  const std::size_t m = grid.size();
  const int n_max = f.bandlimit();
  std::vector<cplx> values(m);
  if (m >= 2 * static_cast<std::size_t>(n_max) + 1) {
    std::vector<cplx> spectrum(m, cplx{});
    for (int n = 1; n <= n_max; ++n) {
      spectrum[static_cast<std::size_t>(n)] = f.coeff(n) * std::polar(1.0, n * grid.offset());
      spectrum[m - static_cast<std::size_t>(n)] = f.coeff(-n) * std::polar(1.0, -n * grid.offset());
    }
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    fft.inv(values, spectrum);
  } else {
    for (std::size_t j = 0; j < m; ++j) values[j] = f(grid.theta(j));
  }
  if (f.is_real())
    for (auto& v : values) v = cplx(v.real(), 0.0);
  return values;
}

inline std::vector<double> synthesize_real(const CircleFunction& f, const SampleGrid& grid) {
  if (!f.is_real()) throw ValidationError("synthesize_real needs a real function");
  const auto values = synthesize(f, grid);
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](cplx v) { return v.real(); });
  return out;
}

/// <f, g> = sum_{n != 0} |n| c_n(f) conj(c_n(g)).
inline cplx inner_product(const CircleFunction& f, const CircleFunction& g) {
  const int n_max = std::min(f.bandlimit(), g.bandlimit());
  cplx sum{};
  for (int n = 1; n <= n_max; ++n) {
    sum += static_cast<double>(n) *
           (f.coeff(n) * std::conj(g.coeff(n)) + f.coeff(-n) * std::conj(g.coeff(-n)));
  }
  return sum;
}

/// H^{1/2} seminorm: sqrt(sum |n| |c_n|^2), which equals sqrt(2 sum_{n>=1} n |c_n|^2)
/// for real functions.
inline double h_half_norm_squared(const CircleFunction& f) {
  double sum = 0.0;
  for (int n = 1; n <= f.bandlimit(); ++n)
    sum += static_cast<double>(n) * (std::norm(f.coeff(n)) + std::norm(f.coeff(-n)));
  return sum;
}

inline double h_half_norm(const CircleFunction& f) { return std::sqrt(h_half_norm_squared(f)); }

/// Hilbert transform (conjugation of Fourier series): c_n -> -i sgn(n) c_n.
inline CircleFunction hilbert_transform(const CircleFunction& f) {
  CircleFunction g = f;
  for (int n = 1; n <= f.bandlimit(); ++n) {
    const cplx p = f.coeff(n);
    const cplx q = f.coeff(-n);
    g.at(n) = cplx(p.imag(), -p.real());   // -i * p
    g.at(-n) = cplx(-q.imag(), q.real());  // +i * q
  }
  return g;
}

/// Pointwise complex conjugate: conj(f)_n = conj(c_{-n}).
inline CircleFunction conjugate(const CircleFunction& f) {
  if (f.is_real()) return f;
  CircleFunction g(f.bandlimit(), false);
  for (int n = 1; n <= f.bandlimit(); ++n) {
    g.at(n) = std::conj(f.coeff(-n));
    g.at(-n) = std::conj(f.coeff(n));
  }
  return g;
}

struct Polarization {
  CircleFunction plus;   ///< positive modes (W+)
  CircleFunction minus;  ///< negative modes (W-)
};

inline Polarization polarize(const CircleFunction& f) {
  CircleFunction plus(f.bandlimit(), false);
  CircleFunction minus(f.bandlimit(), false);
  for (int n = 1; n <= f.bandlimit(); ++n) {
    plus.at(n) = f.coeff(n);
    minus.at(-n) = f.coeff(-n);
  }
  return {std::move(plus), std::move(minus)};
}

inline bool in_w_plus(const CircleFunction& f) {
  for (int n = 1; n <= f.bandlimit(); ++n)
    if (f.coeff(-n) != cplx{}) return false;
  return true;
}

/// Douglas double integral
///   (1/16 pi^2) iint |f(theta) - f(phi)|^2 / sin^2((theta - phi)/2) dtheta dphi
/// by the product trapezoid rule. theta runs over `grid` and phi over the
/// unshifted grid of the same size, so a positive offset keeps every node
/// off the diagonal.
inline double douglas_energy(const CircleFunction& f, const SampleGrid& grid) {
  if (grid.offset() <= 0.0)
    throw ValidationError("douglas_energy needs a grid with positive offset");
  const std::size_t m = grid.size();
  const auto on_theta = synthesize(f, grid);
  const auto on_phi = synthesize(f, SampleGrid::uniform(m));
  // sin^2((theta_j - phi_k)/2) depends only on (j - k) mod M.
  std::vector<double> inv_sin_sq(m);
  for (std::size_t d = 0; d < m; ++d) {
    const double s = std::sin(0.5 * (grid.offset() + grid.spacing() * static_cast<double>(d)));
    inv_sin_sq[d] = 1.0 / (s * s);
  }
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double row = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t d = (j + m - k) % m;
      row += std::norm(on_theta[j] - on_phi[k]) * inv_sin_sq[d];
    }
    total += row;
  }
  const double h = grid.spacing();
  return total * h * h / (16.0 * std::numbers::pi * std::numbers::pi);
}

/// Harmonic (Poisson) extension sum c_n r^{|n|} e^{i n theta}.
inline cplx poisson_evaluate(const CircleFunction& f, double r, double theta) {
  if (!(r >= 0.0) || r >= 1.0) throw ValidationError("poisson_evaluate needs 0 <= r < 1");
  cplx sum{};
  double rn = 1.0;
  for (int n = 1; n <= f.bandlimit(); ++n) {
    rn *= r;
    const cplx e = std::polar(1.0, n * theta);
    sum += rn * (f.coeff(n) * e + f.coeff(-n) * std::conj(e));
  }
  return f.is_real() ? cplx(sum.real(), 0.0) : sum;
}

}  // namespace hhp
