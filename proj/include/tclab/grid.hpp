#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tclab {

using Complex = std::complex<double>;

/// Uniform mesh of interior nodes a + (i+1) h, i = 0..n-1, with h = (b-a)/(n+1).
/// Endpoint values are implicit zeros (homogeneous Dirichlet).
class Grid {
 public:
  static constexpr std::size_t kMinNodes = 8;

  Grid(double a_end, double b_end, std::size_t n_interior);

  double a_end() const noexcept { return a_; }
  double b_end() const noexcept { return b_; }
  std::size_t size() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  double node(std::size_t i) const noexcept {
    return a_ + static_cast<double>(i + 1) * h_;
  }
  std::vector<double> nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double a_;
  double b_;
  std::size_t n_;
  double h_;
};

Grid build_grid(double a_end, double b_end, std::size_t n_interior);

/// Complex samples at the interior nodes of a grid.
class GridFunction {
 public:
  explicit GridFunction(const Grid& g);
  GridFunction(const Grid& g, std::vector<Complex> values);

  /// Samples f at every interior node.
  static GridFunction sample(const Grid& g,
                             const std::function<Complex(double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex& operator[](std::size_t i) noexcept { return values_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return values_[i]; }

  bool all_finite() const noexcept;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(Complex s);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) {
    return a += b;
  }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) {
    return a -= b;
  }
  friend GridFunction operator*(Complex s, GridFunction a) { return a *= s; }

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

/// Radial weight multiplying |f|^2 in the quadrature.
class WeightSpec {
 public:
  struct Unit {};
  struct Power {
    double p;  // weight r^p
  };
  struct Custom {
    std::vector<double> values;  // one per node, strictly positive
  };

  WeightSpec() = default;
  static WeightSpec unit() { return WeightSpec(Unit{}); }
  static WeightSpec power(double p) { return WeightSpec(Power{p}); }
  static WeightSpec custom(std::vector<double> values);

  /// "unit", "power:<p>" or "r^<p>", optionally prefixed by "<c>*".
  static WeightSpec parse(const std::string& text);
  std::string describe() const;

  bool is_unit() const noexcept {
    return std::holds_alternative<Unit>(v_) && scale_ == 1.0;
  }

  /// Per-node weight values; empty for the unit weight.
  std::vector<double> sample(const Grid& g) const;

  /// Same weight scaled by a positive constant.
  WeightSpec scaled(double c) const;

 private:
  using Variant = std::variant<Unit, Power, Custom>;
  explicit WeightSpec(Variant v, double scale = 1.0)
      : v_(std::move(v)), scale_(scale) {}
  Variant v_{Unit{}};
  double scale_ = 1.0;
};

/// h * sum_i w_i |f_i|^2 over raw arrays; empty w means unit weights.
double quad_norm_sq(std::span<const Complex> f, std::span<const double> w,
                    double h);

double weighted_norm(const GridFunction& f, const WeightSpec& w);
Complex inner_product(const GridFunction& f, const GridFunction& g,
                      const WeightSpec& w);

/// Central differences with zero ghost values at both ends.
GridFunction derivative(const GridFunction& f);

/// Forward differences on the staggered mesh, n+1 edge values including both
/// boundary edges: (f_{i} - f_{i-1}) / h with f_{-1} = f_n = 0.
std::vector<Complex> staggered_gradient(const GridFunction& f);

/// f_i * r_i^p.
GridFunction multiply_by_power(const GridFunction& f, double p);

void require_same_grid(const Grid& a, const Grid& b);

}  // namespace tclab
