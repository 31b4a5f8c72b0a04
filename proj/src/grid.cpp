#include "tclab/grid.hpp"

#include <cmath>
#include <sstream>

#include "tclab/error.hpp"
#include "tclab/kernels.hpp"

namespace tclab {

Grid::Grid(double a_end, double b_end, std::size_t n_interior)
    : a_(a_end), b_(b_end), n_(n_interior), h_(0.0) {
  if (!std::isfinite(a_end) || !std::isfinite(b_end)) {
    throw InvalidArgument("grid endpoints must be finite");
  }
  if (!(a_end < b_end)) throw InvalidArgument("grid requires a_end < b_end");
  if (n_interior < kMinNodes) {
    throw InvalidArgument("grid requires at least 8 interior nodes, got " +
                          std::to_string(n_interior));
  }
  h_ = (b_ - a_) / static_cast<double>(n_ + 1);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> r(n_);
  for (std::size_t i = 0; i < n_; ++i) r[i] = node(i);
  return r;
}

Grid build_grid(double a_end, double b_end, std::size_t n_interior) {
  return Grid(a_end, b_end, n_interior);
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch("grid functions live on different grids");
}

GridFunction::GridFunction(const Grid& g) : grid_(g), values_(g.size()) {}

GridFunction::GridFunction(const Grid& g, std::vector<Complex> values)
    : grid_(g), values_(std::move(values)) {
  if (values_.size() != g.size()) {
    throw InvalidArgument("grid function length does not match grid");
  }
}

GridFunction GridFunction::sample(const Grid& g,
                                  const std::function<Complex(double)>& f) {
  GridFunction out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out.values_[i] = f(g.node(i));
  return out;
}

bool GridFunction::all_finite() const noexcept {
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(Complex s) {
  for (auto& v : values_) v *= s;
  return *this;
}

WeightSpec WeightSpec::custom(std::vector<double> values) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("custom weights must be finite and strictly positive");
    }
  }
  return WeightSpec(Custom{std::move(values)});
}

WeightSpec WeightSpec::parse(const std::string& text) {
  auto number = [&text](const std::string& num) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size() || !std::isfinite(v)) {
      throw InvalidArgument("bad number in weight '" + text + "'");
    }
    return v;
  };
  double scale = 1.0;
  std::string body = text;
  if (const auto star = text.find('*'); star != std::string::npos) {
    scale = number(text.substr(0, star));
    if (!(scale > 0.0)) throw InvalidArgument("weight scale must be positive");
    body = text.substr(star + 1);
  }
  if (body == "unit" || body == "1") return WeightSpec(Unit{}, scale);
  if (body.rfind("power:", 0) == 0) return WeightSpec(Power{number(body.substr(6))}, scale);
  if (body.rfind("r^", 0) == 0) return WeightSpec(Power{number(body.substr(2))}, scale);
  throw InvalidArgument("unrecognized weight '" + text +
                        "' (expected unit, power:<p> or r^<p>)");
}

std::string WeightSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (scale_ != 1.0) os << scale_ << '*';
  std::visit(
      [&os](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Unit>) {
          os << "unit";
        } else if constexpr (std::is_same_v<T, Power>) {
          os << "power:" << v.p;
        } else {
          os << "custom";
        }
      },
      v_);
  return os.str();
}

std::vector<double> WeightSpec::sample(const Grid& g) const {
  std::vector<double> w = std::visit(
      [&g](const auto& v) -> std::vector<double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Unit>) {
          return {};
        } else if constexpr (std::is_same_v<T, Power>) {
          std::vector<double> out(g.size());
          for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::pow(g.node(i), v.p);
          return out;
        } else {
          if (v.values.size() != g.size()) {
            throw GridMismatch("custom weight length does not match grid");
          }
          return v.values;
        }
      },
      v_);
  if (scale_ != 1.0) {
    if (w.empty()) w.assign(g.size(), 1.0);
    for (double& x : w) x *= scale_;
  }
  return w;
}

WeightSpec WeightSpec::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidArgument("weight scale must be positive");
  }
  return WeightSpec(v_, scale_ * c);
}

double quad_norm_sq(std::span<const Complex> f, std::span<const double> w,
                    double h) {
  if (!w.empty() && w.size() != f.size()) {
    throw GridMismatch("weight length does not match grid function");
  }
  const auto& k = kernels::active();
  return h * k.weighted_sum_sq(f.data(), w.empty() ? nullptr : w.data(), f.size());
}

double weighted_norm(const GridFunction& f, const WeightSpec& w) {
  const auto ws = w.sample(f.grid());
  return std::sqrt(quad_norm_sq(f.values(), ws, f.grid().h()));
}

Complex inner_product(const GridFunction& f, const GridFunction& g,
                      const WeightSpec& w) {
  require_same_grid(f.grid(), g.grid());
  const auto ws = w.sample(f.grid());
  const auto& k = kernels::active();
  return f.grid().h() * k.weighted_dot(f.values().data(), g.values().data(),
                                       ws.empty() ? nullptr : ws.data(), f.size());
}

GridFunction derivative(const GridFunction& f) {
  const std::size_t n = f.size();
  const double inv2h = 0.5 / f.grid().h();
  GridFunction d(f.grid());
  for (std::size_t i = 0; i < n; ++i) {
    const Complex left = i == 0 ? Complex{} : f[i - 1];
    const Complex right = i + 1 == n ? Complex{} : f[i + 1];
    d[i] = (right - left) * inv2h;
  }
  return d;
}

std::vector<Complex> staggered_gradient(const GridFunction& f) {
  const std::size_t n = f.size();
  const double invh = 1.0 / f.grid().h();
  std::vector<Complex> d(n + 1);
  for (std::size_t e = 0; e <= n; ++e) {
    const Complex right = e == n ? Complex{} : f[e];
    const Complex left = e == 0 ? Complex{} : f[e - 1];
    d[e] = (right - left) * invh;
  }
  return d;
}

GridFunction multiply_by_power(const GridFunction& f, double p) {
  GridFunction out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = f[i] * std::pow(f.grid().node(i), p);
  }
  return out;
}

}  // namespace tclab
