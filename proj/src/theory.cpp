#include "nbcf/theory.hpp"

#include <cmath>

#include "nbcf/error.hpp"

namespace nbcf::theory {

namespace {

constexpr double kSimplexTol = 1e-9;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kDomain, what);
}

void check_cell(const AnalyticSetup& s, std::size_t i, std::size_t j) {
  s.validate();
  require(i < s.num_classes() && j < s.vocab_size(), "cell index out of range");
}

double spread(double theta) { return theta * (1.0 - theta); }

// sum_l p_l f(theta_lj)
template <typename Fn>
double pooled(const AnalyticSetup& s, std::size_t j, Fn&& f) {
  double acc = 0.0;
  for (std::size_t l = 0; l < s.num_classes(); ++l) acc += s.priors[l] * f(s.theta(l, j));
  return acc;
}

}  // namespace

void AnalyticSetup::validate() const {
  require(theta.rows() >= 1 && theta.cols() >= 1, "theta must be non-empty");
  require(priors.size() == theta.rows(), "priors length must equal the number of classes");
  require(is_row_stochastic(theta, kSimplexTol), "theta rows must lie on the simplex");
  double total = 0.0;
  for (double p : priors) {
    require(p >= 0.0 && std::isfinite(p), "priors must be non-negative");
    total += p;
  }
  require(std::abs(total - 1.0) <= kSimplexTol, "priors must sum to 1");
  require(sample_size >= 1, "|S| must be >= 1");
  require(doc_length >= 1.0 && std::isfinite(doc_length), "m must be >= 1");
  require(t >= 0.0 && std::isfinite(t), "t must be >= 0");
}

std::vector<std::size_t> AnalyticSetup::integral_class_sizes() const {
  try {
    validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidSpec, e.what());
  }
  if (doc_length != std::floor(doc_length)) throw Error(ErrorCode::kInvalidSpec, "m must be an integer for simulation");
  std::vector<std::size_t> sizes(num_classes());
  std::size_t total = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double c = class_size(i);
    const double r = std::round(c);
    if (r < 1.0 || std::abs(c - r) > 1e-9 * std::max(1.0, c)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "p_" + std::to_string(i) + " * |S| = " + std::to_string(c) + " is not a positive integer");
    }
    sizes[i] = static_cast<std::size_t>(r);
    total += sizes[i];
  }
  if (total != sample_size) throw Error(ErrorCode::kInvalidSpec, "class sizes do not add up to |S|");
  return sizes;
}

double nb_variance(double theta, double class_size, double m) {
  require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
  require(class_size >= 1.0, "|C| must be >= 1");
  require(m >= 1.0, "m must be >= 1");
  return spread(theta) / (class_size * m);
}

double nbcf_mean(const AnalyticSetup& s, std::size_t i, std::size_t j) {
  check_cell(s, i, j);
  const double big_s = static_cast<double>(s.sample_size);
  const double mixture = pooled(s, j, [](double x) { return x; });
  const double ci = s.class_size(i);
  return (s.t * big_s * mixture + s.theta(i, j) * ci) / (s.t * big_s + ci);
}

double nbcf_bias(const AnalyticSetup& s, std::size_t i, std::size_t j) {
  check_cell(s, i, j);
  if (s.t == 0.0) return 0.0;
  const double mixture = pooled(s, j, [](double x) { return x; });
  return std::abs(mixture - s.theta(i, j)) / (1.0 + s.priors[i] / s.t);
}

double nbcf_variance(const AnalyticSetup& s, std::size_t i, std::size_t j) {
  check_cell(s, i, j);
  const double t = s.t;
  const double pi = s.priors[i];
  const double own = pi * (1.0 + 2.0 * t) * spread(s.theta(i, j));
  const double rest = pooled(s, j, [t](double x) { return t * t * spread(x); });
  const double scale = s.doc_length * static_cast<double>(s.sample_size) * (pi + t) * (pi + t);
  return (own + rest) / scale;
}

double nbcf_variance_expanded(const AnalyticSetup& s, std::size_t i, std::size_t j) {
  check_cell(s, i, j);
  const double t = s.t;
  double numer = 0.0;
  for (std::size_t l = 0; l < s.num_classes(); ++l) {
    const double w = (l == i) ? (1.0 + t) : t;
    numer += s.class_size(l) * w * w * s.doc_length * spread(s.theta(l, j));
  }
  const double denom = s.doc_length * (s.class_size(i) + t * static_cast<double>(s.sample_size));
  return numer / (denom * denom);
}

OptimalT optimal_t(const AnalyticSetup& s, std::size_t i, std::size_t j) {
  check_cell(s, i, j);
  const double own = spread(s.theta(i, j));
  const double numer = (1.0 - s.priors[i]) * own;
  const double denom = pooled(s, j, spread) - own;
  OptimalT out;
  if (std::abs(numer) < 1e-12) {
    out.value = 0.0;
    return out;
  }
  out.value = numer / denom;
  if (std::abs(denom) < 1e-12 || !std::isfinite(out.value) || out.value < 0.0) {
    out.status = OptimalT::Status::kDegenerate;
    return out;
  }
  out.above_one = out.value >= 1.0;
  return out;
}

SlopeFit loglog_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "need at least two (x, y) pairs");
  bool all_equal = true;
  for (std::size_t n = 0; n < y.size(); ++n) {
    require(x[n] > 0.0, "x must be positive");
    all_equal = all_equal && y[n] == y.front();
  }
  if (all_equal) return {};
  for (double value : y) require(value > 0.0, "y must be positive unless constant");

  const auto count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    mx += std::log(x[n]);
    my += std::log(y[n]);
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double dx = std::log(x[n]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[n]) - my);
  }
  require(sxx > 0.0, "x values must not all be equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double sse = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double r = std::log(y[n]) - (fit.intercept + fit.slope * std::log(x[n]));
      sse += r * r;
    }
    fit.std_error = std::sqrt(sse / (count - 2.0) / sxx);
  }
  return fit;
}

}  // namespace nbcf::theory
