#include "twopiece/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace twopiece {
namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 5> kGaussW = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
constexpr std::array<double, 11> kKronrodX = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kKronrodW = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  std::array<double, 10> f_lo{};
  std::array<double, 10> f_hi{};
  double kronrod = kKronrodW[10] * fc;
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodX[j];
    f_lo[j] = f(center - dx);
    f_hi[j] = f(center + dx);
    kronrod += kKronrodW[j] * (f_lo[j] + f_hi[j]);
    abs_sum += kKronrodW[j] * (std::abs(f_lo[j]) + std::abs(f_hi[j]));
    if (j % 2 == 1) gauss += kGaussW[j / 2] * (f_lo[j] + f_hi[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodW[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    asc += kKronrodW[j] * (std::abs(f_lo[j] - mean) + std::abs(f_hi[j] - mean));
  }
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double resabs = abs_sum * std::abs(half);
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return {a, b, kronrod * half, err};
}

template <class F>
QuadratureResult adapt_finite(const F& f, double a, double b, const QuadratureOptions& opt) {
  std::priority_queue<Segment> heap;
  QuadratureResult out;
  Segment first = gauss_kronrod(f, a, b);
  out.evaluations = 21;
  heap.push(first);
  double total = first.value;
  double total_err = first.error;
  int n = 1;
  while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (n >= opt.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << a << ", " << b << "]: achieved error "
          << total_err << ", requested " << std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
      throw QuadratureError(msg.str(), total_err, std::max(opt.abs_tol, opt.rel_tol * std::abs(total)));
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    out.evaluations += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n;
    // Re-sum periodically to stop drift in the running totals.
    if (n % 64 == 0) {
      auto copy = heap;
      total = 0.0;
      total_err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
    }
  }
  auto copy = heap;
  total = 0.0;
  total_err = 0.0;
  while (!copy.empty()) {
    total += copy.top().value;
    total_err += copy.top().error;
    copy.pop();
  }
  out.value = total;
  out.error = total_err;
  out.subdivisions = n;
  return out;
}

// Integral over [origin, origin + direction * inf) via x = origin + direction s t/(1-t).
QuadratureResult adapt_half_line(const std::function<double(double)>& f, double origin,
                                 double direction, const QuadratureOptions& opt) {
  const double s = opt.scale;
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = origin + direction * s * t / one_minus;
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return v * s / (one_minus * one_minus);
  };
  return adapt_finite(mapped, 0.0, 1.0, opt);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options, double split) {
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN limit");
  if (!(options.scale > 0.0)) throw DomainError("integrate: scale must be positive");
  if (a == b) return {};
  if (a > b) {
    auto r = integrate(f, b, a, options, split);
    r.value = -r.value;
    return r;
  }
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return adapt_finite(f, a, b, options);
  if (lo_inf && hi_inf) {
    auto left = adapt_half_line(f, split, -1.0, options);
    auto right = adapt_half_line(f, split, 1.0, options);
    return {left.value + right.value, left.error + right.error,
            left.evaluations + right.evaluations, left.subdivisions + right.subdivisions};
  }
  if (hi_inf) return adapt_half_line(f, a, 1.0, options);
  return adapt_half_line(f, b, -1.0, options);
}

}  // namespace twopiece
