#ifndef CCFL_GOLDEN_SECTION_HPP
#define CCFL_GOLDEN_SECTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace ccfl {

struct LineMinimum {
  double x = 0.0;
  double value = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// Keeps the best point seen; on ties the smaller x wins.
struct BestSoFar {
  LineMinimum best{0.0, std::numeric_limits<double>::infinity(), 0};

  void offer(double x, double v) {
    ++best.evaluations;
    if (v < best.value || (v == best.value && x < best.x)) {
      best.x = x;
      best.value = v;
    }
  }
};

}  // namespace detail

/// Golden-section minimisation of a unimodal f on [lo, hi]. Stops when the
/// bracket shrinks below rel_tol * (hi - lo). The endpoints are evaluated as
/// well, so a boundary minimum is returned exactly.
template <class F>
LineMinimum golden_section_minimize(F&& f, double lo, double hi, double rel_tol = 1e-8,
                                    std::size_t max_iter = 500) {
  if (!(lo <= hi)) throw std::invalid_argument("golden_section_minimize: empty interval");
  detail::BestSoFar tracker;
  tracker.offer(lo, f(lo));
  if (hi == lo) return tracker.best;
  tracker.offer(hi, f(hi));

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double stop = rel_tol * (hi - lo);
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  tracker.offer(c, fc);
  tracker.offer(d, fd);

  for (std::size_t it = 0; it < max_iter && (b - a) > stop; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      tracker.offer(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      tracker.offer(d, fd);
    }
  }
  return tracker.best;
}

/// Uniform pre-scan with `points` samples to pick a bracket around the best
/// sample, then golden-section inside it.
template <class F>
LineMinimum scan_then_golden(F&& f, double lo, double hi, std::size_t points = 32,
                             double rel_tol = 1e-8) {
  if (!(lo <= hi)) throw std::invalid_argument("scan_then_golden: empty interval");
  if (points < 3 || hi == lo) return golden_section_minimize(f, lo, hi, rel_tol);

  const double step = (hi - lo) / static_cast<double>(points - 1);
  auto at = [&](std::size_t k) { return k + 1 == points ? hi : lo + step * static_cast<double>(k); };

  detail::BestSoFar scan;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < points; ++k) {
    const double before = scan.best.value;
    scan.offer(at(k), f(at(k)));
    if (scan.best.value < before) best_k = k;
  }
  const double a = at(best_k == 0 ? 0 : best_k - 1);
  const double b = at(std::min(best_k + 1, points - 1));
  // Tolerance is relative to the full interval, not the bracket.
  const double bracket_tol = rel_tol * (hi - lo) / (b - a);
  LineMinimum refined = golden_section_minimize(f, a, b, bracket_tol);
  refined.evaluations += scan.best.evaluations;
  if (scan.best.value < refined.value) {
    refined.x = scan.best.x;
    refined.value = scan.best.value;
  }
  return refined;
}

}  // namespace ccfl

#endif  // CCFL_GOLDEN_SECTION_HPP
