#include "fibc/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fibc {

double shannon_entropy(const std::map<Label, uint64_t>& histogram) {
  uint64_t total = 0;
  for (auto& [s, c] : histogram) total += c;
  if (total == 0)
    throw std::invalid_argument("entropy of an all-zero histogram");
  double h = 0;
  for (auto& [s, c] : histogram) {
    if (c == 0) continue;
    double p = double(c) / double(total);
    h -= p * std::log2(p);
  }
  return h;
}

uint64_t info_theoretic_bound_bits(uint64_t n, uint64_t delta) {
  if (n < 1 || delta < 1) throw std::invalid_argument("need n >= 1, delta >= 1");
  return 2 * n + n * uint64_t(ceil_log2(delta));
}

double fib_entropy_bits(uint64_t n, double h0) {
  if (n < 1 || h0 < 0) throw std::invalid_argument("need n >= 1, H0 >= 0");
  return 2.0 * double(n) + double(n) * h0;
}

namespace {

// Root of x*2^x = target on [0, 64], bisection + a Newton polish. The curve
// is strictly increasing there, and 64*2^64 dwarfs any target we solve for.
double solve_kappa(double target) {
  if (!(target > 0)) throw std::invalid_argument("kappa target must be > 0");
  auto f = [](double x) { return x * std::exp2(x); };
  double lo = 0, hi = 64;
  if (f(hi) < target) throw std::invalid_argument("kappa target too large");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  constexpr double ln2 = 0.6931471805599453;
  for (int i = 0; i < 4; ++i) {
    double fx = f(x) - target;
    double dfx = std::exp2(x) * (1 + x * ln2);
    double step = fx / dfx;
    if (std::isfinite(step)) x -= step;
  }
  return x;
}

uint32_t floor_with_snap(double x) {
  // Guard the exact-integer roots (e.g. kappa = 1 at target 2) against
  // floating fuzz just below the integer.
  double r = std::round(x);
  if (std::abs(x - r) < 1e-9) return uint32_t(r);
  return uint32_t(std::floor(x));
}

double solve_xi(double width_log2n, double h0) {
  // 2^x = (H0/x)*2^W + 3, increasing LHS vs decreasing RHS.
  double w = width_log2n;
  auto g = [&](double x) {
    return std::exp2(x) - (h0 / x) * std::exp2(w) - 3.0;
  };
  double lo = 1e-9, hi = 64;
  if (g(hi) < 0) return std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_zeta(double width, double h0, double delta) {
  // (H0/x)*2^W + 3 = delta^(2^(W-x)); compare in the log domain since the
  // right side overflows for small x.
  auto g = [&](double x) {
    double lhs = std::log2((h0 / x) * std::exp2(width) + 3.0);
    double rhs = std::exp2(width - x) * std::log2(delta);
    return rhs - lhs;  // positive while the tower still dominates
  };
  double lo = 1e-9, hi = 64;
  if (g(hi) > 0) return std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BarrierAnalysis solve_barrier_compact(double n, double delta) {
  if (n < 2 || delta < 2)
    throw std::invalid_argument("need n >= 2, delta >= 2");
  BarrierAnalysis b;
  b.target = n * std::log2(delta);
  b.kappa = solve_kappa(b.target);
  b.lambda = floor_with_snap(b.kappa);
  double w = std::log2(n);
  b.xi = solve_xi(w, std::log2(delta));
  b.zeta = solve_zeta(w, std::log2(delta), delta);
  return b;
}

BarrierAnalysis solve_barrier_entropy(double n, double h0) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (!(h0 > 0))
    throw std::invalid_argument("barrier undefined at zero entropy");
  BarrierAnalysis b;
  b.target = n * h0;
  b.kappa = solve_kappa(b.target);
  b.lambda = floor_with_snap(b.kappa);
  b.xi = solve_xi(std::log2(n), h0);
  b.zeta = std::numeric_limits<double>::quiet_NaN();  // needs delta
  return b;
}

BarrierAnalysis analyze_levels(uint32_t width, double h0, uint32_t delta) {
  if (!(h0 > 0) || delta < 2 || width < 2)
    throw std::invalid_argument("need H0 > 0, delta >= 2, W >= 2");
  BarrierAnalysis b;
  b.target = std::exp2(double(width)) * std::log2(double(delta));
  b.kappa = solve_kappa(b.target);
  b.lambda = floor_with_snap(b.kappa);
  b.xi = solve_xi(double(width), h0);
  b.zeta = solve_zeta(double(width), h0, double(delta));
  return b;
}

LevelBounds level_bounds(uint32_t width, double h0, uint32_t delta) {
  if (!(h0 > 0) || delta < 2 || width < 2)
    throw std::invalid_argument("need H0 > 0, delta >= 2, W >= 2");
  double w = width;
  LevelBounds lb;
  lb.xi_lower = w - std::log2(w / h0);
  double inner = w - std::log2(w / h0);
  if (!(inner > 0))
    throw std::invalid_argument("zeta bound undefined: W - log2(W/H0) <= 0");
  lb.zeta_upper = w - std::log2(inner) + std::log2(std::log2(double(delta)));
  double innerk = w - std::log2(w);
  lb.kappa_upper =
      w - std::log2(innerk) + std::log2(std::log2(double(delta)));
  return lb;
}

EntropyReport make_entropy_report(const FibTable& fib, const Trie& normalized) {
  TrieStats st = trie_stats(normalized);
  EntropyReport r;
  r.prefix_count = fib.size();
  r.leaf_count = st.leaf_count;
  r.node_count = st.node_count;
  r.delta = fib.alphabet_size();
  r.h0 = st.leaf_histogram.empty() ? 0.0 : shannon_entropy(st.leaf_histogram);
  r.info_bound_bits =
      info_theoretic_bound_bits(st.leaf_count, std::max<uint64_t>(1, r.delta));
  r.entropy_bits = fib_entropy_bits(st.leaf_count, r.h0);
  return r;
}

Efficiency efficiency(double measured_bits, const EntropyReport& report) {
  if (!(measured_bits > 0))
    throw std::invalid_argument("measured size must be positive");
  Efficiency e;
  e.nu = measured_bits / report.entropy_bits;
  e.nu_info = measured_bits / double(report.info_bound_bits);
  e.eta = report.prefix_count ? measured_bits / double(report.prefix_count)
                              : 0.0;
  return e;
}

}  // namespace fibc
