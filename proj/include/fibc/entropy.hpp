#ifndef FIBC_ENTROPY_HPP
#define FIBC_ENTROPY_HPP

#include <cstdint>
#include <map>

#include "fibc/fib.hpp"
#include "fibc/trie.hpp"

namespace fibc {

// Shannon entropy in bits/symbol of a count histogram. Zero counts
// contribute nothing; an all-zero histogram is an error.
double shannon_entropy(const std::map<Label, uint64_t>& histogram);

// 2n + n*ceil(log2 delta): minimum bits to identify a proper binary
// leaf-labeled trie with n leaves over a delta-symbol alphabet.
uint64_t info_theoretic_bound_bits(uint64_t n, uint64_t delta);

// 2n + n*H0, real-valued.
double fib_entropy_bits(uint64_t n, double h0);

// Solutions of the per-level node-count bound intersections. kappa solves
// x*2^x = target; lambda = floor(kappa) is the leaf-push barrier. xi and
// zeta are the other two intersections when they are derivable from the
// inputs (NaN otherwise).
struct BarrierAnalysis {
  double target = 0;  // right-hand side of x*2^x = target
  double kappa = 0;
  uint32_t lambda = 0;
  double xi = 0;
  double zeta = 0;
};

// Barrier from the compact-bound form: kappa*2^kappa = n*log2(delta).
BarrierAnalysis solve_barrier_compact(double n, double delta);

// Barrier from the entropy form: kappa*2^kappa = n*H0. Degenerates to the
// compact form at maximum entropy H0 = log2(delta). H0 <= 0 is an error.
BarrierAnalysis solve_barrier_entropy(double n, double h0);

// All three level intersections for a width-W complete-trie model:
//   xi:    2^x            = (H0/x)*2^W + 3
//   zeta:  (H0/x)*2^W + 3 = delta^(2^(W-x))
//   kappa: 2^x            = delta^(2^(W-x))
BarrierAnalysis analyze_levels(uint32_t width, double h0, uint32_t delta);

// Closed-form bounds on the intersections.
struct LevelBounds {
  double xi_lower = 0;
  double zeta_upper = 0;
  double kappa_upper = 0;
};
LevelBounds level_bounds(uint32_t width, double h0, uint32_t delta);

struct EntropyReport {
  uint64_t prefix_count = 0;   // N
  uint64_t leaf_count = 0;     // n of the normalized trie
  uint64_t node_count = 0;     // t
  uint32_t delta = 0;
  double h0 = 0;               // leaf-label Shannon entropy
  uint64_t info_bound_bits = 0;  // I
  double entropy_bits = 0;       // E
};

EntropyReport make_entropy_report(const FibTable& fib, const Trie& normalized);

struct Efficiency {
  double nu = 0;       // measured / E
  double nu_info = 0;  // measured / I
  double eta = 0;      // measured bits per prefix
};
Efficiency efficiency(double measured_bits, const EntropyReport& report);

}  // namespace fibc

#endif  // FIBC_ENTROPY_HPP
