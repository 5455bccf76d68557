#ifndef FIBC_GENERATORS_HPP
#define FIBC_GENERATORS_HPP

#include <random>
#include <string>
#include <vector>

#include "fibc/fib.hpp"

namespace fibc {

// Every generator is a pure function of (spec, seed): identical inputs give
// byte-identical tables. Sampling is hand-rolled on top of mt19937_64 so the
// streams do not depend on the standard library's distribution internals.

struct SplitSpec {
  uint32_t width = 32;
  uint64_t n_prefixes = 0;
  uint32_t delta = 1;
  double poisson_param = 0.6;
};

// Iterative random prefix splitting: grow a partition of the address space
// by splitting a uniformly chosen leaf prefix until n_prefixes leaves exist,
// then draw next-hops i.i.d. from a zero-truncated Poisson capped at delta.
FibTable gen_fib_split(const SplitSpec& spec, uint64_t seed);

// Same prefixes as the base table, labels redrawn Bernoulli: label 1 with
// probability p, label 2 otherwise. Requires 0 < p <= 1/2.
FibTable gen_fib_bernoulli(const FibTable& base, double p, uint64_t seed);

// Complete-trie string model: every width-bit prefix present, Bernoulli
// labels as above. Desk scale only (width <= 24).
FibTable gen_string_model(uint32_t width, double p, uint64_t seed);

enum class UpdateKind : uint32_t { change = 0, insert = 1, erase = 2 };

struct UpdateOp {
  UpdateKind kind = UpdateKind::change;
  Prefix prefix;
  Label label = kNoLabel;  // dense label; unused for erase

  friend bool operator==(const UpdateOp&, const UpdateOp&) = default;
};

enum class UpdateModel { random, bgp_like };

// random: op kind uniform over change/insert/erase, addresses uniform,
// lengths uniform on [0, W], labels from the base table's empirical
// distribution. bgp_like: announcement stream; lengths from a discretized
// normal with mean 21.87 (sigma 4, truncated to [8, 32] clamped to W),
// prefixes reuse existing entries of that length when any exist.
// Ops are valid for sequential replay against a copy of `fib`.
std::vector<UpdateOp> gen_updates(UpdateModel model, size_t count,
                                  const FibTable& fib, uint64_t seed);

std::string serialize_updates(const std::vector<UpdateOp>& ops,
                              uint32_t width);
std::vector<UpdateOp> parse_updates(std::string_view text, uint32_t width);

// Uniform addresses over [0, 2^W).
std::vector<uint32_t> gen_addresses(uint32_t width, size_t count,
                                    uint64_t seed);

// Shared sampling helpers (deterministic across platforms).
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  uint64_t raw() { return eng_(); }
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  uint64_t below(uint64_t n) { return eng_() % n; }  // n > 0
  uint32_t poisson_zero_truncated(double param, uint32_t cap);
  double normal(double mean, double sigma);

 private:
  std::mt19937_64 eng_;
};

}  // namespace fibc

#endif  // FIBC_GENERATORS_HPP
