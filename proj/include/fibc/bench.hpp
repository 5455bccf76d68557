#ifndef FIBC_BENCH_HPP
#define FIBC_BENCH_HPP

#include <chrono>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fibc/generators.hpp"
#include "fibc/prefix_dag.hpp"

namespace fibc {

// Independent longest-prefix-match reference: one hash probe per length,
// most specific first. Mutable, so update replays can be cross-checked
// against it step by step.
class LpmIndex {
 public:
  explicit LpmIndex(const FibTable& fib) : width_(fib.width()) {
    for (const FibEntry& e : fib.entries()) insert(e.prefix, e.label);
  }

  Label lookup(uint32_t addr) const {
    for (int len = int(width_); len >= 0; --len) {
      uint32_t bits = mask_to(addr, uint32_t(len));
      auto it = map_.find(key(bits, uint32_t(len)));
      if (it != map_.end()) return it->second;
    }
    return kBot;
  }

  void insert(const Prefix& p, Label s) { map_[key(p.bits, p.len)] = s; }
  void erase(const Prefix& p) { map_.erase(key(p.bits, p.len)); }
  bool present(const Prefix& p) const { return map_.count(key(p.bits, p.len)); }
  size_t size() const { return map_.size(); }

  void apply(const UpdateOp& op) {
    switch (op.kind) {
      case UpdateKind::change:
      case UpdateKind::insert: insert(op.prefix, op.label); break;
      case UpdateKind::erase: erase(op.prefix); break;
    }
  }

 private:
  static uint64_t key(uint32_t bits, uint32_t len) {
    return uint64_t(len) << 32 | bits;
  }
  uint32_t mask_to(uint32_t addr, uint32_t len) const {
    if (len == 0) return 0;
    if (len >= width_) return addr;
    return addr & ~((uint32_t{1} << (width_ - len)) - 1);
  }
  uint32_t width_;
  std::unordered_map<uint64_t, Label> map_;
};

using LookupFn = std::function<Label(uint32_t addr, uint32_t* visits)>;

struct LookupBench {
  uint64_t lookups = 0;
  double seconds = 0;
  double per_sec = 0;
  double visits_mean = 0;
  uint32_t visits_max = 0;
  uint64_t checksum = 0;  // keeps the loop honest under optimization
};

// Times `lookup` over the address list repeated `reps` times. Re-validates
// forwarding against the reference on sample_count addresses first; a
// mismatch throws rather than timing a broken structure.
LookupBench bench_lookup(const LookupFn& lookup, const LpmIndex& reference,
                         const std::vector<uint32_t>& addresses,
                         uint32_t reps, size_t sample_count = 1000);

struct UpdateBench {
  uint64_t updates = 0;
  double seconds = 0;
  double per_sec = 0;
  double visits_mean = 0;
  uint64_t visits_max = 0;
};

UpdateBench replay_updates(PrefixDag& dag, const std::vector<UpdateOp>& ops);

void apply_update(PrefixDag& dag, const UpdateOp& op);

struct SweepRow {
  uint32_t lambda = 0;
  uint64_t node_count = 0;
  double analytic_bits = 0;
  uint64_t resident_bytes = 0;
  double build_seconds = 0;
  UpdateBench updates;
};

// One row per barrier value: build from scratch, then replay the update
// sequence on a fresh structure.
std::vector<SweepRow> sweep_lambda(const FibTable& fib,
                                   const std::vector<uint32_t>& lambdas,
                                   const std::vector<UpdateOp>& ops);

}  // namespace fibc

#endif  // FIBC_BENCH_HPP
