// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Each criterion pins its tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "fibc/bench.hpp"
#include "fibc/entropy.hpp"
#include "fibc/generators.hpp"
#include "fibc/prefix_dag.hpp"
#include "fibc/report.hpp"
#include "fibc/xbw.hpp"
#include "helpers.hpp"

using namespace fibc;
using namespace fibc::testing;

namespace {

int failures = 0;
using Clock = std::chrono::steady_clock;

struct Criterion {
  int id;
  const char* name;
  Clock::time_point t0 = Clock::now();
  bool ok = true;
  std::string note;

  Criterion(int id, const char* name) : id(id), name(name) {}
  void expect(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      note = why;
    }
  }
  ~Criterion() {
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (ok) {
      std::printf("[PASS] criterion %2d: %s (%.1fs)\n", id, name, secs);
    } else {
      std::printf("[FAIL] criterion %2d: %s (%.1fs) -- %s\n", id, name, secs,
                  note.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
};

// --------------------------------------------------------------------------
// 1. Exact transform of the worked example.
void criterion1() {
  Criterion c(1, "worked-example transform is bit-exact");
  XbwTransform x = xbw_rebuild(fig1a(), LabelMode::packed);
  c.expect(x.node_count() == 9 && x.leaf_count() == 5, "t or n off");
  const int want_si[9] = {0, 0, 1, 0, 0, 1, 1, 1, 1};
  for (uint64_t i = 1; i <= 9; ++i)
    c.expect(int(x.structure().access(i)) == want_si[i - 1],
             "S_I bit " + std::to_string(i));
  const uint32_t want_alpha[5] = {2, 3, 2, 2, 1};
  for (uint64_t j = 1; j <= 5; ++j)
    c.expect(x.labels().access(j) == want_alpha[j - 1],
             "S_alpha symbol " + std::to_string(j));
}

// --------------------------------------------------------------------------
// 2. Exhaustive forwarding equivalence of every lookup engine.
void criterion2() {
  Criterion c(2, "exhaustive oracle/trie/xbwb/pdag equivalence (W=8, W=12)");
  auto sweep = [&](uint32_t width, uint64_t seeds, size_t max_entries,
                   uint64_t base_seed) {
    for (uint64_t s = 0; s < seeds; ++s) {
      FibTable fib =
          s % 2 == 0
              ? random_fib(base_seed + s, width, max_entries, 4)
              : gen_fib_split(SplitSpec{width,
                                        1 + (base_seed + s) % max_entries, 4,
                                        0.6},
                              base_seed + s);
      Trie trie = build_trie(fib);
      XbwTransform xbw = xbw_rebuild(fib, LabelMode::packed);
      std::vector<uint32_t> lambdas{0, 2, 4, width};
      std::vector<PrefixDag> dags;
      for (uint32_t l : lambdas) dags.emplace_back(fib, l);
      for (uint32_t a = 0; a < (uint32_t{1} << width); ++a) {
        Label want = fib.lookup(a);
        if (trie_lookup(trie, a) != want) {
          c.expect(false, "trie mismatch");
          return;
        }
        if (xbw.lookup(a) != want) {
          c.expect(false, "xbwb mismatch");
          return;
        }
        for (PrefixDag& d : dags)
          if (d.lookup(a) != want) {
            c.expect(false, "pdag mismatch");
            return;
          }
      }
    }
  };
  sweep(8, 100, 220, 1000);
  sweep(12, 20, 900, 5000);
}

// --------------------------------------------------------------------------
// 3+4. Update canonicality and the Theorem-3 locality bound.
void criteria3and4() {
  const uint32_t W = 16, lambda = 8;
  FibTable base = gen_fib_split(SplitSpec{W, 1500, 4, 0.6}, 20240810);
  std::vector<UpdateOp> ops =
      gen_updates(UpdateModel::random, 7500, base, 314159);
  size_t kinds[3] = {0, 0, 0};
  for (const UpdateOp& op : ops) ++kinds[size_t(op.kind)];

  PrefixDag dag(base, lambda);
  LpmIndex mirror(base);
  std::vector<uint32_t> probes = gen_addresses(W, 2000, 99);
  bool forwarding_ok = true, bound_ok = true;
  uint64_t bound = W + (uint64_t{1} << (W - lambda));
  uint64_t worst = 0;
  for (const UpdateOp& op : ops) {
    apply_update(dag, op);
    mirror.apply(op);
    worst = std::max(worst, dag.last_op_visits());
    if (dag.last_op_visits() > bound) bound_ok = false;
    for (uint32_t a : probes)
      if (dag.lookup(a) != mirror.lookup(a)) {
        forwarding_ok = false;
        break;
      }
    if (!forwarding_ok) break;
  }
  PrefixDag fresh(dag.control_fib(), lambda);

  {
    Criterion c(3, "7500 mixed updates stay oracle-equivalent and canonical");
    c.expect(kinds[0] > 500 && kinds[1] > 500 && kinds[2] > 500,
             "update mix not mixed");
    c.expect(forwarding_ok, "forwarding diverged from the oracle");
    c.expect(dag.node_count() == fresh.node_count(),
             "node count differs from a from-scratch rebuild");
    dag.check_invariants();
  }
  {
    Criterion c(4, "per-update visits within W + 2^(W-lambda)");
    c.expect(bound_ok, "bound exceeded: worst " + std::to_string(worst) +
                           " > " + std::to_string(bound));
    c.note += " (worst " + std::to_string(worst) + "/" +
              std::to_string(bound) + ")";
  }
}

// --------------------------------------------------------------------------
// 5. Compact-size bound on Bernoulli strings.
void criterion5() {
  Criterion c(5, "4 n lg(delta) size bound on p=0.5 strings (W=14, W=17)");
  for (uint32_t W : {14u, 17u}) {
    FibTable fib = gen_string_model(W, 0.5, 7000 + W);
    double n = std::exp2(double(W));
    uint32_t lambda = solve_barrier_compact(n, 2.0).lambda;
    PrefixDag dag(fib, lambda);
    DagSizeReport r = dag.size_report();
    double bound = 4.0 * n * 1.0 * 1.15;
    c.expect(r.analytic_bits <= bound,
             "W=" + std::to_string(W) + ": " + std::to_string(r.analytic_bits) +
                 " > " + std::to_string(bound));
  }
}

// --------------------------------------------------------------------------
// 6. Efficiency curve over Bernoulli strings.
void criterion6() {
  Criterion c(6, "nu curve over p: bounded mid-range, spike at low entropy");
  const uint32_t W = 17;
  std::map<double, double> nus;
  for (double p : {0.005, 0.01, 0.05, 0.1, 0.3, 0.5}) {
    FibTable fib = gen_string_model(W, p, 424200 + int(p * 1000));
    double h = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
    uint32_t lambda =
        solve_barrier_entropy(std::exp2(double(W)), h).lambda;
    PrefixDag dag(fib, lambda);
    EntropyReport er = make_entropy_report(fib, leaf_push(build_trie(fib), 0));
    nus[p] = efficiency(dag.size_report().analytic_bits, er).nu;
  }
  for (double p : {0.1, 0.3, 0.5})
    c.expect(nus[p] <= 4.0, "nu(" + std::to_string(p) + ") = " +
                                std::to_string(nus[p]) + " > 4");
  c.expect(nus[0.005] > nus[0.5], "no low-entropy spike");
}

// --------------------------------------------------------------------------
// 7. Synthetic-table entropy matches the generator's target.
void criterion7() {
  Criterion c(7, "600k split table: H0 = 1.06 +- 0.08, E self-consistent");
  for (uint32_t delta : {4u, 5u}) {
    FibTable fib = gen_fib_split(SplitSpec{32, 600000, delta, 0.6},
                                 600000 + delta);
    std::map<Label, uint64_t> hist;
    for (const FibEntry& e : fib.entries()) ++hist[e.label];
    double h0 = shannon_entropy(hist);
    c.expect(std::abs(h0 - 1.06) <= 0.08,
             "delta=" + std::to_string(delta) + ": H0 = " + std::to_string(h0));

    Trie norm = leaf_push(build_trie(fib), 0);
    EntropyReport er = make_entropy_report(fib, norm);
    // independent recomputation of E from the leaf histogram
    TrieStats st = trie_stats(norm);
    long double h = 0;
    uint64_t total = 0;
    for (auto& [lab, cnt] : st.leaf_histogram) total += cnt;
    for (auto& [lab, cnt] : st.leaf_histogram)
      if (cnt) {
        long double q = (long double)(cnt) / total;
        h -= q * std::log2((double)q);
      }
    long double e_hand = 2.0L * st.leaf_count + st.leaf_count * h;
    c.expect(std::abs((double)(e_hand - er.entropy_bits)) <=
                 0.10 * (double)e_hand,
             "E drifted from the hand recomputation");
  }
}

// --------------------------------------------------------------------------
// 8. Transform size against the entropy bound at scale.
void criterion8() {
  Criterion c(8, "600k transform: entropy-coded bits <= 1.25 (2n + n H0)");
  FibTable fib = gen_fib_split(SplitSpec{32, 600000, 4, 0.6}, 600004);
  Trie norm = leaf_push(build_trie(fib), 0);
  XbwTransform x = XbwTransform::build(norm, LabelMode::entropy);
  XbwSizeReport r = x.size_report();
  double bound = 1.25 * r.bound_entropy_bits;
  c.expect(double(r.bits_entropy) <= bound,
           std::to_string(r.bits_entropy) + " > " + std::to_string(bound));
}

// --------------------------------------------------------------------------
// 9. Barrier solver residual and integer barrier.
void criterion9() {
  Criterion c(9, "barrier solver: 1e-9 residual, exact integer barrier");
  std::mt19937_64 rng(987);
  for (int i = 0; i < 1000; ++i) {
    double n = std::exp2(1.2 + (rng() % 388) / 10.0);
    double delta = 2 + double(rng() % 4094);
    BarrierAnalysis b = solve_barrier_compact(n, delta);
    double resid =
        std::abs(b.kappa * std::exp2(b.kappa) - b.target) / b.target;
    c.expect(resid <= 1e-9, "residual " + std::to_string(resid));
    uint32_t l = 0;
    while ((double(l) + 1) * std::exp2(double(l) + 1) <= b.target) ++l;
    c.expect(b.lambda == l, "lambda disagrees with the bracketing oracle");
  }
}

// --------------------------------------------------------------------------
// 10. Coupon-collector expectation bound, Monte Carlo.
void criterion10() {
  Criterion c(10, "coupon collector: E|V| <= (m/log2 m) H_C + 3 within 3 sigma");
  std::mt19937_64 rng(555);
  const int trials = 10000;
  for (int dist = 0; dist < 50; ++dist) {
    uint32_t coupons = 2 + uint32_t(rng() % 63);
    std::vector<double> w(coupons);
    double tot = 0;
    for (auto& x : w) {
      x = 0.05 + double(rng() % 1000);
      tot += x;
    }
    std::vector<double> cum(coupons);
    double hc = 0, acc = 0;
    for (uint32_t i = 0; i < coupons; ++i) {
      double p = w[i] / tot;
      hc -= p * std::log2(p);
      acc += p;
      cum[i] = acc;
    }
    for (uint64_t m : {8ull, 64ull, 1024ull}) {
      double mean = 0, mean_sq = 0;
      for (int t = 0; t < trials; ++t) {
        uint64_t seen[1] = {0};
        uint32_t distinct = 0;
        for (uint64_t d = 0; d < m; ++d) {
          double u = double(rng() >> 11) * 0x1.0p-53;
          uint32_t at = uint32_t(std::lower_bound(cum.begin(), cum.end(), u) -
                                 cum.begin());
          if (at >= coupons) at = coupons - 1;
          if (!(seen[0] >> at & 1)) {
            seen[0] |= uint64_t{1} << at;
            ++distinct;
          }
        }
        mean += distinct;
        mean_sq += double(distinct) * distinct;
      }
      mean /= trials;
      mean_sq /= trials;
      double sigma = std::sqrt(std::max(0.0, mean_sq - mean * mean) / trials);
      double bound = double(m) / std::log2(double(m)) * hc + 3.0;
      c.expect(mean <= bound + 3 * sigma,
               "m=" + std::to_string(m) + ": mean " + std::to_string(mean) +
                   " > " + std::to_string(bound) + " + 3s");
    }
  }
}

// --------------------------------------------------------------------------
// 11. Throughput ordering between the two compressed engines.
void criterion11() {
  Criterion c(11, "pdag lookups/sec >= 10x xbwb; pdag visits <= W+1");
  FibTable fib = gen_fib_split(SplitSpec{32, 600000, 4, 0.6}, 600004);
  LpmIndex reference(fib);
  XbwTransform xbw = xbw_rebuild(fib, LabelMode::entropy);
  PrefixDag dag(fib, 11);
  DagBlob blob = DagBlob::from_dag(dag);
  auto addrs = gen_addresses(32, 65536, 4242);

  LookupBench bp = bench_lookup(
      [&](uint32_t a, uint32_t* v) { return blob.lookup_counted(a, v); },
      reference, addrs, 160);  // ~10.5M lookups
  LookupBench bx = bench_lookup(
      [&](uint32_t a, uint32_t* v) { return xbw.lookup_counted(a, v); },
      reference, addrs, 16);
  c.expect(bp.visits_max <= 33, "pdag visit max " +
                                    std::to_string(bp.visits_max));
  c.expect(bp.per_sec >= 10.0 * bx.per_sec,
           "ratio " + std::to_string(bp.per_sec / bx.per_sec));
  std::printf("       pdag %.2f M/s vs xbwb %.3f M/s (ratio %.1f)\n",
              bp.per_sec / 1e6, bx.per_sec / 1e6, bp.per_sec / bx.per_sec);
}

// --------------------------------------------------------------------------
// 12. Serialization round trips, byte-identical re-serialization.
void criterion12() {
  Criterion c(12, "blob round trips: forwarding-identical, byte-identical");
  FibTable fib32 = gen_fib_split(SplitSpec{32, 60000, 4, 0.6}, 31337);
  FibTable fib12 = random_fib(6, 12, 700, 5);
  auto addrs32 = gen_addresses(32, 10000, 5);
  auto addrs12 = gen_addresses(12, 10000, 5);

  auto xbw_case = [&](const FibTable& fib, const std::vector<uint32_t>& addrs,
                      LabelMode mode) {
    XbwTransform x = xbw_rebuild(fib, mode);
    ByteWriter w;
    x.serialize(w);
    ByteReader r(w.bytes());
    XbwTransform back = XbwTransform::deserialize(r);
    for (uint32_t a : addrs)
      if (back.lookup(a) != x.lookup(a)) {
        c.expect(false, "xbwb forwarding drifted through the blob");
        return;
      }
    ByteWriter w2;
    back.serialize(w2);
    c.expect(w2.bytes() == w.bytes(), "xbwb re-serialization not identical");
  };
  xbw_case(fib32, addrs32, LabelMode::entropy);
  xbw_case(fib12, addrs12, LabelMode::packed);

  auto pdag_case = [&](const FibTable& fib, const std::vector<uint32_t>& addrs,
                       uint32_t lambda) {
    PrefixDag dag(fib, lambda);
    DagBlob blob = DagBlob::from_dag(dag);
    ByteWriter w;
    blob.serialize(w);
    ByteReader r(w.bytes());
    DagBlob back = DagBlob::deserialize(r);
    for (uint32_t a : addrs)
      if (back.lookup(a) != dag.lookup(a)) {
        c.expect(false, "pdag forwarding drifted through the blob");
        return;
      }
    ByteWriter w2;
    back.serialize(w2);
    c.expect(w2.bytes() == w.bytes(), "pdag re-serialization not identical");
  };
  pdag_case(fib32, addrs32, 11);
  pdag_case(fib12, addrs12, 4);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion1();
  criterion2();
  criteria3and4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
