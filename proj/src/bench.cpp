#include "fibc/bench.hpp"

#include <stdexcept>

namespace fibc {

namespace {
using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}
}  // namespace

LookupBench bench_lookup(const LookupFn& lookup, const LpmIndex& reference,
                         const std::vector<uint32_t>& addresses,
                         uint32_t reps, size_t sample_count) {
  if (addresses.empty()) throw std::invalid_argument("no addresses");
  // Guard: never time a structure that disagrees with the reference.
  size_t step = std::max<size_t>(1, addresses.size() / std::max<size_t>(
                                         1, sample_count));
  for (size_t i = 0; i < addresses.size(); i += step) {
    uint32_t visits = 0;
    Label got = lookup(addresses[i], &visits);
    Label want = reference.lookup(addresses[i]);
    if (got != want)
      throw std::logic_error("pre-bench equivalence check failed");
  }

  LookupBench out;
  uint64_t visit_sum = 0;
  auto t0 = Clock::now();
  for (uint32_t r = 0; r < reps; ++r) {
    for (uint32_t a : addresses) {
      uint32_t visits = 0;
      out.checksum += lookup(a, &visits);
      visit_sum += visits;
      if (visits > out.visits_max) out.visits_max = visits;
    }
  }
  out.seconds = elapsed(t0);
  out.lookups = uint64_t(reps) * addresses.size();
  out.per_sec = out.seconds > 0 ? double(out.lookups) / out.seconds : 0;
  out.visits_mean = double(visit_sum) / double(out.lookups);
  return out;
}

void apply_update(PrefixDag& dag, const UpdateOp& op) {
  switch (op.kind) {
    case UpdateKind::change: dag.change(op.prefix, op.label); break;
    case UpdateKind::insert: dag.insert(op.prefix, op.label); break;
    case UpdateKind::erase: dag.erase(op.prefix); break;
  }
}

UpdateBench replay_updates(PrefixDag& dag, const std::vector<UpdateOp>& ops) {
  UpdateBench out;
  uint64_t visit_sum = 0;
  auto t0 = Clock::now();
  for (const UpdateOp& op : ops) {
    apply_update(dag, op);
    uint64_t v = dag.last_op_visits();
    visit_sum += v;
    if (v > out.visits_max) out.visits_max = v;
  }
  out.seconds = elapsed(t0);
  out.updates = ops.size();
  out.per_sec = out.seconds > 0 ? double(out.updates) / out.seconds : 0;
  out.visits_mean = ops.empty() ? 0 : double(visit_sum) / double(ops.size());
  return out;
}

std::vector<SweepRow> sweep_lambda(const FibTable& fib,
                                   const std::vector<uint32_t>& lambdas,
                                   const std::vector<UpdateOp>& ops) {
  std::vector<SweepRow> rows;
  for (uint32_t lambda : lambdas) {
    SweepRow row;
    row.lambda = lambda;
    auto t0 = Clock::now();
    PrefixDag dag(fib, lambda);
    row.build_seconds = elapsed(t0);
    DagSizeReport size = dag.size_report();
    row.node_count = dag.node_count();
    row.analytic_bits = size.analytic_bits;
    row.resident_bytes = size.resident_bytes;
    row.updates = replay_updates(dag, ops);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fibc
