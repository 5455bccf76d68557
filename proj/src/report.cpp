#include "fibc/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

#include "fibc/prefix_dag.hpp"

namespace fibc {

using nlohmann::json;

uint32_t auto_lambda(uint64_t leaf_count, double h0, uint32_t width) {
  // The entropy-form solver; degenerate distributions fall back to the
  // evaluation default of 11.
  uint32_t lambda = 11;
  if (h0 > 0 && leaf_count >= 2)
    lambda = solve_barrier_entropy(double(leaf_count), h0).lambda;
  return std::min(lambda, width);
}

StatsReport make_stats(const FibTable& fib, const std::string& name,
                       int lambda_mode) {
  StatsReport r;
  r.name = name;
  Trie normalized = leaf_push(build_trie(fib), 0);
  EntropyReport er = make_entropy_report(fib, normalized);
  r.prefix_count = er.prefix_count;
  r.delta = er.delta;
  r.h0 = er.h0;
  r.leaf_count = er.leaf_count;
  r.node_count = er.node_count;
  r.info_bound_bits = er.info_bound_bits;
  r.entropy_bits = er.entropy_bits;

  XbwTransform xbw = XbwTransform::build(normalized, LabelMode::entropy);
  r.xbwb_bits = xbw.measured_bits();

  r.lambda = lambda_mode >= 0 ? std::min(uint32_t(lambda_mode), fib.width())
                              : auto_lambda(er.leaf_count, er.h0, fib.width());
  PrefixDag dag(fib, r.lambda);
  DagSizeReport ds = dag.size_report();
  r.pdag_bits = ds.analytic_bits;
  r.pdag_resident_bytes = ds.resident_bytes;

  Efficiency eff = efficiency(r.pdag_bits, er);
  r.nu = eff.nu;
  r.nu_info = eff.nu_info;
  r.eta_pdag = eff.eta;
  r.eta_xbwb = efficiency(double(r.xbwb_bits), er).eta;
  return r;
}

namespace {
double kbytes(double bits) { return bits / 8.0 / 1024.0; }
}  // namespace

std::string stats_table(const std::vector<StatsReport>& rows) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof line, "%-12s %9s %5s %6s %9s %9s %9s %9s %6s %7s %7s\n",
                "name", "N", "delta", "H0", "I[KB]", "E[KB]", "xbwb[KB]",
                "pdag[KB]", "nu", "eta_x", "eta_p");
  out += line;
  for (const StatsReport& r : rows) {
    std::snprintf(line, sizeof line,
                  "%-12s %9llu %5u %6.3f %9.1f %9.1f %9.1f %9.1f %6.2f %7.2f %7.2f\n",
                  r.name.c_str(), (unsigned long long)r.prefix_count, r.delta,
                  r.h0, kbytes(double(r.info_bound_bits)),
                  kbytes(r.entropy_bits), kbytes(double(r.xbwb_bits)),
                  kbytes(r.pdag_bits), r.nu, r.eta_xbwb, r.eta_pdag);
    out += line;
  }
  return out;
}

namespace {
json stats_to_json(const StatsReport& r) {
  return json{{"name", r.name},
              {"prefixes", r.prefix_count},
              {"delta", r.delta},
              {"h0", r.h0},
              {"leaves", r.leaf_count},
              {"trie_nodes", r.node_count},
              {"info_bound_bits", r.info_bound_bits},
              {"entropy_bits", r.entropy_bits},
              {"xbwb_bits", r.xbwb_bits},
              {"pdag_bits", r.pdag_bits},
              {"pdag_resident_bytes", r.pdag_resident_bytes},
              {"lambda", r.lambda},
              {"nu", r.nu},
              {"nu_info", r.nu_info},
              {"eta_xbwb", r.eta_xbwb},
              {"eta_pdag", r.eta_pdag}};
}
}  // namespace

std::string stats_json(const StatsReport& row) {
  return stats_to_json(row).dump(2) + "\n";
}

std::string lookup_bench_json(const std::string& structure,
                              const LookupBench& bench, double size_bits,
                              const StatsReport& stats) {
  json j{{"structure", structure},
         {"lookups", bench.lookups},
         {"seconds", bench.seconds},
         {"lookups_per_sec", bench.per_sec},
         {"visits_mean", bench.visits_mean},
         {"visits_max", bench.visits_max},
         {"size_bits", size_bits},
         {"table", stats_to_json(stats)}};
  return j.dump(2) + "\n";
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const SweepRow& r : rows) {
    arr.push_back(json{{"lambda", r.lambda},
                       {"nodes", r.node_count},
                       {"analytic_bits", r.analytic_bits},
                       {"resident_bytes", r.resident_bytes},
                       {"build_seconds", r.build_seconds},
                       {"updates", r.updates.updates},
                       {"updates_per_sec", r.updates.per_sec},
                       {"update_visits_mean", r.updates.visits_mean},
                       {"update_visits_max", r.updates.visits_max}});
  }
  return arr.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "lambda,nodes,analytic_bits,resident_bytes,build_seconds,updates,"
      "updates_per_sec,update_visits_mean,update_visits_max\n";
  char line[256];
  for (const SweepRow& r : rows) {
    std::snprintf(line, sizeof line, "%u,%llu,%.0f,%llu,%.6f,%llu,%.1f,%.2f,%llu\n",
                  r.lambda, (unsigned long long)r.node_count, r.analytic_bits,
                  (unsigned long long)r.resident_bytes, r.build_seconds,
                  (unsigned long long)r.updates.updates, r.updates.per_sec,
                  r.updates.visits_mean,
                  (unsigned long long)r.updates.visits_max);
    out += line;
  }
  return out;
}

}  // namespace fibc
