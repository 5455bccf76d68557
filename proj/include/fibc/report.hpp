#ifndef FIBC_REPORT_HPP
#define FIBC_REPORT_HPP

#include <string>
#include <vector>

#include "fibc/bench.hpp"
#include "fibc/entropy.hpp"
#include "fibc/xbw.hpp"

namespace fibc {

// One row in the storage-size report: the compressibility metrics of a
// table next to the measured sizes of both compressed forms.
struct StatsReport {
  std::string name;
  uint64_t prefix_count = 0;  // N
  uint32_t delta = 0;
  double h0 = 0;
  uint64_t leaf_count = 0;
  uint64_t node_count = 0;
  uint64_t info_bound_bits = 0;   // I
  double entropy_bits = 0;        // E
  uint64_t xbwb_bits = 0;         // measured, entropy-coded labels
  double pdag_bits = 0;           // analytic accounting
  uint64_t pdag_resident_bytes = 0;
  uint32_t lambda = 0;
  double nu = 0;        // pdag_bits / E
  double nu_info = 0;   // pdag_bits / I
  double eta_xbwb = 0;  // xbwb bits per prefix
  double eta_pdag = 0;  // pdag bits per prefix
};

// lambda_mode: >= 0 fixed barrier; -1 auto (entropy solver, default 11 when
// the label distribution is degenerate).
StatsReport make_stats(const FibTable& fib, const std::string& name,
                       int lambda_mode);

std::string stats_table(const std::vector<StatsReport>& rows);
std::string stats_json(const StatsReport& row);

std::string lookup_bench_json(const std::string& structure,
                              const LookupBench& bench, double size_bits,
                              const StatsReport& stats);
std::string sweep_json(const std::vector<SweepRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

uint32_t auto_lambda(uint64_t leaf_count, double h0, uint32_t width);

}  // namespace fibc

#endif  // FIBC_REPORT_HPP
