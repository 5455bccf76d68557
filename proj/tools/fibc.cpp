// fibc: compressed IP forwarding tables from the command line.
//
//   generate   synthetic tables, strings, and update sequences
//   build      compile a FIB dump into a trie / xbwb / pdag blob
//   lookup     run longest-prefix match against a blob
//   stats      storage-size report for a dump
//   bench      lookup micro-benchmark
//   replay     apply an update sequence to a pdag blob
//   sweep      barrier sweep: size vs update cost
//
// Exit codes: 0 ok, 2 usage, 3 input parse error, 4 blob format error,
// 5 i/o error, 6 precondition violation.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fibc/bench.hpp"
#include "fibc/generators.hpp"
#include "fibc/prefix_dag.hpp"
#include "fibc/report.hpp"
#include "fibc/xbw.hpp"

namespace {

using namespace fibc;

constexpr int kExitParse = 3;
constexpr int kExitFormat = 4;
constexpr int kExitIo = 5;
constexpr int kExitPrecondition = 6;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out.write(data.data(), std::streamsize(data.size()));
  if (!out) throw std::ios_base::failure("short write to " + path);
}

void write_bytes(const std::string& path, const std::vector<uint8_t>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            std::streamsize(data.size()));
  if (!out) throw std::ios_base::failure("short write to " + path);
}

uint64_t default_seed() {
  if (const char* env = std::getenv("FIBC_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 1;
}

// Plain-trie blob, mostly for debugging: "TRIE", version, width, node
// count, then (left, right, label) per node with index+1 references.
constexpr uint32_t kTrieVersion = 1;

void serialize_trie(const Trie& t, ByteWriter& w) {
  w.u32(fourcc("TRIE"));
  w.u32(kTrieVersion);
  w.u32(t.width());
  w.u64(t.node_count());
  for (int32_t v = 0; v < int32_t(t.node_count()); ++v) {
    const Trie::Node& n = t.node(v);
    w.u32(n.left < 0 ? 0 : uint32_t(n.left) + 1);
    w.u32(n.right < 0 ? 0 : uint32_t(n.right) + 1);
    w.u32(n.label);
  }
}

Trie deserialize_trie(ByteReader& r) {
  if (r.u32() != fourcc("TRIE")) throw FormatError("bad trie magic");
  if (r.u32() != kTrieVersion) throw FormatError("unsupported trie version");
  uint32_t width = r.u32();
  uint64_t count = r.u64();
  Trie t(width);
  for (uint64_t i = 1; i < count; ++i) t.add_node();
  for (uint64_t i = 0; i < count; ++i) {
    uint32_t l = r.u32(), rr = r.u32(), lab = r.u32();
    if (l > count || rr > count) throw FormatError("trie reference range");
    t.node(int32_t(i)).left = l ? int32_t(l - 1) : -1;
    t.node(int32_t(i)).right = rr ? int32_t(rr - 1) : -1;
    t.node(int32_t(i)).label = lab;
  }
  return t;
}

struct LoadedBlob {
  std::string kind;  // "xbwb" | "pdag" | "trie"
  XbwTransform xbw;
  DagBlob pdag;
  Trie trie{32};
  uint32_t width = 32;
};

LoadedBlob load_blob(const std::string& path) {
  std::string raw = read_file(path);
  if (raw.size() < 4) throw FormatError("blob too small");
  ByteReader r(reinterpret_cast<const uint8_t*>(raw.data()), raw.size());
  uint32_t magic = uint32_t(uint8_t(raw[0])) | uint32_t(uint8_t(raw[1])) << 8 |
                   uint32_t(uint8_t(raw[2])) << 16 |
                   uint32_t(uint8_t(raw[3])) << 24;
  LoadedBlob b;
  if (magic == fourcc("XBWB")) {
    b.kind = "xbwb";
    b.xbw = XbwTransform::deserialize(r);
    b.width = b.xbw.width();
  } else if (magic == fourcc("PDAG")) {
    b.kind = "pdag";
    b.pdag = DagBlob::deserialize(r);
    b.width = b.pdag.width();
  } else if (magic == fourcc("TRIE")) {
    b.kind = "trie";
    b.trie = deserialize_trie(r);
    b.width = b.trie.width();
  } else {
    throw FormatError("unknown blob magic");
  }
  return b;
}

LookupFn blob_lookup_fn(const LoadedBlob& b) {
  if (b.kind == "xbwb")
    return [&b](uint32_t a, uint32_t* v) { return b.xbw.lookup_counted(a, v); };
  if (b.kind == "pdag")
    return [&b](uint32_t a, uint32_t* v) { return b.pdag.lookup_counted(a, v); };
  return [&b](uint32_t a, uint32_t* v) {
    return trie_lookup_counted(b.trie, a, v);
  };
}

int run(int argc, char** argv) {
  CLI::App app{"compressed IP forwarding tables"};
  app.require_subcommand(1);
  uint64_t seed = default_seed();
  app.add_option("--seed", seed, "seed for every randomized subcommand");

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "synthetic tables and updates");
  std::string gen_kind = "split", gen_out = "-", gen_base, gen_update_kind =
      "random";
  uint64_t gen_n = 1000, gen_count = 1000;
  uint32_t gen_width = 32, gen_delta = 4;
  double gen_poisson = 0.6, gen_p = 0.5;
  gen->add_option("--kind", gen_kind,
                  "split | bernoulli | string | updates")
      ->check(CLI::IsMember({"split", "bernoulli", "string", "updates"}));
  gen->add_option("--n", gen_n, "prefix count (split)");
  gen->add_option("--width", gen_width, "address width W");
  gen->add_option("--delta", gen_delta, "next-hop alphabet size");
  gen->add_option("--poisson", gen_poisson, "truncated-Poisson parameter");
  gen->add_option("--p", gen_p, "Bernoulli parameter");
  gen->add_option("--base", gen_base, "base FIB dump (bernoulli, updates)");
  gen->add_option("--count", gen_count, "update count (updates)");
  gen->add_option("--update-kind", gen_update_kind, "random | bgp-like")
      ->check(CLI::IsMember({"random", "bgp-like"}));
  gen->add_option("--out", gen_out, "output path ('-' = stdout)");

  // build ------------------------------------------------------------------
  auto* build = app.add_subcommand("build", "compile a dump into a blob");
  std::string build_format = "pdag", build_in, build_out = "out.blob",
              build_lambda = "auto", build_labels = "entropy";
  build->add_option("--format", build_format, "trie | xbwb | pdag")
      ->check(CLI::IsMember({"trie", "xbwb", "pdag"}));
  build->add_option("--lambda", build_lambda, "leaf-push barrier or 'auto'");
  build->add_option("--labels", build_labels, "packed | entropy")
      ->check(CLI::IsMember({"packed", "entropy"}));
  build->add_option("--in", build_in, "FIB dump")->required();
  build->add_option("--out", build_out, "blob path");

  // lookup -----------------------------------------------------------------
  auto* lookup = app.add_subcommand("lookup", "longest prefix match");
  std::string lk_blob, lk_addr, lk_trace;
  lookup->add_option("blob", lk_blob, "compiled blob")->required();
  lookup->add_option("--address", lk_addr, "single destination");
  lookup->add_option("--trace", lk_trace, "address trace file");

  // stats ------------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "storage-size report");
  std::string st_in, st_lambda = "auto";
  bool st_json = false;
  stats->add_option("--in", st_in, "FIB dump")->required();
  stats->add_option("--lambda", st_lambda, "barrier or 'auto'");
  stats->add_flag("--json", st_json, "JSON instead of the text table");

  // bench ------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "lookup micro-benchmark");
  std::string bb_blob, bb_fib, bb_trace;
  uint64_t bb_lookups = 10000000;
  bool bb_json = false;
  bench->add_option("blob", bb_blob, "compiled blob")->required();
  bench->add_option("--fib", bb_fib, "dump for the equivalence guard")
      ->required();
  bench->add_option("--lookups", bb_lookups, "total lookups (>= 1e7 default)");
  bench->add_option("--trace", bb_trace, "address trace (default: uniform)");
  bench->add_flag("--json", bb_json, "JSON report");

  // replay -----------------------------------------------------------------
  auto* replay = app.add_subcommand("replay", "apply updates to a pdag blob");
  std::string rp_blob, rp_fib, rp_updates, rp_out;
  uint64_t rp_check = 2000;
  replay->add_option("blob", rp_blob, "pdag blob")->required();
  replay->add_option("--fib", rp_fib, "control FIB dump")->required();
  replay->add_option("--updates", rp_updates, "update sequence")->required();
  replay->add_option("--out", rp_out, "rewritten blob path");
  replay->add_option("--check", rp_check,
                     "sampled addresses for the equivalence check");

  // sweep ------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "barrier sweep");
  std::string sw_in, sw_lambdas = "0,4,8,11,16,24,32", sw_updates,
              sw_model = "random", sw_format = "csv";
  uint64_t sw_count = 1000;
  sweep->add_option("--in", sw_in, "FIB dump")->required();
  sweep->add_option("--lambdas", sw_lambdas, "comma list, clamped to W");
  sweep->add_option("--updates", sw_updates, "update sequence file");
  sweep->add_option("--update-model", sw_model, "random | bgp-like")
      ->check(CLI::IsMember({"random", "bgp-like"}));
  sweep->add_option("--count", sw_count, "generated update count");
  sweep->add_option("--format", sw_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  auto emit = [&](const std::string& path, const std::string& data) {
    if (path == "-")
      std::cout << data;
    else
      write_file(path, data);
  };

  if (gen->parsed()) {
    if (gen_kind == "split") {
      FibTable t = gen_fib_split(
          SplitSpec{gen_width, gen_n, gen_delta, gen_poisson}, seed);
      emit(gen_out, t.serialize());
    } else if (gen_kind == "bernoulli") {
      FibTable base = FibTable::parse(read_file(gen_base));
      emit(gen_out, gen_fib_bernoulli(base, gen_p, seed).serialize());
    } else if (gen_kind == "string") {
      emit(gen_out, gen_string_model(gen_width, gen_p, seed).serialize());
    } else {
      FibTable base = FibTable::parse(read_file(gen_base));
      auto model = gen_update_kind == "random" ? UpdateModel::random
                                               : UpdateModel::bgp_like;
      emit(gen_out, serialize_updates(gen_updates(model, gen_count, base, seed),
                                      base.width()));
    }
    return 0;
  }

  if (build->parsed()) {
    FibTable fib = FibTable::parse(read_file(build_in));
    ByteWriter w;
    if (build_format == "trie") {
      serialize_trie(build_trie(fib), w);
    } else if (build_format == "xbwb") {
      LabelMode mode = build_labels == "packed" ? LabelMode::packed
                                                : LabelMode::entropy;
      xbw_rebuild(fib, mode).serialize(w);
    } else {
      uint32_t lambda;
      if (build_lambda == "auto") {
        Trie norm = leaf_push(build_trie(fib), 0);
        EntropyReport er = make_entropy_report(fib, norm);
        lambda = auto_lambda(er.leaf_count, er.h0, fib.width());
      } else {
        lambda = uint32_t(std::strtoul(build_lambda.c_str(), nullptr, 10));
      }
      PrefixDag dag(fib, lambda);
      DagBlob::from_dag(dag).serialize(w);
    }
    write_bytes(build_out, w.bytes());
    std::cout << build_format << " blob: " << w.bytes().size() << " bytes\n";
    return 0;
  }

  if (lookup->parsed()) {
    LoadedBlob b = load_blob(lk_blob);
    LookupFn fn = blob_lookup_fn(b);
    std::vector<uint32_t> addrs;
    if (!lk_addr.empty()) addrs.push_back(parse_address(lk_addr));
    if (!lk_trace.empty()) {
      auto more = parse_address_trace(read_file(lk_trace));
      addrs.insert(addrs.end(), more.begin(), more.end());
    }
    if (addrs.empty()) throw std::invalid_argument("no address given");
    for (uint32_t a : addrs) {
      uint32_t visits = 0;
      Label lab = fn(a, &visits);
      if (lab == kBot)
        std::cout << a << " no-route\n";
      else
        std::cout << a << " " << lab << "\n";
    }
    return 0;
  }

  if (stats->parsed()) {
    FibTable fib = FibTable::parse(read_file(st_in));
    int lambda_mode = st_lambda == "auto"
                          ? -1
                          : int(std::strtol(st_lambda.c_str(), nullptr, 10));
    StatsReport row = make_stats(fib, st_in, lambda_mode);
    std::cout << (st_json ? stats_json(row) : stats_table({row}));
    return 0;
  }

  if (bench->parsed()) {
    FibTable fib = FibTable::parse(read_file(bb_fib));
    LoadedBlob b = load_blob(bb_blob);
    LpmIndex reference(fib);
    std::vector<uint32_t> addrs =
        bb_trace.empty() ? gen_addresses(fib.width(), 65536, seed)
                         : parse_address_trace(read_file(bb_trace));
    uint32_t reps =
        uint32_t(std::max<uint64_t>(1, bb_lookups / addrs.size()));
    LookupBench lb = bench_lookup(blob_lookup_fn(b), reference, addrs, reps);
    StatsReport st = make_stats(fib, bb_fib, -1);
    if (bb_json) {
      double bits = b.kind == "xbwb" ? double(b.xbw.measured_bits()) : 0;
      std::cout << lookup_bench_json(b.kind, lb, bits, st);
    } else {
      std::printf("%s: %.3f M lookups/sec (%llu lookups, %.2f s), visits mean %.2f max %u\n",
                  b.kind.c_str(), lb.per_sec / 1e6,
                  (unsigned long long)lb.lookups, lb.seconds, lb.visits_mean,
                  lb.visits_max);
    }
    return 0;
  }

  if (replay->parsed()) {
    FibTable fib = FibTable::parse(read_file(rp_fib));
    LoadedBlob b = load_blob(rp_blob);
    if (b.kind != "pdag") throw FormatError("replay needs a pdag blob");
    std::vector<UpdateOp> ops = parse_updates(read_file(rp_updates),
                                              fib.width());
    PrefixDag dag(fib, b.pdag.barrier());
    // The blob must describe the same forwarding function as the dump.
    for (uint32_t a : gen_addresses(fib.width(), rp_check, seed))
      if (dag.lookup(a) != b.pdag.lookup(a))
        throw std::logic_error("blob disagrees with the control FIB dump");
    UpdateBench ub = replay_updates(dag, ops);
    std::printf("replayed %llu updates: %.0f/sec, visits mean %.2f max %llu, nodes %llu\n",
                (unsigned long long)ub.updates, ub.per_sec, ub.visits_mean,
                (unsigned long long)ub.visits_max,
                (unsigned long long)dag.node_count());
    if (!rp_out.empty()) {
      ByteWriter w;
      DagBlob::from_dag(dag).serialize(w);
      write_bytes(rp_out, w.bytes());
    }
    return 0;
  }

  if (sweep->parsed()) {
    FibTable fib = FibTable::parse(read_file(sw_in));
    std::vector<uint32_t> lambdas;
    std::stringstream ss(sw_lambdas);
    for (std::string tok; std::getline(ss, tok, ',');)
      lambdas.push_back(std::min<uint32_t>(
          uint32_t(std::strtoul(tok.c_str(), nullptr, 10)), fib.width()));
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    std::vector<UpdateOp> ops;
    if (!sw_updates.empty()) {
      ops = parse_updates(read_file(sw_updates), fib.width());
    } else {
      auto model = sw_model == "random" ? UpdateModel::random
                                        : UpdateModel::bgp_like;
      ops = gen_updates(model, sw_count, fib, seed);
    }
    std::vector<SweepRow> rows = sweep_lambda(fib, lambdas, ops);
    std::cout << (sw_format == "json" ? sweep_json(rows) : sweep_csv(rows));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
