#include "fibc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace fibc {

uint32_t Rng::poisson_zero_truncated(double param, uint32_t cap) {
  if (!(param > 0)) throw std::invalid_argument("poisson parameter <= 0");
  for (;;) {
    // Inversion on the plain Poisson pmf, then reject outside [1, cap].
    double u = uniform();
    double pmf = std::exp(-param);
    double cum = pmf;
    uint32_t k = 0;
    while (u > cum && k < 4096) {
      ++k;
      pmf *= param / double(k);
      cum += pmf;
    }
    if (k >= 1 && k <= cap) return k;
  }
}

double Rng::normal(double mean, double sigma) {
  // Box-Muller on our own uniforms keeps streams platform-stable.
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 0) u1 = uniform();
  return mean +
         sigma * std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * 3.141592653589793238 * u2);
}

FibTable gen_fib_split(const SplitSpec& spec, uint64_t seed) {
  if (spec.n_prefixes < 1) throw std::invalid_argument("need n_prefixes >= 1");
  if (spec.width < 1 || spec.width > 32)
    throw std::invalid_argument("width must be in [1, 32]");
  if (spec.n_prefixes > (uint64_t{1} << spec.width))
    throw std::invalid_argument("more prefixes than the address space holds");
  if (spec.delta < 1) throw std::invalid_argument("need delta >= 1");

  Rng rng(seed);
  std::vector<Prefix> final_leaves;            // length == width
  std::vector<Prefix> splittable{{0, 0}};      // length < width
  uint64_t leaves = 1;
  while (leaves < spec.n_prefixes) {
    size_t at = size_t(rng.below(splittable.size()));
    Prefix p = splittable[at];
    splittable[at] = splittable.back();
    splittable.pop_back();
    Prefix left{p.bits, p.len + 1};
    Prefix right{p.bits | (uint32_t{1} << (spec.width - p.len - 1)),
                 p.len + 1};
    for (Prefix c : {left, right})
      (c.len == spec.width ? final_leaves : splittable).push_back(c);
    ++leaves;
  }

  std::vector<FibEntry> entries;
  entries.reserve(leaves);
  for (const auto& bucket : {splittable, final_leaves})
    for (Prefix p : bucket) entries.push_back({p, kNoLabel});
  // Deterministic label assignment order regardless of split bookkeeping.
  std::sort(entries.begin(), entries.end(),
            [](const FibEntry& a, const FibEntry& b) {
              return prefix_less(a.prefix, b.prefix);
            });
  for (FibEntry& e : entries)
    e.label = rng.poisson_zero_truncated(spec.poisson_param, spec.delta);
  return FibTable::from_dense_entries(spec.width, std::move(entries),
                                      spec.delta);
}

FibTable gen_fib_bernoulli(const FibTable& base, double p, uint64_t seed) {
  if (!(p > 0) || p > 0.5)
    throw std::invalid_argument("need 0 < p <= 1/2");
  Rng rng(seed);
  std::vector<FibEntry> entries;
  entries.reserve(base.size());
  for (const FibEntry& e : base.entries())
    entries.push_back({e.prefix, rng.uniform() < p ? Label(1) : Label(2)});
  return FibTable::from_dense_entries(base.width(), std::move(entries), 2);
}

FibTable gen_string_model(uint32_t width, double p, uint64_t seed) {
  if (width < 1 || width > 24)
    throw std::invalid_argument("string model is desk scale: width in [1, 24]");
  if (!(p > 0) || p > 0.5)
    throw std::invalid_argument("need 0 < p <= 1/2");
  Rng rng(seed);
  std::vector<FibEntry> entries;
  uint64_t n = uint64_t{1} << width;
  entries.reserve(n);
  for (uint64_t a = 0; a < n; ++a)
    entries.push_back({Prefix{uint32_t(a), width},
                       rng.uniform() < p ? Label(1) : Label(2)});
  return FibTable::from_dense_entries(width, std::move(entries), 2);
}

namespace {

// Evolving table state shared by the update generators: supports uniform
// picks overall and per length, presence tests, and swap-removal.
class TableState {
 public:
  explicit TableState(const FibTable& fib) {
    for (const FibEntry& e : fib.entries()) add(e.prefix, e.label);
  }

  static uint64_t key(const Prefix& p) {
    return uint64_t(p.len) << 32 | p.bits;
  }

  bool present(const Prefix& p) const { return pos_.count(key(p)) != 0; }
  size_t size() const { return items_.size(); }
  size_t size_at(uint32_t len) const { return by_len_[len].size(); }

  const std::pair<Prefix, Label>& pick(Rng& rng) const {
    return items_[size_t(rng.below(items_.size()))];
  }
  Prefix pick_at(uint32_t len, Rng& rng) const {
    return by_len_[len][size_t(rng.below(by_len_[len].size()))];
  }

  void add(const Prefix& p, Label s) {
    pos_[key(p)] = items_.size();
    items_.push_back({p, s});
    len_pos_[key(p)] = by_len_[p.len].size();
    by_len_[p.len].push_back(p);
  }

  void set_label(const Prefix& p, Label s) { items_[pos_.at(key(p))].second = s; }

  void remove(const Prefix& p) {
    uint64_t k = key(p);
    size_t at = pos_.at(k);
    pos_[key(items_.back().first)] = at;
    items_[at] = items_.back();
    items_.pop_back();
    pos_.erase(k);
    auto& bucket = by_len_[p.len];
    size_t lat = len_pos_.at(k);
    len_pos_[key(bucket.back())] = lat;
    bucket[lat] = bucket.back();
    bucket.pop_back();
    len_pos_.erase(k);
  }

 private:
  std::vector<std::pair<Prefix, Label>> items_;
  std::unordered_map<uint64_t, size_t> pos_;
  std::vector<Prefix> by_len_[33];
  std::unordered_map<uint64_t, size_t> len_pos_;
};

// Label sampler over the base table's empirical next-hop distribution.
class LabelSampler {
 public:
  explicit LabelSampler(const FibTable& fib) {
    std::map<Label, uint64_t> hist;
    for (const FibEntry& e : fib.entries()) ++hist[e.label];
    for (auto& [lab, c] : hist) {
      labels_.push_back(lab);
      cum_.push_back((cum_.empty() ? 0 : cum_.back()) + c);
    }
    if (labels_.empty()) {
      labels_.push_back(1);
      cum_.push_back(1);
    }
  }
  Label draw(Rng& rng) const {
    uint64_t r = rng.below(cum_.back());
    size_t at = size_t(std::upper_bound(cum_.begin(), cum_.end(), r) -
                       cum_.begin());
    return labels_[at];
  }

 private:
  std::vector<Label> labels_;
  std::vector<uint64_t> cum_;
};

Prefix random_prefix(Rng& rng, uint32_t width, uint32_t len) {
  uint32_t addr = uint32_t(rng.raw() >> 32);
  if (width < 32) addr &= (uint32_t{1} << width) - 1;
  Prefix p{addr, len};
  if (len == 0)
    p.bits = 0;
  else if (len < width)
    p.bits &= ~((uint32_t{1} << (width - len)) - 1);
  return p;
}

}  // namespace

std::vector<UpdateOp> gen_updates(UpdateModel model, size_t count,
                                  const FibTable& fib, uint64_t seed) {
  if (count < 1) throw std::invalid_argument("need count >= 1");
  Rng rng(seed);
  TableState state(fib);
  LabelSampler labels(fib);
  uint32_t W = fib.width();
  std::vector<UpdateOp> ops;
  ops.reserve(count);

  while (ops.size() < count) {
    if (model == UpdateModel::random) {
      // Every operation targets a fresh uniform (address, length) draw, so
      // the emitted prefix lengths are uniform on [0, W]. Hits mutate or
      // withdraw the existing entry; misses announce a new one.
      Prefix p = random_prefix(rng, W, uint32_t(rng.below(W + 1)));
      if (state.present(p)) {
        if (rng.below(3) == 0 && state.size() > 1) {
          ops.push_back({UpdateKind::erase, p, kNoLabel});
          state.remove(p);
        } else {
          Label s = labels.draw(rng);
          ops.push_back({UpdateKind::change, p, s});
          state.set_label(p, s);
        }
      } else {
        Label s = labels.draw(rng);
        ops.push_back({UpdateKind::insert, p, s});
        state.add(p, s);
      }
    } else {
      // Announcement stream biased towards long prefixes.
      uint32_t lo = std::min<uint32_t>(8, W), hi = std::min<uint32_t>(32, W);
      uint32_t len;
      for (;;) {
        double x = rng.normal(21.87, 4.0);
        double r = std::floor(x + 0.5);
        if (r >= lo && r <= hi) {
          len = uint32_t(r);
          break;
        }
      }
      if (state.size_at(len) > 0) {
        Prefix p = state.pick_at(len, rng);
        Label s = labels.draw(rng);
        ops.push_back({UpdateKind::change, p, s});
        state.set_label(p, s);
      } else {
        Prefix p = random_prefix(rng, W, len);
        if (state.present(p)) continue;
        Label s = labels.draw(rng);
        ops.push_back({UpdateKind::insert, p, s});
        state.add(p, s);
      }
    }
  }
  return ops;
}

std::string serialize_updates(const std::vector<UpdateOp>& ops,
                              uint32_t width) {
  std::string out = "# updates width=" + std::to_string(width) + " count=" +
                    std::to_string(ops.size()) + "\n";
  for (const UpdateOp& op : ops) {
    switch (op.kind) {
      case UpdateKind::change: out += "change "; break;
      case UpdateKind::insert: out += "insert "; break;
      case UpdateKind::erase: out += "delete "; break;
    }
    out += format_prefix(op.prefix, width);
    if (op.kind != UpdateKind::erase)
      out += " " + std::to_string(op.label);
    out += "\n";
  }
  return out;
}

std::vector<UpdateOp> parse_updates(std::string_view text, uint32_t width) {
  std::vector<UpdateOp> ops;
  size_t at = 0, lineno = 0;
  while (at <= text.size()) {
    size_t nl = text.find('\n', at);
    std::string_view line = text.substr(
        at, nl == std::string_view::npos ? text.size() - at : nl - at);
    at = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++lineno;
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    std::string_view body = line.substr(b, e - b + 1);
    if (body[0] == '#') continue;
    size_t sp1 = body.find(' ');
    if (sp1 == std::string_view::npos)
      throw ParseError("updates line " + std::to_string(lineno));
    std::string_view verb = body.substr(0, sp1);
    std::string_view rest = body.substr(sp1 + 1);
    UpdateOp op;
    if (verb == "change")
      op.kind = UpdateKind::change;
    else if (verb == "insert")
      op.kind = UpdateKind::insert;
    else if (verb == "delete")
      op.kind = UpdateKind::erase;
    else
      throw ParseError("updates line " + std::to_string(lineno) +
                       ": unknown op");
    if (op.kind == UpdateKind::erase) {
      op.prefix = parse_prefix(rest, width);
    } else {
      size_t sp2 = rest.find(' ');
      if (sp2 == std::string_view::npos)
        throw ParseError("updates line " + std::to_string(lineno) +
                         ": missing label");
      op.prefix = parse_prefix(rest.substr(0, sp2), width);
      uint64_t lab = std::strtoull(std::string(rest.substr(sp2 + 1)).c_str(),
                                   nullptr, 10);
      if (lab == 0 || lab > 0xFFFFFFFFull)
        throw ParseError("updates line " + std::to_string(lineno) +
                         ": bad label");
      op.label = Label(lab);
    }
    ops.push_back(op);
  }
  return ops;
}

std::vector<uint32_t> gen_addresses(uint32_t width, size_t count,
                                    uint64_t seed) {
  Rng rng(seed);
  std::vector<uint32_t> out(count);
  uint32_t mask = width >= 32 ? 0xFFFFFFFFu : (uint32_t{1} << width) - 1;
  for (auto& a : out) a = uint32_t(rng.raw() >> 32) & mask;
  return out;
}

}  // namespace fibc
