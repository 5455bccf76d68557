#include <doctest.h>

#include <map>
#include <random>

#include "fibc/bitvector.hpp"
#include "fibc/labelseq.hpp"
#include "fibc/rrr.hpp"

using namespace fibc;

namespace {

std::vector<bool> random_bits(uint64_t seed, size_t n, double p) {
  std::mt19937_64 rng(seed);
  std::vector<bool> bits(n);
  for (size_t i = 0; i < n; ++i)
    bits[i] = (double(rng() >> 11) * 0x1.0p-53) < p;
  return bits;
}

// Naive rank/select reference.
struct NaiveBits {
  std::vector<bool> bits;
  uint64_t rank1(uint64_t q) const {
    uint64_t r = 0;
    for (uint64_t i = 0; i < q; ++i) r += bits[i];
    return r;
  }
  uint64_t select(bool value, uint64_t k) const {
    for (uint64_t i = 0; i < bits.size(); ++i)
      if (bits[i] == value && --k == 0) return i + 1;
    return 0;
  }
};

}  // namespace

TEST_CASE("structure string of the worked example") {
  // S_I = 001001111
  std::vector<bool> s{false, false, true, false, false, true, true, true, true};
  BitVector bv = BitVector::from_bits(s);
  CHECK(bv.rank0(5) == 4);
  CHECK(bv.rank1(7) == 3);
  CHECK(bv.rank1(9) == 5);
  CHECK(bv.rank1(0) == 0);  // rank over the empty prefix
  // full hand table, both symbols at every position
  uint64_t expect1[10] = {0, 0, 0, 1, 1, 1, 2, 3, 4, 5};
  for (uint64_t q = 0; q <= 9; ++q) {
    CHECK(bv.rank1(q) == expect1[q]);
    CHECK(bv.rank0(q) == q - expect1[q]);
  }
  CHECK(bv.select1(1) == 3);
  CHECK(bv.select0(4) == 5);
  CHECK(bv.access(3) == 1);
  CHECK_THROWS_AS(bv.access(0), std::out_of_range);
  CHECK_THROWS_AS(bv.access(10), std::out_of_range);
  CHECK_THROWS_AS(bv.rank1(10), std::out_of_range);
  CHECK_THROWS_AS(bv.select1(6), std::out_of_range);
}

TEST_CASE("all-zero vector") {
  std::vector<bool> z(1000, false);
  BitVector bv = BitVector::from_bits(z);
  CHECK(bv.rank1(1000) == 0);
  for (uint64_t j : {1ull, 17ull, 999ull, 1000ull}) CHECK(bv.select0(j) == j);
  RrrVector rv = RrrVector::from_bits(z);
  CHECK(rv.rank1(1000) == 0);
  for (uint64_t j : {1ull, 17ull, 999ull, 1000ull}) CHECK(rv.select0(j) == j);
}

TEST_CASE("bitvector and rrr agree with the naive oracle") {
  for (double p : {0.02, 0.5, 0.93}) {
    NaiveBits naive{random_bits(uint64_t(p * 100) + 3, 100000, p)};
    BitVector bv = BitVector::from_bits(naive.bits);
    RrrVector rv = RrrVector::from_bits(naive.bits);
    uint64_t ones = naive.rank1(naive.bits.size());
    CHECK(bv.ones() == ones);
    CHECK(rv.ones() == ones);
    std::mt19937_64 rng(77);
    for (int i = 0; i < 10000; ++i) {
      uint64_t q = 1 + rng() % naive.bits.size();
      REQUIRE(bv.access(q) == (naive.bits[q - 1] ? 1 : 0));
      REQUIRE(rv.access(q) == (naive.bits[q - 1] ? 1 : 0));
      REQUIRE(bv.rank1(q) == naive.rank1(q));
      REQUIRE(rv.rank1(q) == naive.rank1(q));
      if (ones) {
        uint64_t k1 = 1 + rng() % ones;
        REQUIRE(bv.select1(k1) == naive.select(true, k1));
        REQUIRE(rv.select1(k1) == naive.select(true, k1));
      }
      uint64_t zeros = naive.bits.size() - ones;
      if (zeros) {
        uint64_t k0 = 1 + rng() % zeros;
        REQUIRE(bv.select0(k0) == naive.select(false, k0));
        REQUIRE(rv.select0(k0) == naive.select(false, k0));
      }
    }
  }
}

TEST_CASE("select inverts rank") {
  NaiveBits naive{random_bits(5, 4096, 0.3)};
  BitVector bv = BitVector::from_bits(naive.bits);
  for (uint64_t q = 1; q <= bv.size(); ++q)
    if (bv.access(q) == 1) REQUIRE(bv.select1(bv.rank1(q)) == q);
}

TEST_CASE("worked-example label string in both modes") {
  std::vector<uint32_t> syms{2, 3, 2, 2, 1};
  for (LabelMode mode : {LabelMode::packed, LabelMode::entropy}) {
    LabelSequence s = LabelSequence::build(syms, 1, 3, mode);
    for (uint64_t q = 1; q <= 5; ++q) REQUIRE(s.access(q) == syms[q - 1]);
    CHECK(s.rank(2, 5) == 3);
    CHECK(s.rank(2, 3) == 2);
    CHECK(s.rank(9, 5) == 0);
    CHECK(s.select(2, 3) == 4);
    CHECK(s.select(1, 1) == 5);
    CHECK_THROWS_AS(s.select(1, 2), std::out_of_range);
    CHECK_THROWS_AS(s.access(6), std::out_of_range);
  }
  // tiny instances may pay fixed overhead, but not more than a few words
  LabelSequence packed = LabelSequence::build(syms, 1, 3, LabelMode::packed);
  LabelSequence coded = LabelSequence::build(syms, 1, 3, LabelMode::entropy);
  CHECK(coded.size_bits().total <= packed.size_bits().total + 1024);
}

TEST_CASE("label sequences agree with a naive reference") {
  std::mt19937_64 rng(11);
  for (uint32_t delta : {2u, 3u, 17u}) {
    std::vector<uint32_t> syms(20000);
    for (auto& s : syms) {
      // skewed draw
      uint32_t a = uint32_t(rng() % delta), b = uint32_t(rng() % delta);
      s = 1 + std::min(a, b);
    }
    for (LabelMode mode : {LabelMode::packed, LabelMode::entropy}) {
      LabelSequence ls = LabelSequence::build(syms, 1, delta, mode);
      std::map<uint32_t, uint64_t> counts;
      for (int i = 0; i < 4000; ++i) {
        uint64_t q = 1 + rng() % syms.size();
        REQUIRE(ls.access(q) == syms[q - 1]);
        uint32_t sym = 1 + uint32_t(rng() % delta);
        uint64_t want = 0;
        for (uint64_t j = 0; j < q; ++j) want += syms[j] == sym;
        REQUIRE(ls.rank(sym, q) == want);
      }
      for (auto s : syms) ++counts[s];
      for (auto& [sym, count] : counts) {
        uint64_t k = 1 + rng() % count;
        uint64_t pos = ls.select(sym, k);
        REQUIRE(ls.access(pos) == sym);
        REQUIRE(ls.rank(sym, pos) == k);
      }
    }
  }
}

TEST_CASE("degenerate single-symbol sequence") {
  std::vector<uint32_t> syms(100, 4);
  LabelSequence ls = LabelSequence::build(syms, 1, 9, LabelMode::entropy);
  CHECK(ls.access(50) == 4);
  CHECK(ls.rank(4, 100) == 100);
  CHECK(ls.rank(5, 100) == 0);
  CHECK(ls.select(4, 17) == 17);
}

TEST_CASE("deterministic serialization and round trips") {
  auto bits = random_bits(42, 30000, 0.4);
  BitVector bv = BitVector::from_bits(bits);
  ByteWriter w1, w2;
  bv.serialize(w1);
  BitVector::from_bits(bits).serialize(w2);
  CHECK(w1.bytes() == w2.bytes());
  ByteReader r(w1.bytes());
  BitVector back = BitVector::deserialize(r);
  CHECK(back == bv);
  ByteWriter w3;
  back.serialize(w3);
  CHECK(w3.bytes() == w1.bytes());

  RrrVector rv = RrrVector::from_bits(bits);
  ByteWriter rw;
  rv.serialize(rw);
  ByteReader rr(rw.bytes());
  RrrVector rback = RrrVector::deserialize(rr);
  CHECK(rback == rv);
  for (uint64_t q = 1; q <= 30000; q += 997)
    CHECK(rback.rank1(q) == rv.rank1(q));

  std::mt19937_64 rng(4242);
  std::vector<uint32_t> syms(5000);
  for (auto& s : syms) s = 1 + uint32_t(rng() % 6);
  for (LabelMode mode : {LabelMode::packed, LabelMode::entropy}) {
    LabelSequence ls = LabelSequence::build(syms, 1, 6, mode);
    ByteWriter lw;
    ls.serialize(lw);
    ByteReader lr(lw.bytes());
    LabelSequence lback = LabelSequence::deserialize(lr);
    CHECK(lback == ls);
    ByteWriter lw2;
    lback.serialize(lw2);
    CHECK(lw2.bytes() == lw.bytes());
  }
}

TEST_CASE("entropy-coded size lands near n * H0") {
  // Empirical form of the size contract at n = 2^17: payload within
  // n*H0 + c*n/log2(n) + 64*delta*log2(n) for the pinned constant c = 8.
  const size_t n = 1 << 17;
  std::mt19937_64 rng(2024);
  auto check_source = [&](std::vector<double> probs) {
    uint32_t delta = uint32_t(probs.size());
    std::vector<uint32_t> syms(n);
    double h0 = 0;
    for (double p : probs)
      if (p > 0) h0 -= p * std::log2(p);
    for (auto& s : syms) {
      double u = double(rng() >> 11) * 0x1.0p-53;
      uint32_t k = 0;
      double cum = probs[0];
      while (u > cum && k + 1 < probs.size()) cum += probs[++k];
      s = k + 1;
    }
    LabelSequence ls = LabelSequence::build(syms, 1, delta, LabelMode::entropy);
    double measured = double(ls.size_bits().total);
    double budget = double(n) * h0 + 8.0 * double(n) / std::log2(double(n)) +
                    64.0 * delta * std::log2(double(n));
    INFO("h0 = " << h0 << " measured = " << measured << " budget = " << budget);
    CHECK(measured <= budget);
  };
  check_source({0.5, 0.5});
  check_source({0.9, 0.1});
  check_source({0.98, 0.02});
  check_source({0.25, 0.25, 0.25, 0.25});
  check_source({0.73, 0.22, 0.044, 0.006});
  check_source({0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125});
}
