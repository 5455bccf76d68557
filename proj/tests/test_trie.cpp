#include <doctest.h>

#include "fibc/trie.hpp"
#include "helpers.hpp"

using namespace fibc;
using namespace fibc::testing;

TEST_CASE("build the running-example trie") {
  Trie t = build_trie(fig1a());
  TrieStats st = trie_stats(t);
  CHECK(st.node_count == 6);  // one labeled node per entry, no fillers
  CHECK(t.width() == 4);
  for (uint32_t a = 0; a < 16; ++a)
    CHECK(trie_lookup(t, a) == fig1a().lookup(a));
}

TEST_CASE("single default route builds a root-only trie") {
  Trie t = build_trie(FibTable::parse("-/0 2\n", 4));
  CHECK(trie_stats(t).node_count == 1);
  CHECK(trie_stats(t).leaf_count == 1);
  for (uint32_t a = 0; a < 16; ++a) CHECK(trie_lookup(t, a) == 2);
}

TEST_CASE("trie-folding example trie has 12 nodes") {
  FibTable fib = fig3a();
  Trie t = build_trie(fib);
  CHECK(trie_stats(t).node_count == 12);
  for (uint32_t a = 0; a < 16; ++a) CHECK(trie_lookup(t, a) == fib.lookup(a));
}

TEST_CASE("leaf-push of the running example") {
  Trie t = leaf_push(build_trie(fig1a()), 0);
  CHECK(t.normalized());
  CHECK(is_proper_leaf_labeled(t));
  TrieStats st = trie_stats(t);
  CHECK(st.node_count == 9);
  CHECK(st.leaf_count == 5);
  CHECK(st.node_count < 2 * st.leaf_count);  // P3
  CHECK(st.leaf_histogram == std::map<Label, uint64_t>{{1, 1}, {2, 3}, {3, 1}});

  // Leaf labels in breadth-first order: 2 3 2 2 1.
  std::vector<Label> bfs;
  std::vector<int32_t> queue{t.root()};
  for (size_t i = 0; i < queue.size(); ++i) {
    int32_t v = queue[i];
    if (t.is_leaf(v)) {
      bfs.push_back(t.node(v).label);
    } else {
      queue.push_back(t.node(v).left);
      queue.push_back(t.node(v).right);
    }
  }
  CHECK(bfs == std::vector<Label>{2, 3, 2, 2, 1});
}

TEST_CASE("leaf-push of the folding example") {
  Trie t = leaf_push(build_trie(fig3a()), 0);
  TrieStats st = trie_stats(t);
  CHECK(st.node_count == 15);
  CHECK(st.leaf_count == 8);
  CHECK(is_proper_leaf_labeled(t));
}

TEST_CASE("leaf-push is idempotent and preserves forwarding") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    FibTable fib = random_fib(seed, 8, 200, 4);
    Trie raw = build_trie(fib);
    for (uint32_t lambda : {0u, 2u, 5u, 8u}) {
      Trie pushed = leaf_push(raw, lambda);
      Trie again = leaf_push(pushed, lambda);
      CHECK(tries_equal(pushed, again));
      for (uint32_t a = 0; a < 256; ++a) {
        REQUIRE(trie_lookup(pushed, a) == fib.lookup(a));
      }
      if (lambda == 0) CHECK(is_proper_leaf_labeled(pushed));
    }
  }
}

TEST_CASE("normal form is independent of entry order") {
  FibTable fib = fig3a();
  std::string text = fib.serialize();
  // parse a permuted dump and compare normalized structures
  FibTable reversed = FibTable::parse(
      "# width=4\n111/3 3\n1100/4 1\n100/3 1\n001/3 2\n01/2 3\n1/1 2\n-/0 1\n",
      4);
  Trie a = leaf_push(build_trie(fib), 0);
  Trie b = leaf_push(build_trie(reversed), 0);
  CHECK(tries_equal(a, b));
}

TEST_CASE("lookup visit counts stay within W + 1") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    FibTable fib = random_fib(seed, 12, 200, 4);
    Trie t = leaf_push(build_trie(fib), 0);
    for (uint32_t a = 0; a < 4096; a += 7) {
      uint32_t visits = 0;
      trie_lookup_counted(t, a, &visits);
      REQUIRE(visits <= fib.width() + 1);
    }
  }
}

TEST_CASE("stats recount leaves independently") {
  for (uint64_t seed = 30; seed < 36; ++seed) {
    Trie t = leaf_push(build_trie(random_fib(seed, 10, 300, 5)), 0);
    TrieStats st = trie_stats(t);
    // second traversal oracle: count leaves by explicit stack walk
    uint64_t leaves = 0;
    std::vector<int32_t> stack{t.root()};
    while (!stack.empty()) {
      int32_t v = stack.back();
      stack.pop_back();
      if (t.is_leaf(v)) {
        ++leaves;
      } else {
        stack.push_back(t.node(v).left);
        stack.push_back(t.node(v).right);
      }
    }
    CHECK(st.leaf_count == leaves);
    CHECK(st.node_count == 2 * leaves - 1);
  }
}

TEST_CASE("dot dump mentions every node") {
  Trie t = leaf_push(build_trie(fig1a()), 0);
  std::string dot = trie_to_dot(t);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("n8") != std::string::npos);
}
