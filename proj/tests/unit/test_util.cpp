#include <algorithm>
#include <cstdio>
#include <set>

#include "doctest.h"
#include "povshift/util.hpp"

using namespace povshift;

TEST_CASE("rng is deterministic per seed") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
    all_equal = all_equal && va == vb;
    any_diff = any_diff || va != vc;
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("rng doubles stay in the unit interval") {
  Rng rng(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double v = rng.next_double();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo < 0.05);
  CHECK(hi > 0.95);
}

TEST_CASE("next_index covers the full range") {
  Rng rng(11);
  std::set<size_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(rng.next_index(5));
  CHECK(seen == std::set<size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("shuffle permutes without losing elements") {
  Rng rng(3);
  std::vector<size_t> items(20);
  for (size_t i = 0; i < items.size(); ++i) items[i] = i;
  std::vector<size_t> original = items;
  rng.shuffle(items);
  CHECK(items != original);
  std::vector<size_t> sorted = items;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == original);
}

TEST_CASE("forked streams diverge from the parent") {
  Rng parent(99);
  Rng child = parent.fork(1);
  Rng child2 = parent.fork(2);
  CHECK(child.next_u64() != child2.next_u64());
}

TEST_CASE("normal draws have roughly standard moments") {
  Rng rng(5);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("string helpers") {
  CHECK(trim("  a b  ") == "a b");
  CHECK(trim("") == "");
  CHECK(lowercase("He SAYS") == "he says");
  CHECK(split_ws("  a  b\tc ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_char("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(join({"a", "b", "c"}, " ") == "a b c");
  CHECK(join({}, " ") == "");
  CHECK(starts_with("prefix rest", "prefix"));
  CHECK(!starts_with("pre", "prefix"));
  CHECK(ends_with("file.json", ".json"));
  CHECK(!ends_with("x", "longer"));
}

TEST_CASE("fnv1a distinguishes strings and is stable") {
  CHECK(fnv1a("abc") == fnv1a("abc"));
  CHECK(fnv1a("abc") != fnv1a("abd"));
  CHECK(fnv1a("") != fnv1a("a"));
}

TEST_CASE("file round trip") {
  std::string path = "/tmp/povshift_util_test.txt";
  write_file(path, "line1\nline2\n");
  CHECK(read_file(path) == "line1\nline2\n");
  CHECK(read_file_if_exists(path).has_value());
  CHECK(!read_file_if_exists("/tmp/povshift_does_not_exist_42").has_value());
  std::remove(path.c_str());
}

TEST_CASE("read_file reports missing paths") {
  CHECK_THROWS_AS((void)read_file("/tmp/povshift_does_not_exist_42"), std::runtime_error);
}
