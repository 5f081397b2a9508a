#include <doctest.h>

#include <algorithm>
#include <set>

#include "vimlab/resample.hpp"
#include "vimlab/scenario.hpp"

using namespace vimlab;

namespace {

Dataset numbered(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  return Dataset({{"x", ColumnKind::Continuous, 0, ColumnRole::Predictor}},
                 {std::move(v)});
}

}  // namespace

TEST_CASE("split sizes, disjointness, determinism") {
  Dataset d = numbered(300);
  RngStream rng(1, 2);
  SplitIndices s = split_train_validation(d, 2.0 / 3.0, rng);
  CHECK(s.train.size() == 200);
  CHECK(s.validation.size() == 100);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.validation.begin(), s.validation.end());
  CHECK(all.size() == 300);
  CHECK(*all.rbegin() == 299);

  SplitIndices again = split_train_validation(d, 2.0 / 3.0, rng);
  CHECK(again.train == s.train);
  CHECK(again.validation == s.validation);

  Dataset tiny = numbered(3);
  SplitIndices ts = split_train_validation(tiny, 2.0 / 3.0, RngStream(9));
  CHECK(ts.train.size() == 2);
  CHECK(ts.validation.size() == 1);

  CHECK_THROWS(split_train_validation(numbered(2), 0.5, RngStream(1)));
  CHECK_THROWS(split_train_validation(d, 0.0, RngStream(1)));
  CHECK_THROWS(split_train_validation(d, 1.0, RngStream(1)));
  CHECK_THROWS(split_train_validation(numbered(10), 0.999, RngStream(1)));
}

TEST_CASE("subsample without replacement") {
  Dataset d = numbered(10);

  Dataset full = subsample_without_replacement(d, 10, RngStream(3));
  std::vector<double> values = full.column(0);
  std::sort(values.begin(), values.end());
  CHECK(values == d.column(0));

  Dataset one = subsample_without_replacement(d, 1, RngStream(4));
  CHECK(one.n_rows() == 1);
  CHECK(one.value(0, 0) >= 0.0);
  CHECK(one.value(0, 0) <= 9.0);

  CHECK_THROWS(subsample_without_replacement(d, 11, RngStream(5)));

  // Reference trace, recorded once from the frozen generator.
  Dataset five = subsample_without_replacement(d, 5, RngStream(2024, 1));
  CHECK(five.column(0) == std::vector<double>{0.0, 4.0, 6.0, 7.0, 9.0});
}

TEST_CASE("permute_column keeps the multiset and everything else") {
  Dataset d = generate(64, ScenarioSpec::independent(), RngStream(11, 0));
  Dataset p = permute_column(d, "X3", RngStream(12, 0));

  std::vector<double> a = d.column(d.index_of("X3"));
  std::vector<double> b = p.column(p.index_of("X3"));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  for (std::size_t c = 0; c < d.n_cols(); ++c) {
    if (d.meta(c).name == "X3") continue;
    CHECK(d.column(c) == p.column(c));
  }

  CHECK_THROWS(permute_column(d, "nope", RngStream(1)));
  CHECK_THROWS(permute_column(d, "Y", RngStream(1)));  // outcome, not predictor

  // Constant column and single row are fixed points.
  Dataset constant(
      {{"x", ColumnKind::Continuous, 0, ColumnRole::Predictor}},
      {{2.0, 2.0, 2.0, 2.0}});
  CHECK(permute_column(constant, "x", RngStream(7)).column(0) ==
        constant.column(0));
  Dataset single({{"x", ColumnKind::Continuous, 0, ColumnRole::Predictor}},
                 {{5.0}});
  CHECK(permute_column(single, "x", RngStream(7)).column(0) ==
        single.column(0));

  // Reference trace for a seeded permutation of (1,2,3,4).
  Dataset four({{"x", ColumnKind::Continuous, 0, ColumnRole::Predictor}},
               {{1.0, 2.0, 3.0, 4.0}});
  Dataset shuffled = permute_column(four, "x", RngStream(2024, 2));
  CHECK(shuffled.column(0) == std::vector<double>{3.0, 1.0, 2.0, 4.0});
}
