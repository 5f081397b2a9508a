#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <limits>

#include "vimlab/dataset.hpp"

using namespace vimlab;

namespace {

Dataset small_dataset() {
  return Dataset(
      {{"x", ColumnKind::Continuous, 0, ColumnRole::Predictor},
       {"b", ColumnKind::Binary, 0, ColumnRole::Predictor},
       {"m", ColumnKind::Multinomial, 3, ColumnRole::Predictor},
       {"y", ColumnKind::Continuous, 0, ColumnRole::Outcome}},
      {{0.5, -1.25, 3.0}, {0.0, 1.0, 1.0}, {1.0, 3.0, 2.0}, {10.0, 11.0, 12.0}});
}

}  // namespace

TEST_CASE("dataset construction validates invariants") {
  CHECK_NOTHROW(small_dataset());

  CHECK_THROWS(Dataset({{"x"}, {"y"}}, {{1.0, 2.0}, {1.0}}));  // ragged
  CHECK_THROWS(Dataset({{"x"}}, {{1.0, std::numeric_limits<double>::infinity()}}));
  CHECK_THROWS(Dataset({{"b", ColumnKind::Binary, 0, ColumnRole::Predictor}},
                       {{0.0, 2.0}}));
  CHECK_THROWS(Dataset({{"m", ColumnKind::Multinomial, 3, ColumnRole::Predictor}},
                       {{0.0, 1.0}}));  // code below 1
  CHECK_THROWS(Dataset({{"m", ColumnKind::Multinomial, 1, ColumnRole::Predictor}},
                       {{1.0}}));  // too few levels
  CHECK_THROWS(Dataset({{"a", ColumnKind::Continuous, 0, ColumnRole::Outcome},
                        {"b", ColumnKind::Continuous, 0, ColumnRole::Outcome}},
                       {{1.0}, {2.0}}));  // two outcomes
}

TEST_CASE("dataset accessors and transforms") {
  Dataset d = small_dataset();
  CHECK(d.n_rows() == 3);
  CHECK(d.n_cols() == 4);
  CHECK(d.index_of("m") == 2);
  CHECK(d.find("nope") == Dataset::npos);
  CHECK_THROWS(d.index_of("nope"));
  CHECK(d.outcome_index() == 3);
  CHECK(d.outcome()[1] == 11.0);
  CHECK(d.predictor_indices() == std::vector<std::size_t>{0, 1, 2});

  Dataset replaced = d.with_column("x", {1.0, 2.0, 3.0});
  CHECK(replaced.value(0, 0) == 1.0);
  CHECK(d.value(0, 0) == 0.5);  // original untouched

  std::vector<std::size_t> rows{2, 0};
  Dataset taken = d.take_rows(rows);
  CHECK(taken.n_rows() == 2);
  CHECK(taken.value(0, 3) == 12.0);
  CHECK(taken.value(1, 3) == 10.0);

  Dataset dropped = d.drop_column("b");
  CHECK(dropped.n_cols() == 3);
  CHECK_FALSE(dropped.has("b"));

  Dataset retargeted = d.with_outcome("x");
  CHECK(retargeted.outcome_index() == retargeted.index_of("x"));
  CHECK_FALSE(retargeted.has("y"));
  CHECK(retargeted.meta(retargeted.index_of("x")).role == ColumnRole::Outcome);
}

TEST_CASE("csv round trip preserves values and schema") {
  Dataset d = small_dataset();
  auto dir = std::filesystem::temp_directory_path();
  std::string csv = (dir / "vimlab_test_data.csv").string();
  std::string schema = (dir / "vimlab_test_data.schema").string();
  save_dataset_csv(d, csv, schema);
  Dataset back = load_dataset_csv(csv, schema);

  REQUIRE(back.n_rows() == d.n_rows());
  REQUIRE(back.n_cols() == d.n_cols());
  for (std::size_t c = 0; c < d.n_cols(); ++c) {
    CHECK(back.meta(c).name == d.meta(c).name);
    CHECK(back.meta(c).kind == d.meta(c).kind);
    CHECK(back.meta(c).role == d.meta(c).role);
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
      CHECK(back.value(r, c) == doctest::Approx(d.value(r, c)).epsilon(1e-15));
    }
  }
  std::remove(csv.c_str());
  std::remove(schema.c_str());
}
