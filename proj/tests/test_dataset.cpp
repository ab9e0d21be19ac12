#include "tnvq/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef TNVQ_DATA_FILE
#define TNVQ_DATA_FILE "data/car.data"
#endif

using namespace tnvq;

namespace {

const std::string& car_text() {
  static const std::string text = [] {
    std::ifstream in(TNVQ_DATA_FILE);
    REQUIRE_MESSAGE(in.good(), "bundled dataset not found at " TNVQ_DATA_FILE);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }();
  return text;
}

}  // namespace

TEST_CASE("single row parses into the expected record") {
  auto recs = parse_car_csv("vhigh,vhigh,2,2,small,low,unacc\n");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].buying == "vhigh");
  CHECK(recs[0].maint == "vhigh");
  CHECK(recs[0].doors == "2");
  CHECK(recs[0].persons == "2");
  CHECK(recs[0].lug_boot == "small");
  CHECK(recs[0].safety == "low");
  CHECK(recs[0].klass == "unacc");
}

TEST_CASE("empty input yields an empty record list") {
  CHECK(parse_car_csv("").empty());
  CHECK(parse_car_csv("\n\n").empty());
}

TEST_CASE("malformed lines are reported with their line number") {
  try {
    parse_car_csv("vhigh,vhigh,2,2,small,low,unacc\nvhigh,vhigh,2,2,small,low\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("6") != std::string::npos);
  }
}

TEST_CASE("unknown category values name the field and the value") {
  try {
    parse_car_csv("vhigh,vhigh,2,seven,small,low,unacc\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    CHECK(msg.find("persons") != std::string::npos);
    CHECK(msg.find("seven") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_car_csv("vhigh,vhigh,2,2,small,low,maybe\n"),
                  std::invalid_argument);
}

TEST_CASE("bundled dataset has the documented shape") {
  auto recs = parse_car_csv(car_text());
  CHECK(recs.size() == 1728);
  LabeledDataset ds = one_hot(recs);
  CHECK(ds.size() == 1728);
  CHECK(ds.dim() == 21);
  int positives = 0;
  for (int y : ds.labels) {
    REQUIRE((y == 1 || y == -1));
    if (y == 1) ++positives;
  }
  double frac = double(positives) / 1728.0;
  CHECK(frac > 0.27);
  CHECK(frac < 0.31);
}

TEST_CASE("one-hot rows carry exactly one bit per categorical group") {
  auto recs = parse_car_csv(car_text());
  LabeledDataset ds = one_hot(recs);
  const int group_sizes[] = {4, 4, 4, 3, 3, 3};
  for (int i = 0; i < ds.size(); ++i) {
    CHECK(ds.features.row(i).sum() == doctest::Approx(6.0));
    int base = 0;
    for (int g = 0; g < 6; ++g) {
      double s = 0.0;
      for (int j = 0; j < group_sizes[g]; ++j) s += ds.features(i, base + j);
      REQUIRE(s == 1.0);
      base += group_sizes[g];
    }
    for (int j = 0; j < 21; ++j) {
      REQUIRE((ds.features(i, j) == 0.0 || ds.features(i, j) == 1.0));
    }
  }
}

TEST_CASE("one-hot column order is alphabetical within each feature") {
  LabeledDataset ds = one_hot(parse_car_csv("vhigh,vhigh,2,2,small,low,unacc\n"));
  REQUIRE(ds.feature_names.size() == 21);
  CHECK(ds.feature_names[0] == "buying=high");
  CHECK(ds.feature_names[3] == "buying=vhigh");
  CHECK(ds.feature_names[4] == "maint=high");
  CHECK(ds.feature_names[8] == "doors=2");
  CHECK(ds.feature_names[12] == "persons=2");
  CHECK(ds.feature_names[15] == "lug_boot=big");
  CHECK(ds.feature_names[18] == "safety=high");
  // vhigh buying -> col 3; vhigh maint -> 7; doors 2 -> 8; persons 2 -> 12;
  // small boot -> 17; low safety -> 19.
  for (int j : {3, 7, 8, 12, 17, 19}) CHECK(ds.features(0, j) == 1.0);
  CHECK(ds.features.row(0).sum() == 6.0);
  CHECK(ds.labels[0] == -1);
}

TEST_CASE("split produces the documented sizes and partitions the data") {
  auto recs = parse_car_csv(car_text());
  LabeledDataset ds = one_hot(recs);
  auto [train, val] = split(ds, 0.8, 7);
  CHECK(train.size() == 1382);
  CHECK(val.size() == 346);
  CHECK(train.dim() == 21);

  // Multiset of rows is preserved: compare sorted row signatures.
  auto signatures = [](const LabeledDataset& a, const LabeledDataset& b) {
    std::multiset<std::string> sig;
    for (const LabeledDataset* part : {&a, &b}) {
      for (int i = 0; i < part->size(); ++i) {
        std::string s = std::to_string(part->labels[size_t(i)]) + "|";
        for (int j = 0; j < part->dim(); ++j) {
          s += part->features(i, j) > 0.5 ? '1' : '0';
        }
        sig.insert(s);
      }
    }
    return sig;
  };
  LabeledDataset empty;
  empty.features.resize(0, 21);
  CHECK(signatures(train, val) == signatures(ds, empty));
}

TEST_CASE("split is deterministic per seed and varies across seeds") {
  auto recs = parse_car_csv(car_text());
  LabeledDataset ds = one_hot(recs);
  auto [a1, b1] = split(ds, 0.8, 123);
  auto [a2, b2] = split(ds, 0.8, 123);
  CHECK(a1.features == a2.features);
  CHECK(a1.labels == a2.labels);
  CHECK(b1.features == b2.features);
  auto [a3, b3] = split(ds, 0.8, 124);
  CHECK(a1.features != a3.features);
  CHECK_THROWS_AS(split(ds, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split(ds, 1.0, 1), std::invalid_argument);
}

TEST_CASE("minmax scaling maps train columns onto [0,1]") {
  LabeledDataset train, val;
  train.features.resize(2, 3);
  train.features << -1.0, 2.0, 7.0,  //
      3.0, 2.0, 9.0;
  train.labels = {1, -1};
  val.features.resize(2, 3);
  val.features << 5.0, 2.0, 8.0,  //
      -1.0, 2.0, -100.0;
  val.labels = {1, 1};

  ScaledSplit s = minmax_scale(train, val);
  CHECK(s.train.features(0, 0) == 0.0);
  CHECK(s.train.features(1, 0) == 1.0);
  CHECK(s.train.features(0, 1) == 0.5);  // constant column convention
  CHECK(s.train.features(1, 1) == 0.5);
  CHECK(s.val.features(0, 0) == 1.0);  // 5 clamped into [0,1]
  CHECK(s.val.features(0, 1) == 0.5);
  CHECK(s.val.features(0, 2) == 0.5);
  CHECK(s.val.features(1, 2) == 0.0);  // -100 clamped
  CHECK(s.scaler.clamped_values == 2);
  CHECK(s.train.provenance == "scaled");
}
