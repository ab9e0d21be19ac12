#include "tnvq/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tnvq/rng.hpp"

namespace tnvq {

namespace {

struct FeatureVocab {
  const char* name;
  std::vector<std::string> values;  // alphabetical
};

const std::array<FeatureVocab, 6>& vocabs() {
  static const std::array<FeatureVocab, 6> v = {{
      {"buying", {"high", "low", "med", "vhigh"}},
      {"maint", {"high", "low", "med", "vhigh"}},
      {"doors", {"2", "3", "4", "5more"}},
      {"persons", {"2", "4", "more"}},
      {"lug_boot", {"big", "med", "small"}},
      {"safety", {"high", "low", "med"}},
  }};
  return v;
}

int vocab_index(int feature, const std::string& value, int line_no) {
  const FeatureVocab& fv = vocabs()[feature];
  auto it = std::find(fv.values.begin(), fv.values.end(), value);
  if (it == fv.values.end()) {
    throw std::invalid_argument("line " + std::to_string(line_no) +
                                ": unknown value '" + value + "' for field " +
                                fv.name);
  }
  return static_cast<int>(it - fv.values.begin());
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<double> LabeledDataset::row(int i) const {
  std::vector<double> out(static_cast<size_t>(dim()));
  for (int j = 0; j < dim(); ++j) out[static_cast<size_t>(j)] = features(i, j);
  return out;
}

std::vector<RawCarRecord> parse_car_csv(const std::string& text) {
  std::vector<RawCarRecord> records;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ls(line);
    while (std::getline(ls, cur, ',')) fields.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (fields.size() != 7) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected 7 fields, got " +
                                  std::to_string(fields.size()));
    }
    RawCarRecord r;
    r.buying = fields[0];
    r.maint = fields[1];
    r.doors = fields[2];
    r.persons = fields[3];
    r.lug_boot = fields[4];
    r.safety = fields[5];
    r.klass = fields[6];
    const std::array<const std::string*, 6> vals = {
        &r.buying, &r.maint, &r.doors, &r.persons, &r.lug_boot, &r.safety};
    for (int f = 0; f < 6; ++f) vocab_index(f, *vals[f], line_no);
    if (r.klass != "unacc" && r.klass != "acc" && r.klass != "good" &&
        r.klass != "vgood") {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": unknown value '" + r.klass +
                                  "' for field class");
    }
    records.push_back(std::move(r));
  }
  return records;
}

LabeledDataset one_hot(const std::vector<RawCarRecord>& records) {
  LabeledDataset ds;
  ds.provenance = "one-hot";
  int d = 0;
  for (const FeatureVocab& fv : vocabs()) {
    for (const std::string& v : fv.values) {
      ds.feature_names.push_back(std::string(fv.name) + "=" + v);
      ++d;
    }
  }
  const int n = static_cast<int>(records.size());
  ds.features = Eigen::MatrixXd::Zero(n, d);
  ds.labels.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const RawCarRecord& r = records[static_cast<size_t>(i)];
    const std::array<const std::string*, 6> vals = {
        &r.buying, &r.maint, &r.doors, &r.persons, &r.lug_boot, &r.safety};
    int base = 0;
    for (int f = 0; f < 6; ++f) {
      ds.features(i, base + vocab_index(f, *vals[f], i + 1)) = 1.0;
      base += static_cast<int>(vocabs()[static_cast<size_t>(f)].values.size());
    }
    ds.labels[static_cast<size_t>(i)] = (r.klass == "unacc") ? -1 : +1;
  }
  return ds;
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds,
                                                double train_fraction,
                                                std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie strictly in (0,1)");
  }
  const int n = ds.size();
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  const int n_train = static_cast<int>(std::lround(train_fraction * n));

  auto take = [&](int from, int count) {
    LabeledDataset out;
    out.feature_names = ds.feature_names;
    out.provenance = ds.provenance;
    out.features.resize(count, ds.dim());
    out.labels.resize(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
      const int src = order[static_cast<size_t>(from + i)];
      out.features.row(i) = ds.features.row(src);
      out.labels[static_cast<size_t>(i)] = ds.labels[static_cast<size_t>(src)];
    }
    return out;
  };
  return {take(0, n_train), take(n_train, n - n_train)};
}

ScaledSplit minmax_scale(const LabeledDataset& train, const LabeledDataset& val) {
  if (train.dim() != val.dim()) {
    throw std::invalid_argument("train and validation dimensions differ");
  }
  ScaledSplit out;
  out.train = train;
  out.val = val;
  out.train.provenance = "scaled";
  out.val.provenance = "scaled";
  const int d = train.dim();
  out.scaler.lo = train.features.colwise().minCoeff();
  out.scaler.hi = train.features.colwise().maxCoeff();
  for (int j = 0; j < d; ++j) {
    const double lo = out.scaler.lo(j), hi = out.scaler.hi(j);
    if (hi == lo) {
      out.train.features.col(j).setConstant(0.5);
      out.val.features.col(j).setConstant(0.5);
      continue;
    }
    const double inv = 1.0 / (hi - lo);
    out.train.features.col(j) = (out.train.features.col(j).array() - lo) * inv;
    for (int i = 0; i < out.val.size(); ++i) {
      double v = (out.val.features(i, j) - lo) * inv;
      if (v < 0.0) {
        v = 0.0;
        ++out.scaler.clamped_values;
      } else if (v > 1.0) {
        v = 1.0;
        ++out.scaler.clamped_values;
      }
      out.val.features(i, j) = v;
    }
  }
  return out;
}

}  // namespace tnvq
