#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tnvq {

struct RawCarRecord {
  std::string buying;
  std::string maint;
  std::string doors;
  std::string persons;
  std::string lug_boot;
  std::string safety;
  std::string klass;  // unacc | acc | good | vgood
};

struct LabeledDataset {
  Eigen::MatrixXd features;  // num_samples x dim
  std::vector<int> labels;   // entries in {-1, +1}
  std::vector<std::string> feature_names;
  std::string provenance;  // raw | one-hot | pca(k) | scaled

  int size() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }
  std::vector<double> row(int i) const;
};

std::vector<RawCarRecord> parse_car_csv(const std::string& text);

// 21 binary columns (buying:4, maint:4, doors:4, persons:3, lug_boot:3,
// safety:3), category values ordered alphabetically within each feature.
// Labels: unacc -> -1, everything else -> +1.
LabeledDataset one_hot(const std::vector<RawCarRecord>& records);

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds,
                                                double train_fraction,
                                                std::uint64_t seed);

struct MinMaxScaler {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  int clamped_values = 0;  // validation entries clipped into [0,1]
};

struct ScaledSplit {
  LabeledDataset train;
  LabeledDataset val;
  MinMaxScaler scaler;
};

// Fits column ranges on train only; maps both sets to [0,1], clamping
// out-of-range validation values and sending constant columns to 0.5.
ScaledSplit minmax_scale(const LabeledDataset& train, const LabeledDataset& val);

}  // namespace tnvq
