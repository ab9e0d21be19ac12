#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tnvq/dataset.hpp"
#include "tnvq/exp_machine.hpp"
#include "tnvq/vqc.hpp"

namespace tnvq {

// Grid definition: models, principal-component counts, sweep values (ansatz
// layers for the circuit model, TT-ranks for the tensor model), seeds, and
// training budgets. Zero or empty numeric fields mean "use the default for
// this model and problem size".
struct ExperimentConfig {
  std::string model = "both";  // tn | vqc | both
  std::vector<int> components;  // empty -> per-model defaults
  std::vector<int> layers;      // vqc sweep; empty -> size-dependent default
  std::vector<int> ranks;       // tn sweep; empty -> {1..6}
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::string data_path = "data/car.data";
  std::string out_dir = "results";
  int epochs = -1;       // negative -> model/size default
  double lr = 0.0;       // <= 0 -> model default (manifold step / Adam lr0)
  double lambda = -1.0;  // tn regularization weight; negative -> default
  int batch_size = 32;   // vqc minibatch size
  double decay = 0.95;   // vqc per-epoch learning-rate decay
  std::uint64_t split_seed = 8;
  bool scale_tn = false;      // min-max scale tn inputs as well
  bool pca_fit_all = false;   // fit PCA on all rows instead of train only
  bool real_timings = false;  // write true seconds into results.csv
  int workers = 1;
  bool write_svg = true;
  tn::LossKind tn_loss = tn::LossKind::kLogistic;
  bool squared_reg = false;
  bool signed_output = false;
  double threshold = 0.5;
  vqc::GradMode grad = vqc::GradMode::kAuto;
};

// One grid cell's outcome. The first block mirrors the results.csv columns;
// the audit block below it is persisted in results.json only.
struct ResultRecord {
  std::string model;
  int components = 0;
  int sweep = 0;  // layers (vqc) or rank (tn)
  long long param_count = 0;
  std::uint64_t seed = 0;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double train_f1 = 0.0;
  double val_f1 = 0.0;
  int epochs = 0;
  double seconds = 0.0;  // true wall-clock training time, always
  double final_loss = 0.0;
  std::string status = "ok";

  long long stored_params = 0;
  int best_epoch = 0;  // 1-based epoch of best validation accuracy
  double best_val_acc = 0.0;
  int clamped_values = 0;  // validation entries clipped by the scaler
  std::vector<double> loss_curve;
  std::vector<double> val_acc_curve;
};

struct TrendReport {
  bool computable = false;
  bool holds = false;
  std::string text;
};

// Reads the bundled UCI car CSV and one-hot encodes it (21 binary features).
LabeledDataset load_car_dataset(const std::string& path);

struct PreparedCell {
  LabeledDataset train;
  LabeledDataset val;
  int clamped_values = 0;
};

// 80/20 split, PCA to `components` dimensions (skipped when components equals
// the encoded dimension), then optional min-max scaling to [0,1].
PreparedCell prepare_features(const LabeledDataset& encoded, int components,
                              std::uint64_t split_seed, bool minmax,
                              bool pca_fit_all);

// Grid defaults, exposed for the CLI and tests.
std::vector<int> default_components(const std::string& model);
std::vector<int> default_layers(int components);
std::vector<int> default_ranks();
int default_epochs(const std::string& model, int components);
double default_lr(const std::string& model);
double default_lambda(const std::string& model);

struct CellSpec {
  std::string model;  // tn | vqc
  int components = 0;
  int sweep = 0;
  std::uint64_t seed = 0;
};

// Expands a config into its cell list (deterministic order).
std::vector<CellSpec> grid_cells(const ExperimentConfig& cfg);

// Trains one cell and evaluates it on the prepared split. Training aborts
// (non-finite loss) are captured in the status field, with NaN metrics.
// When `serialized_model` is non-null and training succeeded, the trained
// model's text serialization is stored there.
ResultRecord run_cell(const CellSpec& cell, const PreparedCell& data,
                      const ExperimentConfig& cfg,
                      std::string* serialized_model = nullptr);

// Runs every cell of the grid (cell-level thread pool when workers > 1),
// sorts records by (model, components, sweep, seed), writes results.csv,
// results.json, plot-data files, and a text report into cfg.out_dir, and
// returns the sorted records.
std::vector<ResultRecord> run_grid(const ExperimentConfig& cfg);

// Exact bytes of results.csv for a record list (header + one line per row).
std::string render_results_csv(const std::vector<ResultRecord>& rows,
                               bool real_timings);

// Writes results.csv/results.json/plot CSVs (+ optional SVG charts) and
// report.txt for already-computed records.
void write_grid_outputs(const std::vector<ResultRecord>& rows,
                        const ExperimentConfig& cfg);

// The subset of the above that can be rebuilt from records alone (everything
// except results.json): results.csv, plot CSVs, optional SVGs, report.txt.
void write_derived_outputs(const std::vector<ResultRecord>& rows,
                           const std::string& out_dir, bool real_timings,
                           bool write_svg);

// Loads records back from a results.json produced by write_grid_outputs.
std::vector<ResultRecord> read_results_json(const std::string& path);

// Compares best validation accuracy per model at small and large component
// counts (circuit model expected ahead at 2 and 5, tensor model at 16).
TrendReport trend_report(const std::vector<ResultRecord>& rows);

// Explained-variance table of the top principal components of the full
// one-hot dataset: CSV header plus one `component,ratio` row per component.
void emit_scree(const std::string& dataset_path, int max_components,
                const std::string& out_path);

}  // namespace tnvq
