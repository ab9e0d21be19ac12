// Command-line benchmark harness comparing a tensor-network classifier
// (exponential machine trained by Riemannian optimization) against a
// simulated variational quantum classifier on the UCI car dataset.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tnvq/dataset.hpp"
#include "tnvq/experiment.hpp"
#include "tnvq/pca.hpp"

namespace fs = std::filesystem;

namespace {

// Fingerprint of the bundled data/car.data (FNV-1a, 64-bit). A different
// value is reported as a note, not an error: any structurally valid car
// dataset is accepted.
constexpr std::uint64_t kBundledFingerprint = 0xc86420ee68e6a777ULL;

// Published class sizes of the car dataset, alphabetical by class name.
const std::map<std::string, int> kExpectedClassCounts = {
    {"acc", 384}, {"good", 69}, {"unacc", 1210}, {"vgood", 65}};

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Options shared by `train` and `grid`.
struct CommonOpts {
  std::string data = "data/car.data";
  std::string out = "results";
  int epochs = -1;
  double lr = 0.0;
  double lambda = -1.0;
  int batch_size = 32;
  double decay = 0.95;
  std::uint64_t split_seed = 8;
  bool scale_tn = false;
  bool pca_fit_all = false;
  bool real_timings = false;
  bool no_svg = false;
  bool squared_reg = false;
  bool signed_output = false;
  double threshold = 0.5;
  std::string loss = "logistic";
  std::string grad = "auto";
};

void add_common_options(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--data", o.data, "path to the car dataset CSV")
      ->capture_default_str();
  sub->add_option("--out", o.out, "output directory")->capture_default_str();
  sub->add_option("--epochs", o.epochs,
                  "training epochs; negative = model/size default");
  sub->add_option("--lr", o.lr,
                  "learning rate (manifold step size / Adam initial rate); "
                  "<= 0 = model default");
  sub->add_option("--lambda", o.lambda,
                  "tn regularization weight; negative = default");
  sub->add_option("--batch-size", o.batch_size, "vqc minibatch size")
      ->capture_default_str();
  sub->add_option("--decay", o.decay, "vqc per-epoch learning-rate decay")
      ->capture_default_str();
  sub->add_option("--split-seed", o.split_seed, "train/validation split seed")
      ->capture_default_str();
  sub->add_flag("--scale-tn", o.scale_tn,
                "min-max scale tn inputs as well (vqc inputs always are)");
  sub->add_flag("--pca-fit-all", o.pca_fit_all,
                "fit PCA on all rows instead of the training split only");
  sub->add_flag("--real-timings", o.real_timings,
                "write true wall-clock seconds into results.csv (breaks "
                "byte-identical reruns)");
  sub->add_flag("--no-svg", o.no_svg, "skip SVG chart output");
  sub->add_flag("--reg-squared", o.squared_reg,
                "use squared-norm regularization for tn");
  sub->add_flag("--signed-output", o.signed_output,
                "vqc loss compares 2*P-1 against labels in {-1,+1}");
  sub->add_option("--threshold", o.threshold, "vqc decision threshold")
      ->capture_default_str();
  sub->add_option("--loss", o.loss, "tn loss kind")
      ->check(CLI::IsMember({"logistic", "mse"}))
      ->capture_default_str();
  sub->add_option("--grad", o.grad, "vqc gradient evaluator")
      ->check(CLI::IsMember({"auto", "shift", "adjoint"}))
      ->capture_default_str();
  sub->set_config("--config", "",
                  "key=value file mirroring these flags; command-line "
                  "values override it");
}

void apply_common(const CommonOpts& o, tnvq::ExperimentConfig& cfg) {
  cfg.data_path = o.data;
  cfg.out_dir = o.out;
  cfg.epochs = o.epochs;
  cfg.lr = o.lr;
  cfg.lambda = o.lambda;
  cfg.batch_size = o.batch_size;
  cfg.decay = o.decay;
  cfg.split_seed = o.split_seed;
  cfg.scale_tn = o.scale_tn;
  cfg.pca_fit_all = o.pca_fit_all;
  cfg.real_timings = o.real_timings;
  cfg.write_svg = !o.no_svg;
  cfg.squared_reg = o.squared_reg;
  cfg.signed_output = o.signed_output;
  cfg.threshold = o.threshold;
  cfg.tn_loss = o.loss == "mse" ? tnvq::tn::LossKind::kMse
                                : tnvq::tn::LossKind::kLogistic;
  cfg.grad = o.grad == "shift"     ? tnvq::vqc::GradMode::kShift
             : o.grad == "adjoint" ? tnvq::vqc::GradMode::kAdjoint
                                   : tnvq::vqc::GradMode::kAuto;
}

int cmd_prepare(const std::string& data, const std::string& out) {
  const std::string bytes = read_file(data);
  const std::uint64_t fp = fnv1a64(bytes);

  const auto records = tnvq::parse_car_csv(bytes);
  std::map<std::string, int> class_counts;
  for (const auto& r : records) ++class_counts[r.klass];
  const tnvq::LabeledDataset ds = tnvq::one_hot(records);
  int positives = 0;
  for (int y : ds.labels) positives += y == +1;
  const double pos_fraction = double(positives) / double(ds.size());
  const auto parts = tnvq::split(ds, 0.8, 1);

  std::ostringstream rep;
  rep << "dataset verification report\n";
  rep << "===========================\n";
  rep << "path: " << data << "\n";
  rep << "bytes: " << bytes.size() << "\n";
  char fpbuf[32];
  std::snprintf(fpbuf, sizeof fpbuf, "%016llx",
                static_cast<unsigned long long>(fp));
  rep << "fnv1a64: " << fpbuf << "\n";
  const fs::path sidecar = fs::path(data).concat(".sha256");
  if (fs::exists(sidecar)) {
    rep << "recorded sha256 (verify externally with sha256sum -c): "
        << read_file(sidecar.string());
  }
  rep << "records: " << records.size() << "\n";
  for (const auto& [name, count] : class_counts) {
    rep << "class " << name << ": " << count << "\n";
  }
  rep << "one-hot features: " << ds.dim() << "\n";
  char posbuf[32];
  std::snprintf(posbuf, sizeof posbuf, "%.6f", pos_fraction);
  rep << "positive fraction: " << posbuf << "\n";
  rep << "80/20 split sizes: " << parts.first.size() << "/"
      << parts.second.size() << "\n";

  std::vector<std::string> problems;
  if (records.size() != 1728) {
    problems.push_back("expected 1728 records, found " +
                       std::to_string(records.size()));
  }
  for (const auto& [name, count] : kExpectedClassCounts) {
    const auto it = class_counts.find(name);
    const int found = it == class_counts.end() ? 0 : it->second;
    if (found != count) {
      problems.push_back("class " + name + ": expected " +
                         std::to_string(count) + ", found " +
                         std::to_string(found));
    }
  }
  if (ds.dim() != 21) {
    problems.push_back("expected 21 one-hot features, found " +
                       std::to_string(ds.dim()));
  }
  if (!(pos_fraction > 0.27 && pos_fraction < 0.31)) {
    problems.push_back("positive fraction outside (0.27, 0.31)");
  }
  if (parts.first.size() != 1382 || parts.second.size() != 346) {
    problems.push_back("unexpected 80/20 split sizes");
  }
  if (fp != kBundledFingerprint) {
    rep << "note: fingerprint differs from the bundled file (structure "
           "checks still apply)\n";
  }
  rep << "verdict: " << (problems.empty() ? "ok" : "FAILED") << "\n";
  for (const auto& p : problems) rep << "problem: " << p << "\n";

  // Processed dataset for external tools: header row, 21 binary columns
  // plus the +-1 label.
  std::string csv;
  for (const auto& name : ds.feature_names) csv += name + ',';
  csv += "label\n";
  for (int i = 0; i < ds.size(); ++i) {
    for (int j = 0; j < ds.dim(); ++j) {
      csv += ds.features(i, j) > 0.5 ? "1," : "0,";
    }
    csv += std::to_string(ds.labels[size_t(i)]) + "\n";
  }

  write_file(fs::path(out) / "dataset_report.txt", rep.str());
  write_file(fs::path(out) / "onehot.csv", csv);
  std::cout << rep.str();
  std::cout << "wrote " << (fs::path(out) / "dataset_report.txt").string()
            << " and " << (fs::path(out) / "onehot.csv").string() << "\n";
  if (!problems.empty()) {
    std::cerr << "dataset verification failed\n";
    return 1;
  }
  return 0;
}

int cmd_scree(const std::string& data, int max_components,
              const std::string& out) {
  const fs::path path = fs::path(out) / "scree.csv";
  tnvq::emit_scree(data, max_components, path.string());
  std::cout << "wrote " << path.string() << "\n";
  const std::string text = read_file(path.string());
  std::cout << text;
  return 0;
}

int cmd_train(const CommonOpts& common, const std::string& model,
              int components, int rank, int layers, std::uint64_t seed) {
  tnvq::ExperimentConfig cfg;
  apply_common(common, cfg);
  cfg.model = model;
  cfg.components = {components};
  cfg.seeds = {seed};
  const int sweep = model == "tn" ? rank : layers;
  if (model == "tn") {
    cfg.ranks = {rank};
  } else {
    cfg.layers = {layers};
  }

  const tnvq::LabeledDataset encoded = tnvq::load_car_dataset(cfg.data_path);
  const bool scaled = model == "vqc" || cfg.scale_tn;
  const tnvq::PreparedCell cell_data = tnvq::prepare_features(
      encoded, components, cfg.split_seed, scaled, cfg.pca_fit_all);

  tnvq::CellSpec cell{model, components, sweep, seed};
  std::string serialized;
  tnvq::ResultRecord rec = tnvq::run_cell(cell, cell_data, cfg, &serialized);

  tnvq::write_grid_outputs({rec}, cfg);
  const fs::path model_path =
      fs::path(cfg.out_dir) /
      ("model_" + model + "_c" + std::to_string(components) + "_s" +
       std::to_string(sweep) + "_seed" + std::to_string(seed) + ".txt");
  if (!serialized.empty()) write_file(model_path, serialized);

  char line[256];
  std::snprintf(line, sizeof line,
                "%s components=%d %s=%d seed=%llu params=%lld epochs=%d "
                "status=%s\n",
                model.c_str(), components, model == "tn" ? "rank" : "layers",
                sweep, static_cast<unsigned long long>(seed), rec.param_count,
                rec.epochs, rec.status.c_str());
  std::cout << line;
  std::snprintf(line, sizeof line,
                "train acc=%.4f f1=%.4f | val acc=%.4f f1=%.4f | "
                "final_loss=%.6g | %.2fs\n",
                rec.train_acc, rec.train_f1, rec.val_acc, rec.val_f1,
                rec.final_loss, rec.seconds);
  std::cout << line;
  if (!serialized.empty()) {
    std::cout << "model written to " << model_path.string() << "\n";
  }
  std::cout << "results written to " << cfg.out_dir << "\n";
  return rec.status == "ok" ? 0 : 1;
}

int cmd_grid(const CommonOpts& common, const std::string& model,
             const std::vector<int>& components, const std::vector<int>& ranks,
             const std::vector<int>& layers,
             const std::vector<std::uint64_t>& seeds, int workers) {
  tnvq::ExperimentConfig cfg;
  apply_common(common, cfg);
  cfg.model = model;
  cfg.components = components;
  cfg.ranks = ranks;
  cfg.layers = layers;
  if (!seeds.empty()) cfg.seeds = seeds;
  cfg.workers = workers;

  const auto rows = tnvq::run_grid(cfg);
  int ok = 0;
  for (const auto& r : rows) ok += r.status == "ok";
  std::cout << "ran " << rows.size() << " cells (" << ok << " ok) into "
            << cfg.out_dir << "\n";
  std::cout << tnvq::trend_report(rows).text;
  return 0;
}

int cmd_report(const std::string& results, const std::string& out,
               bool real_timings, bool no_svg) {
  const auto rows = tnvq::read_results_json(results);
  const std::string dir =
      out.empty() ? fs::path(results).parent_path().string() : out;
  tnvq::write_derived_outputs(rows, dir.empty() ? "." : dir, real_timings,
                              !no_svg);
  std::cout << "regenerated tables and plots for " << rows.size()
            << " records in " << (dir.empty() ? "." : dir) << "\n";
  std::cout << tnvq::trend_report(rows).text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tensor-network vs variational-quantum-circuit benchmark on the UCI "
      "car dataset"};
  app.require_subcommand(1);

  // prepare
  auto* prepare = app.add_subcommand(
      "prepare", "verify the bundled dataset and write processed artifacts");
  std::string prep_data = "data/car.data";
  std::string prep_out = "results";
  prepare->add_option("--data", prep_data, "path to the car dataset CSV")
      ->capture_default_str();
  prepare->add_option("--out", prep_out, "output directory")
      ->capture_default_str();
  prepare->set_config("--config", "", "key=value config file");

  // scree
  auto* scree = app.add_subcommand(
      "scree", "explained-variance ratios of the principal components");
  std::string scree_data = "data/car.data";
  std::string scree_out = "results";
  int scree_max = 20;
  scree->add_option("--data", scree_data, "path to the car dataset CSV")
      ->capture_default_str();
  scree->add_option("--out", scree_out, "output directory")
      ->capture_default_str();
  scree->add_option("--max-components", scree_max, "number of components")
      ->capture_default_str();
  scree->set_config("--config", "", "key=value config file");

  // train
  auto* train = app.add_subcommand("train", "train and evaluate one cell");
  CommonOpts train_common;
  std::string train_model;
  int train_components = 5;
  int train_rank = 4;
  int train_layers = 1;
  std::uint64_t train_seed = 1;
  train->add_option("--model", train_model, "model to train")
      ->check(CLI::IsMember({"tn", "vqc"}))
      ->required();
  train->add_option("--components", train_components,
                    "principal components (21 = all one-hot features, no PCA)")
      ->capture_default_str();
  train->add_option("--rank", train_rank, "tn TT-rank")->capture_default_str();
  train->add_option("--layers", train_layers, "vqc entangling layers")
      ->capture_default_str();
  train->add_option("--seed", train_seed, "training seed")
      ->capture_default_str();
  add_common_options(train, train_common);

  // grid
  auto* grid = app.add_subcommand("grid", "run a full sweep");
  CommonOpts grid_common;
  std::string grid_model = "both";
  std::vector<int> grid_components, grid_ranks, grid_layers;
  std::vector<std::uint64_t> grid_seeds;
  int grid_workers = 1;
  grid->add_option("--model", grid_model, "models to sweep")
      ->check(CLI::IsMember({"tn", "vqc", "both"}))
      ->capture_default_str();
  grid->add_option("--components", grid_components,
                   "component counts; empty = per-model defaults")
      ->delimiter(',');
  grid->add_option("--rank", grid_ranks, "tn rank sweep; empty = 1..6")
      ->delimiter(',');
  grid->add_option("--layers", grid_layers,
                   "vqc layer sweep; empty = size-dependent default")
      ->delimiter(',');
  grid->add_option("--seed", grid_seeds, "seed list; empty = 1,2,3")
      ->delimiter(',');
  grid->add_option("--workers", grid_workers, "parallel cell workers")
      ->capture_default_str();
  add_common_options(grid, grid_common);

  // report
  auto* report = app.add_subcommand(
      "report", "regenerate tables and plots from results.json");
  std::string report_results = "results/results.json";
  std::string report_out;
  bool report_real_timings = false;
  bool report_no_svg = false;
  report->add_option("--results", report_results, "path to results.json")
      ->capture_default_str();
  report->add_option("--out", report_out,
                     "output directory; default = directory of --results");
  report->add_flag("--real-timings", report_real_timings,
                   "write recorded wall seconds into results.csv");
  report->add_flag("--no-svg", report_no_svg, "skip SVG chart output");
  report->set_config("--config", "", "key=value config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (prepare->parsed()) return cmd_prepare(prep_data, prep_out);
    if (scree->parsed()) return cmd_scree(scree_data, scree_max, scree_out);
    if (train->parsed()) {
      return cmd_train(train_common, train_model, train_components, train_rank,
                       train_layers, train_seed);
    }
    if (grid->parsed()) {
      return cmd_grid(grid_common, grid_model, grid_components, grid_ranks,
                      grid_layers, grid_seeds, grid_workers);
    }
    if (report->parsed()) {
      return cmd_report(report_results, report_out, report_real_timings,
                        report_no_svg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
