#include "tnvq/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"
#include "tnvq/metrics.hpp"
#include "tnvq/pca.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace tnvq {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<int> tn_predictions(const tn::TnModel& m, const LabeledDataset& ds) {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(ds.size()));
  for (int i = 0; i < ds.size(); ++i) out.push_back(tn::classify(m, ds.row(i)));
  return out;
}

std::vector<int> vqc_predictions(const vqc::VqcParams& p,
                                 const LabeledDataset& ds) {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(ds.size()));
  for (int i = 0; i < ds.size(); ++i) out.push_back(vqc::classify(ds.row(i), p));
  return out;
}

void fill_metrics(ResultRecord& rec, const std::vector<int>& train_preds,
                  const std::vector<int>& val_preds, const LabeledDataset& train,
                  const LabeledDataset& val) {
  rec.train_acc = accuracy(train_preds, train.labels);
  rec.val_acc = accuracy(val_preds, val.labels);
  rec.train_f1 = f1_score(train_preds, train.labels);
  rec.val_f1 = f1_score(val_preds, val.labels);
}

void fill_best_epoch(ResultRecord& rec) {
  if (rec.val_acc_curve.empty()) {
    rec.best_epoch = 0;
    rec.best_val_acc = rec.val_acc;
    return;
  }
  rec.best_val_acc = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < rec.val_acc_curve.size(); ++i) {
    if (rec.val_acc_curve[i] > rec.best_val_acc) {
      rec.best_val_acc = rec.val_acc_curve[i];
      rec.best_epoch = static_cast<int>(i) + 1;
    }
  }
}

void mark_aborted(ResultRecord& rec) {
  rec.status =
      "nan-abort@epoch" + std::to_string(rec.val_acc_curve.size() + 1);
  rec.epochs = static_cast<int>(rec.val_acc_curve.size());
  rec.train_acc = rec.val_acc = rec.train_f1 = rec.val_f1 = kNan;
  rec.final_loss = kNan;
  rec.stored_params = 0;
  fill_best_epoch(rec);
}

std::string loss_name(tn::LossKind k) {
  return k == tn::LossKind::kLogistic ? "logistic" : "mse";
}

std::string grad_name(vqc::GradMode g) {
  switch (g) {
    case vqc::GradMode::kShift: return "shift";
    case vqc::GradMode::kAdjoint: return "adjoint";
    default: return "auto";
  }
}

struct GroupStat {
  std::string model;
  int components = 0;
  int sweep = 0;
  long long param_count = 0;
  double mean = 0.0, lo = 0.0, hi = 0.0;
  int n = 0;
};

// Rows must already be sorted by (model, components, sweep, seed); groups are
// consecutive runs sharing (model, components, sweep). Aborted or non-finite
// cells are left out of the aggregates.
std::vector<GroupStat> aggregate(const std::vector<ResultRecord>& rows) {
  std::vector<GroupStat> out;
  size_t i = 0;
  while (i < rows.size()) {
    size_t j = i;
    GroupStat g;
    g.model = rows[i].model;
    g.components = rows[i].components;
    g.sweep = rows[i].sweep;
    g.param_count = rows[i].param_count;
    double sum = 0.0;
    g.lo = std::numeric_limits<double>::infinity();
    g.hi = -std::numeric_limits<double>::infinity();
    while (j < rows.size() && rows[j].model == g.model &&
           rows[j].components == g.components && rows[j].sweep == g.sweep) {
      if (rows[j].status == "ok" && std::isfinite(rows[j].val_acc)) {
        sum += rows[j].val_acc;
        g.lo = std::min(g.lo, rows[j].val_acc);
        g.hi = std::max(g.hi, rows[j].val_acc);
        ++g.n;
      }
      ++j;
    }
    if (g.n > 0) {
      g.mean = sum / g.n;
      out.push_back(g);
    }
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimal SVG line charts (no dependencies; coordinates fixed to 2 decimals).

struct PlotSeries {
  std::string label;
  std::vector<std::array<double, 2>> pts;  // already in plot domain
};

const std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string svg_chart(const std::string& title, const std::string& xlabel,
                      const std::string& ylabel,
                      const std::vector<PlotSeries>& series, bool log_x) {
  const double px0 = 62, px1 = 485, py0 = 372, py1 = 42;  // y axis inverted
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 420\" "
       "font-family=\"sans-serif\" font-size=\"11\">\n"
       "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  s << "<text x=\"300\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
    << title << "</text>\n";

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& sr : series) {
    for (const auto& p : sr.pts) {
      const double x = log_x ? std::log10(p[0]) : p[0];
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, p[1]);
      ymax = std::max(ymax, p[1]);
    }
  }
  if (!(xmin <= xmax)) {  // no data
    s << "<text x=\"300\" y=\"200\" text-anchor=\"middle\">no data</text>\n"
      << "</svg>\n";
    return s.str();
  }
  if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-12) { ymin -= 0.05; ymax += 0.05; }
  const double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
  xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

  auto sx = [&](double x) { return px0 + (x - xmin) / (xmax - xmin) * (px1 - px0); };
  auto sy = [&](double y) { return py0 + (y - ymin) / (ymax - ymin) * (py1 - py0); };

  // Axes with five ticks each.
  s << "<line x1=\"" << fmt_fixed(px0, 2) << "\" y1=\"" << fmt_fixed(py0, 2)
    << "\" x2=\"" << fmt_fixed(px1, 2) << "\" y2=\"" << fmt_fixed(py0, 2)
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << fmt_fixed(px0, 2) << "\" y1=\"" << fmt_fixed(py0, 2)
    << "\" x2=\"" << fmt_fixed(px0, 2) << "\" y2=\"" << fmt_fixed(py1, 2)
    << "\" stroke=\"black\"/>\n";
  for (int t = 0; t < 5; ++t) {
    const double xv = xmin + t * (xmax - xmin) / 4.0;
    const double yv = ymin + t * (ymax - ymin) / 4.0;
    char lbl[32];
    std::snprintf(lbl, sizeof lbl, "%.3g", log_x ? std::pow(10.0, xv) : xv);
    s << "<line x1=\"" << fmt_fixed(sx(xv), 2) << "\" y1=\"" << fmt_fixed(py0, 2)
      << "\" x2=\"" << fmt_fixed(sx(xv), 2) << "\" y2=\""
      << fmt_fixed(py0 + 4, 2) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fmt_fixed(sx(xv), 2) << "\" y=\""
      << fmt_fixed(py0 + 16, 2) << "\" text-anchor=\"middle\">" << lbl
      << "</text>\n";
    std::snprintf(lbl, sizeof lbl, "%.3g", yv);
    s << "<line x1=\"" << fmt_fixed(px0 - 4, 2) << "\" y1=\""
      << fmt_fixed(sy(yv), 2) << "\" x2=\"" << fmt_fixed(px0, 2) << "\" y2=\""
      << fmt_fixed(sy(yv), 2) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fmt_fixed(px0 - 7, 2) << "\" y=\""
      << fmt_fixed(sy(yv) + 4, 2) << "\" text-anchor=\"end\">" << lbl
      << "</text>\n";
  }
  s << "<text x=\"" << fmt_fixed((px0 + px1) / 2, 2)
    << "\" y=\"404\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  s << "<text x=\"16\" y=\"" << fmt_fixed((py0 + py1) / 2, 2)
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << fmt_fixed((py0 + py1) / 2, 2) << ")\">" << ylabel << "</text>\n";

  for (size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % kPalette.size()];
    std::ostringstream pts;
    for (const auto& p : series[k].pts) {
      const double x = log_x ? std::log10(p[0]) : p[0];
      pts << fmt_fixed(sx(x), 2) << "," << fmt_fixed(sy(p[1]), 2) << " ";
    }
    s << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\""
      << color << "\" stroke-width=\"1.5\"/>\n";
    for (const auto& p : series[k].pts) {
      const double x = log_x ? std::log10(p[0]) : p[0];
      s << "<circle cx=\"" << fmt_fixed(sx(x), 2) << "\" cy=\""
        << fmt_fixed(sy(p[1]), 2) << "\" r=\"2.5\" fill=\"" << color
        << "\"/>\n";
    }
    const double ly = 50 + 16 * static_cast<double>(k);
    s << "<rect x=\"500\" y=\"" << fmt_fixed(ly - 8, 2)
      << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
    s << "<text x=\"515\" y=\"" << fmt_fixed(ly + 1, 2) << "\">"
      << series[k].label << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

// Per-(model, components) series of mean validation accuracy, x taken from
// the group's sweep value or parameter count.
std::vector<PlotSeries> chart_series(const std::vector<GroupStat>& groups,
                                     bool x_is_params) {
  std::vector<PlotSeries> out;
  std::map<std::pair<std::string, int>, size_t> index;
  for (const auto& g : groups) {
    const auto key = std::make_pair(g.model, g.components);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.size());
      out.push_back({g.model + " " + std::to_string(g.components) + "pc", {}});
      it = index.find(key);
    }
    const double x =
        x_is_params ? static_cast<double>(g.param_count) : g.sweep;
    out[it->second].pts.push_back({x, g.mean});
  }
  for (auto& sr : out) {
    std::sort(sr.pts.begin(), sr.pts.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
  }
  return out;
}

}  // namespace

LabeledDataset load_car_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return one_hot(parse_car_csv(ss.str()));
}

PreparedCell prepare_features(const LabeledDataset& encoded, int components,
                              std::uint64_t split_seed, bool minmax,
                              bool pca_fit_all) {
  if (components < 1) {
    throw std::invalid_argument("component count must be positive");
  }
  if (components > encoded.dim()) {
    throw std::invalid_argument(
        "component count " + std::to_string(components) +
        " exceeds feature dimension " + std::to_string(encoded.dim()));
  }
  auto parts = split(encoded, 0.8, split_seed);
  LabeledDataset tr = std::move(parts.first);
  LabeledDataset va = std::move(parts.second);
  if (components < encoded.dim()) {
    const PcaModel m =
        pca_fit(pca_fit_all ? encoded.features : tr.features, components);
    tr.features = pca_transform(m, tr.features);
    va.features = pca_transform(m, va.features);
    std::vector<std::string> names;
    for (int j = 0; j < components; ++j) names.push_back("pc" + std::to_string(j + 1));
    tr.feature_names = names;
    va.feature_names = std::move(names);
    tr.provenance = va.provenance = "pca(" + std::to_string(components) + ")";
  }
  PreparedCell out;
  if (minmax) {
    ScaledSplit s = minmax_scale(tr, va);
    out.train = std::move(s.train);
    out.val = std::move(s.val);
    out.clamped_values = s.scaler.clamped_values;
  } else {
    out.train = std::move(tr);
    out.val = std::move(va);
  }
  return out;
}

std::vector<int> default_components(const std::string& model) {
  if (model == "vqc") return {2, 5, 10, 16};
  return {2, 5, 10, 16, 21};
}

std::vector<int> default_layers(int components) {
  if (components <= 10) return {1, 2, 3, 4, 5, 6};
  if (components <= 16) return {1, 2};
  return {1};
}

std::vector<int> default_ranks() { return {1, 2, 3, 4, 5, 6}; }

int default_epochs(const std::string& model, int components) {
  if (model == "tn") return 500;
  // 150 epochs lets the 0.95-decay schedule freeze before stopping (the
  // step size is ~4e-4 of its initial value by then). Statevector cost
  // doubles per extra feature, so wide circuits get smaller budgets to stay
  // tractable on a single desktop core.
  if (components <= 10) return 150;
  if (components <= 16) return 10;
  return 4;
}

double default_lr(const std::string& model) {
  return model == "tn" ? 0.2 : 0.1;
}

double default_lambda(const std::string& model) {
  (void)model;
  return 0.0;
}

std::vector<CellSpec> grid_cells(const ExperimentConfig& cfg) {
  if (cfg.model != "tn" && cfg.model != "vqc" && cfg.model != "both") {
    throw std::invalid_argument("model must be tn, vqc, or both");
  }
  if (cfg.seeds.empty()) throw std::invalid_argument("need at least one seed");
  std::vector<std::string> models;
  if (cfg.model == "both") {
    models = {"tn", "vqc"};
  } else {
    models = {cfg.model};
  }
  std::vector<CellSpec> cells;
  for (const auto& model : models) {
    const std::vector<int> comps =
        cfg.components.empty() ? default_components(model) : cfg.components;
    if (comps.empty()) throw std::invalid_argument("empty component list");
    for (int c : comps) {
      std::vector<int> sweeps;
      if (model == "vqc") {
        sweeps = cfg.layers.empty() ? default_layers(c) : cfg.layers;
        for (int l : sweeps) {
          if (l < 0) throw std::invalid_argument("layer count must be >= 0");
        }
      } else {
        sweeps = cfg.ranks.empty() ? default_ranks() : cfg.ranks;
        for (int r : sweeps) {
          if (r < 1) throw std::invalid_argument("rank must be >= 1");
        }
      }
      if (sweeps.empty()) throw std::invalid_argument("empty sweep list");
      for (int s : sweeps) {
        for (std::uint64_t seed : cfg.seeds) {
          cells.push_back({model, c, s, seed});
        }
      }
    }
  }
  return cells;
}

ResultRecord run_cell(const CellSpec& cell, const PreparedCell& data,
                      const ExperimentConfig& cfg,
                      std::string* serialized_model) {
  if (cell.model != "tn" && cell.model != "vqc") {
    throw std::invalid_argument("cell model must be tn or vqc");
  }
  if (data.train.dim() != cell.components) {
    throw std::invalid_argument(
        "prepared data has " + std::to_string(data.train.dim()) +
        " features for a " + std::to_string(cell.components) +
        "-component cell");
  }
  ResultRecord rec;
  rec.model = cell.model;
  rec.components = cell.components;
  rec.sweep = cell.sweep;
  rec.seed = cell.seed;
  rec.clamped_values = data.clamped_values;
  const int epochs =
      cfg.epochs >= 0 ? cfg.epochs : default_epochs(cell.model, cell.components);
  rec.epochs = epochs;

  const auto t0 = std::chrono::steady_clock::now();
  const auto stop_clock = [&] {
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  };

  if (cell.model == "tn") {
    rec.param_count = tn::count_params(cell.components, cell.sweep);
    tn::TnTrainConfig tc;
    tc.rank = cell.sweep;
    tc.epochs = epochs;
    tc.alpha = cfg.lr > 0.0 ? cfg.lr : default_lr("tn");
    tc.lambda = cfg.lambda >= 0.0 ? cfg.lambda : default_lambda("tn");
    tc.seed = cell.seed;
    tc.loss_kind = cfg.tn_loss;
    tc.squared_reg = cfg.squared_reg;
    const auto observe = [&](int, const tn::TnModel& m) {
      rec.val_acc_curve.push_back(
          accuracy(tn_predictions(m, data.val), data.val.labels));
    };
    try {
      const tn::TnModel m = tn::fit(data.train, tc, observe);
      stop_clock();
      rec.loss_curve = m.loss_history;
      rec.final_loss =
          m.loss_history.empty() ? tn::loss(m, data.train) : m.loss_history.back();
      fill_metrics(rec, tn_predictions(m, data.train),
                   tn_predictions(m, data.val), data.train, data.val);
      rec.stored_params = tn::stored_params(m);
      fill_best_epoch(rec);
      if (serialized_model) *serialized_model = tn::serialize(m);
    } catch (const std::runtime_error&) {
      stop_clock();
      mark_aborted(rec);
    }
    return rec;
  }

  rec.param_count = vqc::count_params(cell.components, cell.sweep);
  vqc::VqcTrainConfig vc;
  vc.layers = cell.sweep;
  vc.epochs = epochs;
  vc.batch_size = cfg.batch_size;
  vc.lr0 = cfg.lr > 0.0 ? cfg.lr : default_lr("vqc");
  vc.decay = cfg.decay;
  vc.seed = cell.seed;
  vc.threshold = cfg.threshold;
  vc.signed_output = cfg.signed_output;
  vc.grad = cfg.grad;
  const auto observe = [&](int, const vqc::VqcParams& p) {
    rec.val_acc_curve.push_back(
        accuracy(vqc_predictions(p, data.val), data.val.labels));
  };
  try {
    const vqc::VqcParams p = vqc::fit(data.train, vc, observe);
    stop_clock();
    rec.loss_curve = p.loss_history;
    rec.final_loss = p.loss_history.empty()
                         ? vqc::mse_loss(data.train, p, cfg.signed_output)
                         : p.loss_history.back();
    fill_metrics(rec, vqc_predictions(p, data.train),
                 vqc_predictions(p, data.val), data.train, data.val);
    rec.stored_params = vqc::stored_params(p);
    fill_best_epoch(rec);
    if (serialized_model) *serialized_model = vqc::serialize(p);
  } catch (const std::runtime_error&) {
    stop_clock();
    mark_aborted(rec);
  }
  return rec;
}

std::vector<ResultRecord> run_grid(const ExperimentConfig& cfg) {
  const std::vector<CellSpec> cells = grid_cells(cfg);
  const LabeledDataset encoded = load_car_dataset(cfg.data_path);

  // One prepared split per (components, scaled?) pair, shared read-only
  // across worker threads.
  std::map<std::pair<int, bool>, PreparedCell> prepared;
  for (const auto& cell : cells) {
    const bool scaled = cell.model == "vqc" || cfg.scale_tn;
    const auto key = std::make_pair(cell.components, scaled);
    if (!prepared.count(key)) {
      prepared.emplace(key,
                       prepare_features(encoded, cell.components,
                                        cfg.split_seed, scaled, cfg.pca_fit_all));
    }
  }

  std::vector<ResultRecord> rows(cells.size());
  const auto cell_data = [&](const CellSpec& c) -> const PreparedCell& {
    const bool scaled = c.model == "vqc" || cfg.scale_tn;
    return prepared.at(std::make_pair(c.components, scaled));
  };

  const int workers = std::max(
      1, std::min(cfg.workers, static_cast<int>(cells.size())));
  if (workers == 1) {
    for (size_t i = 0; i < cells.size(); ++i) {
      rows[i] = run_cell(cells[i], cell_data(cells[i]), cfg);
    }
  } else {
    std::atomic<size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    const auto body = [&] {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        try {
          rows[i] = run_cell(cells[i], cell_data(cells[i]), cfg);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::sort(rows.begin(), rows.end(),
            [](const ResultRecord& a, const ResultRecord& b) {
              if (a.model != b.model) return a.model < b.model;
              if (a.components != b.components) return a.components < b.components;
              if (a.sweep != b.sweep) return a.sweep < b.sweep;
              return a.seed < b.seed;
            });
  write_grid_outputs(rows, cfg);
  return rows;
}

std::string render_results_csv(const std::vector<ResultRecord>& rows,
                               bool real_timings) {
  std::string out =
      "model,components,sweep,param_count,seed,train_acc,val_acc,train_f1,"
      "val_f1,epochs,seconds,final_loss,status\n";
  for (const auto& r : rows) {
    out += r.model;
    out += ',' + std::to_string(r.components);
    out += ',' + std::to_string(r.sweep);
    out += ',' + std::to_string(r.param_count);
    out += ',' + std::to_string(r.seed);
    out += ',' + fmt17(r.train_acc);
    out += ',' + fmt17(r.val_acc);
    out += ',' + fmt17(r.train_f1);
    out += ',' + fmt17(r.val_f1);
    out += ',' + std::to_string(r.epochs);
    out += ',' + fmt_fixed(real_timings ? r.seconds : 0.0, 3);
    out += ',' + fmt17(r.final_loss);
    out += ',' + r.status;
    out += '\n';
  }
  return out;
}

namespace {

ordered_json record_to_json(const ResultRecord& r) {
  ordered_json j;
  j["model"] = r.model;
  j["components"] = r.components;
  j["sweep"] = r.sweep;
  j["param_count"] = r.param_count;
  j["seed"] = r.seed;
  j["train_acc"] = r.train_acc;
  j["val_acc"] = r.val_acc;
  j["train_f1"] = r.train_f1;
  j["val_f1"] = r.val_f1;
  j["epochs"] = r.epochs;
  j["wall_seconds"] = r.seconds;
  j["final_loss"] = r.final_loss;
  j["status"] = r.status;
  j["stored_params"] = r.stored_params;
  j["best_epoch"] = r.best_epoch;
  j["best_val_acc"] = r.best_val_acc;
  j["clamped_values"] = r.clamped_values;
  j["loss_curve"] = r.loss_curve;
  j["val_acc_curve"] = r.val_acc_curve;
  return j;
}

double json_double(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return kNan;
  return j[key].get<double>();
}

std::vector<double> json_curve(const ordered_json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  for (const auto& v : j[key]) out.push_back(v.is_null() ? kNan : v.get<double>());
  return out;
}

ResultRecord record_from_json(const ordered_json& j) {
  ResultRecord r;
  r.model = j.value("model", std::string());
  r.components = j.value("components", 0);
  r.sweep = j.value("sweep", 0);
  r.param_count = j.value("param_count", 0LL);
  r.seed = j.value("seed", std::uint64_t{0});
  r.train_acc = json_double(j, "train_acc");
  r.val_acc = json_double(j, "val_acc");
  r.train_f1 = json_double(j, "train_f1");
  r.val_f1 = json_double(j, "val_f1");
  r.epochs = j.value("epochs", 0);
  r.seconds = json_double(j, "wall_seconds");
  r.final_loss = json_double(j, "final_loss");
  r.status = j.value("status", std::string("ok"));
  r.stored_params = j.value("stored_params", 0LL);
  r.best_epoch = j.value("best_epoch", 0);
  r.best_val_acc = json_double(j, "best_val_acc");
  r.clamped_values = j.value("clamped_values", 0);
  r.loss_curve = json_curve(j, "loss_curve");
  r.val_acc_curve = json_curve(j, "val_acc_curve");
  return r;
}

std::string plot_sweep_csv(const std::vector<GroupStat>& groups) {
  std::string out = "model,components,sweep,val_acc_mean,val_acc_min,val_acc_max\n";
  for (const auto& g : groups) {
    out += g.model + ',' + std::to_string(g.components) + ',' +
           std::to_string(g.sweep) + ',' + fmt17(g.mean) + ',' + fmt17(g.lo) +
           ',' + fmt17(g.hi) + '\n';
  }
  return out;
}

std::string plot_params_csv(const std::vector<GroupStat>& groups) {
  std::string out =
      "model,components,param_count,val_acc_mean,val_acc_min,val_acc_max\n";
  for (const auto& g : groups) {
    out += g.model + ',' + std::to_string(g.components) + ',' +
           std::to_string(g.param_count) + ',' + fmt17(g.mean) + ',' +
           fmt17(g.lo) + ',' + fmt17(g.hi) + '\n';
  }
  return out;
}

std::string report_text(const std::vector<GroupStat>& groups,
                        const TrendReport& trend) {
  std::ostringstream s;
  s << "benchmark grid report\n";
  s << "=====================\n\n";
  s << "validation accuracy by cell (mean and range over seeds)\n\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-5s %-10s %-6s %-12s %-5s %-8s %-8s %-8s\n",
                "model", "components", "sweep", "param_count", "n", "mean",
                "min", "max");
  s << line;
  for (const auto& g : groups) {
    std::snprintf(line, sizeof line,
                  "%-5s %-10d %-6d %-12lld %-5d %-8.4f %-8.4f %-8.4f\n",
                  g.model.c_str(), g.components, g.sweep, g.param_count, g.n,
                  g.mean, g.lo, g.hi);
    s << line;
  }
  s << "\ntrend check\n-----------\n" << (trend.text.empty() ? "(none)\n" : trend.text);
  return s.str();
}

}  // namespace

void write_derived_outputs(const std::vector<ResultRecord>& rows,
                           const std::string& out_dir, bool real_timings,
                           bool write_svg) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_file(dir / "results.csv", render_results_csv(rows, real_timings));
  const std::vector<GroupStat> groups = aggregate(rows);
  write_file(dir / "plot_accuracy_vs_sweep.csv", plot_sweep_csv(groups));
  write_file(dir / "plot_accuracy_vs_params.csv", plot_params_csv(groups));
  if (write_svg) {
    write_file(dir / "accuracy_vs_sweep.svg",
               svg_chart("validation accuracy vs sweep value",
                         "layers (vqc) / rank (tn)", "validation accuracy",
                         chart_series(groups, false), false));
    write_file(dir / "accuracy_vs_params.svg",
               svg_chart("validation accuracy vs trainable parameters",
                         "trainable parameters", "validation accuracy",
                         chart_series(groups, true), true));
  }
  write_file(dir / "report.txt", report_text(groups, trend_report(rows)));
}

void write_grid_outputs(const std::vector<ResultRecord>& rows,
                        const ExperimentConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_derived_outputs(rows, cfg.out_dir, cfg.real_timings, cfg.write_svg);

  const TrendReport trend = trend_report(rows);

  ordered_json j;
  ordered_json jc;
  jc["model"] = cfg.model;
  jc["components"] = cfg.components;
  jc["layers"] = cfg.layers;
  jc["ranks"] = cfg.ranks;
  jc["seeds"] = cfg.seeds;
  jc["data_path"] = cfg.data_path;
  jc["out_dir"] = cfg.out_dir;
  jc["epochs"] = cfg.epochs;
  jc["lr"] = cfg.lr;
  jc["lambda"] = cfg.lambda;
  jc["batch_size"] = cfg.batch_size;
  jc["decay"] = cfg.decay;
  jc["split_seed"] = cfg.split_seed;
  jc["scale_tn"] = cfg.scale_tn;
  jc["pca_fit_all"] = cfg.pca_fit_all;
  jc["real_timings"] = cfg.real_timings;
  jc["workers"] = cfg.workers;
  jc["tn_loss"] = loss_name(cfg.tn_loss);
  jc["squared_reg"] = cfg.squared_reg;
  jc["signed_output"] = cfg.signed_output;
  jc["threshold"] = cfg.threshold;
  jc["grad"] = grad_name(cfg.grad);
  j["config"] = jc;
  j["records"] = ordered_json::array();
  for (const auto& r : rows) j["records"].push_back(record_to_json(r));
  j["trend"] = {{"computable", trend.computable},
                {"holds", trend.holds},
                {"text", trend.text}};
  write_file(dir / "results.json", j.dump(2) + "\n");
}

std::vector<ResultRecord> read_results_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open results file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot parse " + path + ": " + e.what());
  }
  std::vector<ResultRecord> rows;
  if (!j.contains("records")) {
    throw std::runtime_error("no records array in " + path);
  }
  for (const auto& rj : j["records"]) rows.push_back(record_from_json(rj));
  return rows;
}

TrendReport trend_report(const std::vector<ResultRecord>& rows) {
  // Best finished cell per (model, components).
  std::map<std::pair<std::string, int>, double> best;
  for (const auto& r : rows) {
    if (r.status != "ok" || !std::isfinite(r.val_acc)) continue;
    const auto key = std::make_pair(r.model, r.components);
    auto it = best.find(key);
    if (it == best.end() || r.val_acc > it->second) best[key] = r.val_acc;
  }

  TrendReport out;
  std::ostringstream text;
  bool all_hold = true;
  // At few components the circuit model is expected to lead; with many
  // components the tensor model is.
  const std::vector<std::pair<int, std::string>> checks = {
      {2, "vqc"}, {5, "vqc"}, {16, "tn"}};
  for (const auto& [comp, expect_leader] : checks) {
    const auto tn_it = best.find({"tn", comp});
    const auto vqc_it = best.find({"vqc", comp});
    if (tn_it == best.end() || vqc_it == best.end()) {
      text << "components " << comp << ": not comparable (need both models)\n";
      continue;
    }
    const double tn_best = tn_it->second;
    const double vqc_best = vqc_it->second;
    const double lead = expect_leader == "vqc" ? vqc_best : tn_best;
    const double lag = expect_leader == "vqc" ? tn_best : vqc_best;
    const bool ok = lead >= lag;
    out.computable = true;
    if (!ok) all_hold = false;
    text << "components " << comp << ": best val acc vqc "
         << fmt_fixed(vqc_best, 4) << " vs tn " << fmt_fixed(tn_best, 4)
         << " -> expected " << expect_leader << " ahead: "
         << (ok ? "yes" : "NO (flagged)") << "\n";
  }
  out.holds = out.computable && all_hold;
  if (out.computable) {
    text << (out.holds ? "trend holds\n"
                       : "trend violated for this seed set (flagged, not a "
                         "hard failure)\n");
  } else {
    text << "trend not computable from these records\n";
  }
  out.text = text.str();
  return out;
}

void emit_scree(const std::string& dataset_path, int max_components,
                const std::string& out_path) {
  const LabeledDataset ds = load_car_dataset(dataset_path);
  if (max_components < 1 || max_components > ds.dim()) {
    throw std::invalid_argument(
        "max_components must lie in [1, " + std::to_string(ds.dim()) +
        "], got " + std::to_string(max_components));
  }
  const PcaModel m = pca_fit(ds.features, max_components);
  std::string text = "component,ratio\n";
  for (const auto& [index, ratio] : scree(m)) {
    text += std::to_string(index) + ',' + fmt17(ratio) + '\n';
  }
  write_file(fs::path(out_path), text);
}

}  // namespace tnvq
