#include "glance/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include "glance/binarize.hpp"
#include "glance/classifier.hpp"
#include "glance/error.hpp"
#include "glance/features.hpp"
#include "glance/image_io.hpp"
#include "glance/parallel.hpp"
#include "glance/phantom.hpp"
#include "glance/pores.hpp"

namespace glance::cli {

namespace fs = std::filesystem;

namespace {

struct ImageOptions {
  std::string threshold = "auto";
  std::string polarity = "dark";
};

struct Settings {
  ImageOptions image;
  std::vector<std::string> inputs;
  std::string output;
  std::string format = "csv";
  double k = kDefaultAnomalyFactor;

  // phantom
  std::size_t classes = 3;
  std::size_t n_per_class = 50;
  std::uint64_t seed = 7;
  std::size_t series = 0;
  std::optional<std::size_t> faulty;

  // classify
  std::string data;
  std::string model;
  std::string combo;
  std::size_t trials = 10;
  std::uint64_t data_seed = 7;
  TrainConfig train;
};

auto threshold_config(const ImageOptions &opts) -> ThresholdConfig
{
  const Polarity polarity = opts.polarity == "light" ? Polarity::LightBackground : Polarity::DarkBackground;
  if (opts.threshold == "auto") {
    return ThresholdConfig::otsu(polarity);
  }
  return ThresholdConfig::manual(std::stoi(opts.threshold), polarity);
}

void add_image_options(CLI::App &cmd, ImageOptions &opts)
{
  cmd.add_option("--threshold", opts.threshold, "auto (Otsu) or a fixed cut in 0..255")
      ->check(CLI::IsMember({"auto"}) | CLI::Range(0, 255));
  cmd.add_option("--polarity", opts.polarity, "dark: foreground above the cut; light: at or below")
      ->check(CLI::IsMember({"dark", "light"}));
}

class Emitter {
public:
  Emitter(std::string path, std::ostream &out) : path_(std::move(path)), out_(out) {}

  void emit(std::string_view text) const
  {
    if (path_.empty()) {
      out_ << text;
    } else {
      write_file(path_, text);
    }
  }

private:
  std::string path_;
  std::ostream &out_;
};

struct Extracted {
  std::optional<FeatureRecord> record;
  std::string error;
};

auto extract_all(const std::vector<std::string> &paths, const ThresholdConfig &cfg,
                 const std::vector<std::string> &ids) -> std::vector<Extracted>
{
  std::vector<Extracted> results(paths.size());
  parallel_for(paths.size(), [&](std::size_t i) {
    try {
      results[i].record = extract(load_image(paths[i]), cfg, ids[i]);
    } catch (const std::exception &e) {
      results[i].error = e.what();
    }
  });
  return results;
}

auto cmd_features(const Settings &s, std::ostream &out, std::ostream &err) -> int
{
  std::vector<std::string> paths = s.inputs;
  std::sort(paths.begin(), paths.end());
  const auto results = extract_all(paths, threshold_config(s.image), paths);

  std::vector<FeatureRecord> records;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (results[i].record) {
      records.push_back(*results[i].record);
    } else {
      ++failures;
      err << paths[i] << ": " << results[i].error << "\n";
    }
  }
  if (records.empty()) {
    return kUsageError;
  }
  Emitter(s.output, out).emit(s.format == "json" ? features_json(records) : features_csv(records));
  return failures == 0 ? kSuccess : kPartialFailure;
}

auto cmd_pores(const Settings &s, std::ostream &out) -> int
{
  const BinaryImage bin = binarize(load_image(s.inputs.front()), threshold_config(s.image));
  const PoreMap pores = label_pores(bin);
  std::string text = "pore_id,area_pixels,percent_porousness\n";
  for (const auto &row : per_pore_table(pores, bin.foreground_count())) {
    text += fmt::format("{},{},{}\n", row.id, row.area, format_significant4(row.percent));
  }
  Emitter(s.output, out).emit(text);
  return kSuccess;
}

auto is_slice_file(const fs::path &p) -> bool
{
  const auto ext = p.extension().string();
  return ext == ".pgm" || ext == ".pnm" || ext == ".PGM" || ext == ".PNM";
}

auto cmd_series(const Settings &s, std::ostream &out, std::ostream &err) -> int
{
  const fs::path dir = s.inputs.front();
  if (!fs::is_directory(dir)) {
    err << dir.string() << ": not a directory\n";
    return kUsageError;
  }
  std::vector<std::string> paths;
  std::vector<std::string> ids;
  std::vector<fs::path> entries;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_slice_file(entry.path())) {
      entries.push_back(entry.path());
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const fs::path &a, const fs::path &b) { return a.filename().string() < b.filename().string(); });
  for (const auto &p : entries) {
    paths.push_back(p.string());
    ids.push_back(p.filename().string());
  }

  const auto results = extract_all(paths, threshold_config(s.image), ids);
  std::vector<FeatureRecord> records;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (results[i].record) {
      records.push_back(*results[i].record);
    } else {
      ++failures;
      err << paths[i] << ": " << results[i].error << "\n";
    }
  }
  if (records.size() < 3) {
    err << "series needs at least 3 usable slices, found " << records.size() << "\n";
    return kUsageError;
  }
  Emitter(s.output, out).emit(series_csv(flag_anomalies(std::move(records), s.k)));
  return failures == 0 ? kSuccess : kPartialFailure;
}

auto manifest_header() -> std::string
{
  return "filename,class_label,rows,cols,threshold,u,z,y,w,n_p\n";
}

auto manifest_row(const std::string &file, const std::string &label, const FeatureRecord &r) -> std::string
{
  return fmt::format("{},{},{},{},{},{},{},{},{},{}\n", file, label, r.rows, r.cols, r.threshold, r.u, r.z, r.y, r.w,
                     r.n_p);
}

auto cmd_phantom(const Settings &s, std::ostream &out) -> int
{
  const fs::path dir = s.output;
  fs::create_directories(dir);
  std::string manifest = manifest_header();

  if (s.series > 0) {
    const auto slices = generate_series(PhantomSpec::slice_series(s.series, s.faulty, s.seed));
    for (std::size_t i = 0; i < slices.size(); ++i) {
      const auto &ph = slices[i];
      const std::string file = ph.expected.source_id + ".pgm";
      write_file(dir / file, to_pgm(ph.image));
      manifest += manifest_row(file, s.faulty && *s.faulty == i ? "FAULTY" : "SLICE", ph.expected);
    }
  } else {
    if (s.classes != 2 && s.classes != 3) {
      throw Error(ErrorCode::InvalidArgument, "--classes must be 2 or 3");
    }
    const auto names = class_names(s.classes == 2 ? ClassScheme::Two : ClassScheme::Three);
    const auto images = generate_dataset_images(s.n_per_class, s.seed);
    std::vector<FeatureRecord> records(images.size());
    parallel_for(images.size(), [&](std::size_t i) {
      records[i] = extract(images[i].image, ThresholdConfig::otsu(), images[i].id);
    });
    for (std::size_t i = 0; i < images.size(); ++i) {
      const std::string file = images[i].id + ".pgm";
      write_file(dir / file, to_pgm(images[i].image));
      const std::size_t label = s.classes == 2 ? (images[i].label == 0 ? 0 : 1) : images[i].label;
      manifest += manifest_row(file, names[label], records[i]);
    }
  }
  write_file(dir / "manifest.csv", manifest);
  out << "wrote " << (dir / "manifest.csv").string() << "\n";
  return kSuccess;
}

auto split_csv_line(std::string_view line) -> std::vector<std::string>
{
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) {
      return fields;
    }
    start = comma + 1;
  }
}

auto to_count(const std::string &field, std::string_view what) -> std::size_t
{
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::MalformedValue, fmt::format("{} '{}' is not a count", what, field));
  }
  return value;
}

/// Reads a phantom manifest (or any CSV with the same columns) into a
/// labelled dataset. Class order follows the known 3- or 2-class schemes
/// when the labels fit one, else sorted label order.
auto load_manifest(const std::string &path, std::size_t classes) -> LabeledDataset
{
  const std::string text = read_file(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      end = text.size();
    }
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (!line.empty()) {
      lines.push_back(std::move(line));
    }
    start = end + 1;
  }
  if (lines.empty()) {
    throw Error(ErrorCode::EmptyInput, path + ": empty manifest");
  }

  const auto header = split_csv_line(lines.front());
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    column[header[i]] = i;
  }
  for (const char *required : {"filename", "class_label", "rows", "cols", "threshold", "u", "y", "w", "n_p"}) {
    if (column.count(required) == 0) {
      throw Error(ErrorCode::MalformedHeader, fmt::format("{}: manifest lacks column '{}'", path, required));
    }
  }

  std::vector<std::pair<FeatureRecord, std::string>> rows;
  std::set<std::string> labels;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::RaggedRows, fmt::format("{}: line {} has {} fields", path, i + 1, f.size()));
    }
    auto get = [&](const char *name) { return to_count(f[column[name]], name); };
    FeatureRecord rec = make_record(f[column["filename"]], {get("rows"), get("cols"), static_cast<int>(get("threshold")),
                                                            get("u"), get("y"), get("w"), get("n_p")});
    labels.insert(f[column["class_label"]]);
    rows.emplace_back(std::move(rec), f[column["class_label"]]);
  }

  const auto three = class_names(ClassScheme::Three);
  const auto two = class_names(ClassScheme::Two);
  auto fits = [&](const std::vector<std::string> &scheme) {
    return std::all_of(labels.begin(), labels.end(),
                       [&](const std::string &l) { return std::find(scheme.begin(), scheme.end(), l) != scheme.end(); });
  };

  LabeledDataset ds;
  if (fits(three)) {
    ds.class_names = three;
  } else if (fits(two)) {
    ds.class_names = two;
  } else {
    ds.class_names.assign(labels.begin(), labels.end());
  }
  for (auto &[rec, label] : rows) {
    const auto idx = static_cast<std::size_t>(
        std::find(ds.class_names.begin(), ds.class_names.end(), label) - ds.class_names.begin());
    ds.items.push_back({std::move(rec), idx});
  }

  if (classes == 2 && ds.class_names == three) {
    return to_two_class(ds);
  }
  if (classes != ds.class_names.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("{}: {} class label(s) present, --classes {}", path, ds.class_names.size(), classes));
  }
  return ds;
}

auto classify_dataset(const Settings &s) -> LabeledDataset
{
  if (!s.data.empty()) {
    return load_manifest(s.data, s.classes);
  }
  if (s.classes != 2 && s.classes != 3) {
    throw Error(ErrorCode::InvalidArgument, "--classes must be 2 or 3");
  }
  return generate_dataset(s.n_per_class, s.data_seed, s.classes == 2 ? ClassScheme::Two : ClassScheme::Three);
}

auto cmd_classify_train(const Settings &s, std::ostream &out) -> int
{
  const LabeledDataset ds = classify_dataset(s);
  const auto fields = parse_fields(s.combo);
  const DatasetSplit parts = split(ds, s.seed);
  const NetworkModel model = train(parts.train, parts.validation, fields, ds.class_names, s.seed, s.train);
  write_file(s.model, model_to_json(model));
  const auto cm = evaluate(model, std::span<const LabeledItem>(parts.test));
  out << confusion_csv(cm, model.class_names);
  return kSuccess;
}

auto cmd_classify_eval(const Settings &s, std::ostream &out) -> int
{
  const NetworkModel model = model_from_json(read_file(s.model));
  const LabeledDataset ds = classify_dataset(s);
  if (ds.class_names != model.class_names) {
    throw Error(ErrorCode::DimensionMismatch, "dataset classes differ from the model's classes");
  }
  ConfusionMatrix cm(model.classes);
  if (!s.combo.empty()) {
    const auto fields = parse_fields(s.combo);
    cm = evaluate(model, to_samples(ds.items, fields));
  } else {
    cm = evaluate(model, std::span<const LabeledItem>(ds.items));
  }
  Emitter(s.output, out).emit(confusion_csv(cm, model.class_names));
  return kSuccess;
}

auto cmd_classify_trials(const Settings &s, std::ostream &out) -> int
{
  const LabeledDataset ds = classify_dataset(s);
  const auto fields = parse_fields(s.combo);
  const TrialSummary summary = run_trials(ds, fields, s.trials, s.seed, s.train);
  Emitter(s.output, out).emit(trials_csv(summary));
  return kSuccess;
}

} // namespace

auto format_significant4(double value) -> std::string
{
  if (value == 0.0 || !std::isfinite(value)) {
    return fmt::format("{:.3f}", value);
  }
  const std::string sci = fmt::format("{:.3e}", value);
  const int exponent = std::stoi(sci.substr(sci.find('e') + 1));
  return fmt::format("{:.{}f}", value, std::max(0, 3 - exponent));
}

auto run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) -> int
{
  CLI::App app{"Zero-order binary image features: IPF, compactness, scatterness, porousness"};
  app.name("glance");
  app.require_subcommand(1);
  Settings s;

  auto *features = app.add_subcommand("features", "Feature record per input image (PGM or grid CSV)");
  features->add_option("inputs", s.inputs, "Input images")->required();
  add_image_options(*features, s.image);
  features->add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  features->add_option("-o,--output", s.output, "Write to a file instead of stdout");

  auto *pores = app.add_subcommand("pores", "Per-pore area and porosity table, largest first");
  pores->add_option("input", s.inputs, "Input image")->required()->expected(1);
  add_image_options(*pores, s.image);
  pores->add_option("-o,--output", s.output, "Write to a file instead of stdout");

  auto *series = app.add_subcommand("series", "Slice-series features with average-pore-area anomaly flags");
  series->add_option("dir", s.inputs, "Directory of .pgm slices")->required()->expected(1);
  add_image_options(*series, s.image);
  series->add_option("--k", s.k, "Flag slices whose w_avg exceeds k x median")->check(CLI::PositiveNumber);
  series->add_option("-o,--output", s.output, "Write to a file instead of stdout");

  auto *phantom = app.add_subcommand("phantom", "Write synthetic phantoms plus manifest.csv");
  phantom->add_option("-o,--out", s.output, "Output directory")->required();
  phantom->add_option("--classes", s.classes, "2 or 3 class labelling")->check(CLI::IsMember({2, 3}));
  phantom->add_option("--n", s.n_per_class, "Phantoms per class")->check(CLI::Range(10, 100000));
  phantom->add_option("--seed", s.seed, "Generator seed");
  phantom->add_option("--series", s.series, "Write a slice series of this length instead of a dataset");
  phantom->add_option("--faulty", s.faulty, "Index of the injected ring-only slice");

  auto *classify = app.add_subcommand("classify", "Feed-forward classifier over feature combinations");
  classify->require_subcommand(1);
  auto add_data_options = [&](CLI::App &cmd) {
    cmd.add_option("--data", s.data, "Manifest CSV; omitted means an in-memory phantom dataset");
    cmd.add_option("--classes", s.classes, "2 or 3")->check(CLI::IsMember({2, 3}));
    cmd.add_option("--n", s.n_per_class, "Phantoms per class when --data is omitted")->check(CLI::Range(10, 100000));
    cmd.add_option("--data-seed", s.data_seed, "Phantom seed when --data is omitted");
    cmd.add_option("--seed", s.seed, "Split and training seed (base seed for trials)");
  };
  auto add_train_options = [&](CLI::App &cmd) {
    cmd.add_option("--learning-rate", s.train.learning_rate)->check(CLI::PositiveNumber);
    cmd.add_option("--momentum", s.train.momentum)->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--epochs", s.train.max_epochs)->check(CLI::PositiveNumber);
    cmd.add_option("--patience", s.train.patience)->check(CLI::PositiveNumber);
  };

  auto *ctrain = classify->add_subcommand("train", "Train on a 55/10/35 split and save the model");
  add_data_options(*ctrain);
  add_train_options(*ctrain);
  ctrain->add_option("--combo", s.combo, "C1..C4 or a field list such as ipf,c,w")->required();
  ctrain->add_option("--model", s.model, "Model JSON output path")->required();

  auto *ceval = classify->add_subcommand("eval", "Confusion matrix of a saved model");
  add_data_options(*ceval);
  ceval->add_option("--model", s.model, "Model JSON")->required();
  ceval->add_option("--combo", s.combo, "Feature columns to feed; must match the model width");
  ceval->add_option("-o,--output", s.output, "Write to a file instead of stdout");

  auto *ctrials = classify->add_subcommand("trials", "Repeated split/train/test, one row per trial");
  add_data_options(*ctrials);
  add_train_options(*ctrials);
  ctrials->add_option("--combo", s.combo, "C1..C4 or a field list")->required();
  ctrials->add_option("--trials", s.trials, "Number of trials")->check(CLI::PositiveNumber);
  ctrials->add_option("-o,--output", s.output, "Write to a file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (features->parsed()) {
      return cmd_features(s, out, err);
    }
    if (pores->parsed()) {
      return cmd_pores(s, out);
    }
    if (series->parsed()) {
      return cmd_series(s, out, err);
    }
    if (phantom->parsed()) {
      return cmd_phantom(s, out);
    }
    if (ctrain->parsed()) {
      return cmd_classify_train(s, out);
    }
    if (ceval->parsed()) {
      return cmd_classify_eval(s, out);
    }
    if (ctrials->parsed()) {
      return cmd_classify_trials(s, out);
    }
  } catch (const std::exception &e) {
    err << "glance: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

} // namespace glance::cli
