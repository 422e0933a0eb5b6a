#include "glance/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>

#include "glance/error.hpp"
#include "glance/parallel.hpp"
#include "glance/rng.hpp"

namespace glance {

namespace {

// Views into the flat parameter vector.
struct Layout {
  std::size_t in;
  std::size_t hid;
  std::size_t out;

  [[nodiscard]] auto w1() const -> std::size_t { return 0; }
  [[nodiscard]] auto b1() const -> std::size_t { return hid * in; }
  [[nodiscard]] auto w2() const -> std::size_t { return b1() + hid; }
  [[nodiscard]] auto b2() const -> std::size_t { return w2() + out * hid; }
  [[nodiscard]] auto size() const -> std::size_t { return b2() + out; }
};

auto layout_of(const NetworkModel &m) -> Layout
{
  return {m.input_dim, m.hidden, m.classes};
}

void check_width(const NetworkModel &model, std::span<const double> x)
{
  if (x.size() != model.input_dim) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("model expects {} input feature(s), got {}", model.input_dim, x.size()));
  }
}

struct Activations {
  std::vector<double> input;  // standardised
  std::vector<double> hidden; // tanh outputs
  std::vector<double> logits;
};

void forward(const NetworkModel &m, std::span<const double> x, Activations &a)
{
  const Layout L = layout_of(m);
  const auto &p = m.params;
  a.input.resize(L.in);
  a.hidden.resize(L.hid);
  a.logits.resize(L.out);
  for (std::size_t i = 0; i < L.in; ++i) {
    a.input[i] = (x[i] - m.mean[i]) / m.scale[i];
  }
  for (std::size_t h = 0; h < L.hid; ++h) {
    double acc = p[L.b1() + h];
    for (std::size_t i = 0; i < L.in; ++i) {
      acc += p[L.w1() + h * L.in + i] * a.input[i];
    }
    a.hidden[h] = std::tanh(acc);
  }
  for (std::size_t k = 0; k < L.out; ++k) {
    double acc = p[L.b2() + k];
    for (std::size_t h = 0; h < L.hid; ++h) {
      acc += p[L.w2() + k * L.hid + h] * a.hidden[h];
    }
    a.logits[k] = acc;
  }
}

auto accuracy_of(const NetworkModel &model, std::span<const Sample> samples) -> double
{
  return evaluate(model, samples).accuracy();
}

auto names_of(std::span<const Field> fields) -> std::vector<std::string>
{
  std::vector<std::string> out;
  for (const auto f : fields) {
    out.emplace_back(field_name(f));
  }
  return out;
}

auto percent(double fraction) -> std::string
{
  return fmt::format("{:.2f}", 100.0 * fraction);
}

} // namespace

auto to_samples(std::span<const LabeledItem> items, std::span<const Field> fields) -> std::vector<Sample>
{
  std::vector<Sample> out;
  out.reserve(items.size());
  for (const auto &item : items) {
    out.push_back({select_fields(item.record, fields), item.label});
  }
  return out;
}

auto softmax(std::span<const double> logits) -> std::vector<double>
{
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - top);
    sum += out[k];
  }
  for (auto &v : out) {
    v /= sum;
  }
  return out;
}

auto argmax(std::span<const double> values) -> std::size_t
{
  return static_cast<std::size_t>(std::distance(values.begin(), std::max_element(values.begin(), values.end())));
}

auto NetworkModel::logits(std::span<const double> x) const -> std::vector<double>
{
  check_width(*this, x);
  Activations a;
  forward(*this, x, a);
  return a.logits;
}

auto NetworkModel::probabilities(std::span<const double> x) const -> std::vector<double>
{
  return softmax(logits(x));
}

auto NetworkModel::predict(std::span<const double> x) const -> std::size_t
{
  return argmax(logits(x));
}

auto cross_entropy(const NetworkModel &model, std::span<const Sample> samples, std::vector<double> *gradient)
    -> double
{
  const Layout L = layout_of(model);
  const auto &p = model.params;
  if (gradient != nullptr) {
    gradient->assign(L.size(), 0.0);
  }
  if (samples.empty()) {
    return 0.0;
  }

  Activations a;
  std::vector<double> d_logits(L.out);
  std::vector<double> d_hidden(L.hid);
  double loss = 0.0;
  for (const auto &s : samples) {
    check_width(model, s.x);
    forward(model, s.x, a);
    const double top = *std::max_element(a.logits.begin(), a.logits.end());
    double sum = 0.0;
    for (const double z : a.logits) {
      sum += std::exp(z - top);
    }
    const double log_norm = top + std::log(sum);
    loss += log_norm - a.logits[s.label];
    if (gradient == nullptr) {
      continue;
    }

    auto &g = *gradient;
    for (std::size_t k = 0; k < L.out; ++k) {
      d_logits[k] = std::exp(a.logits[k] - log_norm) - (k == s.label ? 1.0 : 0.0);
      g[L.b2() + k] += d_logits[k];
      for (std::size_t h = 0; h < L.hid; ++h) {
        g[L.w2() + k * L.hid + h] += d_logits[k] * a.hidden[h];
      }
    }
    for (std::size_t h = 0; h < L.hid; ++h) {
      double back = 0.0;
      for (std::size_t k = 0; k < L.out; ++k) {
        back += p[L.w2() + k * L.hid + h] * d_logits[k];
      }
      d_hidden[h] = back * (1.0 - a.hidden[h] * a.hidden[h]);
      g[L.b1() + h] += d_hidden[h];
      for (std::size_t i = 0; i < L.in; ++i) {
        g[L.w1() + h * L.in + i] += d_hidden[h] * a.input[i];
      }
    }
  }

  const double inv = 1.0 / static_cast<double>(samples.size());
  if (gradient != nullptr) {
    for (auto &v : *gradient) {
      v *= inv;
    }
  }
  return loss * inv;
}

auto train(std::span<const Sample> train_set, std::span<const Sample> validation, std::vector<std::string> fields,
           std::vector<std::string> class_names, std::uint64_t seed, const TrainConfig &cfg) -> NetworkModel
{
  if (train_set.empty()) {
    throw Error(ErrorCode::SingleClassTrainSet, "training set is empty");
  }
  const std::size_t dim = train_set.front().x.size();
  std::set<std::size_t> present;
  for (const auto &s : train_set) {
    if (s.x.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "training samples have differing widths");
    }
    if (s.label >= class_names.size()) {
      throw Error(ErrorCode::DimensionMismatch, fmt::format("label {} outside {} classes", s.label,
                                                            class_names.size()));
    }
    present.insert(s.label);
  }
  if (present.size() < 2) {
    throw Error(ErrorCode::SingleClassTrainSet, "training set holds a single class");
  }
  if (!fields.empty() && fields.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("{} field name(s) for {}-wide samples", fields.size(), dim));
  }

  NetworkModel model;
  model.input_dim = dim;
  model.hidden = cfg.hidden;
  model.classes = class_names.size();
  model.fields = std::move(fields);
  model.class_names = std::move(class_names);
  model.seed = seed;

  const double n = static_cast<double>(train_set.size());
  model.mean.assign(dim, 0.0);
  model.scale.assign(dim, 0.0);
  for (const auto &s : train_set) {
    for (std::size_t i = 0; i < dim; ++i) {
      model.mean[i] += s.x[i];
    }
  }
  for (auto &m : model.mean) {
    m /= n;
  }
  for (const auto &s : train_set) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = s.x[i] - model.mean[i];
      model.scale[i] += d * d;
    }
  }
  for (auto &v : model.scale) {
    v = std::sqrt(v / n);
    if (!(v > 0.0)) {
      v = 1.0; // constant feature
    }
  }

  // Glorot-uniform weights, zero biases.
  const Layout L = layout_of(model);
  model.params.assign(L.size(), 0.0);
  Rng rng(seed);
  const double limit1 = std::sqrt(6.0 / static_cast<double>(L.in + L.hid));
  for (std::size_t i = 0; i < L.hid * L.in; ++i) {
    model.params[L.w1() + i] = rng.uniform(-limit1, limit1);
  }
  const double limit2 = std::sqrt(6.0 / static_cast<double>(L.hid + L.out));
  for (std::size_t i = 0; i < L.out * L.hid; ++i) {
    model.params[L.w2() + i] = rng.uniform(-limit2, limit2);
  }

  std::vector<double> velocity(L.size(), 0.0);
  std::vector<double> grad;
  std::vector<double> best = model.params;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    cross_entropy(model, train_set, &grad);
    for (std::size_t i = 0; i < L.size(); ++i) {
      velocity[i] = cfg.momentum * velocity[i] - cfg.learning_rate * grad[i];
      model.params[i] += velocity[i];
    }
    if (validation.empty()) {
      continue;
    }
    const double val = cross_entropy(model, validation);
    if (val < best_val) {
      best_val = val;
      best = model.params;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  if (!validation.empty()) {
    model.params = std::move(best);
  }
  return model;
}

auto train(std::span<const LabeledItem> train_items, std::span<const LabeledItem> validation,
           std::span<const Field> fields, std::vector<std::string> class_names, std::uint64_t seed,
           const TrainConfig &cfg) -> NetworkModel
{
  const auto tr = to_samples(train_items, fields);
  const auto va = to_samples(validation, fields);
  return train(tr, va, names_of(fields), std::move(class_names), seed, cfg);
}

auto ConfusionMatrix::row_sum(std::size_t truth) const -> std::size_t
{
  std::size_t sum = 0;
  for (std::size_t p = 0; p < classes_; ++p) {
    sum += at(truth, p);
  }
  return sum;
}

auto ConfusionMatrix::total() const -> std::size_t
{
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

auto ConfusionMatrix::trace() const -> std::size_t
{
  std::size_t t = 0;
  for (std::size_t k = 0; k < classes_; ++k) {
    t += at(k, k);
  }
  return t;
}

auto ConfusionMatrix::accuracy() const -> double
{
  const std::size_t n = total();
  return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
}

auto evaluate(const NetworkModel &model, std::span<const Sample> samples) -> ConfusionMatrix
{
  ConfusionMatrix cm(model.classes);
  Activations a;
  for (const auto &s : samples) {
    check_width(model, s.x);
    if (s.label >= model.classes) {
      throw Error(ErrorCode::DimensionMismatch,
                  fmt::format("label {} outside the model's {} classes", s.label, model.classes));
    }
    forward(model, s.x, a);
    cm.add(s.label, argmax(a.logits));
  }
  return cm;
}

auto evaluate(const NetworkModel &model, std::span<const LabeledItem> items) -> ConfusionMatrix
{
  std::vector<Field> fields;
  for (const auto &name : model.fields) {
    const auto parsed = parse_fields(name);
    fields.insert(fields.end(), parsed.begin(), parsed.end());
  }
  return evaluate(model, to_samples(items, fields));
}

auto split_sizes(std::size_t n) -> std::array<std::size_t, 3>
{
  constexpr std::array<std::size_t, 3> percents = {55, 10, 35};
  std::array<std::size_t, 3> sizes{};
  std::array<std::size_t, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    sizes[k] = n * percents[k] / 100;
    remainders[k] = n * percents[k] % 100;
    assigned += sizes[k];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
    ++sizes[order[i]];
  }
  return sizes;
}

auto split(const LabeledDataset &dataset, std::uint64_t seed) -> DatasetSplit
{
  const std::size_t n = dataset.items.size();
  if (n < 20) {
    throw Error(ErrorCode::DatasetTooSmall, fmt::format("dataset has {} item(s), need at least 20", n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  const auto sizes = split_sizes(n);
  DatasetSplit out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto &item = dataset.items[order[i]];
    if (i < sizes[0]) {
      out.train.push_back(item);
    } else if (i < sizes[0] + sizes[1]) {
      out.validation.push_back(item);
    } else {
      out.test.push_back(item);
    }
  }
  return out;
}

auto summarize(std::vector<TrialRow> trials) -> TrialSummary
{
  TrialSummary s;
  s.trials = std::move(trials);
  const double n = static_cast<double>(s.trials.size());
  if (s.trials.empty()) {
    return s;
  }
  for (const auto &t : s.trials) {
    s.mean.training += t.training;
    s.mean.test += t.test;
    s.mean.all += t.all;
  }
  s.mean.training /= n;
  s.mean.test /= n;
  s.mean.all /= n;
  if (s.trials.size() > 1) {
    for (const auto &t : s.trials) {
      s.stddev.training += (t.training - s.mean.training) * (t.training - s.mean.training);
      s.stddev.test += (t.test - s.mean.test) * (t.test - s.mean.test);
      s.stddev.all += (t.all - s.mean.all) * (t.all - s.mean.all);
    }
    s.stddev.training = std::sqrt(s.stddev.training / (n - 1));
    s.stddev.test = std::sqrt(s.stddev.test / (n - 1));
    s.stddev.all = std::sqrt(s.stddev.all / (n - 1));
  }
  return s;
}

auto run_trials(const LabeledDataset &dataset, std::span<const Field> fields, std::size_t n_trials,
                std::uint64_t base_seed, const TrainConfig &cfg) -> TrialSummary
{
  if (n_trials == 0) {
    throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  }
  const auto everything = to_samples(dataset.items, fields);
  std::vector<TrialRow> rows(n_trials);
  parallel_for(n_trials, [&](std::size_t t) {
    const std::uint64_t seed = base_seed + t;
    const DatasetSplit parts = split(dataset, seed);
    const auto tr = to_samples(parts.train, fields);
    const auto va = to_samples(parts.validation, fields);
    const auto te = to_samples(parts.test, fields);
    const NetworkModel model = train(tr, va, names_of(fields), dataset.class_names, seed, cfg);
    rows[t] = {accuracy_of(model, tr), accuracy_of(model, te), accuracy_of(model, everything)};
  });
  return summarize(std::move(rows));
}

auto trials_csv(const TrialSummary &summary) -> std::string
{
  std::string out = "trial,training,test,all\n";
  for (std::size_t i = 0; i < summary.trials.size(); ++i) {
    const auto &r = summary.trials[i];
    out += fmt::format("{},{},{},{}\n", i + 1, percent(r.training), percent(r.test), percent(r.all));
  }
  const auto &m = summary.mean;
  const auto &d = summary.stddev;
  out += fmt::format("Average,{},{},{}\n", percent(m.training), percent(m.test), percent(m.all));
  out += fmt::format("std. dev.,{},{},{}\n", percent(d.training), percent(d.test), percent(d.all));
  return out;
}

auto confusion_csv(const ConfusionMatrix &cm, std::span<const std::string> class_names) -> std::string
{
  std::string out = "true\\predicted";
  for (std::size_t k = 0; k < cm.classes(); ++k) {
    out += "," + (k < class_names.size() ? class_names[k] : std::to_string(k));
  }
  out += "\n";
  for (std::size_t t = 0; t < cm.classes(); ++t) {
    out += t < class_names.size() ? class_names[t] : std::to_string(t);
    for (std::size_t p = 0; p < cm.classes(); ++p) {
      out += fmt::format(",{}", cm.at(t, p));
    }
    out += "\n";
  }
  out += fmt::format("accuracy,{:.6f}\n", cm.accuracy());
  return out;
}

auto model_to_json(const NetworkModel &m) -> std::string
{
  const Layout L = layout_of(m);
  auto matrix = [&](std::size_t offset, std::size_t rows, std::size_t cols) {
    auto out = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < rows; ++r) {
      out.push_back(std::vector<double>(m.params.begin() + static_cast<std::ptrdiff_t>(offset + r * cols),
                                        m.params.begin() + static_cast<std::ptrdiff_t>(offset + (r + 1) * cols)));
    }
    return out;
  };
  auto vec = [&](std::size_t offset, std::size_t len) {
    return std::vector<double>(m.params.begin() + static_cast<std::ptrdiff_t>(offset),
                               m.params.begin() + static_cast<std::ptrdiff_t>(offset + len));
  };

  nlohmann::ordered_json j;
  j["format"] = "glance-feedforward";
  j["version"] = NetworkModel::kFormatVersion;
  j["input_dim"] = m.input_dim;
  j["hidden_units"] = m.hidden;
  j["classes"] = m.class_names;
  j["fields"] = m.fields;
  j["hidden_activation"] = "tanh";
  j["output_activation"] = "softmax";
  j["standardization"] = {{"mean", m.mean}, {"scale", m.scale}};
  j["w1"] = matrix(L.w1(), L.hid, L.in);
  j["b1"] = vec(L.b1(), L.hid);
  j["w2"] = matrix(L.w2(), L.out, L.hid);
  j["b2"] = vec(L.b2(), L.out);
  j["seed"] = m.seed;
  return j.dump(2) + "\n";
}

auto model_from_json(std::string_view text) -> NetworkModel
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::MalformedValue, std::string("model JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "glance-feedforward") {
      throw Error(ErrorCode::MalformedValue, "not a glance model document");
    }
    if (j.at("version").get<int>() != NetworkModel::kFormatVersion) {
      throw Error(ErrorCode::MalformedValue, fmt::format("unsupported model version {}", j.at("version").dump()));
    }
    if (j.at("hidden_activation") != "tanh" || j.at("output_activation") != "softmax") {
      throw Error(ErrorCode::MalformedValue, "unsupported activation");
    }
    NetworkModel m;
    m.input_dim = j.at("input_dim").get<std::size_t>();
    m.hidden = j.at("hidden_units").get<std::size_t>();
    m.class_names = j.at("classes").get<std::vector<std::string>>();
    m.classes = m.class_names.size();
    m.fields = j.at("fields").get<std::vector<std::string>>();
    m.mean = j.at("standardization").at("mean").get<std::vector<double>>();
    m.scale = j.at("standardization").at("scale").get<std::vector<double>>();
    m.seed = j.at("seed").get<std::uint64_t>();

    const auto w1 = j.at("w1").get<std::vector<std::vector<double>>>();
    const auto b1 = j.at("b1").get<std::vector<double>>();
    const auto w2 = j.at("w2").get<std::vector<std::vector<double>>>();
    const auto b2 = j.at("b2").get<std::vector<double>>();
    auto shape_ok = [](const std::vector<std::vector<double>> &mat, std::size_t rows, std::size_t cols) {
      return mat.size() == rows && std::all_of(mat.begin(), mat.end(), [&](const auto &r) { return r.size() == cols; });
    };
    if (m.fields.size() != m.input_dim || m.mean.size() != m.input_dim || m.scale.size() != m.input_dim ||
        !shape_ok(w1, m.hidden, m.input_dim) || b1.size() != m.hidden || !shape_ok(w2, m.classes, m.hidden) ||
        b2.size() != m.classes) {
      throw Error(ErrorCode::DimensionMismatch, "model arrays disagree with declared dimensions");
    }
    for (const auto &row : w1) {
      m.params.insert(m.params.end(), row.begin(), row.end());
    }
    m.params.insert(m.params.end(), b1.begin(), b1.end());
    for (const auto &row : w2) {
      m.params.insert(m.params.end(), row.begin(), row.end());
    }
    m.params.insert(m.params.end(), b2.begin(), b2.end());
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::MalformedValue, std::string("model JSON: ") + e.what());
  }
}

} // namespace glance
