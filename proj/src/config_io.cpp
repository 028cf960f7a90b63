// Copyright 2026 The optbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "optbench/config_io.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "optbench/error.hpp"

namespace optbench {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorCode::ValidationError, (path.empty() ? std::string("<root>") : path) + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads fields of one JSON object and rejects any key that was never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : obj_(j), path_(std::move(path)) {
    if (!obj_.is_object()) invalid(path_, "expected an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return obj_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) invalid(join(path_, key), "required field missing");
    return obj_.at(key);
  }

  double real(const std::string& key, double fallback) { return has(key) ? real_from_json(obj_.at(key), join(path_, key)) : fallback; }
  double real(const std::string& key) { return real_from_json(at(key), join(path_, key)); }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    return has(key) ? to_integer(obj_.at(key), join(path_, key)) : fallback;
  }
  std::int64_t integer(const std::string& key) { return to_integer(at(key), join(path_, key)); }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    return to_count(obj_.at(key), join(path_, key));
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    return static_cast<std::uint64_t>(to_count(v, join(path_, key)));
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) invalid(join(path_, key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string()) invalid(join(path_, key), "expected a string");
    return v.get<std::string>();
  }

  std::string child(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!used_.contains(key)) invalid(join(path_, key), "unknown field");
    }
  }

  static std::int64_t to_integer(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
    }
    invalid(path, "expected an integer");
  }

  static std::size_t to_count(const json& v, const std::string& path) {
    const auto i = to_integer(v, path);
    if (i < 0) invalid(path, "expected a non-negative integer");
    return static_cast<std::size_t>(i);
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

// Runs `fn`, turning any library Error into a ValidationError at `path`.
template <typename Fn>
auto at_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    invalid(path, e.what());
  }
}

json reals_to_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(real_to_json(x));
  return out;
}

std::vector<double> reals_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) invalid(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(real_from_json(j[i], path + "." + std::to_string(i)));
  return out;
}

}  // namespace

json real_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  invalid(path, "expected a number");
}

// ---------------------------------------------------------------------------
// param_store

json to_json(const ParamStore& store) {
  json groups = json::array();
  for (const auto& g : store.groups()) {
    groups.push_back({{"name", g.name}, {"tag", std::string(to_string(g.tag))}, {"shape", g.shape},
                      {"values", reals_to_json(g.values)}});
  }
  return groups;
}

ParamStore param_store_from_json(const json& j) {
  if (!j.is_array()) invalid("", "expected a list of parameter groups");
  std::vector<ParamGroup> groups;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = std::to_string(i);
    ObjectReader r(j[i], path);
    ParamGroup g;
    g.name = r.string("name", "");
    g.tag = at_path(r.child("tag"), [&] { return parse_tag(r.string("tag", "")); });
    const json& shape = r.at("shape");
    if (!shape.is_array()) invalid(r.child("shape"), "expected an array");
    for (std::size_t k = 0; k < shape.size(); ++k) g.shape.push_back(ObjectReader::to_count(shape[k], r.child("shape")));
    g.values = reals_from_json(r.at("values"), r.child("values"));
    r.finish();
    groups.push_back(std::move(g));
  }
  return ParamStore::build(std::move(groups));
}

// ---------------------------------------------------------------------------
// optim

json to_json(TagSet tags) {
  json out = json::array();
  for (Tag t : tags.tags()) out.push_back(std::string(to_string(t)));
  return out;
}

TagSet tag_set_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) invalid(path, "expected a list of tags");
  TagSet out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) invalid(path + "." + std::to_string(i), "expected a tag name");
    out.insert(at_path(path + "." + std::to_string(i), [&] { return parse_tag(j[i].get<std::string>()); }));
  }
  return out;
}

json to_json(const OptimizerConfig& c) {
  return {{"kind", std::string(to_string(c.kind))},
          {"momentum", c.momentum},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"epsilon", c.epsilon},
          {"bias_correction", c.bias_correction},
          {"trust_coefficient", c.trust_coefficient},
          {"decay_mode", std::string(to_string(c.decay_mode))},
          {"decay", c.decay},
          {"exclude_tags", to_json(c.exclude_tags)}};
}

namespace {

OptimizerConfig read_optimizer_fields(ObjectReader& r) {
  const auto kind = at_path(r.child("kind"), [&] { return parse_optimizer_kind(r.string("kind", "nesterov")); });
  OptimizerConfig c = OptimizerConfig::defaults_for(kind);
  c.momentum = r.real("momentum", c.momentum);
  c.beta1 = r.real("beta1", c.beta1);
  c.beta2 = r.real("beta2", c.beta2);
  c.epsilon = r.real("epsilon", c.epsilon);
  c.bias_correction = r.boolean("bias_correction", c.bias_correction);
  c.trust_coefficient = r.real("trust_coefficient", c.trust_coefficient);
  if (r.has("decay_mode")) {
    c.decay_mode = at_path(r.child("decay_mode"), [&] { return parse_decay_mode(r.string("decay_mode", "")); });
  }
  c.decay = r.real("decay", c.decay);
  if (r.has("exclude_tags")) c.exclude_tags = tag_set_from_json(r.at("exclude_tags"), r.child("exclude_tags"));
  return c;
}

}  // namespace

OptimizerConfig optimizer_config_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  auto c = read_optimizer_fields(r);
  r.finish();
  return c;
}

json to_json(const RoutingRule& routing) {
  json out = json::array();
  for (const auto& route : routing.routes()) {
    json entry = to_json(route.config);
    entry["tags"] = to_json(route.tags);
    out.push_back(std::move(entry));
  }
  return out;
}

RoutingRule routing_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) invalid(path, "expected a list of routes");
  std::vector<Route> routes;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ObjectReader r(j[i], path + "." + std::to_string(i));
    Route route;
    route.tags = r.has("tags") ? tag_set_from_json(r.at("tags"), r.child("tags")) : TagSet::all();
    route.config = read_optimizer_fields(r);
    r.finish();
    routes.push_back(route);
  }
  return RoutingRule(std::move(routes));
}

// ---------------------------------------------------------------------------
// schedule

json to_json(const ScheduleSpec& s) {
  return {{"family", std::string(to_string(s.family))},
          {"eta_init", s.eta_init},
          {"eta_peak", s.eta_peak},
          {"eta_final", s.eta_final},
          {"p_warmup", s.p_warmup},
          {"p_decay", s.p_decay},
          {"t_warmup", s.t_warmup},
          {"total_steps", s.total_steps}};
}

ScheduleSpec schedule_from_json(const json& j, const std::string& path, std::int64_t default_total_steps) {
  ObjectReader r(j, path);
  ScheduleSpec s;
  s.family = at_path(r.child("family"), [&] { return parse_schedule_family(r.string("family", "poly_warmup_decay")); });
  s.eta_init = r.real("eta_init", s.eta_init);
  s.eta_peak = r.real("eta_peak");
  s.eta_final = r.real("eta_final", s.eta_final);
  s.p_warmup = r.real("p_warmup", s.p_warmup);
  s.p_decay = r.real("p_decay", s.p_decay);
  s.t_warmup = r.integer("t_warmup", s.t_warmup);
  s.total_steps = default_total_steps > 0 ? r.integer("total_steps", default_total_steps) : r.integer("total_steps");
  r.finish();
  return s;
}

// ---------------------------------------------------------------------------
// model

json to_json(const MlpConfig& c) {
  json use_bn = json::array();
  for (bool b : c.use_bn) use_bn.push_back(b);
  return {{"layer_widths", c.layer_widths},
          {"use_bn", use_bn},
          {"bn_gamma_init", reals_to_json(c.bn_gamma_init)},
          {"bn_epsilon", c.bn_epsilon},
          {"bn_stats_decay", c.bn_stats_decay},
          {"virtual_batch_size", c.virtual_batch_size},
          {"label_smoothing", c.label_smoothing},
          {"init_seed", c.init_seed}};
}

MlpConfig mlp_config_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  MlpConfig c;
  if (r.has("layer_widths")) {
    const json& w = r.at("layer_widths");
    if (!w.is_array()) invalid(r.child("layer_widths"), "expected a list of widths");
    c.layer_widths.clear();
    for (std::size_t i = 0; i < w.size(); ++i) {
      c.layer_widths.push_back(ObjectReader::to_count(w[i], r.child("layer_widths." + std::to_string(i))));
    }
  }
  const std::size_t hidden = c.num_hidden();
  c.use_bn.assign(hidden, true);
  if (r.has("use_bn")) {
    const json& u = r.at("use_bn");
    if (u.is_boolean()) {
      c.use_bn.assign(hidden, u.get<bool>());
    } else if (u.is_array()) {
      c.use_bn.clear();
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u[i].is_boolean()) invalid(r.child("use_bn." + std::to_string(i)), "expected true or false");
        c.use_bn.push_back(u[i].get<bool>());
      }
    } else {
      invalid(r.child("use_bn"), "expected a boolean or a list of booleans");
    }
  }
  c.bn_gamma_init.assign(c.num_bn_layers(), 1.0);
  if (r.has("bn_gamma_init")) {
    const json& g = r.at("bn_gamma_init");
    if (g.is_array()) {
      c.bn_gamma_init = reals_from_json(g, r.child("bn_gamma_init"));
    } else {
      c.bn_gamma_init.assign(c.num_bn_layers(), real_from_json(g, r.child("bn_gamma_init")));
    }
  }
  c.bn_epsilon = r.real("bn_epsilon", c.bn_epsilon);
  c.bn_stats_decay = r.real("bn_stats_decay", c.bn_stats_decay);
  c.virtual_batch_size = r.count("virtual_batch_size", c.virtual_batch_size);
  c.label_smoothing = r.real("label_smoothing", c.label_smoothing);
  c.init_seed = r.seed("init_seed", c.init_seed);
  r.finish();
  at_path(path, [&] {
    c.validate();
    return 0;
  });
  return c;
}

json to_json(const DataConfig& c) {
  return {{"classes", c.classes}, {"features", c.features}, {"per_class", c.per_class}, {"spread", c.spread}, {"seed", c.seed}};
}

DataConfig data_config_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  DataConfig c;
  c.classes = r.count("classes", c.classes);
  c.features = r.count("features", c.features);
  c.per_class = r.count("per_class", c.per_class);
  c.spread = r.real("spread", c.spread);
  c.seed = r.seed("seed", c.seed);
  r.finish();
  return c;
}

// ---------------------------------------------------------------------------
// experiment

json to_json(const ExperimentConfig& c) {
  return {{"model", to_json(c.model)},
          {"data", to_json(c.data)},
          {"optimizer", to_json(c.optimizer)},
          {"schedule", to_json(c.schedule)},
          {"budget_steps", c.budget_steps},
          {"batch_size", c.batch_size},
          {"eval_every", c.eval_every},
          {"base_seed", c.base_seed},
          {"target_metric", c.target_metric},
          {"target_value", c.target_value}};
}

ExperimentConfig experiment_from_json(const json& j) {
  ObjectReader r(j, "");
  ExperimentConfig c;
  if (r.has("model")) c.model = mlp_config_from_json(r.at("model"), "model");
  if (r.has("data")) c.data = data_config_from_json(r.at("data"), "data");
  if (r.has("optimizer")) c.optimizer = routing_from_json(r.at("optimizer"), "optimizer");
  c.budget_steps = r.integer("budget_steps");
  c.schedule = schedule_from_json(r.at("schedule"), "schedule", c.budget_steps > 0 ? c.budget_steps : 1);
  c.batch_size = r.count("batch_size", c.batch_size);
  c.eval_every = r.integer("eval_every", c.eval_every);
  c.base_seed = r.seed("base_seed", c.base_seed);
  c.target_metric = r.string("target_metric", c.target_metric);
  c.target_value = r.real("target_value", c.target_value);
  r.finish();
  c.validate();
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  return experiment_from_json(j);
}

// ---------------------------------------------------------------------------
// tuner

json to_json(const SearchDim& d) {
  json out = {{"name", d.name}, {"kind", std::string(to_string(d.kind))}, {"scaling", std::string(to_string(d.scaling))}};
  if (d.kind == DimKind::continuous) {
    out["lo"] = d.lo;
    out["hi"] = d.hi;
  } else {
    out["values"] = d.values;
  }
  return out;
}

SearchDim search_dim_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SearchDim d;
  d.name = r.string("name", "");
  const auto kind = r.string("kind", "continuous");
  if (kind == "continuous") {
    d.kind = DimKind::continuous;
  } else if (kind == "discrete_set") {
    d.kind = DimKind::discrete_set;
  } else {
    invalid(r.child("kind"), "expected continuous or discrete_set");
  }
  const auto scaling = r.string("scaling", "linear");
  if (scaling == "linear") {
    d.scaling = Scaling::linear;
  } else if (scaling == "log") {
    d.scaling = Scaling::log;
  } else {
    invalid(r.child("scaling"), "expected linear or log");
  }
  d.lo = r.real("lo", d.lo);
  d.hi = r.real("hi", d.hi);
  if (r.has("values")) {
    const json& v = r.at("values");
    if (!v.is_array()) invalid(r.child("values"), "expected a list");
    d.values.assign(v.begin(), v.end());
  }
  r.finish();
  at_path(path, [&] {
    d.validate();
    return 0;
  });
  return d;
}

std::vector<SearchDim> search_space_from_json(const json& j) {
  if (!j.is_array()) invalid("", "expected a list of search dimensions");
  std::vector<SearchDim> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(search_dim_from_json(j[i], std::to_string(i)));
  return out;
}

json to_json(const Assignment& assignment) {
  json out = json::array();
  for (const auto& [name, value] : assignment) out.push_back({{"name", name}, {"value", value}});
  return out;
}

Assignment assignment_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) invalid(path, "expected a list of {name, value}");
  Assignment out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ObjectReader r(j[i], path + "." + std::to_string(i));
    auto name = r.string("name", "");
    json value = r.at("value");
    r.finish();
    out.emplace_back(std::move(name), std::move(value));
  }
  return out;
}

json to_json(const TrialRecord& t) {
  json out = {{"trial_index", t.trial_index},
              {"assignment", to_json(t.assignment)},
              {"seed", t.seed},
              {"status", std::string(to_string(t.status))},
              {"steps_run", t.steps_run}};
  if (t.status == TrialStatus::completed) {
    out["final_train_accuracy"] = real_to_json(t.final_train_accuracy);
    out["final_eval_accuracy"] = real_to_json(t.final_eval_accuracy);
    out["final_loss"] = real_to_json(t.final_loss);
  }
  if (t.divergence_step) out["divergence_step"] = *t.divergence_step;
  if (!t.message.empty()) out["message"] = t.message;
  return out;
}

TrialRecord trial_record_from_json(const json& j) {
  ObjectReader r(j, "");
  TrialRecord t;
  t.trial_index = r.integer("trial_index");
  t.assignment = assignment_from_json(r.at("assignment"), "assignment");
  t.seed = r.seed("seed", 0);
  t.status = at_path("status", [&] { return parse_trial_status(r.string("status", "")); });
  t.steps_run = r.integer("steps_run", 0);
  if (t.status == TrialStatus::completed) {
    t.final_train_accuracy = r.real("final_train_accuracy");
    t.final_eval_accuracy = r.real("final_eval_accuracy");
    t.final_loss = r.real("final_loss");
  }
  if (r.has("divergence_step")) t.divergence_step = r.integer("divergence_step");
  t.message = r.string("message", "");
  r.finish();
  return t;
}

json to_json(const SeedSummary& s) {
  return {{"median", real_to_json(s.median)}, {"q1", real_to_json(s.q1)},   {"q3", real_to_json(s.q3)},
          {"min", real_to_json(s.min)},       {"max", real_to_json(s.max)}, {"target_fraction", s.target_fraction},
          {"n_seeds", s.n_seeds}};
}

SeedSummary seed_summary_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SeedSummary s;
  s.median = r.real("median");
  s.q1 = r.real("q1");
  s.q3 = r.real("q3");
  s.min = r.real("min");
  s.max = r.real("max");
  s.target_fraction = r.real("target_fraction");
  s.n_seeds = r.count("n_seeds", 0);
  r.finish();
  return s;
}

json to_json(const HistoryPoint& p) {
  return {{"step", p.step},
          {"train_loss", real_to_json(p.train_loss)},
          {"train_accuracy", real_to_json(p.train_accuracy)},
          {"eval_accuracy", real_to_json(p.eval_accuracy)},
          {"lr", real_to_json(p.lr)}};
}

json to_json(const BnRunningStats& stats) {
  json out = json::array();
  for (const auto& layer : stats.layers) {
    out.push_back({{"running_mean", reals_to_json(layer.running_mean)}, {"running_var", reals_to_json(layer.running_var)}});
  }
  return out;
}

json to_json(const TrainResult& result) {
  json history = json::array();
  for (const auto& p : result.history) history.push_back(to_json(p));
  json out = {{"status", std::string(to_string(result.status))}, {"steps_run", result.steps_run}, {"history", history}};
  if (result.divergence_step) {
    out["divergence_step"] = *result.divergence_step;
    out["message"] = result.message;
  } else {
    out["final_params"] = to_json(result.final_params);
    out["final_bn_stats"] = to_json(result.final_stats);
  }
  return out;
}

// ---------------------------------------------------------------------------
// dotted paths

namespace {

std::vector<std::string> split_path(std::string_view dotted) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : dotted) {
    if (ch == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

json* find_path(json& doc, std::string_view dotted) {
  if (dotted.empty()) return nullptr;
  json* node = &doc;
  for (const auto& part : split_path(dotted)) {
    if (part.empty()) return nullptr;
    if (node->is_object()) {
      auto it = node->find(part);
      if (it == node->end()) return nullptr;
      node = &*it;
    } else if (node->is_array()) {
      std::size_t idx = 0;
      for (char ch : part) {
        if (ch < '0' || ch > '9') return nullptr;
        idx = idx * 10 + static_cast<std::size_t>(ch - '0');
      }
      if (idx >= node->size()) return nullptr;
      node = &(*node)[idx];
    } else {
      return nullptr;
    }
  }
  return node;
}

}  // namespace

bool has_path(const json& doc, std::string_view dotted) {
  return find_path(const_cast<json&>(doc), dotted) != nullptr;
}

void patch_path(json& doc, std::string_view dotted, const json& value) {
  json* node = find_path(doc, dotted);
  if (node == nullptr) fail(ErrorCode::ConfigPathUnknown, "no config field at '" + std::string(dotted) + "'");
  *node = value;
}

ExperimentConfig patched_config(const ExperimentConfig& base, const Assignment& patches) {
  json doc = to_json(base);
  for (const auto& [path, value] : patches) patch_path(doc, path, value);
  return experiment_from_json(doc);
}

}  // namespace optbench
