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

#include "optbench/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "optbench/config_io.hpp"
#include "optbench/error.hpp"

namespace optbench {

SelectMode default_mode(Metric metric) {
  return metric == Metric::final_loss ? SelectMode::min : SelectMode::max;
}

std::vector<AblationRow> run_ablation(const ExperimentConfig& base_config, std::span<const Override> overrides,
                                      std::span<const std::uint64_t> seeds, int workers) {
  const json canonical = to_json(base_config);
  for (const auto& o : overrides) {
    if (!has_path(canonical, o.path)) fail(ErrorCode::ConfigPathUnknown, "no config field at '" + o.path + "'");
  }
  std::vector<std::pair<std::string, ExperimentConfig>> arms;
  arms.emplace_back("Base", base_config);
  for (const auto& o : overrides) arms.emplace_back(o.label, patched_config(base_config, {{o.path, o.value}}));

  const Metric metric = parse_metric(base_config.target_metric);
  const SelectMode mode = default_mode(metric);
  std::vector<AblationRow> rows;
  for (const auto& [label, config] : arms) {
    rows.push_back({label, multi_seed_eval(config, seeds, base_config.target_value, metric, mode, workers)});
  }
  return rows;
}

std::vector<Override> overrides_from_json(const json& j) {
  if (!j.is_array()) fail(ErrorCode::ValidationError, "overrides: expected a list of {label, path, value}");
  std::vector<Override> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string where = "overrides." + std::to_string(i);
    if (!e.is_object() || !e.contains("path") || !e.contains("value") || !e["path"].is_string()) {
      fail(ErrorCode::ValidationError, where + ": needs string 'path' and a 'value'");
    }
    for (const auto& [key, value] : e.items()) {
      if (key != "label" && key != "path" && key != "value") fail(ErrorCode::ValidationError, where + "." + key + ": unknown field");
    }
    const std::string path = e["path"].get<std::string>();
    const std::string label = e.contains("label") && e["label"].is_string() ? e["label"].get<std::string>() : path;
    out.push_back({label, path, e["value"]});
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

void append_trials(const std::filesystem::path& path, std::span<const TrialRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for appending");
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  out.flush();
  if (!out) fail(ErrorCode::IoFailure, "append to '" + path.string() + "' failed");
}

std::vector<TrialRecord> read_trials(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  std::vector<TrialRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(trial_record_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      fail(ErrorCode::CorruptRecord, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_summaries(const std::filesystem::path& path, std::span<const AblationRow> rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json entry = to_json(row.summary);
    entry["label"] = row.label;
    out.push_back(std::move(entry));
  }
  write_text_file(path, out.dump(2) + "\n");
}

std::vector<AblationRow> read_summaries(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::CorruptRecord, path.string() + ": " + e.what());
  }
  if (!doc.is_array()) fail(ErrorCode::CorruptRecord, path.string() + ": expected a list of summaries");
  std::vector<AblationRow> rows;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      json entry = doc[i];
      if (!entry.is_object() || !entry.contains("label") || !entry["label"].is_string()) {
        fail(ErrorCode::ValidationError, "missing label");
      }
      std::string label = entry["label"].get<std::string>();
      entry.erase("label");
      rows.push_back({label, seed_summary_from_json(entry, std::to_string(i))});
    } catch (const Error& e) {
      fail(ErrorCode::CorruptRecord, path.string() + ": entry " + std::to_string(i) + ": " + e.what());
    }
  }
  return rows;
}

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render_text(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << cells[c];
      if (c + 1 < cells.size()) out << std::string(width[c] - cells[c].size() + 2, ' ');
    }
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

}  // namespace

Table report(std::span<const AblationRow> rows) {
  if (rows.empty()) fail(ErrorCode::EmptyInput, "nothing to report");
  const std::vector<std::string> header = {"label", "median", "q1", "q3", "min", "max", "target_fraction", "n"};
  std::vector<std::vector<std::string>> text_rows;
  std::ostringstream csv;
  csv << "label,median,q1,q3,min,max,target_fraction,n\n";
  for (const auto& row : rows) {
    const auto& s = row.summary;
    text_rows.push_back({row.label, fmt("%.4f", s.median), fmt("%.4f", s.q1), fmt("%.4f", s.q3), fmt("%.4f", s.min),
                         fmt("%.4f", s.max), fmt("%.3f", s.target_fraction), std::to_string(s.n_seeds)});
    csv << csv_field(row.label) << ',' << fmt("%.17g", s.median) << ',' << fmt("%.17g", s.q1) << ','
        << fmt("%.17g", s.q3) << ',' << fmt("%.17g", s.min) << ',' << fmt("%.17g", s.max) << ','
        << fmt("%.17g", s.target_fraction) << ',' << s.n_seeds << '\n';
  }
  return {render_text(header, text_rows), csv.str()};
}

Table report(std::span<const TrialRecord> records) {
  if (records.empty()) fail(ErrorCode::EmptyInput, "nothing to report");
  std::vector<const TrialRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TrialRecord* a, const TrialRecord* b) { return a->trial_index < b->trial_index; });

  const std::vector<std::string> header = {"trial", "status", "train_acc", "eval_acc", "loss", "steps", "assignment"};
  std::vector<std::vector<std::string>> text_rows;
  std::ostringstream csv;
  csv << "trial,status,final_train_accuracy,final_eval_accuracy,final_loss,steps_run,assignment\n";
  for (const auto* r : sorted) {
    const bool done = r->status == TrialStatus::completed;
    const std::string assignment = to_json(r->assignment).dump();
    text_rows.push_back({std::to_string(r->trial_index), std::string(to_string(r->status)),
                         done ? fmt("%.4f", r->final_train_accuracy) : "-",
                         done ? fmt("%.4f", r->final_eval_accuracy) : "-", done ? fmt("%.4f", r->final_loss) : "-",
                         std::to_string(r->steps_run), assignment});
    csv << r->trial_index << ',' << to_string(r->status) << ',' << (done ? fmt("%.17g", r->final_train_accuracy) : "")
        << ',' << (done ? fmt("%.17g", r->final_eval_accuracy) : "") << ','
        << (done ? fmt("%.17g", r->final_loss) : "") << ',' << r->steps_run << ',' << csv_field(assignment) << '\n';
  }
  return {render_text(header, text_rows), csv.str()};
}

}  // namespace optbench
