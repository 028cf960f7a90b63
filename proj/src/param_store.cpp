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

#include "optbench/param_store.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_set>

#include "optbench/error.hpp"

namespace optbench {

std::string_view to_string(Tag tag) {
  switch (tag) {
    case Tag::weight: return "weight";
    case Tag::bias: return "bias";
    case Tag::bn_scale: return "bn_scale";
    case Tag::bn_shift: return "bn_shift";
  }
  return "?";
}

Tag parse_tag(std::string_view text) {
  for (Tag t : kAllTags) {
    if (to_string(t) == text) return t;
  }
  fail(ErrorCode::ValidationError, "unknown tag '" + std::string(text) + "'");
}

std::vector<Tag> TagSet::tags() const {
  std::vector<Tag> out;
  for (Tag t : kAllTags) {
    if (contains(t)) out.push_back(t);
  }
  return out;
}

ParamStore ParamStore::build(std::vector<ParamGroup> groups) {
  if (groups.empty()) fail(ErrorCode::InvalidConfig, "a parameter store needs at least one group");
  std::unordered_set<std::string> seen;
  for (const auto& g : groups) {
    if (!seen.insert(g.name).second) fail(ErrorCode::DuplicateGroupName, "group '" + g.name + "' appears twice");
    if (g.shape.empty()) fail(ErrorCode::ShapeMismatch, "group '" + g.name + "' has an empty shape");
    std::size_t product = 1;
    for (std::size_t d : g.shape) {
      if (d == 0) fail(ErrorCode::ShapeMismatch, "group '" + g.name + "' has a zero dimension");
      product *= d;
    }
    if (g.values.empty() || product != g.values.size()) {
      fail(ErrorCode::ShapeMismatch, "group '" + g.name + "' holds " + std::to_string(g.values.size()) +
                                         " values but its shape implies " + std::to_string(product));
    }
  }
  ParamStore store;
  store.groups_ = std::move(groups);
  return store;
}

std::size_t ParamStore::total_count() const {
  return std::accumulate(groups_.begin(), groups_.end(), std::size_t{0},
                         [](std::size_t acc, const ParamGroup& g) { return acc + g.values.size(); });
}

std::optional<std::size_t> ParamStore::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].name == name) return i;
  }
  return std::nullopt;
}

const ParamGroup& ParamStore::group(std::string_view name) const {
  auto idx = index_of(name);
  if (!idx) fail(ErrorCode::UnknownGroupName, "no group named '" + std::string(name) + "'");
  return groups_[*idx];
}

std::span<double> ParamStore::values(std::string_view name) {
  auto idx = index_of(name);
  if (!idx) fail(ErrorCode::UnknownGroupName, "no group named '" + std::string(name) + "'");
  return groups_[*idx].values;
}

std::vector<std::string> select_groups(const ParamStore& store, TagSet tags) {
  std::vector<std::string> out;
  for (const auto& g : store.groups()) {
    if (tags.contains(g.tag)) out.push_back(g.name);
  }
  return out;
}

double l2_norm(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

double global_l2_norm(const ParamStore& store, std::span<const std::string> names) {
  double sum = 0.0;
  for (const auto& name : names) {
    for (double v : store.group(name).values) sum += v * v;
  }
  return std::sqrt(sum);
}

}  // namespace optbench
