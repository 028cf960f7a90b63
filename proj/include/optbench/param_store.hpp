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

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace optbench {

/// The four roles a parameter vector can play. Exclusion rules for weight
/// decay and layer-wise normalization are expressed over these tags.
enum class Tag : std::uint8_t { weight = 0, bias = 1, bn_scale = 2, bn_shift = 3 };

inline constexpr std::size_t kNumTags = 4;
inline constexpr Tag kAllTags[kNumTags] = {Tag::weight, Tag::bias, Tag::bn_scale, Tag::bn_shift};

std::string_view to_string(Tag tag);
Tag parse_tag(std::string_view text);

class TagSet {
 public:
  constexpr TagSet() = default;
  constexpr TagSet(std::initializer_list<Tag> tags) {
    for (Tag t : tags) insert(t);
  }

  static constexpr TagSet all() { return TagSet{Tag::weight, Tag::bias, Tag::bn_scale, Tag::bn_shift}; }
  static constexpr TagSet none() { return TagSet{}; }

  constexpr void insert(Tag t) { bits_ |= bit(t); }
  constexpr void erase(Tag t) { bits_ &= static_cast<std::uint8_t>(~bit(t)); }
  constexpr bool contains(Tag t) const { return (bits_ & bit(t)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr TagSet complement() const {
    TagSet out;
    out.bits_ = static_cast<std::uint8_t>(~bits_ & 0x0F);
    return out;
  }
  std::vector<Tag> tags() const;

  friend constexpr bool operator==(TagSet, TagSet) = default;

 private:
  static constexpr std::uint8_t bit(Tag t) { return static_cast<std::uint8_t>(1U << static_cast<unsigned>(t)); }
  std::uint8_t bits_ = 0;
};

struct ParamGroup {
  std::string name;
  Tag tag = Tag::weight;
  std::vector<double> values;
  std::vector<std::size_t> shape;

  friend bool operator==(const ParamGroup&, const ParamGroup&) = default;
};

/// Ordered collection of uniquely named parameter groups. Group order is
/// insertion order and is the order every optimizer and serializer uses.
class ParamStore {
 public:
  ParamStore() = default;

  /// Throws DuplicateGroupName, ShapeMismatch, or InvalidConfig (empty input).
  static ParamStore build(std::vector<ParamGroup> groups);

  std::size_t size() const { return groups_.size(); }
  std::size_t total_count() const;

  std::span<const ParamGroup> groups() const { return groups_; }
  const ParamGroup& group(std::size_t index) const { return groups_.at(index); }
  const ParamGroup& group(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::span<double> values(std::size_t index) { return groups_.at(index).values; }
  std::span<const double> values(std::size_t index) const { return groups_.at(index).values; }
  std::span<double> values(std::string_view name);

  friend bool operator==(const ParamStore&, const ParamStore&) = default;

 private:
  std::vector<ParamGroup> groups_;
};

inline ParamStore build_param_store(std::vector<ParamGroup> groups) {
  return ParamStore::build(std::move(groups));
}

/// Names of all groups whose tag is in `tags`, in store order.
std::vector<std::string> select_groups(const ParamStore& store, TagSet tags);

/// sqrt of the sum of squares over the listed groups; 0 for an empty list.
double global_l2_norm(const ParamStore& store, std::span<const std::string> names);

double l2_norm(std::span<const double> values);

}  // namespace optbench
