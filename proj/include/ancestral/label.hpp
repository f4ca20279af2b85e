#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ancestral {

/// Dense label index within one LabelUniverse.
using LabelId = std::int32_t;

inline constexpr LabelId kNoLabel = -1;

struct Label {
  LabelId id = kNoLabel;
  std::string display_name;
  bool synthetic = false;
};

/// Interning table for taxon names. Ids are contiguous from 0 in
/// insertion order, so per-label data can live in plain vectors.
class LabelUniverse {
 public:
  /// Returns the id of `name`, adding it as a non-synthetic label if new.
  LabelId intern(std::string_view name);

  /// Adds a label that is guaranteed not to collide with any existing name.
  /// Throws std::invalid_argument if `name` is already taken.
  LabelId add_synthetic(std::string name);

  std::optional<LabelId> find(std::string_view name) const;

  const Label& operator[](LabelId id) const { return labels_[static_cast<std::size_t>(id)]; }
  const std::string& name(LabelId id) const { return (*this)[id].display_name; }
  bool synthetic(LabelId id) const { return (*this)[id].synthetic; }
  std::size_t size() const { return labels_.size(); }
  bool contains(LabelId id) const { return id >= 0 && static_cast<std::size_t>(id) < labels_.size(); }

  std::size_t synthetic_count() const { return synthetic_count_; }

 private:
  std::vector<Label> labels_;
  std::unordered_map<std::string, LabelId> index_;
  std::size_t synthetic_count_ = 0;
};

}  // namespace ancestral
