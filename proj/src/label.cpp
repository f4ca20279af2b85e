#include "ancestral/label.hpp"

#include <stdexcept>

namespace ancestral {

LabelId LabelUniverse::intern(std::string_view name) {
  std::string key(name);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const auto id = static_cast<LabelId>(labels_.size());
  labels_.push_back(Label{id, key, false});
  index_.emplace(std::move(key), id);
  return id;
}

LabelId LabelUniverse::add_synthetic(std::string name) {
  if (index_.contains(name)) {
    throw std::invalid_argument("synthetic label collides with existing label '" + name + "'");
  }
  const auto id = static_cast<LabelId>(labels_.size());
  labels_.push_back(Label{id, name, true});
  index_.emplace(std::move(name), id);
  ++synthetic_count_;
  return id;
}

std::optional<LabelId> LabelUniverse::find(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  return std::nullopt;
}

}  // namespace ancestral
