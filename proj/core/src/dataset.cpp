#include "mixpreserve/dataset.hpp"

#include <stdexcept>
#include <unordered_set>

namespace mixpreserve {

Schema::Schema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("schema needs at least one column");
  std::unordered_set<std::string> seen;
  for (const auto& c : columns_) {
    if (!seen.insert(c.name).second)
      throw std::invalid_argument("duplicate column name \"" + c.name + "\"");
  }
}

std::size_t Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  return npos;
}

std::vector<std::size_t> Schema::continuous_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].kind == ColumnKind::kContinuous) out.push_back(i);
  return out;
}

std::vector<std::size_t> Schema::categorical_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].kind == ColumnKind::kCategorical) out.push_back(i);
  return out;
}

std::uint32_t CategoryDict::intern(const std::string& label) {
  auto it = ids_.find(label);
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(labels_.size());
  labels_.push_back(label);
  ids_.emplace(label, id);
  return id;
}

std::uint32_t CategoryDict::find(const std::string& label) const {
  auto it = ids_.find(label);
  return it == ids_.end() ? npos32 : it->second;
}

Dataset::Dataset(Schema schema)
    : schema_(std::move(schema)),
      columns_(schema_.size()),
      dicts_(schema_.size()) {}

void Dataset::append_row(const std::vector<double>& cells) {
  if (cells.size() != schema_.size())
    throw std::invalid_argument("row width does not match schema");
  for (std::size_t c = 0; c < cells.size(); ++c) columns_[c].push_back(cells[c]);
  ++rows_;
}

void Dataset::reserve(std::size_t rows) {
  for (auto& col : columns_) col.reserve(rows);
}

Dataset Dataset::like() const {
  Dataset out(schema_);
  out.dicts_ = dicts_;
  return out;
}

}  // namespace mixpreserve
