#ifndef MIXPRESERVE_DATASET_HPP
#define MIXPRESERVE_DATASET_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

// Column-typed tabular data. Continuous cells are finite doubles; categorical
// cells are integer ids into the column's label dictionary (labels recorded
// in first-appearance order).

namespace mixpreserve {

enum class ColumnKind { kContinuous, kCategorical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind;

  bool operator==(const ColumnSpec&) const = default;
};

class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<ColumnSpec> columns);

  const std::vector<ColumnSpec>& columns() const { return columns_; }
  std::size_t size() const { return columns_.size(); }
  const ColumnSpec& at(std::size_t i) const { return columns_.at(i); }

  // index of a named column, or npos
  std::size_t index_of(const std::string& name) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<std::size_t> continuous_indices() const;
  std::vector<std::size_t> categorical_indices() const;

  bool operator==(const Schema&) const = default;

 private:
  std::vector<ColumnSpec> columns_;
};

class CategoryDict {
 public:
  // id of label, inserting if new
  std::uint32_t intern(const std::string& label);
  // id of label, or npos32 when unknown
  std::uint32_t find(const std::string& label) const;
  const std::string& label(std::uint32_t id) const { return labels_.at(id); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  static constexpr std::uint32_t npos32 = static_cast<std::uint32_t>(-1);

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Cells are stored column-major as doubles; categorical cells hold the id.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(Schema schema);

  const Schema& schema() const { return schema_; }
  std::size_t row_count() const { return rows_; }
  std::size_t column_count() const { return schema_.size(); }

  double cell(std::size_t row, std::size_t col) const {
    return columns_[col][row];
  }
  std::uint32_t category_id(std::size_t row, std::size_t col) const {
    return static_cast<std::uint32_t>(columns_[col][row]);
  }
  const std::vector<double>& column(std::size_t col) const { return columns_[col]; }
  std::vector<double>& mutable_column(std::size_t col) { return columns_[col]; }

  CategoryDict& dict(std::size_t col) { return dicts_[col]; }
  const CategoryDict& dict(std::size_t col) const { return dicts_[col]; }

  // append one row; continuous entries are values, categorical entries ids
  void append_row(const std::vector<double>& cells);
  void reserve(std::size_t rows);

  // empty dataset sharing this schema and its category dictionaries
  Dataset like() const;

 private:
  Schema schema_;
  std::vector<std::vector<double>> columns_;
  std::vector<CategoryDict> dicts_;
  std::size_t rows_ = 0;
};

}  // namespace mixpreserve

#endif
