#ifndef MIXPRESERVE_IO_HPP
#define MIXPRESERVE_IO_HPP

#include <stdexcept>
#include <string>

#include "mixpreserve/dataset.hpp"

// Dataset interchange. CSV dialect: comma separator, double-quote escaping,
// mandatory header row, UTF-8, '.' decimal point, no thousands separators.
// Doubles are written in shortest round-trip form so outputs are byte-stable.

namespace mixpreserve {

// Parse/format failure carrying 1-based row/column coordinates
// (row 0 = header).
class CsvError : public std::runtime_error {
 public:
  CsvError(std::string message, std::size_t row, std::size_t column);
  std::size_t row;
  std::size_t column;
};

// {"columns":[{"name":...,"kind":"continuous"|"categorical"},...]}
Schema schema_from_json(const std::string& text);
std::string schema_to_json(const Schema& schema);
Schema load_schema(const std::string& path);

// Header must match the schema column names in order. Categorical labels are
// interned in first-appearance order.
Dataset read_csv(const std::string& text, const Schema& schema);
Dataset load_csv(const std::string& path, const Schema& schema);

std::string write_csv(const Dataset& data);

// shortest round-trip decimal form of v
std::string format_double(double v);

std::string read_file(const std::string& path);

// write via a temp file in the same directory + rename
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace mixpreserve

#endif
