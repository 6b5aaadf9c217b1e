#include "mixpreserve/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace mixpreserve {

namespace {

std::string locate(std::size_t row, std::size_t column) {
  std::ostringstream os;
  os << " (row " << row << ", column " << column << ")";
  return os.str();
}

// split one logical CSV record honoring quotes; `pos` advances past the
// record's trailing newline
std::vector<std::string> split_record(const std::string& text, std::size_t& pos,
                                      std::size_t row) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;
  while (pos < text.size()) {
    const char ch = text[pos];
    if (quoted) {
      if (ch == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
          continue;
        }
        quoted = false;
        ++pos;
        continue;
      }
      field.push_back(ch);
      ++pos;
      continue;
    }
    if (ch == '"') {
      if (!field.empty())
        throw CsvError("quote inside unquoted field", row, fields.size() + 1);
      quoted = true;
      any = true;
      ++pos;
      continue;
    }
    if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      any = true;
      ++pos;
      continue;
    }
    if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
      ++pos;
      break;
    }
    field.push_back(ch);
    any = true;
    ++pos;
  }
  if (quoted) throw CsvError("unterminated quoted field", row, fields.size() + 1);
  if (any || !fields.empty()) fields.push_back(std::move(field));
  return fields;
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

void append_csv_field(std::string& out, const std::string& s) {
  if (!needs_quoting(s)) {
    out += s;
    return;
  }
  out.push_back('"');
  for (const char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
}

double parse_double_cell(const std::string& s, std::size_t row, std::size_t col) {
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  // tolerate surrounding spaces, nothing else
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last)
    throw CsvError("malformed numeric cell \"" + s + "\"", row, col);
  if (!std::isfinite(value))
    throw CsvError("non-finite numeric cell \"" + s + "\"", row, col);
  return value;
}

}  // namespace

CsvError::CsvError(std::string message, std::size_t row_, std::size_t column_)
    : std::runtime_error(message + locate(row_, column_)),
      row(row_),
      column(column_) {}

Schema schema_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid schema JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("columns") || !j["columns"].is_array())
    throw std::invalid_argument("schema JSON must contain a \"columns\" array");
  std::vector<ColumnSpec> cols;
  for (const auto& c : j["columns"]) {
    const std::string kind = c.at("kind").get<std::string>();
    ColumnKind k;
    if (kind == "continuous") {
      k = ColumnKind::kContinuous;
    } else if (kind == "categorical") {
      k = ColumnKind::kCategorical;
    } else {
      throw std::invalid_argument("unknown column kind \"" + kind + "\"");
    }
    cols.push_back({c.at("name").get<std::string>(), k});
  }
  return Schema(std::move(cols));
}

std::string schema_to_json(const Schema& schema) {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : schema.columns()) {
    cols.push_back({{"name", c.name},
                    {"kind", c.kind == ColumnKind::kContinuous ? "continuous"
                                                               : "categorical"}});
  }
  return nlohmann::json{{"columns", cols}}.dump();
}

Schema load_schema(const std::string& path) {
  return schema_from_json(read_file(path));
}

Dataset read_csv(const std::string& text, const Schema& schema) {
  std::size_t pos = 0;
  const auto header = split_record(text, pos, 0);
  if (header.size() != schema.size())
    throw CsvError("header has " + std::to_string(header.size()) +
                       " columns, schema expects " + std::to_string(schema.size()),
                   0, header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] != schema.at(c).name)
      throw CsvError("header name \"" + header[c] + "\" does not match schema \"" +
                         schema.at(c).name + "\"",
                     0, c + 1);
  }

  Dataset out(schema);
  std::vector<double> row_cells(schema.size());
  std::size_t row = 1;
  while (pos < text.size()) {
    const auto fields = split_record(text, pos, row);
    if (fields.empty()) continue;  // blank line
    if (fields.size() != schema.size())
      throw CsvError("row has " + std::to_string(fields.size()) +
                         " fields, expected " + std::to_string(schema.size()),
                     row, fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (schema.at(c).kind == ColumnKind::kContinuous) {
        row_cells[c] = parse_double_cell(fields[c], row, c + 1);
      } else {
        if (fields[c].empty())
          throw CsvError("empty categorical cell", row, c + 1);
        row_cells[c] = out.dict(c).intern(fields[c]);
      }
    }
    out.append_row(row_cells);
    ++row;
  }
  return out;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
  return read_csv(read_file(path), schema);
}

std::string write_csv(const Dataset& data) {
  std::string out;
  const auto& schema = data.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (c) out.push_back(',');
    append_csv_field(out, schema.at(c).name);
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < data.row_count(); ++r) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (c) out.push_back(',');
      if (schema.at(c).kind == ColumnKind::kContinuous) {
        out += format_double(data.cell(r, c));
      } else {
        append_csv_field(out, data.dict(c).label(data.category_id(r, c)));
      }
    }
    out.push_back('\n');
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open \"" + path + "\" for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open \"" + tmp + "\" for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to \"" + tmp + "\"");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const int err = errno;
    std::remove(tmp.c_str());
    throw std::system_error(err, std::generic_category(),
                            "rename \"" + tmp + "\" -> \"" + path + "\"");
  }
}

}  // namespace mixpreserve
