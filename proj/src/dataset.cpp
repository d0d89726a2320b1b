#include "cubetti/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cubetti {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return cells;
}

void check_label(const std::string& path, std::size_t lineno, const std::string& label) {
  if (label.empty())
    throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": empty label");
  if (label.find(',') != std::string::npos || label.find('\n') != std::string::npos)
    throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": label may not contain commas");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& path, std::size_t lineno, const std::string& cell) {
  try {
    std::size_t used = 0;
    double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": malformed number '" + cell + "'");
  }
}

}  // namespace

bool DatasetManifest::has_split(const std::string& split) const {
  for (const auto& e : entries)
    if (e.split == split) return true;
  return false;
}

DatasetManifest load_manifest(const std::string& path) {
  DatasetManifest manifest;
  std::set<std::string> seen;
  auto lines = read_lines(path);
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    const std::string& line = lines[idx];
    if (line.empty()) continue;
    if (idx == 0 && line == "path,label,split") continue;
    auto cells = split_csv(line);
    if (cells.size() != 3)
      throw std::runtime_error(path + ": line " + std::to_string(idx + 1) +
                               ": expected 3 fields `path,label,split`, got " + std::to_string(cells.size()));
    ManifestEntry entry{cells[0], cells[1], cells[2]};
    if (entry.path.empty())
      throw std::runtime_error(path + ": line " + std::to_string(idx + 1) + ": empty path");
    if (!seen.insert(entry.path).second)
      throw std::runtime_error(path + ": line " + std::to_string(idx + 1) + ": duplicate path '" +
                               entry.path + "'");
    check_label(path, idx + 1, entry.label);
    if (entry.split != "train" && entry.split != "test")
      throw std::runtime_error(path + ": line " + std::to_string(idx + 1) + ": split must be train or test, got '" +
                               entry.split + "'");
    manifest.entries.push_back(std::move(entry));
  }
  if (manifest.entries.empty()) throw std::runtime_error(path + ": empty manifest");
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "path,label,split\n";
  for (const auto& e : manifest.entries) out << e.path << ',' << e.label << ',' << e.split << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

void write_feature_csv(const std::string& path, const std::vector<std::string>& labels,
                       const std::vector<std::vector<int>>& rows) {
  if (labels.size() != rows.size()) throw std::invalid_argument("write_feature_csv: size mismatch");
  if (rows.empty()) throw std::invalid_argument("write_feature_csv: no rows");
  const std::size_t width = rows[0].size();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "label";
  for (std::size_t f = 0; f < width; ++f) {
    char buf[16];
    std::snprintf(buf, sizeof buf, ",f%03zu", f);
    out << buf;
  }
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) throw std::invalid_argument("write_feature_csv: ragged rows");
    out << labels[i];
    for (int v : rows[i]) out << ',' << v;
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

FeatureTable read_feature_csv(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty feature file");
  auto header = split_csv(lines[0]);
  if (header.size() < 2 || header[0] != "label")
    throw std::runtime_error(path + ": malformed header (expected `label,f000,...`)");
  const std::size_t width = header.size() - 1;

  FeatureTable table;
  for (std::size_t idx = 1; idx < lines.size(); ++idx) {
    if (lines[idx].empty()) continue;
    auto cells = split_csv(lines[idx]);
    if (cells.size() != width + 1)
      throw std::runtime_error(path + ": line " + std::to_string(idx + 1) + ": expected " +
                               std::to_string(width + 1) + " fields, got " + std::to_string(cells.size()));
    check_label(path, idx + 1, cells[0]);
    table.labels.push_back(cells[0]);
    std::vector<double> row(width);
    for (std::size_t f = 0; f < width; ++f) row[f] = parse_double(path, idx + 1, cells[f + 1]);
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw std::runtime_error(path + ": feature file has no data rows");
  return table;
}

void write_predictions_csv(const std::string& path, const PredictionTable& table) {
  if (table.y_true.size() != table.probs.size() || table.y_pred.size() != table.probs.size())
    throw std::invalid_argument("write_predictions_csv: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "label,pred";
  for (const auto& c : table.classes) out << ",p_" << c;
  out << '\n';
  for (std::size_t i = 0; i < table.probs.size(); ++i) {
    if (table.probs[i].size() != table.classes.size())
      throw std::invalid_argument("write_predictions_csv: probability row width mismatch");
    out << table.y_true[i] << ',' << table.y_pred[i];
    for (double p : table.probs[i]) out << ',' << format_double(p);
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

PredictionTable read_predictions_csv(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty predictions file");
  auto header = split_csv(lines[0]);
  if (header.size() < 4 || header[0] != "label" || header[1] != "pred")
    throw std::runtime_error(path + ": malformed header (expected `label,pred,p_<class>,...`)");
  PredictionTable table;
  for (std::size_t k = 2; k < header.size(); ++k) {
    if (header[k].rfind("p_", 0) != 0)
      throw std::runtime_error(path + ": malformed probability column '" + header[k] + "'");
    table.classes.push_back(header[k].substr(2));
  }
  for (std::size_t idx = 1; idx < lines.size(); ++idx) {
    if (lines[idx].empty()) continue;
    auto cells = split_csv(lines[idx]);
    if (cells.size() != header.size())
      throw std::runtime_error(path + ": line " + std::to_string(idx + 1) + ": field count mismatch");
    table.y_true.push_back(cells[0]);
    table.y_pred.push_back(cells[1]);
    std::vector<double> row(table.classes.size());
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = parse_double(path, idx + 1, cells[k + 2]);
    table.probs.push_back(std::move(row));
  }
  if (table.probs.empty()) throw std::runtime_error(path + ": predictions file has no data rows");
  return table;
}

}  // namespace cubetti
