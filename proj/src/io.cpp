#include "rbx/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rbx/linalg.hpp"

namespace rbx::io {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::string lowered(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_double(const std::string& cell, double& out) {
  std::string t = trimmed(cell);
  if (t.empty()) return false;
  std::size_t consumed = 0;
  try {
    out = std::stod(t, &consumed);
  } catch (const std::exception&) {
    return false;
  }
  return consumed == t.size() && std::isfinite(out);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string current;
  for (char ch : line) {
    if (ch == sep) {
      cells.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  cells.push_back(current);
  return cells;
}

std::string location(const std::string& origin, std::size_t line) {
  return origin + ":" + std::to_string(line);
}

using Json = nlohmann::json;

Json parse_json_text(const std::string& text, const std::string& origin) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw ParseError(origin + ": not valid JSON");
  }
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

DataFormat format_from_path(const std::string& path) {
  auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : lowered(path.substr(dot + 1));
  if (ext == "csv") return DataFormat::csv;
  if (ext == "json") return DataFormat::json;
  throw ParseError(path + ": cannot infer data format from extension '" + ext +
                   "' (expected .csv or .json)");
}

Dataset parse_csv(std::istream& in, bool csv_weight_column,
                  const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;
  bool weight_column = csv_weight_column;
  bool saw_header = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line).empty()) continue;
    std::vector<std::string> cells = split(line, ',');

    if (rows.empty() && !saw_header) {
      bool all_numeric = true;
      double unused;
      for (const std::string& cell : cells) {
        if (!parse_double(cell, unused)) {
          all_numeric = false;
          break;
        }
      }
      if (!all_numeric) {
        saw_header = true;
        if (lowered(trimmed(cells.back())) == "weight") weight_column = true;
        continue;
      }
    }

    std::vector<double> values(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!parse_double(cells[i], values[i])) {
        throw ParseError(location(origin, line_no) + ": column " +
                         std::to_string(i + 1) + ": '" + trimmed(cells[i]) +
                         "' is not a number");
      }
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw ParseError(location(origin, line_no) + ": expected " +
                       std::to_string(rows.front().size()) +
                       " columns, got " + std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
    row_lines.push_back(line_no);
  }

  if (rows.empty()) {
    throw ParseError(origin +
                     ": no data rows; ambient dimension cannot be inferred");
  }
  std::size_t columns = rows.front().size();
  if (weight_column && columns < 2) {
    throw ParseError(origin + ": weight column requested but rows have only " +
                     std::to_string(columns) + " column(s)");
  }
  std::size_t dim = weight_column ? columns - 1 : columns;

  Dataset d(dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double weight = 1.0;
    if (weight_column) {
      weight = rows[r].back();
      rows[r].pop_back();
      if (!(weight > 0.0)) {
        throw ParseError(location(origin, row_lines[r]) +
                         ": weight must be positive, got " +
                         std::to_string(weight));
      }
    }
    d.add(std::move(rows[r]), weight);
  }
  return d;
}

Dataset parse_json_dataset(const std::string& text, const std::string& origin) {
  Json doc = parse_json_text(text, origin);
  if (!doc.is_object()) throw ParseError(origin + ": expected a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_unsigned() ||
      doc["dim"].get<std::uint64_t>() == 0) {
    throw ParseError(origin + ": 'dim' must be a positive integer");
  }
  std::size_t dim = doc["dim"].get<std::size_t>();
  if (!doc.contains("vectors") || !doc["vectors"].is_array()) {
    throw ParseError(origin + ": 'vectors' must be an array of arrays");
  }
  const Json& vectors = doc["vectors"];
  std::vector<double> weights;
  if (doc.contains("weights")) {
    if (!doc["weights"].is_array() || doc["weights"].size() != vectors.size()) {
      throw ParseError(origin +
                       ": 'weights' must be an array matching 'vectors'");
    }
    for (std::size_t i = 0; i < doc["weights"].size(); ++i) {
      const Json& w = doc["weights"][i];
      if (!w.is_number() || !(w.get<double>() > 0.0)) {
        throw ParseError(origin + ": weights[" + std::to_string(i) +
                         "] must be a positive number");
      }
      weights.push_back(w.get<double>());
    }
  }

  Dataset d(dim);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const Json& row = vectors[i];
    if (!row.is_array() || row.size() != dim) {
      throw ParseError(origin + ": vectors[" + std::to_string(i) +
                       "] must be an array of length " + std::to_string(dim));
    }
    Vector coords(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!row[k].is_number()) {
        throw ParseError(origin + ": vectors[" + std::to_string(i) + "][" +
                         std::to_string(k) + "] is not a number");
      }
      coords[k] = row[k].get<double>();
    }
    d.add(std::move(coords), weights.empty() ? 1.0 : weights[i]);
  }
  return d;
}

Dataset ingest_dataset(const std::string& path, DataFormat format,
                       bool csv_weight_column) {
  if (format == DataFormat::csv) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    return parse_csv(in, csv_weight_column, path);
  }
  return parse_json_dataset(read_file(path), path);
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

LossSpec RunConfig::loss() const {
  if (loss_kind == "identity") return LossSpec::identity();
  if (loss_kind == "scaled-log") return LossSpec::scaled_log(loss_scale);
  throw ConfigError("unknown loss kind '" + loss_kind +
                    "' (expected 'identity' or 'scaled-log')");
}

std::size_t RunConfig::resolve_dim(std::size_t data_dim) const {
  if (ambient_dim && *ambient_dim != data_dim) {
    throw DimensionMismatchError(
        "config ambient_dim " + std::to_string(*ambient_dim) +
        " does not match dataset dimension " + std::to_string(data_dim));
  }
  return ambient_dim.value_or(data_dim);
}

MdlConfig RunConfig::mdl(std::size_t data_dim) const {
  std::size_t n = resolve_dim(data_dim);
  int bound = rank_bound.value_or(static_cast<int>(n));
  return MdlConfig(lambda, loss(), tol, bound);
}

Subspace RunConfig::initial_space(std::size_t data_dim) const {
  std::size_t n = resolve_dim(data_dim);
  if (initial_basis.empty()) return Subspace::zero(n, tol);
  return orthonormalize(n, initial_basis, tol);
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  Json doc = parse_json_text(text, origin);
  if (!doc.is_object()) throw ConfigError(origin + ": expected a JSON object");

  RunConfig cfg;
  if (doc.contains("ambient_dim")) {
    if (!doc["ambient_dim"].is_number_unsigned() ||
        doc["ambient_dim"].get<std::uint64_t>() == 0) {
      throw ConfigError(origin + ": 'ambient_dim' must be a positive integer");
    }
    cfg.ambient_dim = doc["ambient_dim"].get<std::size_t>();
  }
  if (!doc.contains("lambda") || !doc["lambda"].is_number()) {
    throw ConfigError(origin + ": 'lambda' is required and must be a number");
  }
  cfg.lambda = doc["lambda"].get<double>();
  if (!(cfg.lambda > 0.0)) {
    throw ConfigError(origin + ": 'lambda' must be positive");
  }
  if (doc.contains("loss")) {
    const Json& loss = doc["loss"];
    if (loss.is_string()) {
      cfg.loss_kind = loss.get<std::string>();
    } else if (loss.is_object()) {
      if (!loss.contains("kind") || !loss["kind"].is_string()) {
        throw ConfigError(origin + ": loss.kind must be a string");
      }
      cfg.loss_kind = loss["kind"].get<std::string>();
      if (loss.contains("scale")) {
        if (!loss["scale"].is_number() || !(loss["scale"].get<double>() > 0.0)) {
          throw ConfigError(origin + ": loss.scale must be a positive number");
        }
        cfg.loss_scale = loss["scale"].get<double>();
      }
    } else {
      throw ConfigError(origin + ": 'loss' must be a string or an object");
    }
  }
  if (doc.contains("tol")) {
    if (!doc["tol"].is_number() || !(doc["tol"].get<double>() > 0.0)) {
      throw ConfigError(origin + ": 'tol' must be a positive number");
    }
    cfg.tol = doc["tol"].get<double>();
  }
  if (doc.contains("rank_bound")) {
    if (!doc["rank_bound"].is_number_integer() ||
        doc["rank_bound"].get<std::int64_t>() < 1) {
      throw ConfigError(origin + ": 'rank_bound' must be a positive integer");
    }
    cfg.rank_bound = static_cast<int>(doc["rank_bound"].get<std::int64_t>());
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ConfigError(origin + ": 'seed' must be a nonnegative integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("initial_basis")) {
    const Json& basis = doc["initial_basis"];
    if (!basis.is_array()) {
      throw ConfigError(origin + ": 'initial_basis' must be an array of vectors");
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Json& row = basis[i];
      if (!row.is_array() || row.empty()) {
        throw ConfigError(origin + ": initial_basis[" + std::to_string(i) +
                          "] must be a nonempty array");
      }
      Vector v(row.size());
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (!row[k].is_number()) {
          throw ConfigError(origin + ": initial_basis[" + std::to_string(i) +
                            "][" + std::to_string(k) + "] is not a number");
        }
        v[k] = row[k].get<double>();
      }
      cfg.initial_basis.push_back(std::move(v));
    }
  }

  // Validate eagerly so malformed configs fail at load time.
  cfg.loss();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_file(path), path);
}

}  // namespace rbx::io
