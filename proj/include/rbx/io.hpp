#ifndef RBX_IO_HPP
#define RBX_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbx/mdl.hpp"
#include "rbx/types.hpp"

namespace rbx::io {

enum class DataFormat { csv, json };

// Chooses the format from the file extension (.csv / .json).
DataFormat format_from_path(const std::string& path);

// CSV: one vector per row; an optional final weight column is enabled either
// by a header row whose last field is "weight" or by `csv_weight_column`.
// JSON: {"dim": n, "vectors": [[...], ...], "weights": [...]} with weights
// optional. Malformed input raises ParseError carrying the location.
Dataset ingest_dataset(const std::string& path, DataFormat format,
                       bool csv_weight_column = false);

Dataset parse_csv(std::istream& in, bool csv_weight_column,
                  const std::string& origin);
Dataset parse_json_dataset(const std::string& text, const std::string& origin);

struct RunConfig {
  std::optional<std::size_t> ambient_dim;
  double lambda = 0.0;
  std::string loss_kind = "identity";
  double loss_scale = 1.0;
  double tol = kDefaultTol;
  std::optional<int> rank_bound;  // defaults to the ambient dimension
  std::uint64_t seed = 0;
  std::vector<Vector> initial_basis;  // orthonormalized on load; empty = {0}

  LossSpec loss() const;
  // Resolves defaults against the dataset dimension and validates agreement.
  MdlConfig mdl(std::size_t data_dim) const;
  Subspace initial_space(std::size_t data_dim) const;
  std::size_t resolve_dim(std::size_t data_dim) const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin);

}  // namespace rbx::io

#endif  // RBX_IO_HPP
