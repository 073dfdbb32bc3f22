#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rre/engine.hpp"
#include "rre/evaluation.hpp"
#include "rre/matrix.hpp"

namespace rre {

/// File-level failure with path (and line, when known) in the message.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FileFormat { DenseCsv, Coord };

/// DenseCsv: comma-separated numeric rows; an optional header row carries
/// column identifiers and an optional leading column carries row identifiers.
/// Coord: '%' comment lines, then a "n_rows n_cols nnz" header line, then nnz
/// lines "i j value" with 1-based indices; unlisted entries are zero and
/// duplicate coordinates are an error.
AdjacencyMatrix load_matrix(const std::string& path, FileFormat format);

/// Writes with 17 significant digits, so a load after save is bit-faithful.
/// Coord files carry no identifiers; saving an id-bearing matrix as Coord is
/// an error rather than a silent drop.
void save_matrix(const AdjacencyMatrix& a, const std::string& path, FileFormat format);

/// Raw rows of an "identifier,class" CSV, classes mapped to dense indices in
/// order of first appearance.
struct LabelAssignment {
  std::vector<std::string> identifiers;
  std::vector<int> classes;
  std::vector<std::string> class_names;
};

LabelAssignment load_labels(const std::string& path);

/// Matches labels to matrix rows: by identifier when the matrix carries row
/// ids, positionally otherwise. Every row must receive a class.
std::vector<int> align_labels(const LabelAssignment& labels, const AdjacencyMatrix& a);

/// Adjacency data plus class assignments for one or both modes.
struct LabeledDataset {
  AdjacencyMatrix matrix;
  std::optional<std::vector<int>> row_classes;
  std::optional<std::vector<int>> col_classes;
  std::vector<std::string> class_names;
  std::string provenance;
};

/// JSON document: format_version, full config echo, seeds, grids, every curve
/// as (x, y, spread) triples, raw samples and wall-clock metadata.
/// load_results(save_results(rs)) compares equal to rs.
void save_results(const ResultSet& rs, const std::string& path);
ResultSet load_results(const std::string& path);

/// Plot-ready table: curve,x,y,spread with full round-trip precision.
void save_curves_csv(const ResultSet& rs, const std::string& path);

/// Per-iteration table of a convergence trace.
void save_trace_csv(const ConvergenceTrace& trace, const std::string& path);

}  // namespace rre
