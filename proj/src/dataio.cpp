#include "rre/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rre {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
  throw IoError(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string t = trimmed(field);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool parse_size(const std::string& field, std::size_t& out) {
  const std::string t = trimmed(field);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

AdjacencyMatrix load_dense_csv(const std::string& path) {
  const auto lines = read_lines(path);

  struct Row {
    std::size_t line_no;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (trimmed(lines[k]).empty()) continue;
    rows.push_back({k + 1, split_csv_line(lines[k])});
  }
  if (rows.empty()) throw IoError(path + ": empty matrix file");

  auto fully_numeric = [](const std::vector<std::string>& fields) {
    double v;
    return std::all_of(fields.begin(), fields.end(),
                       [&](const std::string& f) { return parse_double(f, v); });
  };

  const bool header_row = !fully_numeric(rows.front().fields);
  const std::size_t first_data = header_row ? 1 : 0;
  if (first_data >= rows.size()) fail(path, rows.front().line_no, "no data rows");

  double v;
  const bool row_ids = !parse_double(rows[first_data].fields.front(), v);

  std::vector<std::string> col_ids;
  if (header_row) {
    col_ids.assign(rows.front().fields.begin() + (row_ids ? 1 : 0), rows.front().fields.end());
    for (auto& id : col_ids) id = trimmed(id);
  }

  const std::size_t n_cols = rows[first_data].fields.size() - (row_ids ? 1 : 0);
  if (header_row && col_ids.size() != n_cols) {
    fail(path, rows.front().line_no, "header has " + std::to_string(col_ids.size()) +
                                         " identifiers but rows have " + std::to_string(n_cols) +
                                         " values");
  }

  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != n_cols + (row_ids ? 1 : 0)) {
      fail(path, row.line_no, "expected " + std::to_string(n_cols + (row_ids ? 1 : 0)) +
                                  " fields, found " + std::to_string(row.fields.size()));
    }
    std::size_t start = 0;
    if (row_ids) {
      ids.push_back(trimmed(row.fields[0]));
      start = 1;
    }
    for (std::size_t c = start; c < row.fields.size(); ++c) {
      double value;
      if (!parse_double(row.fields[c], value)) {
        fail(path, row.line_no, "field '" + trimmed(row.fields[c]) + "' is not a number");
      }
      if (!std::isfinite(value)) fail(path, row.line_no, "non-finite value");
      if (value < 0.0) fail(path, row.line_no, "negative value " + fmt17(value));
      values.push_back(value);
    }
  }

  AdjacencyMatrix a = AdjacencyMatrix::dense(rows.size() - first_data, n_cols, std::move(values));
  if (row_ids) a.set_row_ids(std::move(ids));
  if (header_row) a.set_col_ids(std::move(col_ids));
  return a;
}

AdjacencyMatrix load_coord(const std::string& path) {
  const auto lines = read_lines(path);

  bool have_header = false;
  std::size_t n_rows = 0, n_cols = 0, nnz = 0;
  std::vector<SparseEntry> entries;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::string line = trimmed(lines[k]);
    const std::size_t line_no = k + 1;
    if (line.empty() || line[0] == '%') continue;

    std::istringstream ss(line);
    if (!have_header) {
      std::string a, b, c, extra;
      ss >> a >> b >> c;
      if (!ss || (ss >> extra)) fail(path, line_no, "expected header 'n_rows n_cols nnz'");
      if (!parse_size(a, n_rows) || !parse_size(b, n_cols) || !parse_size(c, nnz)) {
        fail(path, line_no, "expected header 'n_rows n_cols nnz'");
      }
      if (n_rows == 0 || n_cols == 0) fail(path, line_no, "dimensions must be at least 1");
      have_header = true;
      continue;
    }

    std::string a, b, c, extra;
    ss >> a >> b >> c;
    if (!ss || (ss >> extra)) fail(path, line_no, "expected 'i j value'");
    std::size_t i, j;
    double value;
    if (!parse_size(a, i) || !parse_size(b, j) || !parse_double(c, value)) {
      fail(path, line_no, "expected 'i j value'");
    }
    if (i < 1 || i > n_rows || j < 1 || j > n_cols) {
      fail(path, line_no, "index (" + a + ", " + b + ") out of range");
    }
    if (!std::isfinite(value)) fail(path, line_no, "non-finite value");
    if (value < 0.0) fail(path, line_no, "negative value " + fmt17(value));
    if (!seen.insert({i - 1, j - 1}).second) {
      fail(path, line_no, "duplicate entry (" + a + ", " + b + ")");
    }
    if (entries.size() == nnz) {
      fail(path, line_no, "more than the declared " + std::to_string(nnz) + " entries");
    }
    entries.push_back({i - 1, j - 1, value});
  }

  if (!have_header) throw IoError(path + ": missing 'n_rows n_cols nnz' header");
  if (entries.size() != nnz) {
    throw IoError(path + ": declared " + std::to_string(nnz) + " entries, found " +
                  std::to_string(entries.size()));
  }
  return AdjacencyMatrix::sparse(n_rows, n_cols, std::move(entries));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  return out;
}

json norm_grid_to_json(const std::vector<NormKind>& norms) {
  json arr = json::array();
  for (NormKind n : norms) arr.push_back(to_string(n));
  return arr;
}

std::vector<NormKind> norm_grid_from_json(const json& arr) {
  std::vector<NormKind> norms;
  for (const auto& v : arr) norms.push_back(norm_kind_from_string(v.get<std::string>()));
  return norms;
}

json config_to_json(const RunConfig& cfg) {
  return json{{"alpha", cfg.alpha},
              {"norm", to_string(cfg.norm)},
              {"tolerance", cfg.tolerance},
              {"max_iterations", cfg.max_iterations},
              {"seed", cfg.seed},
              {"diagonal_rescale", cfg.diagonal_rescale},
              {"strict_convergence", cfg.strict_convergence}};
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  cfg.alpha = j.at("alpha").get<double>();
  cfg.norm = norm_kind_from_string(j.at("norm").get<std::string>());
  cfg.tolerance = j.at("tolerance").get<double>();
  cfg.max_iterations = j.at("max_iterations").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.diagonal_rescale = j.at("diagonal_rescale").get<bool>();
  cfg.strict_convergence = j.at("strict_convergence").get<bool>();
  return cfg;
}

json spec_to_json(const BlockSpec& spec) {
  json assignment = json::array();
  for (const auto& as : spec.assignment) {
    assignment.push_back(json::array({as.row_block, as.col_block}));
  }
  return json{{"row_block_sizes", spec.row_block_sizes},
              {"col_block_sizes", spec.col_block_sizes},
              {"assignment", assignment},
              {"fill_density", spec.fill_density},
              {"fill_value", spec.fill_value}};
}

BlockSpec spec_from_json(const json& j) {
  BlockSpec spec;
  spec.row_block_sizes = j.at("row_block_sizes").get<std::vector<std::size_t>>();
  spec.col_block_sizes = j.at("col_block_sizes").get<std::vector<std::size_t>>();
  for (const auto& as : j.at("assignment")) {
    spec.assignment.push_back({as.at(0).get<std::size_t>(), as.at(1).get<std::size_t>()});
  }
  spec.fill_density = j.at("fill_density").get<double>();
  spec.fill_value = j.at("fill_value").get<double>();
  return spec;
}

}  // namespace

AdjacencyMatrix load_matrix(const std::string& path, FileFormat format) {
  try {
    return format == FileFormat::DenseCsv ? load_dense_csv(path) : load_coord(path);
  } catch (const std::invalid_argument& e) {
    throw IoError(path + ": " + e.what());
  }
}

void save_matrix(const AdjacencyMatrix& a, const std::string& path, FileFormat format) {
  auto out = open_out(path);
  if (format == FileFormat::DenseCsv) {
    if (a.has_col_ids()) {
      if (a.has_row_ids()) out << "id";
      for (std::size_t j = 0; j < a.cols(); ++j) {
        if (j > 0 || a.has_row_ids()) out << ',';
        out << a.col_ids()[j];
      }
      out << '\n';
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (a.has_row_ids()) out << a.row_ids()[i] << ',';
      for (std::size_t j = 0; j < a.cols(); ++j) {
        if (j > 0) out << ',';
        out << fmt17(a.at(i, j));
      }
      out << '\n';
    }
  } else {
    if (a.has_row_ids() || a.has_col_ids()) {
      throw IoError(path + ": coord format cannot carry identifiers");
    }
    out << a.rows() << ' ' << a.cols() << ' ' << a.nonzero_count() << '\n';
    for (std::size_t i = 0; i < a.rows(); ++i) {
      a.for_each_in_row(i, [&](std::size_t j, double v) {
        out << (i + 1) << ' ' << (j + 1) << ' ' << fmt17(v) << '\n';
      });
    }
  }
  if (!out) throw IoError(path + ": write failed");
}

LabelAssignment load_labels(const std::string& path) {
  const auto lines = read_lines(path);
  LabelAssignment result;
  std::map<std::string, int> class_index;
  std::set<std::string> seen_ids;

  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::string line = trimmed(lines[k]);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) fail(path, k + 1, "expected 'identifier,class'");
    const std::string id = trimmed(fields[0]);
    const std::string cls = trimmed(fields[1]);
    if (id.empty() || cls.empty()) fail(path, k + 1, "empty identifier or class");
    if (!seen_ids.insert(id).second) fail(path, k + 1, "duplicate identifier '" + id + "'");
    auto [it, inserted] = class_index.try_emplace(cls, static_cast<int>(result.class_names.size()));
    if (inserted) result.class_names.push_back(cls);
    result.identifiers.push_back(id);
    result.classes.push_back(it->second);
  }
  if (result.identifiers.empty()) throw IoError(path + ": no label rows");
  return result;
}

std::vector<int> align_labels(const LabelAssignment& labels, const AdjacencyMatrix& a) {
  if (a.has_row_ids()) {
    std::map<std::string, int> by_id;
    for (std::size_t k = 0; k < labels.identifiers.size(); ++k) {
      by_id[labels.identifiers[k]] = labels.classes[k];
    }
    std::vector<int> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      auto it = by_id.find(a.row_ids()[i]);
      if (it == by_id.end()) {
        throw IoError("labels: no class for row identifier '" + a.row_ids()[i] + "'");
      }
      out[i] = it->second;
    }
    return out;
  }
  if (labels.classes.size() != a.rows()) {
    throw IoError("labels: " + std::to_string(labels.classes.size()) + " rows for a matrix with " +
                  std::to_string(a.rows()) + " rows and no identifiers to match by");
  }
  return labels.classes;
}

void save_results(const ResultSet& rs, const std::string& path) {
  json j;
  j["format_version"] = 1;
  j["experiment"] = rs.experiment;
  j["config"] = config_to_json(rs.base_config);
  j["seed"] = rs.seed;
  j["repetitions"] = rs.repetitions;
  j["grids"] = {{"sigma", rs.sigma_grid},
                {"alpha", rs.alpha_grid},
                {"norm", norm_grid_to_json(rs.norm_grid)},
                {"n", rs.n_grid}};
  if (rs.spec_used) j["spec"] = spec_to_json(rs.spec);
  j["jaccard_threshold"] = rs.jaccard_threshold;
  j["mu_denominator"] = rs.mu_denominator;

  json curves = json::array();
  for (const auto& c : rs.curves) {
    json points = json::array();
    for (const auto& p : c.points) points.push_back(json::array({p.x, p.y, p.spread}));
    curves.push_back({{"name", c.name}, {"axis", c.axis}, {"points", points}});
  }
  j["curves"] = curves;

  json samples = json::array();
  for (const auto& s : rs.samples) {
    samples.push_back({{"method", s.method},
                       {"sigma", s.sigma},
                       {"rep", s.rep},
                       {"mu", s.mu},
                       {"iterations_ref", s.iterations_ref},
                       {"iterations_hat", s.iterations_hat},
                       {"converged_ref", s.converged_ref},
                       {"converged_hat", s.converged_hat}});
  }
  j["samples"] = samples;

  json bench = json::array();
  for (const auto& b : rs.bench_samples) {
    bench.push_back({{"n", b.n},
                     {"alpha", b.alpha},
                     {"rep", b.rep},
                     {"iterations", b.iterations},
                     {"seconds_total", b.seconds_total},
                     {"converged", b.converged}});
  }
  j["bench_samples"] = bench;

  json fits = json::array();
  for (const auto& f : rs.fits) {
    fits.push_back({{"curve", f.curve},
                    {"kind", f.kind},
                    {"coefficients", f.coefficients},
                    {"r_squared", f.r_squared}});
  }
  j["fits"] = fits;

  j["unconverged_runs"] = rs.unconverged_runs;
  j["wall_seconds"] = rs.wall_seconds;

  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError(path + ": write failed");
}

ResultSet load_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw IoError(path + ": unsupported format_version");
    }
    ResultSet rs;
    rs.experiment = j.at("experiment").get<std::string>();
    rs.base_config = config_from_json(j.at("config"));
    rs.seed = j.at("seed").get<std::uint64_t>();
    rs.repetitions = j.at("repetitions").get<std::size_t>();
    rs.sigma_grid = j.at("grids").at("sigma").get<std::vector<double>>();
    rs.alpha_grid = j.at("grids").at("alpha").get<std::vector<double>>();
    rs.norm_grid = norm_grid_from_json(j.at("grids").at("norm"));
    rs.n_grid = j.at("grids").at("n").get<std::vector<std::size_t>>();
    if (j.contains("spec")) {
      rs.spec = spec_from_json(j.at("spec"));
      rs.spec_used = true;
    }
    rs.jaccard_threshold = j.at("jaccard_threshold").get<double>();
    rs.mu_denominator = j.at("mu_denominator").get<std::string>();
    for (const auto& c : j.at("curves")) {
      EvalCurve curve;
      curve.name = c.at("name").get<std::string>();
      curve.axis = c.at("axis").get<std::string>();
      for (const auto& p : c.at("points")) {
        curve.points.push_back(
            {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
      }
      rs.curves.push_back(std::move(curve));
    }
    for (const auto& s : j.at("samples")) {
      SampleRecord sample;
      sample.method = s.at("method").get<std::string>();
      sample.sigma = s.at("sigma").get<double>();
      sample.rep = s.at("rep").get<std::size_t>();
      sample.mu = s.at("mu").get<double>();
      sample.iterations_ref = s.at("iterations_ref").get<std::size_t>();
      sample.iterations_hat = s.at("iterations_hat").get<std::size_t>();
      sample.converged_ref = s.at("converged_ref").get<bool>();
      sample.converged_hat = s.at("converged_hat").get<bool>();
      rs.samples.push_back(std::move(sample));
    }
    for (const auto& b : j.at("bench_samples")) {
      BenchSample sample;
      sample.n = b.at("n").get<std::size_t>();
      sample.alpha = b.at("alpha").get<double>();
      sample.rep = b.at("rep").get<std::size_t>();
      sample.iterations = b.at("iterations").get<std::size_t>();
      sample.seconds_total = b.at("seconds_total").get<double>();
      sample.converged = b.at("converged").get<bool>();
      rs.bench_samples.push_back(sample);
    }
    for (const auto& f : j.at("fits")) {
      FitResult fit;
      fit.curve = f.at("curve").get<std::string>();
      fit.kind = f.at("kind").get<std::string>();
      fit.coefficients = f.at("coefficients").get<std::vector<double>>();
      fit.r_squared = f.at("r_squared").get<double>();
      rs.fits.push_back(std::move(fit));
    }
    rs.unconverged_runs = j.at("unconverged_runs").get<std::size_t>();
    rs.wall_seconds = j.at("wall_seconds").get<double>();
    return rs;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

void save_curves_csv(const ResultSet& rs, const std::string& path) {
  auto out = open_out(path);
  out << "curve,x,y,spread\n";
  for (const auto& c : rs.curves) {
    for (const auto& p : c.points) {
      out << c.name << ',' << fmt17(p.x) << ',' << fmt17(p.y) << ',' << fmt17(p.spread) << '\n';
    }
  }
  if (!out) throw IoError(path + ": write failed");
}

void save_trace_csv(const ConvergenceTrace& trace, const std::string& path) {
  auto out = open_out(path);
  out << "iteration,s_norm,sp_norm,combined_norm,s_delta,sp_delta,seconds\n";
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << fmt17(r.s_norm) << ',' << fmt17(r.sp_norm) << ','
        << fmt17(r.combined_norm) << ',' << fmt17(r.s_delta) << ',' << fmt17(r.sp_delta) << ','
        << fmt17(r.seconds) << '\n';
  }
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace rre
