#include "pdstiep/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "pdstiep/errors.hpp"

namespace pdstiep::io {

using nlohmann::json;

std::string matrix_to_csv(const Matrix& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw InputError("csv line " + std::to_string(line) + ": cannot parse '" +
                     std::string(tok) + "'");
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

Matrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    for (;;) {
      const auto comma = body.find(',', start);
      row.push_back(parse_number(body.substr(start, comma - start), lineno));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError("csv line " + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("csv: no data");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << matrix_to_csv(m);
}

Matrix read_matrix_csv(const std::filesystem::path& path) { return matrix_from_csv(slurp(path)); }

std::vector<std::complex<double>> spectrum_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("spectrum document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("eigenvalues") || !doc["eigenvalues"].is_array())
    throw InputError("spectrum document: missing 'eigenvalues' list");
  std::vector<std::complex<double>> out;
  for (const auto& item : doc["eigenvalues"]) {
    if (item.is_number()) {
      out.emplace_back(item.get<double>(), 0.0);
    } else if (item.is_array() && item.size() == 2 && item[0].is_number() &&
               item[1].is_number()) {
      out.emplace_back(item[0].get<double>(), item[1].get<double>());
    } else {
      throw InputError("spectrum document: entries must be [re, im] pairs");
    }
  }
  return out;
}

std::string spectrum_to_json(const std::vector<std::complex<double>>& values) {
  json list = json::array();
  for (const auto& z : values) list.push_back({z.real(), z.imag()});
  return json{{"eigenvalues", list}}.dump(2) + "\n";
}

std::vector<std::complex<double>> read_spectrum_file(const std::filesystem::path& path) {
  return spectrum_from_json(slurp(path));
}

std::string report_to_json(const SolverReport& report, int indent) {
  json trace = json::array();
  for (const auto& r : report.trace)
    trace.push_back({{"iteration", r.iteration},
                     {"residual", r.residual},
                     {"step", r.step},
                     {"cg_iterations", r.cg_iterations},
                     {"backtracks", r.backtracks}});
  const json doc = {{"algorithm", to_string(report.algorithm)},
                    {"status", to_string(report.status)},
                    {"message", report.message},
                    {"outer_iterations", report.outer_iterations},
                    {"function_evaluations", report.function_evaluations},
                    {"cg_iterations", report.cg_iterations_total},
                    {"initial_residual", report.initial_residual},
                    {"final_residual", report.final_residual},
                    {"gradient_norm", report.final_gradient_norm},
                    {"wall_time", report.wall_time},
                    {"trace", trace}};
  return doc.dump(indent) + "\n";
}

}  // namespace pdstiep::io
