#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "pdstiep/solver.hpp"
#include "pdstiep/types.hpp"

namespace pdstiep::io {

/// Row-major CSV, 17 significant digits.
std::string matrix_to_csv(const Matrix& m);
Matrix matrix_from_csv(const std::string& text);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Spectrum document: {"eigenvalues": [[re, im], ...]}.
std::vector<std::complex<double>> spectrum_from_json(const std::string& text);
std::string spectrum_to_json(const std::vector<std::complex<double>>& values);
std::vector<std::complex<double>> read_spectrum_file(const std::filesystem::path& path);

std::string report_to_json(const SolverReport& report, int indent = 2);

}  // namespace pdstiep::io
