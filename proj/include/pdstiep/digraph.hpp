#pragma once

#include <string>

#include "pdstiep/types.hpp"

namespace pdstiep {

/// DOT description of the weighted digraph of a square matrix: nodes
/// P1..Pn and an arc Pi -> Pj labelled with C_ij (4 decimals) for every
/// entry C_ij > threshold. Throws NonSquareInput.
std::string to_dot(const Matrix& C, double threshold = 1e-3,
                   const std::string& name = "G");

}  // namespace pdstiep
