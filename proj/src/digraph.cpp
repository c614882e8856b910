#include "pdstiep/digraph.hpp"

#include <iomanip>
#include <sstream>

#include "pdstiep/errors.hpp"

namespace pdstiep {

std::string to_dot(const Matrix& C, double threshold, const std::string& name) {
  if (C.rows() != C.cols()) throw NonSquareInput("to_dot: matrix is not square");
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (Index i = 0; i < C.rows(); ++i) os << "  P" << i + 1 << ";\n";
  os << std::fixed << std::setprecision(4);
  for (Index i = 0; i < C.rows(); ++i)
    for (Index j = 0; j < C.cols(); ++j)
      if (C(i, j) > threshold)
        os << "  P" << i + 1 << " -> P" << j + 1 << " [label=\"" << C(i, j) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace pdstiep
