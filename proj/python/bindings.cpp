#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>

#include "pdstiep/balance.hpp"
#include "pdstiep/dense_linalg.hpp"
#include "pdstiep/digraph.hpp"
#include "pdstiep/errors.hpp"
#include "pdstiep/solver.hpp"
#include "pdstiep/spectrum.hpp"
#include "pdstiep/subspaces.hpp"

namespace py = pybind11;
using namespace pdstiep;
using cplx = std::complex<double>;

namespace {

SampleMode parse_mode(const std::string& s) {
  if (s == "dense") return SampleMode::Dense;
  if (s == "lowrank") return SampleMode::LowRank;
  throw InputError("mode must be 'dense' or 'lowrank'");
}

Layout parse_layout(const std::string& s) {
  if (s == "unit-first") return Layout::UnitFirst;
  if (s == "pairs-first") return Layout::PairsFirst;
  throw InputError("layout must be 'unit-first' or 'pairs-first'");
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "monotone") return Algorithm::Monotone;
  if (s == "nonmonotone") return Algorithm::Nonmonotone;
  throw InputError("algorithm must be 'monotone' or 'nonmonotone'");
}

py::dict report_dict(const SolverReport& r) {
  py::list trace;
  for (const auto& t : r.trace) {
    py::dict d;
    d["iteration"] = t.iteration;
    d["residual"] = t.residual;
    d["step"] = t.step;
    d["cg_iterations"] = t.cg_iterations;
    d["backtracks"] = t.backtracks;
    trace.append(d);
  }
  py::dict d;
  d["algorithm"] = to_string(r.algorithm);
  d["status"] = to_string(r.status);
  d["message"] = r.message;
  d["outer_iterations"] = r.outer_iterations;
  d["function_evaluations"] = r.function_evaluations;
  d["cg_iterations"] = r.cg_iterations_total;
  d["initial_residual"] = r.initial_residual;
  d["final_residual"] = r.final_residual;
  d["gradient_norm"] = r.final_gradient_norm;
  d["wall_time"] = r.wall_time;
  d["trace"] = trace;
  return d;
}

void apply_params(SolverParams& p, const py::dict& kw) {
  const std::map<std::string, double*> reals{
      {"eps", &p.epsilon},     {"sigma_max", &p.sigma_max}, {"eta_max", &p.eta_max},
      {"theta", &p.theta},     {"theta_min", &p.theta_min}, {"theta_max", &p.theta_max},
      {"t", &p.t},             {"tau", &p.tau},             {"rho", &p.rho},
      {"delta", &p.delta}};
  const std::map<std::string, int*> ints{{"max_iter", &p.outer_max_iter},
                                         {"cg_max_iter", &p.cg_max_iter},
                                         {"linesearch_max", &p.linesearch_max}};
  for (const auto& [key, value] : kw) {
    const auto name = key.cast<std::string>();
    if (auto it = reals.find(name); it != reals.end())
      *it->second = value.cast<double>();
    else if (auto jt = ints.find(name); jt != ints.end())
      *jt->second = value.cast<int>();
    else
      throw InputError("unknown solver parameter '" + name + "'");
  }
}

}  // namespace

PYBIND11_MODULE(_pdstiep, m) {
  m.doc() = "Inverse eigenvalue problem for positive doubly stochastic matrices";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def(
      "sinkhorn",
      [](const Matrix& A, double tol, int max_iter) {
        const BalanceResult r = sinkhorn(A, tol, max_iter);
        py::dict d;
        d["balanced"] = r.balanced;
        d["row_scale"] = r.row_scale;
        d["col_scale"] = r.col_scale;
        d["iterations"] = r.iterations;
        d["residual"] = r.residual;
        return d;
      },
      py::arg("A"), py::arg("tol") = 1e-12, py::arg("max_iter") = 10000,
      "Sinkhorn-Knopp balancing; returns a dict with the balanced matrix and scalings.");

  m.def(
      "real_schur",
      [](const Matrix& A, double tol) {
        const SchurForm f = real_schur(A, tol);
        return py::make_tuple(f.Q, f.T, f.block_sizes);
      },
      py::arg("A"), py::arg("tol") = 1e-14, "Standardized real Schur form: (Q, T, block_sizes).");

  m.def(
      "random_problem",
      [](Index n, const std::string& mode, Index p, std::uint64_t seed) {
        const RandomProblem r = random_problem(n, parse_mode(mode), p, seed);
        return py::make_tuple(r.spectrum.values(), r.target);
      },
      py::arg("n"), py::arg("mode") = "dense", py::arg("p") = 0, py::arg("seed") = 1,
      "Realizable random instance: (eigenvalues, balanced target matrix).");

  m.def(
      "solve",
      [](const std::vector<cplx>& eigenvalues, const std::string& algorithm, std::uint64_t seed,
         const std::string& mode, Index p, const std::string& layout, py::kwargs kw) {
        SolverParams params;
        apply_params(params, kw);
        const StructureData sd = build_structure(parse_spectrum(eigenvalues), parse_layout(layout));
        const Point z0 = initial_point(sd, parse_mode(mode), p, seed);
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(parse_algorithm(algorithm), sd, z0, params);
        }
        const SchurForm f = schur_from_point(sd, r.point);
        py::dict d;
        d["C"] = r.point.C;
        d["Q"] = f.Q;
        d["T"] = f.T;
        d["block_sizes"] = f.block_sizes;
        d["report"] = report_dict(r.report);
        return d;
      },
      py::arg("eigenvalues"), py::arg("algorithm") = "nonmonotone", py::arg("seed") = 1,
      py::arg("mode") = "dense", py::arg("p") = 0, py::arg("layout") = "unit-first",
      "Positive doubly stochastic matrix with the prescribed spectrum. Extra keyword\n"
      "arguments set solver parameters (eps, sigma_max, eta_max, theta, theta_min,\n"
      "theta_max, t, tau, rho, delta, max_iter, cg_max_iter, linesearch_max).");

  m.def(
      "invariant_subspaces",
      [](const Matrix& C, std::optional<Matrix> Q, std::optional<Matrix> T, double cluster_tol) {
        if (Q.has_value() != T.has_value()) throw InputError("Q and T must be given together");
        SchurForm form;
        if (Q) {
          form = {*Q, *T, detect_blocks(*T)};
        } else {
          form = real_schur(C);
        }
        const BlockPartition part = partition_blocks(form, cluster_tol);
        if (Q) form = refine_schur(C, form, part);
        const SubspaceResult r = invariant_subspaces(C, form, part);
        py::dict d;
        d["theta"] = r.theta;
        d["partition"] = part.sizes;
        d["blocks"] = r.blocks;
        d["residuals"] = block_residuals(C, r);
        return d;
      },
      py::arg("C"), py::arg("Q") = py::none(), py::arg("T") = py::none(),
      py::arg("cluster_tol") = 1e-6,
      "Invariant subspaces per eigenvalue cluster; uses the given Schur form when Q, T are set.");

  m.def("to_dot", &to_dot, py::arg("C"), py::arg("threshold") = 1e-3, py::arg("name") = "G",
        "DOT digraph with an arc Pi -> Pj for every C_ij above the threshold.");

  m.def("gamma_sum", &gamma_sum);
}
