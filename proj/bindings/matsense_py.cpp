// Python bindings: numpy arrays in and out, SymMatrix kept internal.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "matsense/solvers.hpp"

namespace py = pybind11;
using namespace matsense;

namespace {

Spectrum parse_spectrum(const py::object& spec) {
  if (py::isinstance<py::tuple>(spec) || py::isinstance<py::list>(spec)) {
    auto seq = spec.cast<std::vector<double>>();
    if (seq.size() == 2 && py::isinstance<py::tuple>(spec)) {
      return SpectrumUniform{seq[0], seq[1]};
    }
    return SpectrumExplicit{seq};
  }
  throw InvalidInput("spectrum must be a (lo, hi) tuple or a list of eigenvalues");
}

py::dict trace_to_dict(const ConvergenceTrace& trace) {
  std::vector<long> t;
  std::vector<double> phi, gn, mr;
  for (const auto& r : trace.records) {
    t.push_back(r.t);
    phi.push_back(r.phi);
    gn.push_back(r.grad_norm);
    mr.push_back(r.max_abs_residual);
  }
  py::dict d;
  d["t"] = t;
  d["phi"] = phi;
  d["grad_norm"] = gn;
  d["max_residual"] = mr;
  return d;
}

py::dict result_to_dict(const RunResult& res) {
  py::dict d;
  d["converged"] = res.status == RunStatus::Converged;
  d["solution"] = res.solution.mat();
  d["iterations"] = res.iterations;
  d["trace"] = trace_to_dict(res.trace);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "rank-one matrix sensing via cosh-potential descent";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<Overflow>(m, "Overflow", PyExc_OverflowError);
  py::register_exception<GenerationFailed>(m, "GenerationFailed", PyExc_RuntimeError);

  py::class_<MeasurementSet>(m, "MeasurementSet")
      .def_property_readonly("n", &MeasurementSet::n)
      .def_property_readonly("m", &MeasurementSet::m)
      .def_property_readonly("u", [](const MeasurementSet& ms) { return ms.u(); })
      .def_property_readonly("b", [](const MeasurementSet& ms) { return ms.b(); })
      .def_property_readonly("rho", &MeasurementSet::rho)
      .def_property_readonly("regime", [](const MeasurementSet& ms) {
        return ms.regime() == Regime::Orthogonal ? "orthogonal" : "rho";
      });

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &SolverConfig::lambda)
      .def_readwrite("epsilon", &SolverConfig::epsilon)
      .def_readwrite("batch", &SolverConfig::batch)
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("delta", &SolverConfig::delta)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("log_every", &SolverConfig::log_every)
      .def_readwrite("recompute_every", &SolverConfig::recompute_every);

  m.def("gen_ground_truth",
        [](int n, const py::object& spectrum, std::uint64_t seed) {
          return gen_ground_truth(n, parse_spectrum(spectrum), seed).a_star.mat();
        },
        py::arg("n"), py::arg("spectrum"), py::arg("seed") = 0);

  m.def("gen_orthogonal",
        [](int n, int m, const Matrix& a_star, std::uint64_t seed) {
          return gen_orthogonal(n, m, GroundTruth{SymMatrix(a_star)}, seed);
        },
        py::arg("n"), py::arg("m"), py::arg("a_star"), py::arg("seed") = 0);

  m.def("gen_rho_bounded",
        [](int n, int m, double rho, const Matrix& a_star, std::uint64_t seed) {
          return gen_rho_bounded(n, m, rho, GroundTruth{SymMatrix(a_star)}, seed);
        },
        py::arg("n"), py::arg("m"), py::arg("rho"), py::arg("a_star"), py::arg("seed") = 0);

  m.def("residuals",
        [](const MeasurementSet& ms, const Matrix& a) {
          return residuals(ms, SymMatrix(a));
        },
        py::arg("ms"), py::arg("a"));

  m.def("phi",
        [](const MeasurementSet& ms, const Matrix& a, double lam) {
          return phi(ms, SymMatrix(a), PotentialParams(lam));
        },
        py::arg("ms"), py::arg("a"), py::arg("lam"));

  m.def("phi_grad",
        [](const MeasurementSet& ms, const Matrix& a, double lam) {
          return phi_grad(ms, SymMatrix(a), PotentialParams(lam)).mat();
        },
        py::arg("ms"), py::arg("a"), py::arg("lam"));

  m.def("grad_norm_orthogonal",
        [](const Vector& z, double lam) {
          return grad_norm_orthogonal(z, PotentialParams(lam));
        },
        py::arg("z"), py::arg("lam"));

  m.def("default_gd_schedule", &default_gd_schedule,
        py::arg("ms"), py::arg("delta"), py::arg("max_iters"));
  m.def("default_sgd_schedule", &default_sgd_schedule,
        py::arg("ms"), py::arg("delta"), py::arg("batch"), py::arg("max_iters"));
  m.def("default_spectral_schedule", &default_spectral_schedule,
        py::arg("n"), py::arg("delta"), py::arg("max_iters"));

  m.def("run_gd",
        [](const MeasurementSet& ms, const SolverConfig& cfg) {
          return result_to_dict(run_gd(ms, cfg));
        },
        py::arg("ms"), py::arg("config"));
  m.def("run_sgd",
        [](const MeasurementSet& ms, const SolverConfig& cfg) {
          return result_to_dict(run_sgd(ms, cfg));
        },
        py::arg("ms"), py::arg("config"));
  m.def("run_sgd_general",
        [](const MeasurementSet& ms, const SolverConfig& cfg) {
          return result_to_dict(run_sgd_general(ms, cfg));
        },
        py::arg("ms"), py::arg("config"));
  m.def("run_spectral_gd",
        [](const Matrix& a_star, const Matrix& a1, const SolverConfig& cfg) {
          SpectralOracle oracle(GroundTruth{SymMatrix(a_star)});
          return result_to_dict(run_spectral_gd(oracle, SymMatrix(a1), cfg));
        },
        py::arg("a_star"), py::arg("a1"), py::arg("config"));

  m.def("spectral_certificate",
        [](const Matrix& a_star, const Matrix& a, double lam) {
          SpectralOracle oracle(GroundTruth{SymMatrix(a_star)});
          return spectral_certificate(oracle, SymMatrix(a), PotentialParams(lam));
        },
        py::arg("a_star"), py::arg("a"), py::arg("lam"));

  m.def("verify_solution",
        [](const MeasurementSet& ms, const Matrix& a, double delta) {
          VerifyResult v = verify_solution(ms, SymMatrix(a), delta);
          py::dict d;
          d["pass"] = v.pass;
          d["max_residual"] = v.max_residual;
          d["worst_index"] = static_cast<long>(v.worst_index);
          return d;
        },
        py::arg("ms"), py::arg("a"), py::arg("delta"));
}
