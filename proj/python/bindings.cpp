#include "nusl/algorithms.hpp"
#include "nusl/bounds.hpp"
#include "nusl/experiments.hpp"
#include "nusl/gram.hpp"
#include "nusl/sampling.hpp"
#include "nusl/sensing.hpp"
#include "nusl/types.hpp"
#include "nusl/version.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace nusl;

namespace {

SupportModel model_from_p(const Vector& p, double tol) {
  return build_support_model(p, tol);
}

Support support_from_list(const std::vector<int>& indices, int K) {
  return make_support(indices, K);
}

py::dict result_dict(const RecoveryResult& r) {
  py::dict out;
  out["support"] = r.support_found.indices;
  out["coefficients"] = r.coefficients;
  out["iterations"] = r.iterations;
  out["converged"] = r.converged;
  return out;
}

}  // namespace

PYBIND11_MODULE(_nusl, m) {
  m.doc() = "non-uniform random supports and sparse approximation";
  m.attr("__version__") = kVersion;

  py::class_<Dictionary>(m, "Dictionary")
      .def_readonly("entries", &Dictionary::entries)
      .def_readonly("unit_norm", &Dictionary::unit_norm)
      .def_property_readonly("d", &Dictionary::d)
      .def_property_readonly("K", &Dictionary::K);

  py::class_<SupportModel>(m, "SupportModel")
      .def_readonly("p", &SupportModel::p)
      .def_readonly("S", &SupportModel::S)
      .def("weights", &SupportModel::weights);

  py::class_<Support>(m, "Support")
      .def_readonly("indices", &Support::indices)
      .def("__len__", &Support::size)
      .def("__eq__", [](const Support& a, const Support& b) { return a == b; });

  py::class_<GramQuantities>(m, "GramQuantities")
      .def_readonly("mu", &GramQuantities::mu)
      .def_readonly("hw_inf2", &GramQuantities::hw_inf2)
      .def_readonly("wh_21", &GramQuantities::wh_21)
      .def_readonly("whw_op", &GramQuantities::whw_op)
      .def_readonly("K", &GramQuantities::K);

  py::class_<HollowMatrix>(m, "HollowMatrix")
      .def_readonly("entries", &HollowMatrix::entries)
      .def_readonly("symmetric", &HollowMatrix::symmetric);

  py::class_<SensingDictionary>(m, "SensingDictionary")
      .def_readonly("entries", &SensingDictionary::entries)
      .def_readonly("normalization", &SensingDictionary::normalization);

  py::class_<Preconditioner>(m, "Preconditioner")
      .def_readonly("transform", &Preconditioner::transform)
      .def_readonly("psi", &Preconditioner::psi);

  m.def("validate_dictionary", &validate_dictionary, py::arg("entries"),
        py::arg("require_unit_norm") = true);
  m.def("build_support_model", &model_from_p, py::arg("p"),
        py::arg("tol") = 1e-9);
  m.def("make_support", &support_from_list, py::arg("indices"), py::arg("K"));

  m.def(
      "poisson_sample",
      [](const SupportModel& model, std::uint64_t seed, std::uint64_t stream) {
        RngStream rng(seed, stream);
        return poisson_sample(model, rng);
      },
      py::arg("model"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def(
      "rejective_sample",
      [](const SupportModel& model, std::uint64_t seed, std::uint64_t stream,
         int max_attempts) {
        RngStream rng(seed, stream);
        return rejective_sample(model, rng, max_attempts);
      },
      py::arg("model"), py::arg("seed") = 0, py::arg("stream") = 0,
      py::arg("max_attempts") = kDefaultMaxAttempts);
  auto table_dict = [](const SupportDistributionTable& table) {
    py::dict out;
    for (const auto& [mask, prob] : table.entries) {
      py::tuple key = py::tuple(py::cast(mask_to_support(mask, table.K).indices));
      out[key] = prob;
    }
    return out;
  };
  m.def("enumerate_poisson", [table_dict](const SupportModel& model) {
    return table_dict(enumerate_poisson(model));
  });
  m.def("enumerate_rejective", [table_dict](const SupportModel& model) {
    return table_dict(enumerate_rejective(model));
  });
  m.def("verify_median_property", [](const SupportModel& model) {
    auto report = verify_median_property(model);
    return py::make_tuple(report.tail, report.holds);
  });

  m.def("hollow_gram", &hollow_gram);
  m.def("cross_gram", &cross_gram, py::arg("psi"), py::arg("phi"));
  m.def("gram_quantities", &gram_quantities);
  m.def("restricted_conditioning", &restricted_conditioning);
  m.def("restricted_max_row_norm", &restricted_max_row_norm);
  m.def("operator_norm", &operator_norm);

  m.def("theorem1_bound", &theorem1_bound, py::arg("q"), py::arg("r"),
        py::arg("symmetric"));
  m.def("corollary2_bound", &corollary2_bound);
  m.def("lemma1_bound", &lemma1_bound);
  m.def("hoeffding_bound", &hoeffding_bound, py::arg("m_inf2"),
        py::arg("x_inf"), py::arg("K"), py::arg("t"));
  m.def("min_linf_l2_ratio", &min_linf_l2_ratio);

  auto report_dict = [](const ConditionReport& report) {
    py::dict out;
    out["holds"] = report.holds;
    py::list checks;
    for (const auto& chk : report.checks) {
      py::dict c;
      c["name"] = chk.name;
      c["lhs"] = chk.lhs;
      c["rhs"] = chk.rhs;
      c["margin"] = chk.margin();
      checks.append(c);
    }
    out["checks"] = checks;
    return out;
  };
  m.def("thresholding_condition",
        [report_dict](const Vector& c, const GramQuantities& q, double eps) {
          return report_dict(thresholding_condition(c, q, eps));
        });
  m.def("omp_condition",
        [report_dict](const Vector& c, const GramQuantities& q, double eps) {
          return report_dict(omp_condition(c, q, eps));
        });
  m.def("bp_condition", [report_dict](const GramQuantities& q, double eps) {
    return report_dict(bp_condition(q, eps));
  });

  m.def(
      "thresholding",
      [](const Dictionary& phi, const Vector& y, int S,
         std::optional<Matrix> sensing) {
        return result_dict(thresholding(phi, y, S, sensing));
      },
      py::arg("phi"), py::arg("y"), py::arg("S"),
      py::arg("sensing") = std::nullopt);
  m.def(
      "omp",
      [](const Dictionary& phi, const Vector& y, int S,
         std::optional<Matrix> sensing) {
        return result_dict(omp(phi, y, S, sensing));
      },
      py::arg("phi"), py::arg("y"), py::arg("S"),
      py::arg("sensing") = std::nullopt);
  m.def(
      "basis_pursuit",
      [](const Matrix& a, const Vector& y) {
        return result_dict(basis_pursuit(a, y));
      },
      py::arg("a"), py::arg("y"));
  m.def(
      "bp_preconditioned",
      [](const Dictionary& phi, const SupportModel& model, const Vector& y) {
        return result_dict(bp_preconditioned(phi, model, y));
      },
      py::arg("phi"), py::arg("model"), py::arg("y"));

  m.def("greedy_sensing", &greedy_sensing, py::arg("phi"), py::arg("model"),
        py::arg("ridge") = 0.0);
  m.def("preconditioner", &preconditioner, py::arg("phi"), py::arg("model"),
        py::arg("ridge") = 0.0);

  m.def("gen_gaussian_dictionary", &gen_gaussian_dictionary, py::arg("d"),
        py::arg("K"), py::arg("seed"));
  m.def("gen_subsampled_dct_dictionary", &gen_subsampled_dct_dictionary,
        py::arg("d"), py::arg("K"), py::arg("seed"));
  m.def(
      "gen_distribution",
      [](const std::string& kind, int K, int S, double step_ratio) {
        DistributionFamily family{parse_family_kind(kind), K, S, step_ratio};
        return gen_distribution(family);
      },
      py::arg("kind"), py::arg("K"), py::arg("S"), py::arg("step_ratio") = 10.0);
  m.def(
      "gen_signal",
      [](const Dictionary& phi, const SupportModel& model,
         const std::string& coeff, double alpha, std::uint64_t seed,
         std::uint64_t stream) {
        CoeffSpec spec;
        spec.kind = coeff == "geometric" ? CoeffSpec::Kind::geometric
                                         : CoeffSpec::Kind::unit;
        spec.alpha = alpha;
        RngStream rng(seed, stream);
        SignalInstance sig = gen_signal(phi, model, spec, rng);
        py::dict out;
        out["y"] = sig.y;
        out["support"] = sig.support.indices;
        out["magnitudes"] = sig.magnitudes;
        out["signs"] = sig.signs;
        return out;
      },
      py::arg("phi"), py::arg("model"), py::arg("coeff") = "unit",
      py::arg("alpha") = 0.9, py::arg("seed") = 0, py::arg("stream") = 0);
}
