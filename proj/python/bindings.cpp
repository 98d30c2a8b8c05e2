#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/lyapunov.hpp"
#include "cocycle_lab/mat2.hpp"
#include "cocycle_lab/regions.hpp"
#include "cocycle_lab/shift_space.hpp"

namespace py = pybind11;
using namespace cocycle_lab;

namespace {

using release_gil = py::call_guard<py::gil_scoped_release>;

std::vector<std::string> label_names(const RegionReport& r) {
  std::vector<std::string> out;
  for (auto l : r.labels) out.emplace_back(to_string(l));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lyapunov exponents and Holder norms of SL(2) cocycles over the Bernoulli shift";

  static py::handle error_type = py::exception<Error>(m, "CocycleLabError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::reinterpret_borrow<py::object>(error_type)(e.what());
      instance.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error_type.ptr(), instance.ptr());
    }
  });

  // mat2
  py::class_<Mat2>(m, "Mat2")
      .def(py::init<>())
      .def(py::init([](double a11, double a12, double a21, double a22) { return Mat2{a11, a12, a21, a22}; }),
           py::arg("a11"), py::arg("a12"), py::arg("a21"), py::arg("a22"))
      .def_readwrite("a11", &Mat2::a11)
      .def_readwrite("a12", &Mat2::a12)
      .def_readwrite("a21", &Mat2::a21)
      .def_readwrite("a22", &Mat2::a22)
      .def_static("identity", &Mat2::identity)
      .def_static("diag", &Mat2::diag)
      .def("det", &Mat2::det)
      .def("trace", &Mat2::trace)
      .def("tolist", [](const Mat2& a) {
        return std::vector<std::vector<double>>{{a.a11, a.a12}, {a.a21, a.a22}};
      })
      .def("__mul__", [](const Mat2& a, const Mat2& b) { return a * b; })
      .def("__add__", [](const Mat2& a, const Mat2& b) { return a + b; })
      .def("__sub__", [](const Mat2& a, const Mat2& b) { return a - b; })
      .def("__eq__", [](const Mat2& a, const Mat2& b) { return a == b; })
      .def("__repr__", [](const Mat2& a) {
        return "Mat2([[" + std::to_string(a.a11) + ", " + std::to_string(a.a12) + "], [" + std::to_string(a.a21) +
               ", " + std::to_string(a.a22) + "]])";
      });
  m.def("spectral_norm", &spectral_norm);
  m.def("inverse", &inverse);
  m.def("is_sl2", &is_sl2, py::arg("m"), py::arg("rel_tol") = 1e-12);

  // shift space
  py::class_<Word>(m, "Word")
      .def(py::init<int, std::vector<std::uint8_t>>(), py::arg("lo"), py::arg("symbols"))
      .def_static("parse", &Word::parse, py::arg("lo"), py::arg("text"))
      .def_property_readonly("lo", &Word::lo)
      .def_property_readonly("hi", &Word::hi)
      .def_property_readonly("symbols", &Word::symbols)
      .def("at", py::overload_cast<int>(&Word::at, py::const_))
      .def("slice", &Word::slice)
      .def("__len__", &Word::size)
      .def("__str__", &Word::to_string)
      .def("__eq__", [](const Word& a, const Word& b) { return a == b; })
      .def("__repr__", [](const Word& w) { return "Word(" + std::to_string(w.lo()) + ", '" + w.to_string() + "')"; });
  py::class_<CylinderSpec>(m, "CylinderSpec")
      .def(py::init<Word>(), py::arg("base"))
      .def_readonly("base", &CylinderSpec::base)
      .def("contains", &CylinderSpec::contains);
  py::class_<BernoulliParams>(m, "BernoulliParams")
      .def(py::init<double>(), py::arg("p"))
      .def_property_readonly("p", &BernoulliParams::p);
  m.def("first_disagreement_radius", &first_disagreement_radius);
  m.def("word_distance", &word_distance);
  m.def("cylinder_measure", &cylinder_measure);
  m.def("shift_cylinder", &shift_cylinder);
  m.def("cylinders_disjoint", &cylinders_disjoint);
  m.def("sample_window", &sample_window, py::arg("seed"), py::arg("lo"), py::arg("hi"), py::arg("b"));
  m.def("return_cylinder", &return_cylinder);

  // cocycles
  py::class_<ConstructionParams>(m, "ConstructionParams")
      .def(py::init<double, double, double, double, int>(), py::arg("sigma"), py::arg("eta"), py::arg("alpha"),
           py::arg("gamma") = ConstructionParams::kDefaultGamma, py::arg("k") = 2)
      .def_property_readonly("sigma", &ConstructionParams::sigma)
      .def_property_readonly("eta", &ConstructionParams::eta)
      .def_property_readonly("alpha", &ConstructionParams::alpha)
      .def_property_readonly("gamma", &ConstructionParams::gamma)
      .def_property_readonly("k", &ConstructionParams::k)
      .def_property_readonly("n", &ConstructionParams::n)
      .def_property_readonly("eps", &ConstructionParams::eps)
      .def_property_readonly("delta", &ConstructionParams::delta)
      .def_property_readonly("beta", &ConstructionParams::beta)
      .def_property_readonly("c", &ConstructionParams::c)
      .def("with_k", &ConstructionParams::with_k)
      .def("with_alpha", &ConstructionParams::with_alpha);

  py::class_<LocallyConstantCocycle>(m, "LocallyConstantCocycle")
      .def_property_readonly("lo", &LocallyConstantCocycle::lo)
      .def_property_readonly("hi", &LocallyConstantCocycle::hi)
      .def_property_readonly("sl2", &LocallyConstantCocycle::sl2)
      .def_property_readonly("kind",
                             [](const LocallyConstantCocycle& c) { return to_string(c.descriptor().kind); })
      .def("value", py::overload_cast<const Word&>(&LocallyConstantCocycle::value, py::const_));
  m.def("identity_cocycle", &identity_cocycle);
  m.def("build_base", &build_base, py::arg("sigma"), py::arg("eta"));
  m.def("build_perturbation", &build_perturbation);
  m.def("build_perturbed", &build_perturbed);
  m.def("difference", &difference);
  m.def("iterate", &iterate, py::arg("cocycle"), py::arg("segment"), py::arg("steps"));
  m.def("closed_form_Bn", &closed_form_Bn);
  m.def("sup_norm", &sup_norm, release_gil());

  py::class_<HolderNorm>(m, "HolderNorm")
      .def_readonly("sup", &HolderNorm::sup)
      .def_readonly("seminorm", &HolderNorm::seminorm)
      .def_readonly("norm", &HolderNorm::norm)
      .def_readonly("alpha", &HolderNorm::alpha)
      .def_readonly("exact", &HolderNorm::exact);
  m.def("holder_seminorm_exact", &holder_seminorm_exact, py::arg("cocycle"), py::arg("alpha"),
        py::arg("workers") = 0, release_gil());
  m.def("holder_norm_exact", &holder_norm_exact, py::arg("cocycle"), py::arg("alpha"), py::arg("workers") = 0,
        release_gil());
  py::class_<HolderBound>(m, "HolderBound")
      .def_readonly("sup_term", &HolderBound::sup_term)
      .def_readonly("split_term", &HolderBound::split_term)
      .def_readonly("zn_term", &HolderBound::zn_term)
      .def_readonly("f2k_term", &HolderBound::f2k_term)
      .def_readonly("cross_term", &HolderBound::cross_term)
      .def_readonly("fk_term", &HolderBound::fk_term)
      .def_readonly("total", &HolderBound::total);
  m.def("holder_bound", &holder_bound);
  m.def("holder_bound_terms", &holder_bound_terms);
  py::class_<DecayConditions>(m, "DecayConditions")
      .def_readonly("eta_gamma", &DecayConditions::eta_gamma)
      .def_readonly("sigma_ratio", &DecayConditions::sigma_ratio)
      .def_readonly("eta_delta", &DecayConditions::eta_delta)
      .def_readonly("beta_decays", &DecayConditions::beta_decays)
      .def("all", &DecayConditions::all);
  m.def("decay_conditions", &decay_conditions);
  m.def("bound_decays", &bound_decays);

  py::class_<BunchingResult>(m, "BunchingResult")
      .def_readonly("bunched_at", &BunchingResult::bunched_at)
      .def_readonly("last_n", &BunchingResult::last_n)
      .def_readonly("worst_ratio", &BunchingResult::worst_ratio)
      .def_readonly("threshold", &BunchingResult::threshold)
      .def_readonly("worst_context", &BunchingResult::worst_context);
  m.def("fiber_bunching_test", &fiber_bunching_test, py::arg("cocycle"), py::arg("alpha"), py::arg("n_max"),
        release_gil());

  // exponents
  py::class_<ExponentEstimate>(m, "ExponentEstimate")
      .def_readonly("lambda_plus", &ExponentEstimate::lambda_plus)
      .def_readonly("std_error", &ExponentEstimate::std_error)
      .def_readonly("trials", &ExponentEstimate::trials)
      .def_readonly("steps", &ExponentEstimate::steps)
      .def_readonly("per_trial", &ExponentEstimate::per_trial)
      .def_property_readonly("lambda_minus", &ExponentEstimate::lambda_minus);
  m.def("exact_exponent_base", &exact_exponent_base, py::arg("sigma"), py::arg("eta"), py::arg("p"));
  m.def("zero_exponent_p", &zero_exponent_p, py::arg("sigma"), py::arg("eta"));
  m.def(
      "mc_exponent",
      [](const LocallyConstantCocycle& coc, double p, std::int64_t steps, int trials, std::uint64_t seed,
         unsigned workers, int renorm_every) {
        return mc_exponent(coc, BernoulliParams(p), {steps, trials, seed, workers, renorm_every});
      },
      py::arg("cocycle"), py::arg("p"), py::arg("steps") = 100000, py::arg("trials") = 64, py::arg("seed") = 0,
      py::arg("workers") = 0, py::arg("renorm_every") = 1, release_gil());

  py::class_<SwapReport>(m, "SwapReport")
      .def_readonly("max_diag_residual", &SwapReport::max_diag_residual)
      .def_readonly("max_direction_residual", &SwapReport::max_direction_residual)
      .def_readonly("max_offdiag_rel_error", &SwapReport::max_offdiag_rel_error)
      .def_readonly("max_det_error", &SwapReport::max_det_error)
      .def_readonly("words_checked", &SwapReport::words_checked)
      .def("passed", &SwapReport::pass);
  m.def(
      "verify_swap",
      [](const ConstructionParams& params, bool perturbed, unsigned workers) {
        return verify_swap(params, perturbed ? SwapVariant::perturbed : SwapVariant::unperturbed, workers);
      },
      py::arg("params"), py::arg("perturbed") = true, py::arg("workers") = 0, release_gil());

  py::class_<ReturnExcursion>(m, "ReturnExcursion")
      .def_readonly("word", &ReturnExcursion::word)
      .def_readonly("return_time", &ReturnExcursion::return_time)
      .def_readonly("excursion", &ReturnExcursion::excursion);
  m.def(
      "sample_return_excursions",
      [](int k, double p, std::size_t count, std::uint64_t seed, std::int64_t horizon, unsigned workers) {
        auto s = sample_return_excursions(k, BernoulliParams(p), count, seed, {horizon, workers});
        return py::make_tuple(std::move(s.excursions), s.truncated);
      },
      py::arg("k"), py::arg("p"), py::arg("count"), py::arg("seed") = 0, py::arg("horizon") = 1000000,
      py::arg("workers") = 0);
  m.def("induced_matrix", py::overload_cast<const LocallyConstantCocycle&, const ReturnExcursion&>(&induced_matrix));
  m.def("diagonal_residual", &diagonal_residual);
  m.def("offdiagonal_residual", &offdiagonal_residual);
  m.def("product_offdiagonal_residual", &product_offdiagonal_residual);

  py::class_<KacReport>(m, "KacReport")
      .def_readonly("mean_return", &KacReport::mean_return)
      .def_readonly("std_error", &KacReport::std_error)
      .def_readonly("expected", &KacReport::expected)
      .def_readonly("rel_error", &KacReport::rel_error)
      .def_readonly("count", &KacReport::count)
      .def_readonly("truncated", &KacReport::truncated)
      .def_readonly("truncation_fraction", &KacReport::truncation_fraction);
  m.def(
      "kac_statistics",
      [](int k, double p, std::size_t count, std::uint64_t seed, std::int64_t horizon, unsigned workers) {
        return kac_statistics(k, BernoulliParams(p), count, seed, {horizon, workers});
      },
      py::arg("k"), py::arg("p"), py::arg("count"), py::arg("seed") = 0, py::arg("horizon") = 1000000,
      py::arg("workers") = 0, release_gil());

  py::class_<InducedExponentReport>(m, "InducedExponentReport")
      .def_readonly("ambient", &InducedExponentReport::ambient)
      .def_readonly("exact", &InducedExponentReport::exact)
      .def_readonly("induced", &InducedExponentReport::induced)
      .def_readonly("induced_std_error", &InducedExponentReport::induced_std_error)
      .def_readonly("measure_zn", &InducedExponentReport::measure_zn)
      .def_readonly("normalized", &InducedExponentReport::normalized)
      .def_readonly("normalized_std_error", &InducedExponentReport::normalized_std_error)
      .def_readonly("mean_return", &InducedExponentReport::mean_return)
      .def_readonly("combined_std_error", &InducedExponentReport::combined_std_error)
      .def_readonly("agrees", &InducedExponentReport::agrees);
  m.def(
      "induced_exponent_check",
      [](const LocallyConstantCocycle& coc, double p, int k, std::int64_t steps, int trials, std::uint64_t seed,
         unsigned workers) {
        return induced_exponent_check(coc, BernoulliParams(p), k, {steps, trials, seed, workers, 1});
      },
      py::arg("cocycle"), py::arg("p"), py::arg("k"), py::arg("steps") = 100000, py::arg("trials") = 64,
      py::arg("seed") = 0, py::arg("workers") = 0, release_gil());

  // regions
  py::class_<RegionReport>(m, "RegionReport")
      .def_property_readonly("labels", &label_names)
      .def_property_readonly("sigma", [](const RegionReport& r) { return r.point.sigma; })
      .def_property_readonly("eta", [](const RegionReport& r) { return r.point.eta; })
      .def_property_readonly("alpha", [](const RegionReport& r) { return r.point.alpha; })
      .def_property_readonly("p", [](const RegionReport& r) { return r.point.p; })
      .def("to_csv_row", &to_csv_row);
  m.def(
      "classify", [](double sigma, double eta, double alpha, double p) { return classify({sigma, eta, alpha, p}); },
      py::arg("sigma"), py::arg("eta"), py::arg("alpha"), py::arg("p"));
  m.def(
      "sweep",
      [](double alpha, double p, std::pair<double, double> sigma_range, std::pair<double, double> eta_range,
         int grid_steps) {
        return sweep(alpha, p, {sigma_range.first, sigma_range.second}, {eta_range.first, eta_range.second},
                     grid_steps);
      },
      py::arg("alpha"), py::arg("p"), py::arg("sigma_range"), py::arg("eta_range"), py::arg("grid_steps"));
  m.def(
      "sweep_diagonal",
      [](double alpha, double p, std::pair<double, double> range, int grid_steps) {
        return sweep_diagonal(alpha, p, {range.first, range.second}, grid_steps);
      },
      py::arg("alpha"), py::arg("p"), py::arg("range"), py::arg("grid_steps"));
  m.attr("REGION_CSV_HEADER") = kRegionCsvHeader;
}
