#include "cocycle_lab/serialize.hpp"

#include "cocycle_lab/error.hpp"

namespace cocycle_lab {

Json word_to_json(const Word& w) { return Json{{"lo", w.lo()}, {"sym", w.to_string()}}; }

Word word_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("sym")) {
    throw Error(ErrorKind::invalid_input, "word JSON needs \"lo\" and \"sym\"");
  }
  return Word::parse(j.at("lo").get<int>(), j.at("sym").get<std::string>());
}

Json descriptor_to_json(const CocycleDescriptor& d) {
  Json j{{"kind", to_string(d.kind)}};
  if (d.sigma) j["sigma"] = *d.sigma;
  if (d.eta) j["eta"] = *d.eta;
  if (d.gamma) j["gamma"] = *d.gamma;
  if (d.k) j["k"] = *d.k;
  return j;
}

Json holder_norm_to_json(const HolderNorm& h) {
  return Json{{"sup", h.sup}, {"seminorm", h.seminorm}, {"norm", h.norm}, {"alpha", h.alpha}, {"exact", h.exact}};
}

Json holder_bound_to_json(const HolderBound& b) {
  return Json{{"sup_term", b.sup_term}, {"split_term", b.split_term}, {"zn_term", b.zn_term},
              {"f2k_term", b.f2k_term}, {"cross_term", b.cross_term}, {"fk_term", b.fk_term},
              {"total", b.total}};
}

Json estimate_to_json(const ExponentEstimate& e, std::optional<double> exact) {
  Json j{{"lambda_plus", e.lambda_plus}, {"stderr", e.std_error}, {"trials", e.trials}, {"steps", e.steps}};
  if (exact) j["exact"] = *exact;
  return j;
}

Json swap_report_to_json(const SwapReport& r) {
  return Json{{"max_diag_residual", r.max_diag_residual},
              {"max_direction_residual", r.max_direction_residual},
              {"max_offdiag_rel_error", r.max_offdiag_rel_error},
              {"max_det_error", r.max_det_error},
              {"words_checked", r.words_checked},
              {"tolerance", SwapReport::kTolerance},
              {"pass", r.pass()}};
}

Json kac_report_to_json(const KacReport& r) {
  return Json{{"mean_return", r.mean_return}, {"stderr", r.std_error},       {"expected", r.expected},
              {"rel_error", r.rel_error},     {"count", r.count},            {"truncated", r.truncated},
              {"truncation_fraction", r.truncation_fraction}};
}

Json bunching_to_json(const BunchingResult& r) {
  Json j;
  if (r.bunched_at) {
    j["bunched_at"] = *r.bunched_at;
  } else {
    j["bunched_at"] = "NOT_FOUND";
  }
  j["last_n"] = r.last_n;
  j["worst_ratio"] = r.worst_ratio;
  j["threshold"] = r.threshold;
  if (r.worst_context) j["worst_context"] = word_to_json(*r.worst_context);
  return j;
}

Json induced_report_to_json(const InducedExponentReport& r) {
  Json j{{"ambient", estimate_to_json(r.ambient, r.exact)},
         {"induced", r.induced},
         {"induced_stderr", r.induced_std_error},
         {"measure_zn", r.measure_zn},
         {"normalized", r.normalized},
         {"normalized_stderr", r.normalized_std_error},
         {"mean_return", r.mean_return},
         {"ambient_corrected", r.ambient_corrected},
         {"combined_stderr", r.combined_std_error},
         {"induced_steps", r.induced_steps},
         {"agrees", r.agrees}};
  return j;
}

Json region_report_to_json(const RegionReport& r) {
  Json labels = Json::array();
  for (auto l : r.labels) labels.push_back(to_string(l));
  const auto& w = r.witness;
  return Json{{"sigma", r.point.sigma},
              {"eta", r.point.eta},
              {"alpha", r.point.alpha},
              {"p", r.point.p},
              {"labels", labels},
              {"witness",
               {{"sig2", w.sig2},
                {"eta2", w.eta2},
                {"pow_a", w.pow_a},
                {"pow_2a", w.pow_2a},
                {"pow_3a", w.pow_3a},
                {"pow_4a", w.pow_4a},
                {"sigma3_over_eta", w.sigma3_over_eta},
                {"zero_exponent_p", w.zero_exponent_p}}}};
}

}  // namespace cocycle_lab
