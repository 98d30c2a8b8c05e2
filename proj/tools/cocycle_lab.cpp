// cocycle_lab: command-line front end for the cocycle library.
//
// Exit codes: 0 success, 1 numerical gate failure, 2 usage error.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/lyapunov.hpp"
#include "cocycle_lab/regions.hpp"
#include "cocycle_lab/serialize.hpp"
#include "repro.hpp"

namespace cl = cocycle_lab;

namespace {

constexpr int kExitGateFailure = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string format;
  std::string output;
};

struct Model {
  double sigma = 4.0;
  double eta = 2.0;
  double alpha = 0.4;
  double gamma = cl::ConstructionParams::kDefaultGamma;
  double p = 0.5;
  int k = 2;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("COCYCLE_LAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("COCYCLE_LAB_SEED", "must be a non-negative integer");
    }
  }
  return 0;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base seed (default: $COCYCLE_LAB_SEED or 0)")->capture_default_str();
  cmd->add_option("--workers", c.workers, "Worker threads, 0 = all cores");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("-o,--output", c.output, "Write to this path instead of standard output");
}

void add_model(CLI::App* cmd, Model& m, bool with_k) {
  cmd->add_option("--sigma", m.sigma, "sigma > 1")->capture_default_str();
  cmd->add_option("--eta", m.eta, "eta > 1")->capture_default_str();
  cmd->add_option("--alpha", m.alpha, "Holder exponent alpha > 0")->capture_default_str();
  cmd->add_option("--gamma", m.gamma, "gamma in [1, 2)")->capture_default_str();
  cmd->add_option("--p", m.p, "Bernoulli probability of symbol 1")->capture_default_str();
  if (with_k) cmd->add_option("--k", m.k, "Cylinder size parameter, n = 2k + 1")->capture_default_str();
}

cl::Json model_json(const Model& m) {
  return cl::Json{{"sigma", m.sigma}, {"eta", m.eta}, {"alpha", m.alpha}, {"gamma", m.gamma}, {"p", m.p}};
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw cl::Error(cl::ErrorKind::invalid_input, "cannot open output file " + c.output);
  out << text;
}

void emit_json(const Common& c, const cl::Json& j) { emit(c, j.dump(2) + "\n"); }

std::string csv_config_header(const cl::Json& config) {
  std::string out;
  for (const auto& [key, value] : config.items()) out += "# " + key + "=" + value.dump() + "\n";
  return out;
}

// Shortest round-trip form, independent of the locale.
std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int parse_perturb(const std::string& text) {
  std::string digits = text;
  if (digits.rfind("k=", 0) == 0) digits = digits.substr(2);
  try {
    std::size_t used = 0;
    const int k = std::stoi(digits, &used);
    if (used == digits.size()) return k;
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError("--perturb", "expected k=<positive integer>");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov exponents and Holder norms of SL(2) cocycles over the Bernoulli shift"};
  app.require_subcommand(1);

  Common common;
  Model model;
  try {
    common.seed = default_seed();
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  // exponent
  auto* exponent = app.add_subcommand("exponent", "Monte Carlo Lyapunov exponent of A or B_n");
  add_common(exponent, common);
  add_model(exponent, model, false);
  std::string perturb;
  std::int64_t steps = 100000;
  int trials = 64;
  int renorm_every = 1;
  exponent->add_option("--perturb", perturb, "Use B_n with k=<int> instead of A");
  exponent->add_option("--steps", steps, "Steps per trial")->capture_default_str();
  exponent->add_option("--trials", trials, "Independent trials")->capture_default_str();
  exponent->add_option("--renorm-every", renorm_every, "Renormalization cadence")->capture_default_str();

  // holder
  auto* holder = app.add_subcommand("holder", "Exact Holder distance ||A - B_n||_alpha and its analytic bound");
  add_common(holder, common);
  add_model(holder, model, false);
  int k_min = 1;
  int k_max = 4;
  bool bound_only = false;
  holder->add_option("--k-min", k_min, "Smallest k in the table")->capture_default_str();
  holder->add_option("--k-max", k_max, "Largest k in the table")->capture_default_str();
  holder->add_flag("--bound-only", bound_only, "Skip the exact enumeration");

  // verify-swap
  auto* swap = app.add_subcommand("verify-swap", "Check that B_n^n and induced matrices swap H and V");
  add_common(swap, common);
  add_model(swap, model, true);
  bool no_perturb = false;
  std::size_t returns = 0;
  swap->add_flag("--no-perturb", no_perturb, "Control run with the unperturbed cocycle");
  swap->add_option("--returns", returns, "Also check this many sampled induced return matrices");

  // regions
  auto* regions = app.add_subcommand("regions", "Classify parameter points into continuity/discontinuity regions");
  add_common(regions, common);
  add_model(regions, model, false);
  double sigma_min = 0.0, sigma_max = 0.0, eta_min = 0.0, eta_max = 0.0;
  int grid = 1;
  bool diagonal = false;
  regions->add_option("--sigma-min", sigma_min, "Lower end of the sigma sweep (unset: --sigma only)");
  regions->add_option("--sigma-max", sigma_max, "Upper end of the sigma sweep");
  regions->add_option("--eta-min", eta_min, "Lower end of the eta sweep (unset: --eta only)");
  regions->add_option("--eta-max", eta_max, "Upper end of the eta sweep");
  regions->add_option("--grid", grid, "Grid points per axis")->capture_default_str();
  regions->add_flag("--diagonal", diagonal, "Sweep along sigma = eta over the sigma range");

  // kac
  auto* kac = app.add_subcommand("kac", "Mean first-return time to Z_n against Kac's lemma");
  add_common(kac, common);
  add_model(kac, model, true);
  std::size_t count = 100000;
  std::int64_t horizon = 1000000;
  kac->add_option("--count", count, "Excursions")->capture_default_str();
  kac->add_option("--horizon", horizon, "Scan limit per excursion")->capture_default_str();

  // bunching
  auto* bunching = app.add_subcommand("bunching", "Search for uniform fiber bunching");
  add_common(bunching, common);
  add_model(bunching, model, true);
  std::string cocycle_kind = "base";
  int n_max = 12;
  bunching->add_option("--cocycle", cocycle_kind, "Cocycle to test")->check(CLI::IsMember({"base", "perturbed", "identity"}))
      ->capture_default_str();
  bunching->add_option("--n-max", n_max, "Largest iterate N to try")->capture_default_str();

  // induced
  auto* induced = app.add_subcommand("induced", "Induced-cocycle exponent on Z_n next to the ambient exponent");
  add_common(induced, common);
  add_model(induced, model, true);
  bool induced_perturb = false;
  induced->add_flag("--perturb", induced_perturb, "Use B_n instead of A");
  induced->add_option("--steps", steps, "Steps per trial")->capture_default_str();
  induced->add_option("--trials", trials, "Independent trials")->capture_default_str();

  // repro
  auto* repro = app.add_subcommand("repro", "Run every reproduction check and report pass/fail");
  add_common(repro, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    cl::Json config{{"command", app.get_subcommands().front()->get_name()}, {"seed", common.seed}};

    if (exponent->parsed()) {
      const cl::BernoulliParams b(model.p);
      std::optional<int> k;
      if (!perturb.empty()) k = parse_perturb(perturb);
      config.update(model_json(model));
      config["perturb_k"] = k ? cl::Json(*k) : cl::Json(nullptr);
      config["steps"] = steps;
      config["trials"] = trials;
      config["renorm_every"] = renorm_every;
      const auto coc = k ? cl::build_perturbed({model.sigma, model.eta, model.alpha, model.gamma, *k})
                         : cl::build_base(model.sigma, model.eta);
      const auto est = cl::mc_exponent(coc, b, {steps, trials, common.seed, common.workers, renorm_every});
      std::optional<double> exact;
      if (!k) exact = cl::exact_exponent_base(model.sigma, model.eta, model.p);
      cl::Json result = cl::estimate_to_json(est, exact);
      result["cocycle"] = cl::descriptor_to_json(coc.descriptor());
      result["zero_exponent_p"] = cl::zero_exponent_p(model.sigma, model.eta);
      if (exact) result["within_3_stderr"] = std::abs(est.lambda_plus - *exact) <= 3.0 * est.std_error;
      emit_json(common, {{"config", config}, {"result", result}});
      return 0;
    }

    if (holder->parsed()) {
      if (k_min < 1 || k_max < k_min) throw CLI::ValidationError("--k-min/--k-max", "need 1 <= k-min <= k-max");
      config.update(model_json(model));
      config.erase("p");
      config["k_min"] = k_min;
      config["k_max"] = k_max;
      config["bound_only"] = bound_only;
      const cl::ConstructionParams first{model.sigma, model.eta, model.alpha, model.gamma, k_min};
      const auto cond = cl::decay_conditions(first);
      cl::Json rows = cl::Json::array();
      bool all_le = true;
      std::optional<double> exact_first, exact_last;
      std::string csv = csv_config_header(config) + "k,sup,seminorm,norm,exact,bound,exact_le_bound\n";
      for (int k = k_min; k <= k_max; ++k) {
        const auto params = first.with_k(k);
        const auto bound = cl::holder_bound_terms(params);
        cl::HolderNorm norm{0.0, 0.0, 0.0, model.alpha, false};
        if (!bound_only) {
          const auto diff = cl::difference(cl::build_base(model.sigma, model.eta), cl::build_perturbed(params));
          try {
            norm = cl::holder_norm_exact(diff, model.alpha, common.workers);
          } catch (const cl::Error& e) {
            if (e.kind() != cl::ErrorKind::capacity) throw;
          }
        }
        const bool le = !norm.exact || norm.norm <= bound.total;
        all_le = all_le && le;
        if (norm.exact) {
          if (!exact_first) exact_first = norm.norm;
          exact_last = norm.norm;
        }
        cl::Json row{{"k", k}, {"norm", cl::holder_norm_to_json(norm)}, {"bound", cl::holder_bound_to_json(bound)}};
        if (norm.exact) row["exact_le_bound"] = le;
        rows.push_back(row);
        csv += std::to_string(k) + ',';
        if (norm.exact) {
          csv += format_number(norm.sup) + ',' + format_number(norm.seminorm) + ',' + format_number(norm.norm) +
                 ",true,";
        } else {
          csv += ",,,false,";
        }
        csv += format_number(bound.total) + ',' + (norm.exact ? (le ? "true" : "false") : "") + '\n';
      }
      if (common.format == "csv") {
        emit(common, csv);
      } else {
        cl::Json result{{"decays", cond.all()},
                        {"conditions",
                         {{"eta_gamma", cond.eta_gamma},
                          {"sigma_ratio", cond.sigma_ratio},
                          {"eta_delta", cond.eta_delta},
                          {"beta_decays", cond.beta_decays}}},
                        {"rows", rows},
                        {"all_exact_le_bound", all_le}};
        if (exact_first && exact_last && k_max > k_min) result["exact_decreased"] = *exact_last < *exact_first;
        cl::Json out{{"config", config}, {"result", result}};
        emit_json(common, out);
      }
      return all_le ? 0 : kExitGateFailure;
    }

    if (swap->parsed()) {
      config.update(model_json(model));
      config["k"] = model.k;
      config["perturb"] = !no_perturb;
      config["returns"] = returns;
      const cl::ConstructionParams params{model.sigma, model.eta, model.alpha, model.gamma, model.k};
      const auto variant = no_perturb ? cl::SwapVariant::unperturbed : cl::SwapVariant::perturbed;
      const auto report = cl::verify_swap(params, variant, common.workers);
      bool pass = report.pass();
      cl::Json out{{"config", config}, {"swap", cl::swap_report_to_json(report)}};
      if (returns > 0) {
        const auto coc = no_perturb ? cl::build_base(model.sigma, model.eta).widened(-2 * model.k, 2 * model.k)
                                    : cl::build_perturbed(params);
        const auto sample = cl::sample_return_excursions(model.k, cl::BernoulliParams(model.p), returns, common.seed,
                                                         {1000000, common.workers});
        double worst = 0.0;
        double worst_pair = 0.0;
        std::optional<cl::Mat2> previous;
        for (const auto& exc : sample.excursions) {
          const auto m = cl::induced_matrix(coc, exc);
          worst = std::max(worst, cl::diagonal_residual(m));
          if (previous) worst_pair = std::max(worst_pair, cl::product_offdiagonal_residual(m, *previous));
          previous = m;
        }
        const bool anti = worst <= cl::SwapReport::kTolerance;
        const bool pairs = worst_pair <= cl::SwapReport::kTolerance;
        out["returns"] = {{"count", sample.excursions.size()},
                          {"truncated", sample.truncated},
                          {"max_diag_residual", worst},
                          {"max_pair_offdiag_residual", worst_pair},
                          {"all_antidiagonal", anti},
                          {"pairs_diagonal", pairs}};
        pass = pass && anti && pairs;
      }
      out["pass"] = pass;
      emit_json(common, out);
      return pass ? 0 : kExitGateFailure;
    }

    if (regions->parsed()) {
      std::vector<cl::RegionReport> rows;
      const bool ranged = sigma_min > 0.0 || sigma_max > 0.0;
      const cl::SweepRange srange = ranged ? cl::SweepRange{sigma_min, sigma_max} : cl::SweepRange{model.sigma, model.sigma};
      const bool eta_ranged = eta_min > 0.0 || eta_max > 0.0;
      const cl::SweepRange erange = eta_ranged ? cl::SweepRange{eta_min, eta_max} : cl::SweepRange{model.eta, model.eta};
      config["alpha"] = model.alpha;
      config["p"] = model.p;
      config["sigma_range"] = {srange.lo, srange.hi};
      if (!diagonal) config["eta_range"] = {erange.lo, erange.hi};
      config["grid"] = grid;
      config["diagonal"] = diagonal;
      rows = diagonal ? cl::sweep_diagonal(model.alpha, model.p, srange, grid)
                      : cl::sweep(model.alpha, model.p, srange, erange, grid);
      if (common.format == "json") {
        cl::Json arr = cl::Json::array();
        for (const auto& r : rows) arr.push_back(cl::region_report_to_json(r));
        emit_json(common, {{"config", config}, {"rows", arr}});
      } else {
        std::string csv = csv_config_header(config) + cl::kRegionCsvHeader + "\n";
        for (const auto& r : rows) csv += cl::to_csv_row(r) + "\n";
        emit(common, csv);
      }
      return 0;
    }

    if (kac->parsed()) {
      config["p"] = model.p;
      config["k"] = model.k;
      config["count"] = count;
      config["horizon"] = horizon;
      const auto report =
          cl::kac_statistics(model.k, cl::BernoulliParams(model.p), count, common.seed, {horizon, common.workers});
      emit_json(common, {{"config", config}, {"result", cl::kac_report_to_json(report)}});
      return 0;
    }

    if (bunching->parsed()) {
      config.update(model_json(model));
      config.erase("p");
      config["cocycle"] = cocycle_kind;
      config["n_max"] = n_max;
      if (cocycle_kind == "perturbed") config["k"] = model.k;
      const auto coc = cocycle_kind == "identity" ? cl::identity_cocycle()
                       : cocycle_kind == "base"
                           ? cl::build_base(model.sigma, model.eta)
                           : cl::build_perturbed({model.sigma, model.eta, model.alpha, model.gamma, model.k});
      const auto result = cl::fiber_bunching_test(coc, model.alpha, n_max);
      emit_json(common, {{"config", config}, {"result", cl::bunching_to_json(result)}});
      return 0;
    }

    if (induced->parsed()) {
      config.update(model_json(model));
      config["k"] = model.k;
      config["perturb"] = induced_perturb;
      config["steps"] = steps;
      config["trials"] = trials;
      const auto coc = induced_perturb
                           ? cl::build_perturbed({model.sigma, model.eta, model.alpha, model.gamma, model.k})
                           : cl::build_base(model.sigma, model.eta);
      const auto report = cl::induced_exponent_check(coc, cl::BernoulliParams(model.p), model.k,
                                                     {steps, trials, common.seed, common.workers, 1});
      emit_json(common, {{"config", config}, {"result", cl::induced_report_to_json(report)}});
      return 0;
    }

    if (repro->parsed()) {
      const auto report = cocycle_lab_tools::run_repro(common.seed, common.workers);
      emit_json(common, {{"config", config}, {"result", report}});
      return report.at("pass").get<bool>() ? 0 : kExitGateFailure;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const cl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
