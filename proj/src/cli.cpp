#include "eplt/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "eplt/constructions.hpp"
#include "eplt/dilation.hpp"
#include "eplt/parallel.hpp"

namespace eplt::cli {

namespace {

// ---- config access ----------------------------------------------------

double as_number(const Json& j, const std::string& key) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    throw ConfigError("'" + key + "' must be a number or \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

double get_number(const Json& cfg, const std::string& key, double fallback) {
  return cfg.contains(key) ? as_number(cfg.at(key), key) : fallback;
}

int get_int(const Json& cfg, const std::string& key, int fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return cfg.at(key).get<int>();
}

std::string get_string(const Json& cfg, const std::string& key, const std::string& fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_string()) throw ConfigError("'" + key + "' must be a string");
  return cfg.at(key).get<std::string>();
}

std::uint64_t get_seed(const Json& cfg, std::uint64_t fallback) {
  if (!cfg.contains("seed")) return fallback;
  if (!cfg.at("seed").is_number_unsigned() && !cfg.at("seed").is_number_integer()) {
    throw ConfigError("'seed' must be a non-negative integer");
  }
  return cfg.at("seed").get<std::uint64_t>();
}

std::vector<double> get_list(const Json& cfg, const std::string& key, std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto& j = cfg.at(key);
  if (!j.is_array()) return {as_number(j, key)};
  std::vector<double> out;
  for (const auto& v : j) out.push_back(as_number(v, key));
  return out;
}

void require_positive(int value, const char* key) {
  if (value < 1) throw ConfigError(std::string("'") + key + "' must be at least 1");
}

ComplexMatrix hamiltonian(const Json& cfg, const std::string& suffix, int d) {
  if (cfg.contains("hamiltonian" + suffix)) return matrix_from_json(cfg.at("hamiltonian" + suffix));
  std::vector<double> fallback;
  for (int k = 0; k < d; ++k) fallback.push_back(k);
  std::vector<double> energies = get_list(cfg, "energies" + suffix, {});
  if (energies.empty()) energies = get_list(cfg, "energies", fallback);
  if (static_cast<int>(energies.size()) != d) {
    throw ConfigError("energy list length does not match d = " + std::to_string(d));
  }
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) h(k, k) = energies[static_cast<std::size_t>(k)];
  return h;
}

DensityOperator gibbs(const ComplexMatrix& h, double kT) {
  if (std::isinf(kT)) return thermal_state(ThermalSpec{h, Temperature::infinite(), 1.0});
  return thermal_state(ThermalSpec::at_kT(h, kT));
}

DensityOperator party_gamma(const Json& cfg, const std::string& suffix, int d) {
  const double kT = get_number(cfg, "kT" + suffix, get_number(cfg, "kT", 1.0));
  return gibbs(hamiltonian(cfg, suffix, d), kT);
}

double resolve_epsilon(const Json& cfg, const std::string& key, double maximum) {
  if (!cfg.contains(key)) return maximum;
  const auto& j = cfg.at(key);
  if (j.is_string() && j.get<std::string>() == "max") return maximum;
  return as_number(j, key);
}

std::string join(const RealVector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_number(v(i));
  }
  return out;
}

Cell num(double x) { return Cell(x); }
Cell integer(long long x) { return Cell(x); }
Cell text(std::string s) { return Cell(std::move(s)); }
Cell flag(bool b) { return Cell(b); }

// ---- thermal ----------------------------------------------------------

}  // namespace

CommandReport cmd_thermal(const Json& cfg) {
  const int d = get_int(cfg, "d", 2);
  require_positive(d, "d");
  const ComplexMatrix h = hamiltonian(cfg, "", d);
  const auto kts = get_list(cfg, "kT", {0.5, 1.0, 2.0});
  const auto epsilons = get_list(cfg, "epsilon", {0.0, 0.1, 0.25, 0.5});
  const bool include_pole = cfg.value("include_pole", true);
  const double tol = get_number(cfg, "tolerance", 1e-10);

  CommandReport report{"thermal", true, {}, Json::object()};
  Table table{"thermal",
              {"kT", "epsilon", "p_min", "epsilon_star", "gamma_spectrum", "eta_spectrum", "gap",
               "quenched_gap", "gap_ratio", "quench_consistency", "note"},
              {}};
  const auto es = eig_hermitian(h);
  const double gap = d == 2 ? es.values(1) - es.values(0) : std::nan("");

  double worst = 0.0;
  for (double kT : kts) {
    const DensityOperator gamma = gibbs(h, kT);
    const RealVector spec = gamma.spectrum();
    const double eps_star = d * spec(0);
    std::vector<double> grid = epsilons;
    if (include_pole) grid.push_back(eps_star);
    for (double eps : grid) {
      std::vector<Cell> row{num(kT), num(eps), num(spec(0)), num(eps_star), text(join(spec))};
      std::string note;
      std::optional<RealVector> eta_spec;
      try {
        eta_spec = eta_state(gamma, eps).spectrum();
      } catch (const NotAStateError& e) {
        note = "epsilon above epsilon_star";
      } catch (const RangeError& e) {
        note = e.what();
      }
      row.push_back(eta_spec ? text(join(*eta_spec)) : text(""));
      const bool quench_applies = d == 2 && std::isfinite(kT) && kT > 0.0 && eta_spec;
      if (quench_applies) {
        const double e_eps = quench_energy(gap, kT, eps);
        const auto diag = quench_diagnostic(gap, kT, eps);
        RealVector model(2);
        if (std::isinf(e_eps)) {
          model << 0.0, 1.0;
        } else {
          ComplexMatrix hq = ComplexMatrix::Zero(2, 2);
          hq(1, 1) = e_eps;
          model = gibbs(hq, kT).spectrum();
        }
        const double dev = (model - *eta_spec).cwiseAbs().maxCoeff();
        worst = std::max(worst, dev);
        row.insert(row.end(), {num(gap), num(e_eps), num(gap != 0.0 ? e_eps / gap : std::nan("")),
                               num(dev)});
        if (diag) note = *diag;
      } else {
        row.insert(row.end(), {num(gap), text(""), text(""), text("")});
        if (note.empty() && d == 2) note = "quench needs finite positive kT";
      }
      row.push_back(text(note));
      table.rows.push_back(std::move(row));
    }
  }
  report.passed = worst <= tol;
  report.summary = {{"max_quench_consistency_deviation", worst}, {"tolerance", tol}};
  report.tables.push_back(std::move(table));
  return report;
}

// ---- eplt-verify ------------------------------------------------------

namespace {

struct Bipartite {
  std::string family;
  int d;
  DensityOperator gamma_a;
  DensityOperator gamma_b;
  double eps_a;
  double eps_b;
  double eps_star;
};

std::vector<std::pair<std::string, ComplexMatrix>> bipartite_inputs(const Json& cfg, int d,
                                                                   std::uint64_t seed) {
  const int steps = get_int(cfg, "isotropic_steps", 20);
  const int randoms = get_int(cfg, "random_states", 20);
  require_positive(steps, "isotropic_steps");
  std::vector<std::pair<std::string, ComplexMatrix>> inputs;
  for (int k = 0; k <= steps; ++k) {
    const double p = static_cast<double>(k) / steps;
    inputs.emplace_back("isotropic p=" + format_number(p), isotropic(d, p).matrix());
  }
  Rng rng(seed);
  for (int k = 0; k < randoms; ++k) {
    inputs.emplace_back("random " + std::to_string(k),
                        random_pure_state(SubsystemShape{d, d}, rng).matrix());
  }
  return inputs;
}

CommandReport verify_bipartite(const Json& cfg, const std::string& family) {
  const int d = get_int(cfg, "d", 2);
  if (d < 2) throw ConfigError("'d' must be at least 2");
  const double tol = get_number(cfg, "tolerance", 1e-9);
  const std::uint64_t seed = get_seed(cfg, 1);
  const int restarts = get_int(cfg, "fef_restarts", 8);
  require_positive(restarts, "fef_restarts");

  const DensityOperator ga = party_gamma(cfg, "_a", d);
  const DensityOperator gb = party_gamma(cfg, "_b", d);
  const SubsystemShape shape{d, d};

  double eps = 0.0, eps_a = 0.0, eps_b = 0.0, eps_star = 0.0;
  LinearMap map;
  std::optional<LosrMixture> mix;
  if (family == "eplt") {
    eps_star = eplt_max_epsilon(ga, gb);
    eps = resolve_epsilon(cfg, "epsilon", eps_star);
    if (is_prime(d)) mix = eplt(ga, gb, eps);
    map = [&](const ComplexMatrix& x) { return eplt_apply(ga, gb, eps, x); };
  } else {
    eps_a = resolve_epsilon(cfg, "epsilon_a", d * ga.spectrum()(0));
    eps_b = resolve_epsilon(cfg, "epsilon_b", d * gb.spectrum()(0));
    eps = eps_a * eps_b;
    eps_star = d * min_thermal_population(ga, gb);
    if (is_prime(d)) mix = eplt_alternative(ga, gb, eps_a, eps_b);
    map = [&](const ComplexMatrix& x) { return eplt_alternative_apply(ga, gb, eps_a, eps_b, x); };
  }

  const ThermalityReport thermality =
      mix ? verify_local_thermalization(*mix, {ga, gb}, tol)
          : verify_local_thermalization(map, shape, {ga, gb}, tol, true);

  CommandReport report{"eplt-verify", true, {}, Json::object()};
  Table cert{"certification",
             {"family", "d", "epsilon", "epsilon_a", "epsilon_b", "epsilon_star", "p_min",
              "mixture_terms", "basis_size", "max_marginal_deviation", "passed"},
             {}};
  cert.rows.push_back({text(family), integer(d), num(eps), num(eps_a), num(eps_b), num(eps_star),
                       num(min_thermal_population(ga, gb)),
                       integer(mix ? static_cast<long long>(mix->size()) : 0),
                       integer(thermality.basis_size), num(thermality.max_marginal_deviation),
                       flag(thermality.passed())});

  const auto inputs = bipartite_inputs(cfg, d, derive_seed(seed, 1));
  struct SweepRow {
    double f_in, f_out, fef_out, ppt;
    bool bound_ok;
  };
  const auto rows = parallel_map<SweepRow>(inputs.size(), [&](std::size_t i) {
    const DensityOperator out(map(inputs[i].second), shape);
    const DensityOperator in(inputs[i].second, shape);
    const double f_in = singlet_fraction(in);
    const auto f = fef(out, restarts, derive_seed(seed, 1000 + i));
    return SweepRow{f_in, singlet_fraction(out), f.optimized, ppt_min_eigenvalue(out),
                    f.optimized >= eps * f_in - 1e-8};
  });

  Table sweep{"sweep",
              {"input", "singlet_in", "singlet_in_above_1_over_d", "singlet_out", "fef_out",
               "ppt_min_out", "npt_out", "teleportation_out", "fef_bound_ok"},
              {}};
  bool bounds_ok = true;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& r = rows[i];
    bounds_ok = bounds_ok && r.bound_ok;
    sweep.rows.push_back({text(inputs[i].first), num(r.f_in), flag(r.f_in > 1.0 / d + kTieTolerance),
                          num(r.f_out), num(r.fef_out), num(r.ppt),
                          flag(r.ppt < -kTieTolerance),
                          flag(fef_threshold_flags(r.fef_out, d).teleportation),
                          flag(r.bound_ok)});
  }
  report.passed = thermality.passed() && bounds_ok;
  report.summary = {{"thermality", to_json(thermality)}, {"fef_bounds_hold", bounds_ok}};
  report.tables.push_back(std::move(cert));
  report.tables.push_back(std::move(sweep));
  return report;
}

CommandReport verify_multipartite(const Json& cfg) {
  const int parties = get_int(cfg, "parties", 3);
  if (parties < 2 || parties > 6) throw ConfigError("'parties' must lie in [2, 6]");
  const double tol = get_number(cfg, "tolerance", 1e-9);
  const std::uint64_t seed = get_seed(cfg, 1);
  const auto kts = get_list(cfg, "kT", {1.0});
  std::vector<DensityOperator> gammas;
  for (int k = 0; k < parties; ++k) {
    const double kT = kts[static_cast<std::size_t>(std::min<int>(k, static_cast<int>(kts.size()) - 1))];
    gammas.push_back(gibbs(hamiltonian(cfg, "", 2), kT));
  }
  double pmin = 1.0;
  for (const auto& g : gammas) pmin = std::min(pmin, g.spectrum()(0));
  const double eps_star = 2.0 * pmin;
  const double eps = resolve_epsilon(cfg, "epsilon", eps_star);
  const LosrMixture mix = eplt_multipartite(gammas, eps);
  const ThermalityReport thermality = verify_local_thermalization(mix, gammas, tol);

  CommandReport report{"eplt-verify", true, {}, Json::object()};
  Table cert{"certification",
             {"family", "parties", "epsilon", "epsilon_star", "mixture_terms", "basis_size",
              "max_marginal_deviation", "passed"},
             {}};
  cert.rows.push_back({text("multipartite"), integer(parties), num(eps), num(eps_star),
                       integer(static_cast<long long>(mix.size())), integer(thermality.basis_size),
                       num(thermality.max_marginal_deviation), flag(thermality.passed())});

  const SubsystemShape shape = SubsystemShape::uniform(2, parties);
  std::vector<std::pair<std::string, ComplexMatrix>> inputs;
  const int steps = get_int(cfg, "isotropic_steps", 10);
  require_positive(steps, "isotropic_steps");
  for (int k = 0; k <= steps; ++k) {
    const double x = static_cast<double>(k) / steps;
    inputs.emplace_back("ghz-isotropic x=" + format_number(x), ghz_isotropic(parties, x).matrix());
  }
  Rng rng(derive_seed(seed, 2));
  for (int k = 0; k < get_int(cfg, "random_states", 10); ++k) {
    inputs.emplace_back("random " + std::to_string(k), random_pure_state(shape, rng).matrix());
  }

  const ComplexVector ghz = ghz_basis_vector(parties, 0, GhzSign::Plus);
  Table sweep{"sweep", {"input", "ghz_fidelity_in", "ghz_fidelity_out", "bound_ok", "gme_out"}, {}};
  bool bounds_ok = true;
  for (const auto& [name, x] : inputs) {
    const ComplexMatrix y = eplt_multipartite_apply(gammas, eps, x);
    const double f_in = ghz.dot(x * ghz).real();
    const double f_out = ghz.dot(y * ghz).real();
    const bool ok = f_out >= eps * f_in - 1e-10;
    bounds_ok = bounds_ok && ok;
    Cell gme = text("n/a");
    try {
      gme = flag(gme_threshold_test(DensityOperator(y, shape)));
    } catch (const NotInFamilyError&) {
    }
    sweep.rows.push_back({text(name), num(f_in), num(f_out), flag(ok), gme});
  }
  report.passed = thermality.passed() && bounds_ok;
  report.summary = {{"thermality", to_json(thermality)}, {"fidelity_bounds_hold", bounds_ok}};
  report.tables.push_back(std::move(cert));
  report.tables.push_back(std::move(sweep));
  return report;
}

CommandReport verify_zero_temperature(const Json& cfg) {
  const int d = get_int(cfg, "d", 4);
  const double tol = get_number(cfg, "tolerance", 1e-9);
  // Default spectrum 0, 0, 1, 2, ...: a doubly degenerate ground level.
  Json defaults = cfg;
  if (!cfg.contains("energies") && !cfg.contains("hamiltonian")) {
    std::vector<double> energies{0.0};
    for (int k = 1; k < d; ++k) energies.push_back(k - 1);
    defaults["energies"] = energies;
  }
  const ComplexMatrix ha = hamiltonian(defaults, "_a", d);
  const ComplexMatrix hb = hamiltonian(defaults, "_b", d);
  const LosrMixture mix = zero_temp_protocol(ha, hb);
  const DensityOperator ga = thermal_state(ThermalSpec{ha, Temperature::finite(0.0), 1.0});
  const DensityOperator gb = thermal_state(ThermalSpec{hb, Temperature::finite(0.0), 1.0});
  const ThermalityReport thermality = verify_local_thermalization(mix, {ga, gb}, tol);

  CommandReport report{"eplt-verify", thermality.passed(), {}, {{"thermality", to_json(thermality)}}};
  Table cert{"certification",
             {"family", "d", "mixture_terms", "basis_size", "max_marginal_deviation", "passed"},
             {}};
  cert.rows.push_back({text("zero-temperature"), integer(d), integer(static_cast<long long>(mix.size())),
                       integer(thermality.basis_size), num(thermality.max_marginal_deviation),
                       flag(thermality.passed())});
  report.tables.push_back(std::move(cert));
  return report;
}

}  // namespace

CommandReport cmd_eplt_verify(const Json& cfg) {
  const std::string family = get_string(cfg, "family", "eplt");
  if (family == "eplt" || family == "alternative") return verify_bipartite(cfg, family);
  if (family == "multipartite") return verify_multipartite(cfg);
  if (family == "zero-temperature") return verify_zero_temperature(cfg);
  throw ConfigError("unknown family '" + family +
                    "' (expected eplt, alternative, multipartite or zero-temperature)");
}

// ---- race -------------------------------------------------------------

CommandReport cmd_race(const Json& cfg) {
  const int d = get_int(cfg, "d", 2);
  const SpeedupScenario base =
      cfg.contains("scenario") ? scenario_from_json(cfg.at("scenario")) : SpeedupScenario::worked_example(d);
  const auto distances = get_list(cfg, "distance", {1.0});
  const auto deltas = get_list(cfg, "delta", {base.delta});
  std::optional<double> t_twirl;
  if (cfg.contains("t_twirl")) t_twirl = as_number(cfg.at("t_twirl"), "t_twirl");
  const std::uint64_t seed = get_seed(cfg, 7);

  CommandReport report{"race", true, {}, Json::object()};
  Table race{"race",
             {"distance", "delta", "t_pt", "t_eplt_bound", "twirl_time_assumed", "n_delta",
              "t_finite", "speedup_condition", "verdict", "ideal_wins", "finite_wins",
              "state_threshold", "crossover_ideal", "crossover_finite"},
             {}};
  for (double distance : distances) {
    for (double delta : deltas) {
      SpeedupScenario s = base;
      s.delta = delta;
      const RaceReport r = race_report(s, distance, t_twirl);
      race.rows.push_back({num(r.distance), num(r.delta), num(r.t_pt), num(r.t_eplt_bound),
                           flag(r.twirl_time_assumed), integer(r.n_delta), num(r.t_finite),
                           flag(r.speedup_condition),
                           text(r.speedup_condition ? "speed-up" : "no speed-up"), flag(r.ideal_wins),
                           flag(r.finite_wins), num(r.state_threshold), num(r.crossover_ideal),
                           num(r.crossover_finite)});
    }
  }
  report.tables.push_back(std::move(race));

  const SpeedupScenario ex = SpeedupScenario::worked_example(base.d);
  const int n = n_delta(ex);
  Table worked{"worked_example",
               {"d", "tau_gamma_over_t_u", "p_min", "delta", "n_delta_argument", "n_delta",
                "state_threshold", "threshold_over_d", "speedup_constant",
                "precision_failure_log2", "iteration_failure_log2", "chebyshev_tail_log2"},
               {}};
  worked.rows.push_back({integer(ex.d), num(ex.tau_gamma / ex.t_unitary), num(ex.p_min),
                         num(ex.delta), num(n_delta_argument(ex)), integer(n),
                         num(speedup_state_threshold(ex)), num(speedup_state_threshold(ex) / ex.d),
                         num(speedup_constant()), num(precision_failure_log2(ex)),
                         num(iteration_failure_log2(n)), num(chebyshev_tail_log2(n, -n / 4.0))});
  report.tables.push_back(std::move(worked));

  const Json mc = cfg.value("monte_carlo", Json::object());
  if (mc.value("enabled", true)) {
    const int mc_d = get_int(mc, "d", 2);
    std::vector<int> factors;
    for (double f : get_list(mc, "factors", {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12})) {
      factors.push_back(static_cast<int>(f));
    }
    const int realizations = get_int(mc, "realizations", 100);
    const int probes = get_int(mc, "probes", 200);
    const auto results = parallel_map<TwirlConvergence>(factors.size(), [&](std::size_t i) {
      return twirl_convergence(mc_d, factors[i], realizations, derive_seed(seed, i), probes);
    });
    Table table{"monte_carlo",
                {"factors", "realizations", "mean_square", "bound", "standard_error",
                 "within_3_sigma", "worst_input_mean_square", "slack", "tail_frequency", "tail_bound", "tail_ok"},
                {}};
    for (const auto& r : results) {
      const double bound = std::ldexp(1.0, -r.factors);
      const bool mean_ok = r.mean_square <= bound + 3.0 * r.standard_error;
      const bool tail_ok = r.tail_frequency <= r.tail_bound;
      report.passed = report.passed && mean_ok && tail_ok;
      table.rows.push_back({integer(r.factors), integer(r.realizations), num(r.mean_square),
                            num(bound), num(r.standard_error), flag(mean_ok),
                            num(r.worst_input_mean_square), num(r.slack),
                            num(r.tail_frequency), num(r.tail_bound), flag(tail_ok)});
    }
    report.tables.push_back(std::move(table));
  }
  report.summary = {{"scenario", to_json(base)}};
  return report;
}

// ---- dilation ---------------------------------------------------------

CommandReport cmd_dilation(const Json& cfg) {
  const int d = get_int(cfg, "d", 2);
  if (d < 2) throw ConfigError("'d' must be at least 2");
  const std::string family = get_string(cfg, "family", "eplt");
  const double tol = get_number(cfg, "tolerance", 1e-9);
  const int inputs = get_int(cfg, "inputs", 20);
  require_positive(inputs, "inputs");
  const std::uint64_t seed = get_seed(cfg, 11);

  const DensityOperator ga = party_gamma(cfg, "_a", d);
  const DensityOperator gb = party_gamma(cfg, "_b", d);
  std::optional<LosrMixture> mix;
  if (family == "constant") {
    mix.emplace(std::vector<LosrTerm>{{1.0, {constant_channel(ga), constant_channel(gb)}}},
                SubsystemShape{d, d});
  } else if (family == "eplt" || family == "alternative") {
    if (!is_prime(d)) {
      throw ConfigError("no exact finite twirl mixture is compiled for d = " + std::to_string(d));
    }
    if (family == "eplt") {
      mix = eplt(ga, gb, resolve_epsilon(cfg, "epsilon", eplt_max_epsilon(ga, gb)));
    } else {
      mix = eplt_alternative(ga, gb, resolve_epsilon(cfg, "epsilon_a", d * ga.spectrum()(0)),
                             resolve_epsilon(cfg, "epsilon_b", d * gb.spectrum()(0)));
    }
  } else {
    throw ConfigError("unknown family '" + family + "' (expected eplt, alternative or constant)");
  }

  const BathDilation dil = build_bath_dilation(*mix);
  const double deviation = dilation_deviation(dil, *mix, inputs, seed);
  const bool structure = dil.verify_structure();
  const bool passed = deviation < tol && structure;

  CommandReport report{"dilation", passed, {}, Json::object()};
  Table table{"dilation",
              {"family", "d", "terms", "ancilla_dim", "register_dim", "inputs", "max_deviation",
               "tolerance", "unitaries_ok", "bath_form", "separable_by_construction", "passed"},
              {}};
  table.rows.push_back({text(family), integer(d), integer(dil.terms()), integer(d * d),
                        integer(dil.terms()), integer(inputs), num(deviation), num(tol),
                        flag(structure), text("|00><00| (x) sum_i p_i |ii><ii|"), flag(true),
                        flag(passed)});
  report.tables.push_back(std::move(table));
  Table bath{"bath", {"index", "probability"}, {}};
  for (int i = 0; i < dil.terms(); ++i) {
    bath.rows.push_back({integer(i), num(dil.probabilities()[static_cast<std::size_t>(i)])});
  }
  report.tables.push_back(std::move(bath));
  report.summary = {{"max_deviation", deviation}, {"terms", dil.terms()}};
  return report;
}

// ---- twirl-sample -----------------------------------------------------

CommandReport cmd_twirl_sample(const Json& cfg) {
  const int d = get_int(cfg, "d", 2);
  if (d < 2) throw ConfigError("'d' must be at least 2");
  const int factors = get_int(cfg, "factors", 8);
  if (factors < 0) throw ConfigError("'factors' must be non-negative");
  const int realizations = get_int(cfg, "realizations", 10);
  require_positive(realizations, "realizations");
  const int probe_count = get_int(cfg, "probes", 200);
  const double tol = get_number(cfg, "tolerance", 1e-12);
  const std::uint64_t seed = get_seed(cfg, 3);

  const auto probes = probe_states(d, probe_count, derive_seed(seed, 0xffffffffULL));
  const ComplexMatrix psi = max_entangled(d).matrix();
  struct Row {
    double deviation, psi_error;
  };
  const auto rows = parallel_map<Row>(static_cast<std::size_t>(realizations), [&](std::size_t r) {
    const auto sample = twirl_sampled(d, factors, derive_seed(seed, r));
    return Row{twirl_deviation(sample, probes), sup_norm(sample.apply(psi) - psi)};
  });

  CommandReport report{"twirl-sample", true, {}, Json::object()};
  Table table{"twirl_sample",
              {"realization", "factors", "deviation", "deviation_squared", "floor_2_pow_minus_n",
               "psi_plus_error"},
              {}};
  double mean = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    report.passed = report.passed && rows[r].psi_error <= tol;
    mean += rows[r].deviation * rows[r].deviation / realizations;
    table.rows.push_back({integer(static_cast<long long>(r)), integer(factors), num(rows[r].deviation),
                          num(rows[r].deviation * rows[r].deviation),
                          num(std::ldexp(1.0, -factors)), num(rows[r].psi_error)});
  }
  report.tables.push_back(std::move(table));
  report.summary = {{"mean_square_deviation", mean}, {"bound", std::ldexp(1.0, -factors)}};
  return report;
}

// ---- rendering --------------------------------------------------------

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string quoted = "\"";
          for (char ch : v) {
            if (ch == '"') quoted += '"';
            quoted += ch;
          }
          return quoted + "\"";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

Json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return number(v);
        } else {
          return v;
        }
      },
      c);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

std::string render_csv(const CommandReport& report, const std::string& timestamp) {
  std::ostringstream os;
  os << "# eplt " << report.command << " generated " << timestamp << '\n';
  for (const auto& t : report.tables) {
    os << "# table: " << t.name << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c]);
      os << '\n';
    }
  }
  os << "# passed: " << (report.passed ? "true" : "false") << '\n';
  return os.str();
}

Json render_json(const CommandReport& report, const std::string& timestamp) {
  Json tables = Json::object();
  for (const auto& t : report.tables) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
      Json obj = Json::object();
      for (std::size_t c = 0; c < row.size() && c < t.columns.size(); ++c) {
        obj[t.columns[c]] = cell_json(row[c]);
      }
      rows.push_back(std::move(obj));
    }
    tables[t.name] = std::move(rows);
  }
  return {{"command", report.command},
          {"generated", timestamp},
          {"passed", report.passed},
          {"summary", report.summary},
          {"tables", std::move(tables)}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local thermalization experiments: thermal states, EPLT verification, "
               "speed-up race, bath dilation and sampled twirls"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"thermal", "Gibbs states, eta states and quenched gaps over a (kT, epsilon) grid"},
      {"eplt-verify", "Certify local thermality and sweep entanglement of an EPLT family"},
      {"race", "Partial thermalization versus EPLT timing, worked example, twirl Monte Carlo"},
      {"dilation", "Build the correlated-bath dilation of a compiled EPLT and check it"},
      {"twirl-sample", "Sample finite twirls and report their deviation from the exact twirl"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Random seed (overrides the config)");
    sub->add_option("--out", out_path, "Write the report here instead of stdout");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tolerance", tolerance, "Certification tolerance (overrides the config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    Json cfg = Json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      cfg = Json::parse(in);
      if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    }
    if (seed) cfg["seed"] = *seed;
    if (tolerance) cfg["tolerance"] = *tolerance;

    const std::string name = app.get_subcommands().front()->get_name();
    CommandReport report;
    if (name == "thermal") report = cmd_thermal(cfg);
    else if (name == "eplt-verify") report = cmd_eplt_verify(cfg);
    else if (name == "race") report = cmd_race(cfg);
    else if (name == "dilation") report = cmd_dilation(cfg);
    else report = cmd_twirl_sample(cfg);

    const std::string stamp = utc_timestamp();
    const std::string body =
        format == "json" ? render_json(report, stamp).dump(2) + "\n" : render_csv(report, stamp);
    if (out_path.empty()) {
      out << body;
    } else {
      std::ofstream file(out_path);
      if (!file) throw ConfigError("cannot open output file " + out_path);
      file << body;
    }
    return report.passed ? 0 : 1;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << " (limit " << e.limit() << ")\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid JSON config: " << e.what() << '\n';
  }
  return 2;
}

}  // namespace eplt::cli
