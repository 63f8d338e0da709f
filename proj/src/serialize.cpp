#include "eplt/serialize.hpp"

#include <cmath>

namespace eplt {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

namespace {

double read_number(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::nan("");
    throw ConfigError("expected a number, got string '" + s + "'");
  }
  if (!j.is_number()) throw ConfigError("expected a number");
  return j.get<double>();
}

Complex read_complex(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw ConfigError("complex entries are [re, im] pairs");
    return {read_number(j[0]), read_number(j[1])};
  }
  return {read_number(j), 0.0};
}

}  // namespace

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("matrix rows must all have the same length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = read_complex(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json channel_to_json(const QuantumChannel& channel) {
  Json kraus = Json::array();
  for (const auto& k : channel.kraus()) kraus.push_back(to_json(k));
  return {{"shape", channel.shape().dims()}, {"kraus", std::move(kraus)}};
}

QuantumChannel channel_from_json(const Json& j) {
  if (!j.contains("shape") || !j.contains("kraus")) {
    throw ConfigError("channel JSON needs 'shape' and 'kraus'");
  }
  SubsystemShape shape(j.at("shape").get<std::vector<int>>());
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
  return QuantumChannel(std::move(kraus), std::move(shape));
}

Json to_json(const FefResult& r) {
  return {{"lower_bound", r.lower_bound},
          {"optimized", r.optimized},
          {"maximizer", to_json(r.maximizer)},
          {"restarts", r.restarts},
          {"best_restart", r.best_restart}};
}

Json to_json(const ThermalityReport& r) {
  return {{"is_losr_form", r.is_losr_form},
          {"max_marginal_deviation", r.max_marginal_deviation},
          {"marginal_deviations", r.marginal_deviations},
          {"basis_size", r.basis_size},
          {"tolerance", r.tolerance},
          {"passed", r.passed()}};
}

Json to_json(const RaceReport& r) {
  return {{"distance", r.distance},
          {"delta", r.delta},
          {"t_pt", number(r.t_pt)},
          {"t_twirl", r.t_twirl},
          {"twirl_time_assumed", r.twirl_time_assumed},
          {"t_eplt_bound", number(r.t_eplt_bound)},
          {"n_delta", r.n_delta},
          {"t_finite", r.t_finite},
          {"speedup_condition", r.speedup_condition},
          {"state_threshold", r.state_threshold},
          {"ideal_wins", r.ideal_wins},
          {"finite_wins", r.finite_wins},
          {"crossover_ideal", r.crossover_ideal},
          {"crossover_finite", r.crossover_finite},
          {"failure_log2", r.failure_log2}};
}

Json to_json(const TwirlConvergence& r) {
  return {{"factors", r.factors},
          {"realizations", r.realizations},
          {"mean_square", r.mean_square},
          {"standard_error", r.standard_error},
          {"worst_input_mean_square", r.worst_input_mean_square},
          {"slack", r.slack},
          {"tail_frequency", r.tail_frequency},
          {"tail_bound", r.tail_bound}};
}

Json to_json(const SpeedupScenario& s) {
  return {{"tau_gamma", s.tau_gamma}, {"tau_eta", s.tau_eta}, {"t_unitary", s.t_unitary},
          {"delta", s.delta},         {"p_min", s.p_min},     {"d", s.d}};
}

SpeedupScenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  SpeedupScenario s;
  if (j.contains("d")) s.d = j.at("d").get<int>();
  if (j.contains("tau_gamma")) s.tau_gamma = read_number(j.at("tau_gamma"));
  if (j.contains("tau_eta")) s.tau_eta = read_number(j.at("tau_eta"));
  if (j.contains("t_unitary")) s.t_unitary = read_number(j.at("t_unitary"));
  if (j.contains("delta")) s.delta = read_number(j.at("delta"));
  if (j.contains("p_min")) s.p_min = read_number(j.at("p_min"));
  s.validate();
  return s;
}

}  // namespace eplt
