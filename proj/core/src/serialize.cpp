#include "netinf/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace netinf {

namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest round-trip decimal form, stable across runs.
std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& items, char sep = ';') {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += items[i];
  }
  return out;
}

std::string join_doubles(const std::vector<double>& items, char sep = ';') {
  std::vector<std::string> s;
  s.reserve(items.size());
  for (const double v : items) s.push_back(fmt_double(v));
  return join(s, sep);
}

ordered_json graph_json(const GraphSpec& spec) {
  ordered_json j;
  j["family"] = graph_family_name(spec.family);
  switch (spec.family) {
    case GraphFamily::er:
      j["p"] = spec.er_p;
      j["directed"] = spec.er_directed;
      break;
    case GraphFamily::ba:
      j["power"] = spec.ba_power;
      j["m"] = spec.ba_m;
      break;
    case GraphFamily::ws:
      j["nei"] = spec.ws_nei;
      j["p_rewire"] = spec.ws_p_rewire;
      break;
  }
  return j;
}

std::string graph_params_string(const GraphSpec& spec) {
  switch (spec.family) {
    case GraphFamily::er:
      return "p=" + fmt_double(spec.er_p) + (spec.er_directed ? ";directed" : "");
    case GraphFamily::ba:
      return "power=" + fmt_double(spec.ba_power) + ";m=" + std::to_string(spec.ba_m);
    case GraphFamily::ws:
      return "nei=" + std::to_string(spec.ws_nei) +
             ";p_rewire=" + fmt_double(spec.ws_p_rewire);
  }
  return "";
}

std::string error_model_name(ErrorModel model) {
  switch (model) {
    case ErrorModel::homo: return "homo";
    case ErrorModel::corr: return "corr";
    case ErrorModel::none: return "none";
  }
  return "?";
}

}  // namespace

std::string to_json(const EffectEstimate& e) {
  ordered_json j;
  j["estimator"] = e.estimator;
  j["psi"] = e.psi;
  j["se"] = e.se;
  j["ci"] = {e.ci_lo, e.ci_hi};
  j["alpha"] = e.alpha;
  j["beta_a"] = e.beta_a;
  j["beta_as"] = e.beta_as;
  j["f_bar"] = e.f_bar;
  j["vcov"] = e.vcov;
  j["n"] = e.n;
  j["dropped"] = e.dropped;
  j["warnings"] = e.warnings;
  if (!e.diagnostics.empty()) {
    ordered_json d;
    for (const auto& [key, value] : e.diagnostics) d[key] = value;
    j["diagnostics"] = d;
  }
  return j.dump(2) + "\n";
}

std::string to_csv(const EffectEstimate& e) {
  std::ostringstream out;
  out << "estimator,psi,se,ci_lo,ci_hi,alpha,beta_a,beta_as,f_bar,vcov,n,dropped,warnings\n";
  out << e.estimator << ',' << fmt_double(e.psi) << ',' << fmt_double(e.se) << ','
      << fmt_double(e.ci_lo) << ',' << fmt_double(e.ci_hi) << ',' << fmt_double(e.alpha) << ','
      << fmt_double(e.beta_a) << ',' << join_doubles(e.beta_as) << ',' << join_doubles(e.f_bar)
      << ',' << e.vcov << ',' << e.n << ',' << join(e.dropped) << ',' << join(e.warnings) << '\n';
  return out.str();
}

std::string to_json(const SimulationReport& report) {
  const SimConfig& c = report.config;
  ordered_json j;
  j["config"]["n"] = c.n;
  j["config"]["graph"] = graph_json(c.graph);
  j["config"]["errors"]["model"] = error_model_name(c.errors.model);
  j["config"]["errors"]["a"] = c.errors.a;
  j["config"]["errors"]["b"] = c.errors.b;
  std::vector<std::string> estimators;
  for (const auto kind : c.estimators) estimators.push_back(estimator_name(kind));
  j["config"]["estimators"] = estimators;
  j["config"]["reps"] = c.reps;
  j["config"]["base_seed"] = c.base_seed;
  j["config"]["fixed_graph"] = c.fixed_graph;
  j["config"]["alpha"] = c.alpha;

  j["estimators"] = ordered_json::array();
  for (const auto& s : report.estimators) {
    ordered_json row;
    row["estimator"] = estimator_name(s.estimator);
    row["reps_used"] = s.reps_used;
    row["failures"] = s.failures;
    row["mean_bias"] = s.mean_bias;
    row["empirical_sd"] = s.empirical_sd;
    row["mean_se"] = s.mean_se;
    row["coverage"] = s.coverage;
    row["mean_true_psi"] = s.mean_true_psi;
    j["estimators"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string to_csv(const SimulationReport& report) {
  const SimConfig& c = report.config;
  std::ostringstream out;
  out << "n,graph,graph_params,errors,a,b,reps,base_seed,fixed_graph,alpha,"
         "estimator,reps_used,failures,mean_bias,empirical_sd,mean_se,coverage,mean_true_psi\n";
  for (const auto& s : report.estimators) {
    out << c.n << ',' << graph_family_name(c.graph.family) << ',' << graph_params_string(c.graph)
        << ',' << error_model_name(c.errors.model) << ',' << fmt_double(c.errors.a) << ','
        << fmt_double(c.errors.b) << ',' << c.reps << ',' << c.base_seed << ','
        << (c.fixed_graph ? 1 : 0) << ',' << fmt_double(c.alpha) << ',' << estimator_name(s.estimator)
        << ',' << s.reps_used << ',' << s.failures << ',' << fmt_double(s.mean_bias) << ','
        << fmt_double(s.empirical_sd) << ',' << fmt_double(s.mean_se) << ','
        << fmt_double(s.coverage) << ',' << fmt_double(s.mean_true_psi) << '\n';
  }
  return out.str();
}

}  // namespace netinf
