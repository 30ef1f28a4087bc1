#include "dyncap/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "dyncap/errors.hpp"

namespace dyncap {

namespace {

QPoly coefficients(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty())
    throw InvalidInput(std::string("map spec needs a non-empty array \"") + key + "\"");
  QPoly out;
  for (const auto& c : j[key]) {
    if (c.is_string()) {
      out.push_back(Rational::parse(c.get<std::string>()));
    } else if (c.is_number_integer()) {
      out.emplace_back(c.get<long>());
    } else {
      throw InvalidInput(std::string("coefficients of \"") + key + "\" must be strings or integers");
    }
  }
  return out;
}

json coefficient_array(const QPoly& p) {
  json a = json::array();
  for (const auto& c : p) a.push_back(c.str());
  return a;
}

json complex_pair(const Vec2c& z) { return json::array({z[0].real(), z[0].imag(), z[1].real(), z[1].imag()}); }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

HomogeneousPair map_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("map spec must be a JSON object");
  if (j.contains("F1") || j.contains("F2")) {
    QPoly f1 = coefficients(j, "F1"), f2 = coefficients(j, "F2");
    if (j.contains("d")) {
      if (!j["d"].is_number_integer()) throw InvalidInput("\"d\" must be an integer");
      const auto d = j["d"].get<long>();
      if (static_cast<long>(f1.size()) != d + 1 || static_cast<long>(f2.size()) != d + 1)
        throw InvalidInput("forms must have d+1 coefficients");
    }
    return HomogeneousPair(std::move(f1), std::move(f2));
  }
  return lift_rational_map(coefficients(j, "num"), coefficients(j, "den"));
}

json map_to_json(const HomogeneousPair& F) {
  return {{"F1", coefficient_array(F.f1())}, {"F2", coefficient_array(F.f2())}, {"d", F.degree()}};
}

std::optional<HomogeneousPair> map_alias(const std::string& name) {
  const auto P = [](std::initializer_list<long> c) {
    QPoly out;
    for (long v : c) out.emplace_back(v);
    return out;
  };
  if (name == "z2") return lift_rational_map(P({0, 0, 1}), P({1}));
  if (name == "z2p1") return lift_rational_map(P({1, 0, 1}), P({1}));
  // (z^2 + 1)^2 / (4 z (z^2 - 1))
  if (name == "lattes-demo") return lift_rational_map(P({1, 0, 2, 0, 1}), P({0, -4, 0, 4}));
  return std::nullopt;
}

HomogeneousPair parse_map_argument(const std::string& arg) {
  if (auto a = map_alias(arg)) return *a;
  json j;
  if (!arg.empty() && arg.front() == '{') {
    j = json::parse(arg, nullptr, false);
    if (j.is_discarded()) throw InvalidInput("malformed map JSON");
  } else {
    std::ifstream in(arg);
    if (!in) throw InvalidInput("unknown map alias or unreadable file: " + arg);
    j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw InvalidInput("malformed map JSON in " + arg);
  }
  return map_from_json(j);
}

json place_to_json(const Place& v) {
  if (v.is_archimedean()) return "arch";
  return {{"p", v.prime().get_str()}};
}

Place place_from_json(const json& j) {
  if (j.is_string()) return Place::parse(j.get<std::string>());
  if (j.is_object() && j.contains("p")) {
    const auto& p = j["p"];
    if (p.is_number_integer()) return Place::finite(Integer(p.get<long>()));
    if (p.is_string()) return Place::finite(Integer(p.get<std::string>()));
  }
  throw InvalidInput("place must be \"arch\" or {\"p\": N}");
}

json configuration_to_json(const ConfigurationReport& r) {
  json pts = json::array();
  for (const auto& z : r.points) pts.push_back(complex_pair(z));
  return {{"n", r.n},
          {"d0n", r.d0n},
          {"target", r.target},
          {"points", pts},
          {"place", place_to_json(r.place)},
          {"strategy", to_string(r.strategy)},
          {"log_pair_product", r.log_pair_product},
          {"max_height", r.max_height},
          {"membership_tol", r.membership_tol}};
}

ConfigurationReport configuration_from_json(const json& j) {
  try {
    ConfigurationReport r;
    r.n = j.at("n").get<std::size_t>();
    r.d0n = j.at("d0n").get<double>();
    r.target = j.at("target").get<double>();
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 4) throw InvalidInput("configuration points are [re,im,re,im]");
      r.points.emplace_back(std::complex<double>(p[0].get<double>(), p[1].get<double>()),
                            std::complex<double>(p[2].get<double>(), p[3].get<double>()));
    }
    if (r.points.size() != r.n) throw InvalidInput("configuration has the wrong number of points");
    if (j.contains("place")) r.place = place_from_json(j["place"]);
    if (j.contains("strategy")) r.strategy = parse_strategy(j["strategy"].get<std::string>());
    if (j.contains("log_pair_product")) r.log_pair_product = j["log_pair_product"].get<double>();
    if (j.contains("max_height")) r.max_height = j["max_height"].get<double>();
    if (j.contains("membership_tol")) r.membership_tol = j["membership_tol"].get<double>();
    return r;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed configuration: ") + e.what());
  }
}

json record_to_json(const ExperimentRecord& r) {
  return {{"experiment", r.experiment}, {"params", r.params}, {"table", r.table}};
}

ExperimentRecord record_from_json(const json& j) {
  if (!j.is_object() || !j.contains("experiment") || !j["experiment"].is_string() || !j.contains("params") ||
      !j["params"].is_object() || !j.contains("table") || !j["table"].is_array())
    throw InvalidInput("experiment records are {experiment, params, table}");
  return {j["experiment"].get<std::string>(), j["params"], j["table"]};
}

ExperimentRecord bilu_record(std::size_t n, bool cyclotomic, const BiluReport& r) {
  ExperimentRecord e{"bilu", {{"n", n}, {"cyclotomic", cyclotomic}, {"k_max", r.moments.k_max}}, json::array()};
  for (size_t k = 0; k < r.moments.moments.size(); ++k) {
    const auto m = r.moments.moments[k];
    e.table.push_back({{"k", k + 1}, {"re", m.real()}, {"im", m.imag()}, {"abs", std::abs(m)}});
  }
  e.params["atoms"] = r.atoms;
  e.params["energy"] = r.energy.normalized;
  e.params["energy_error"] = r.energy.error_bound;
  return e;
}

ExperimentRecord pseudo_equi_record(const std::string& family, const PseudoEquiTable& t) {
  ExperimentRecord e{"pseudo-equi", {{"family", family}}, json::array()};
  for (const auto& r : t.rows)
    e.table.push_back({{"index", r.index}, {"size", r.size}, {"place", r.place}, {"g", r.g}, {"g_error", r.g_error}});
  for (const auto& s : t.summary)
    e.table.push_back({{"index", s.index},
                       {"size", s.size},
                       {"place", "global"},
                       {"g", s.global},
                       {"g_error", s.g_error},
                       {"two_h", s.two_h},
                       {"h_error", s.h_error}});
  return e;
}

ExperimentRecord comparison_record(const std::string& reference, const ComparisonReport& c) {
  ExperimentRecord e{"compare",
                     {{"reference", reference},
                      {"k_max", c.moments.k_max},
                      {"bins", c.bins},
                      {"radial_discrepancy", c.radial_discrepancy},
                      {"angular_discrepancy", c.angular_discrepancy},
                      {"max_moment_difference", c.moments.max_difference()}},
                     json::array()};
  for (size_t k = 0; k < c.moments.moments.size(); ++k) {
    const auto d = c.moments.moments[k] - c.moments.reference[k];
    e.table.push_back({{"k", k + 1},
                       {"re", c.moments.moments[k].real()},
                       {"im", c.moments.moments[k].imag()},
                       {"diff", std::abs(d)}});
  }
  return e;
}

ExperimentRecord tdiam_record(const MonotonicityTrace& t) {
  ExperimentRecord e{"tdiam", json::object(), json::array()};
  if (!t.reports.empty()) {
    e.params["place"] = place_to_json(t.reports.front().place);
    e.params["strategy"] = to_string(t.reports.front().strategy);
  }
  json violations = json::array();
  for (auto i : t.violations) violations.push_back(t.reports[i].n);
  e.params["violations"] = violations;
  for (const auto& r : t.reports) e.table.push_back(configuration_to_json(r));
  return e;
}

void write_record_csv(std::ostream& out, const ExperimentRecord& r) {
  if (r.table.empty()) return;
  std::vector<std::string> keys;
  for (const auto& row : r.table)
    for (const auto& [k, v] : row.items())
      if (!v.is_structured() && std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  for (size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
  out << '\n';
  for (const auto& row : r.table) {
    for (size_t i = 0; i < keys.size(); ++i) {
      if (i) out << ',';
      if (!row.contains(keys[i])) continue;
      const auto& v = row[keys[i]];
      if (v.is_number_float()) {
        out << format_double(v.get<double>());
      } else if (v.is_string()) {
        out << v.get<std::string>();
      } else {
        out << v.dump();
      }
    }
    out << '\n';
  }
}

}  // namespace dyncap
