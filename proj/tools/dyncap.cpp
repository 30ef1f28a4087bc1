// dyncap: command-line front end for the dynamical capacity library.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dyncap/capacities.hpp"
#include "dyncap/equilab.hpp"
#include "dyncap/errors.hpp"
#include "dyncap/io.hpp"
#include "dyncap/parallel.hpp"

using namespace dyncap;

namespace {

struct Config {
  std::string map = "z2";
  std::string place = "arch";
  double tol = 1e-12;
  std::uint64_t seed = 0;
  int n = 8;
  int t = 1;
  std::string point = "2";
  std::string point2 = "inf";
  std::string minpoly;
  int depth = 20;
  std::size_t samples = 4096;
  std::string out;
  std::string format = "text";
  unsigned threads = 0;
  std::string strategy = "roots-of-unity";
  bool trace = false;
  bool cyclotomic = false;
  int k_max = 8;
  std::string family = "cyclotomic";
  int m_min = 2;
  std::string reference = "unit-circle";
  int bins = 15;
};

std::string fmt(double x) { return format_double(x); }

Vec2q parse_point(const std::string& s) {
  if (s == "inf" || s == "infinity") return {Rational(0), Rational(1)};
  return {Rational(1), Rational::parse(s)};
}

std::vector<Place> parse_places(const std::string& s, const HomogeneousPair& F) {
  if (s == "all") return effective_places(F);
  std::vector<Place> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(Place::parse(item));
  if (out.empty()) throw InvalidInput("empty place selector");
  return out;
}

Place single_place(const Config& c, const HomogeneousPair& F) {
  const auto ps = parse_places(c.place, F);
  if (ps.size() != 1) throw InvalidInput("this subcommand takes a single place");
  return ps.front();
}

// Writes to --out when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidInput("cannot open output file " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const Config& c, const json& j) {
  Sink s(c.out);
  s.os() << j.dump(2) << '\n';
}

void emit_record(const Config& c, const ExperimentRecord& r, const std::function<void(std::ostream&)>& text) {
  Sink s(c.out);
  if (c.format == "json") {
    s.os() << record_to_json(r).dump(2) << '\n';
  } else if (c.format == "csv") {
    write_record_csv(s.os(), r);
  } else {
    text(s.os());
  }
}

int cmd_resultant(const Config& c) {
  const auto F = parse_map_argument(c.map);
  if (c.format == "json") {
    emit_json(c, {{"map", map_to_json(F)}, {"resultant", F.resultant().str()}});
  } else {
    Sink(c.out).os() << F.resultant() << '\n';
  }
  return 0;
}

int cmd_bounds(const Config& c) {
  const auto F = parse_map_argument(c.map);
  ExperimentRecord r{"bounds", {{"map", map_to_json(F)}}, json::array()};
  for (const auto& v : parse_places(c.place, F)) {
    const auto b = place_bounds(F, v);
    r.table.push_back({{"place", v.label()},
                       {"C_v", b.lower},
                       {"D_v", b.upper},
                       {"r_v", b.r},
                       {"R_v", b.R},
                       {"C", b.C},
                       {"good_reduction", b.good_reduction},
                       {"exact", b.exact}});
  }
  emit_record(c, r, [&](std::ostream& os) {
    for (const auto& row : r.table)
      os << row["place"].get<std::string>() << " C_v=" << fmt(row["C_v"]) << " D_v=" << fmt(row["D_v"])
         << " r_v=" << fmt(row["r_v"]) << " R_v=" << fmt(row["R_v"])
         << (row["good_reduction"].get<bool>() ? " good" : "") << '\n';
  });
  return 0;
}

int cmd_height(const Config& c) {
  const auto F = parse_map_argument(c.map);
  GlobalHeightResult h;
  if (!c.minpoly.empty()) {
    const auto j = json::parse(c.minpoly, nullptr, false);
    if (j.is_discarded() || !j.is_array()) throw InvalidInput("--minpoly takes a JSON array of coefficients");
    std::vector<std::string> coeffs;
    for (const auto& x : j) coeffs.push_back(x.is_string() ? x.get<std::string>() : x.dump());
    AlgebraicHeightOptions o;
    o.tol = c.tol;
    h = canonical_height_algebraic(F, AlgebraicPoint(parse_coefficients(coeffs)), o);
  } else {
    h = canonical_height_rational(F, parse_point(c.point), c.tol);
  }
  if (c.format == "json") {
    json parts = json::array();
    for (const auto& b : h.breakdown) parts.push_back({{"label", b.label}, {"value", b.value}});
    emit_json(c, {{"height", h.value}, {"error_bound", h.error_bound}, {"iterations", h.iterations},
                  {"capped", h.capped}, {"breakdown", parts}});
  } else {
    Sink(c.out).os() << fmt(h.value) << '\n';
  }
  return 0;
}

int cmd_local_height(const Config& c) {
  const auto F = parse_map_argument(c.map);
  const Vec2q z = parse_point(c.point);
  ExperimentRecord r{"local-height", {{"point", c.point}, {"tol", c.tol}}, json::array()};
  for (const auto& v : parse_places(c.place, F)) {
    const LocalHeight H(F, v);
    const auto m = julia_membership(H, z, c.tol);
    r.table.push_back({{"place", v.label()},
                       {"value", m.height.value},
                       {"error", m.height.total_error()},
                       {"iterations", m.height.iterations},
                       {"membership", to_string(m.verdict)}});
  }
  emit_record(c, r, [&](std::ostream& os) {
    for (const auto& row : r.table)
      os << row["place"].get<std::string>() << ' ' << fmt(row["value"]) << " +- " << fmt(row["error"]) << ' '
         << row["membership"].get<std::string>() << '\n';
  });
  return 0;
}

int cmd_green(const Config& c) {
  const auto F = parse_map_argument(c.map);
  const Vec2q z = parse_point(c.point), w = parse_point(c.point2);
  ExperimentRecord r{"green", {{"z", c.point}, {"w", c.point2}}, json::array()};
  for (const auto& v : parse_places(c.place, F)) {
    const auto g = green(F, v, z, w, c.tol);
    r.table.push_back({{"place", v.label()}, {"value", g.infinite ? "inf" : fmt(g.value)}, {"error", g.error_bound}});
  }
  emit_record(c, r, [&](std::ostream& os) {
    for (const auto& row : r.table)
      os << row["place"].get<std::string>() << ' ' << row["value"].get<std::string>() << " +- " << fmt(row["error"])
         << '\n';
  });
  return 0;
}

void write_point(std::ostream& os, const Vec2c& z) {
  if (const auto a = affine(z)) {
    os << fmt(a->real()) << ' ' << fmt(a->imag());
  } else {
    os << "inf";
  }
}

int cmd_preimages(const Config& c) {
  const auto F = parse_map_argument(c.map);
  const auto set = preimages(F, parse_point(c.point));
  ExperimentRecord r{"preimages", {{"target", c.point}, {"max_residual", set.max_residual}}, json::array()};
  for (const auto& p : set.points) {
    const auto a = affine(p.point);
    json row{{"multiplicity", p.multiplicity}};
    if (a) {
      row["re"] = a->real();
      row["im"] = a->imag();
    } else {
      row["re"] = "inf";
    }
    r.table.push_back(row);
  }
  emit_record(c, r, [&](std::ostream& os) {
    for (const auto& p : set.points) {
      write_point(os, p.point);
      os << " x" << p.multiplicity << '\n';
    }
  });
  return 0;
}

DiscreteMeasure sample(const Config& c, const HomogeneousPair& F) {
  SamplingOptions o;
  o.depth = c.depth;
  o.samples = c.samples;
  o.seed = c.seed;
  o.threads = c.threads;
  const Vec2q z = parse_point(c.point);
  return sample_canonical_measure(F, Vec2c(z[0].to_double(), z[1].to_double()), o);
}

int cmd_sample_measure(const Config& c) {
  const auto F = parse_map_argument(c.map);
  const auto mu = sample(c, F);
  Sink s(c.out);
  if (c.format == "json") {
    json atoms = json::array();
    for (const auto& a : mu.atoms) {
      const auto z = affine(a.point);
      atoms.push_back(z ? json::array({z->real(), z->imag(), a.weight}) : json::array({"inf", 0, a.weight}));
    }
    s.os() << record_to_json({"sample-measure",
                              {{"z0", c.point}, {"depth", c.depth}, {"samples", c.samples}, {"seed", c.seed}},
                              atoms})
                  .dump(2)
           << '\n';
  } else {
    write_measure_csv(s.os(), mu);
  }
  return 0;
}

int cmd_tdiam(const Config& c) {
  const auto F = parse_map_argument(c.map);
  const Place v = single_place(c, F);
  TdiamOptions o;
  o.seed = c.seed;
  o.threads = c.threads;
  const Strategy s = parse_strategy(c.strategy);
  if (c.n < 2) throw InvalidInput("--n must be at least 2");
  MonotonicityTrace t;
  if (c.trace) {
    t = tdiam_monotonicity_trace(F, v, static_cast<size_t>(c.n), s, o);
  } else {
    t.reports.push_back(tdiam_estimate(F, v, static_cast<size_t>(c.n), s, o));
  }
  emit_record(c, tdiam_record(t), [&](std::ostream& os) {
    for (size_t i = 0; i < t.reports.size(); ++i) {
      const auto& r = t.reports[i];
      const bool bad = std::find(t.violations.begin(), t.violations.end(), i) != t.violations.end();
      os << "n=" << r.n << " d0n=" << fmt(r.d0n) << " target=" << fmt(r.target) << (bad ? " INCREASE" : "")
         << '\n';
    }
  });
  return 0;
}

int cmd_det_check(const Config& c) {
  const auto F = parse_map_argument(c.map);
  const auto d = det_identity_check(F, c.t);
  if (c.format == "json") {
    emit_json(c, {{"t", d.t}, {"det_abs", d.det_abs.str()}, {"res_power", d.res_power.str()}, {"equal", d.equal}});
  } else {
    Sink(c.out).os() << "|det|=" << d.det_abs << " |Res|^" << d.t * (d.t + 1) / 2 << '=' << d.res_power << ' '
                     << (d.equal ? "OK" : "MISMATCH") << '\n';
  }
  return d.equal ? 0 : 2;
}

int cmd_adelic_sum(const Config& c) {
  const auto F = parse_map_argument(c.map);
  TdiamOptions o;
  o.seed = c.seed;
  o.threads = c.threads;
  if (c.n < 2) throw InvalidInput("--n must be at least 2");
  const auto s = adelic_tdiam_sum(F, static_cast<size_t>(c.n), o);
  ExperimentRecord r{"adelic-sum",
                     {{"n", c.n}, {"target_sum", s.target_sum}, {"exact_zero", s.exact_zero},
                      {"estimate_sum", s.estimate_sum}},
                     json::array()};
  for (const auto& p : s.places) {
    json row{{"place", p.place.label()}, {"target_log", p.target_log}};
    if (p.estimate_log) row["estimate_log"] = *p.estimate_log;
    r.table.push_back(row);
  }
  emit_record(c, r, [&](std::ostream& os) {
    for (const auto& p : s.places) {
      os << p.place.label() << " target=" << fmt(p.target_log);
      if (p.estimate_log) os << " estimate=" << fmt(*p.estimate_log);
      os << '\n';
    }
    os << "sum=" << fmt(s.target_sum) << (s.exact_zero ? " exact-zero" : " NONZERO") << '\n';
  });
  return 0;
}

int cmd_bilu(const Config& c) {
  if (c.n < 2) throw InvalidInput("--n must be at least 2");
  const auto b = bilu_experiment(static_cast<size_t>(c.n), c.cyclotomic, c.k_max, c.threads);
  emit_record(c, bilu_record(static_cast<size_t>(c.n), c.cyclotomic, b), [&](std::ostream& os) {
    os << "atoms=" << b.atoms << " energy=" << fmt(b.energy.normalized) << '\n';
    for (size_t k = 0; k < b.moments.moments.size(); ++k) os << "m" << k + 1 << '=' << fmt(std::abs(b.moments.moments[k])) << '\n';
  });
  return 0;
}

int cmd_pseudo_equi(const Config& c) {
  const auto F = parse_map_argument(c.map);
  std::vector<FamilyMember> fam;
  if (c.family == "cyclotomic") {
    fam = cyclotomic_family(c.m_min, c.n);
  } else if (c.family == "roots") {
    std::vector<int> ns;
    for (int k = std::max(2, c.m_min); k <= c.n; ++k) ns.push_back(k);
    fam = roots_of_unity_family(ns);
  } else if (c.family == "backward") {
    fam = backward_orbit_family(F, Rational::parse(c.point), c.depth);
  } else {
    throw InvalidInput("unknown family " + c.family + " (cyclotomic, roots, backward)");
  }
  std::vector<Place> places;
  if (c.place != "all") places = parse_places(c.place, F);
  const auto t = pseudo_equi_sequence(F, fam, places, c.tol);
  emit_record(c, pseudo_equi_record(c.family, t), [&](std::ostream& os) {
    for (const auto& r : t.rows) os << r.index << ' ' << r.place << ' ' << fmt(r.g) << " +- " << fmt(r.g_error) << '\n';
    for (const auto& s : t.summary)
      os << s.index << " global=" << fmt(s.global) << " 2h=" << fmt(s.two_h) << " residual=" << fmt(s.residual()) << '\n';
  });
  return 0;
}

int cmd_compare(const Config& c) {
  const auto F = parse_map_argument(c.map);
  const auto mu = sample(c, F);
  ComparisonReport r;
  if (c.reference == "unit-circle") {
    r = measure_comparison(mu, c.k_max, c.bins);
  } else {
    std::ifstream in(c.reference);
    if (!in) throw InvalidInput("reference must be unit-circle or a measure CSV file");
    r = measure_comparison(mu, read_measure_csv(in), c.k_max, c.bins);
  }
  emit_record(c, comparison_record(c.reference, r), [&](std::ostream& os) {
    for (int k = 0; k < r.moments.k_max; ++k)
      os << "dm" << k + 1 << '=' << fmt(std::abs(r.moments.moments[size_t(k)] - r.moments.reference[size_t(k)])) << '\n';
    os << "radial=" << fmt(r.radial_discrepancy) << " angular=" << fmt(r.angular_discrepancy) << '\n';
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyncap: heights, Green's functions and capacities of rational maps over Q"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  app.add_option("--map", c.map, "map: inline JSON, alias (z2, z2p1, lattes-demo) or JSON file");
  app.add_option("--place", c.place, "arch, p:<prime>, a comma list, or all");
  app.add_option("--tol", c.tol, "tolerance");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--n", c.n, "configuration size, roots-of-unity order or family end");
  app.add_option("--t", c.t, "determinant degree parameter");
  app.add_option("--point", c.point, "rational point, or inf");
  app.add_option("--point2", c.point2, "second point for green");
  app.add_option("--minpoly", c.minpoly, "algebraic point as a JSON coefficient array, ascending");
  app.add_option("--depth", c.depth, "backward depth");
  app.add_option("--samples", c.samples, "number of samples");
  app.add_option("--out", c.out, "output path");
  app.add_option("--format", c.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--threads", c.threads, "worker cap (default DYNCAP_THREADS or hardware)");
  app.add_option("--strategy", c.strategy, "roots-of-unity, residue-classes or random-restart-ascent");
  app.add_flag("--trace", c.trace, "tdiam for every n from 2 up");
  app.add_flag("--cyclotomic", c.cyclotomic, "bilu on primitive roots only");
  app.add_option("--k", c.k_max, "number of moments");
  app.add_option("--family", c.family, "cyclotomic, roots or backward");
  app.add_option("--m-min", c.m_min, "first family index");
  app.add_option("--reference", c.reference, "unit-circle or a measure CSV file");
  app.add_option("--bins", c.bins, "histogram bins");

  const std::vector<std::pair<std::string, std::function<int(const Config&)>>> commands{
      {"resultant", cmd_resultant},       {"bounds", cmd_bounds},
      {"height", cmd_height},             {"local-height", cmd_local_height},
      {"green", cmd_green},               {"preimages", cmd_preimages},
      {"sample-measure", cmd_sample_measure}, {"tdiam", cmd_tdiam},
      {"det-check", cmd_det_check},       {"adelic-sum", cmd_adelic_sum},
      {"bilu", cmd_bilu},                 {"pseudo-equi", cmd_pseudo_equi},
      {"compare", cmd_compare}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (c.threads > 0) set_thread_count(c.threads);
  try {
    for (const auto& [name, fn] : commands)
      if (app.got_subcommand(name)) return fn(c);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
