#include "w6j/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "w6j/errors.hpp"
#include "w6j/half_int.hpp"
#include "w6j/km_sphere.hpp"
#include "w6j/semiclassical.hpp"
#include "w6j/spin_network.hpp"
#include "w6j/tetra.hpp"
#include "w6j/wigner.hpp"

namespace w6j {

namespace {

using nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

// Full-precision decimal rendering; identical inputs give identical bytes.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Spins are written as a whole number or as an odd numerator over 2
// ("3", "7/2").  The same grammar serves both quantum numbers and the
// half-integral edge lengths of the geometry commands.
HalfInt parse_spin(const std::string& text) {
  auto fail = [&]() -> HalfInt {
    throw UsageError("cannot parse spin '" + text +
                     "': expected a nonnegative integer or numerator/2");
  };
  std::size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t pos = 0;
      long v = std::stol(text, &pos);
      if (pos != text.size() || v < 0) return fail();
      return HalfInt(static_cast<int>(v));
    }
    if (text.substr(slash + 1) != "2") return fail();
    std::size_t pos = 0;
    std::string head = text.substr(0, slash);
    long t = std::stol(head, &pos);
    if (pos != head.size() || t < 0) return fail();
    return HalfInt::from_twice(static_cast<int>(t));
  } catch (const std::logic_error&) {
    return fail();
  }
}

struct RunConfig {
  std::string format;  // "", "json" or "csv"; empty means the text default
  int grid = 64;
  int precision = 128;
  bool oracle = false;
  int parallel = 1;
};

void validate_config(const RunConfig& cfg) {
  if (cfg.grid < 8) throw UsageError("--grid must be at least 8");
  if (cfg.precision < 53) throw UsageError("--precision must be at least 53");
  if (cfg.parallel < 1) throw UsageError("--parallel must be at least 1");
}

// Runs fill(0..n-1) on a small worker pool; callers write into preallocated
// slots, so the merged output order never depends on scheduling.
template <typename F>
void parallel_rows(int n, int workers, F&& fill) {
  workers = std::max(1, std::min<int>(workers, n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fill(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fill(i);
    });
  for (auto& t : pool) t.join();
}

ordered_json radical_json(const ExactRadical& x) {
  return ordered_json{{"coefficient", x.coef().str()},
                      {"radicand", x.radicand().get_str()},
                      {"display", x.str()}};
}

// ---------------------------------------------------------------- exact ---

void cmd_exact(const std::vector<std::string>& jtext, const RunConfig& cfg,
               std::ostream& out) {
  SixJArgs a{parse_spin(jtext[0]), parse_spin(jtext[1]), parse_spin(jtext[2]),
             parse_spin(jtext[3]), parse_spin(jtext[4]), parse_spin(jtext[5])};
  ExactRadical v = cfg.oracle ? six_j_msum(a) : six_j_racah(a);
  double f = v.to_double(static_cast<unsigned>(cfg.precision));

  if (cfg.format == "json") {
    ordered_json doc{
        {"args",
         {{"j1", a.j1.str()},
          {"j2", a.j2.str()},
          {"j12", a.j12.str()},
          {"j3", a.j3.str()},
          {"j4", a.j4.str()},
          {"j23", a.j23.str()}}},
        {"method", cfg.oracle ? "msum" : "racah"},
        {"exact", radical_json(v)},
        {"value", f}};
    out << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out << "j1,j2,j12,j3,j4,j23,coefficient,radicand,value,method\n";
    out << a.j1.str() << ',' << a.j2.str() << ',' << a.j12.str() << ','
        << a.j3.str() << ',' << a.j4.str() << ',' << a.j23.str() << ','
        << v.coef().str() << ',' << v.radicand().get_str() << ',' << fmt(f)
        << ',' << (cfg.oracle ? "msum" : "racah") << "\n";
  } else {
    if (v.is_zero())
      out << "0\n";
    else
      out << v.str() << " ≈ " << fmt(f) << "\n";
  }
}

// -------------------------------------------------------------- compare ---

struct CompareRow {
  HalfInt j23;
  ExactRadical exact;
  double exact_f = 0.0;
  std::optional<double> pr;
  RegionClass region = RegionClass::NotExist;
};

void cmd_compare(const std::vector<std::string>& jtext, const RunConfig& cfg,
                 std::ostream& out) {
  HalfInt j1 = parse_spin(jtext[0]), j2 = parse_spin(jtext[1]),
          j3 = parse_spin(jtext[2]), j4 = parse_spin(jtext[3]),
          j12 = parse_spin(jtext[4]);
  auto [lo, hi] = j23_bounds(j1, j2, j3, j4);

  std::vector<HalfInt> sweep;
  for (int t = lo.twice(); t <= hi.twice(); t += 2)
    sweep.push_back(HalfInt::from_twice(t));

  std::vector<CompareRow> rows(sweep.size());
  parallel_rows(static_cast<int>(sweep.size()), cfg.parallel, [&](int i) {
    CompareRow& r = rows[i];
    r.j23 = sweep[i];
    SixJArgs a{j1, j2, j12, j3, j4, r.j23};
    r.exact = cfg.oracle ? six_j_msum(a) : six_j_racah(a);
    r.exact_f = r.exact.to_double(static_cast<unsigned>(cfg.precision));
    QuantizedLengths q{j1, j2, j3, j4, j12, r.j23};
    if (!q.couplings_valid()) {
      r.region = RegionClass::NotExist;
      return;
    }
    LengthSet L = q.lengths();
    r.region = classify_region(L.J1, L.J2, L.J3, L.J4, L.J12, L.J23);
    if (r.region == RegionClass::Allowed) r.pr = ponzano_regge(q).value;
  });

  auto abs_err = [](const CompareRow& r) { return std::abs(*r.pr - r.exact_f); };

  if (cfg.format == "json") {
    ordered_json jrows = ordered_json::array();
    for (const CompareRow& r : rows) {
      ordered_json row{{"j23", r.j23.str()},
                       {"exact", r.exact_f},
                       {"exact_display", r.exact.str()},
                       {"pr", nullptr},
                       {"abs_err", nullptr},
                       {"rel_err", nullptr},
                       {"region", std::string(1, region_letter(r.region))}};
      if (r.pr) {
        row["pr"] = *r.pr;
        row["abs_err"] = abs_err(r);
        if (r.exact_f != 0.0) row["rel_err"] = abs_err(r) / std::abs(r.exact_f);
      }
      jrows.push_back(row);
    }
    ordered_json doc{{"args",
                      {{"j1", j1.str()},
                       {"j2", j2.str()},
                       {"j3", j3.str()},
                       {"j4", j4.str()},
                       {"j12", j12.str()}}},
                     {"method", cfg.oracle ? "msum" : "racah"},
                     {"rows", jrows}};
    out << doc.dump(2) << "\n";
  } else {
    out << "j23,exact,pr,abs_err,rel_err,region\n";
    for (const CompareRow& r : rows) {
      out << r.j23.str() << ',' << fmt(r.exact_f) << ',';
      if (r.pr) {
        out << fmt(*r.pr) << ',' << fmt(abs_err(r)) << ',';
        if (r.exact_f != 0.0)
          out << fmt(abs_err(r) / std::abs(r.exact_f));
      } else {
        out << ",,";
      }
      out << ',' << region_letter(r.region) << "\n";
    }
  }
}

// --------------------------------------------------------------- region ---

// The geometry commands take the four edge lengths J (half-integral), not
// quantum numbers; the quantized overlay uses j = J - 1/2.
std::array<double, 4> parse_lengths(const std::vector<std::string>& jtext) {
  std::array<double, 4> q{};
  for (int i = 0; i < 4; ++i) {
    HalfInt h = parse_spin(jtext[i]);
    if (h.twice() <= 0)
      throw DomainError("edge lengths must be positive: J" +
                        std::to_string(i + 1) + " = " + h.str());
    q[i] = h.value();
  }
  return q;
}

void cmd_region(const std::vector<std::string>& jtext, const RunConfig& cfg,
                std::ostream& out) {
  std::array<double, 4> q = parse_lengths(jtext);
  auto [lo12, hi12] = classical_j12_range(q[0], q[1], q[2], q[3]);
  auto [lo23, hi23] = classical_j23_range(q[0], q[1], q[2], q[3]);
  int N = cfg.grid;
  auto lin = [N](double lo, double hi, int k) {
    return lo + (hi - lo) * k / (N - 1);
  };

  std::vector<std::string> grid(N, std::string(N, '?'));
  parallel_rows(N, cfg.parallel, [&](int m) {
    double J23 = lin(lo23, hi23, m);
    for (int k = 0; k < N; ++k)
      grid[m][k] = region_letter(
          classify_region(q[0], q[1], q[2], q[3], lin(lo12, hi12, k), J23));
  });

  if (cfg.format == "json") {
    ordered_json j12vals = ordered_json::array(),
                 j23vals = ordered_json::array();
    for (int k = 0; k < N; ++k) j12vals.push_back(lin(lo12, hi12, k));
    for (int m = 0; m < N; ++m) j23vals.push_back(lin(lo23, hi23, m));

    // Quantized lattice overlay at lengths (j12 + 1/2, j23 + 1/2) for the
    // quantum quad j = J - 1/2.
    ordered_json spots = ordered_json::array();
    std::array<HalfInt, 4> jq;
    for (int i = 0; i < 4; ++i)
      jq[i] = HalfInt::from_twice(parse_spin(jtext[i]).twice() - 1);
    auto [qlo12, qhi12] = j12_bounds(jq[0], jq[1], jq[2], jq[3]);
    auto [qlo23, qhi23] = j23_bounds(jq[0], jq[1], jq[2], jq[3]);
    for (int t12 = qlo12.twice(); t12 <= qhi12.twice(); t12 += 2)
      for (int t23 = qlo23.twice(); t23 <= qhi23.twice(); t23 += 2) {
        HalfInt h12 = HalfInt::from_twice(t12), h23 = HalfInt::from_twice(t23);
        double J12 = h12.value() + 0.5, J23 = h23.value() + 0.5;
        char letter = region_letter(
            classify_region(q[0], q[1], q[2], q[3], J12, J23));
        spots.push_back(ordered_json{{"j12", h12.str()},
                                     {"j23", h23.str()},
                                     {"J12", J12},
                                     {"J23", J23},
                                     {"region", std::string(1, letter)}});
      }

    ordered_json doc{
        {"quad", {q[0], q[1], q[2], q[3]}},
        {"J12", {{"min", lo12}, {"max", hi12}, {"values", j12vals}}},
        {"J23", {{"min", lo23}, {"max", hi23}, {"values", j23vals}}},
        {"grid", grid},
        {"spots", spots}};
    out << doc.dump(2) << "\n";
  } else {
    out << "J23\\J12";
    for (int k = 0; k < N; ++k) out << ',' << fmt(lin(lo12, hi12, k));
    out << "\n";
    for (int m = 0; m < N; ++m) {
      out << fmt(lin(lo23, hi23, m));
      for (int k = 0; k < N; ++k) out << ',' << grid[m][k];
      out << "\n";
    }
  }
}

// -------------------------------------------------------------- caustic ---

void cmd_caustic(const std::vector<std::string>& jtext, const RunConfig& cfg,
                 std::ostream& out) {
  std::array<double, 4> q = parse_lengths(jtext);
  auto points = caustic_curve(q[0], q[1], q[2], q[3], 2 * cfg.grid);
  if (cfg.format == "json") {
    ordered_json pts = ordered_json::array();
    for (auto& [J12, J23] : points) pts.push_back(ordered_json{J12, J23});
    ordered_json doc{{"quad", {q[0], q[1], q[2], q[3]}}, {"points", pts}};
    out << doc.dump(2) << "\n";
  } else {
    out << "J12,J23\n";
    for (auto& [J12, J23] : points)
      out << fmt(J12) << ',' << fmt(J23) << "\n";
  }
}

// --------------------------------------------------------------- sphere ---

void cmd_sphere(const std::vector<std::string>& jtext, const RunConfig& cfg,
                std::ostream& out) {
  std::array<double, 4> q = parse_lengths(jtext);
  struct Curve {
    const char* name;
    double level;
    std::vector<std::array<double, 3>> pts;
  };
  std::vector<Curve> curves;
  const std::pair<KMObservable, const char*> kinds[] = {
      {KMObservable::J12, "J12"},
      {KMObservable::J23, "J23"},
      {KMObservable::J13, "J13"},
      {KMObservable::V, "V"}};
  for (auto [obs, name] : kinds) {
    auto [glo, ghi] = observable_range(q[0], q[1], q[2], q[3], obs);
    for (int i = 1; i <= 5; ++i) {
      double level = glo + (ghi - glo) * i / 6.0;
      Curve c{name, level, {}};
      for (const KMPoint& p :
           level_curve(q[0], q[1], q[2], q[3], obs, level, 2 * cfg.grid)) {
        SphereEmbedding e = sphere_embed(q[0], q[1], q[2], q[3], p);
        c.pts.push_back({std::sin(e.theta) * std::cos(e.phi),
                         std::sin(e.theta) * std::sin(e.phi),
                         std::cos(e.theta)});
      }
      curves.push_back(std::move(c));
    }
  }

  if (cfg.format == "json") {
    ordered_json jcurves = ordered_json::array();
    for (const Curve& c : curves) {
      ordered_json pts = ordered_json::array();
      for (auto& p : c.pts) pts.push_back(ordered_json{p[0], p[1], p[2]});
      jcurves.push_back(ordered_json{
          {"observable", c.name}, {"level", c.level}, {"points", pts}});
    }
    ordered_json doc{{"quad", {q[0], q[1], q[2], q[3]}}, {"curves", jcurves}};
    out << doc.dump(2) << "\n";
  } else {
    out << "observable,level,x,y,z\n";
    for (const Curve& c : curves)
      for (auto& p : c.pts)
        out << c.name << ',' << fmt(c.level) << ',' << fmt(p[0]) << ','
            << fmt(p[1]) << ',' << fmt(p[2]) << "\n";
  }
}

// -------------------------------------------------------------- network ---

void cmd_network(const std::string& path, bool standardize,
                 const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open network file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  SpinNetwork net = parse_network(buf.str());

  if (standardize) {
    out << serialize_network(to_standard_form(net)) << "\n";
    return;
  }

  ExactRadical v = evaluate_closed(net);
  double f = v.to_double(static_cast<unsigned>(cfg.precision));
  if (cfg.format == "json") {
    ordered_json doc{{"file", path}, {"exact", radical_json(v)}, {"value", f}};
    out << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out << "coefficient,radicand,value\n";
    out << v.coef().str() << ',' << v.radicand().get_str() << ',' << fmt(f)
        << "\n";
  } else {
    if (v.is_zero())
      out << "0\n";
    else
      out << v.str() << " ≈ " << fmt(f) << "\n";
  }
}

// ------------------------------------------------------------- selftest ---

int cmd_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    out << (ok ? "ok - " : "FAIL - ") << name << "\n";
    if (!ok) ++failures;
  };

  HalfInt one(1);
  SixJArgs all_ones{one, one, one, one, one, one};
  ExactRadical racah = six_j_racah(all_ones);
  check("all-ones symbol is 1/6",
        racah.coef() == Rational(1, 6) && racah.radicand() == 1);
  check("racah and m-sum agree", racah == six_j_msum(all_ones));

  SpinNetwork theta = theta_network(one, one, HalfInt::from_twice(4));
  ExactRadical tv = evaluate_closed(theta);
  check("theta network normalizes to 1",
        tv.coef() == Rational(1) && tv.radicand() == 1);

  check("tetrahedral network matches the symbol",
        evaluate_closed(tetrahedral_network(all_ones)) == racah);

  check("zero-spin dimensions agree",
        dim_zs(HalfInt::from_twice(9), HalfInt(3), HalfInt::from_twice(11),
               HalfInt(6)) == 7 &&
            dim_zs_symmetric(HalfInt::from_twice(9), HalfInt(3),
                             HalfInt::from_twice(11), HalfInt(6)) == 7);

  check("regular tetrahedron determinant",
        std::abs(cayley_menger(1, 1, 1, 1, 1, 1) - 4.0) < 1e-12);
  check("no flat quantized tetrahedron at the all-ones point",
        cayley_menger_quantized(one, one, one, one, one, one) != 0);

  VectorConfig reg = build_vectors(1, 1, 1, 1, 1, std::acos(1.0 / 3.0));
  CycleReport rep = rotation_cycle(reg);
  check("rotation cycle closes",
        rep.composite_error < 1e-10 &&
            rep.lift_signs == std::array<int, 4>{-1, 1, -1, 1});

  auto [lo, hi] = classical_j12_range(5, 3.5, 6, 6.5);
  check("total phase-space area is 2 pi D",
        std::abs(enclosed_area(5, 3.5, 6, 6.5, KMObservable::J12, hi) -
                 2 * kPi * (hi - lo)) < 1e-9);

  SphereEmbedding e = sphere_embed(5, 3.5, 6, 6.5, KMPoint{4.25, 1.0});
  KMPoint back = sphere_unembed(5, 3.5, 6, 6.5, e);
  check("sphere coordinates round trip",
        std::abs(back.J12 - 4.25) < 1e-12 && std::abs(back.phi12 - 1.0) < 1e-12);

  check("spin grammar accepts 7/2",
        parse_spin("7/2").twice() == 7 && parse_spin("3").twice() == 6);

  out << (failures == 0 ? "selftest: all checks passed\n"
                        : "selftest: FAILURES\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Exact 6j-symbols, spin networks, tetrahedron geometry, and "
               "the semiclassical formula"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--format", cfg.format, "Output format (json or csv)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--grid", cfg.grid, "Grid resolution (at least 8)");
  app.add_option("--precision", cfg.precision,
                 "Working precision in bits for float conversion (>= 53; "
                 "printed values are the nearest doubles)");
  app.add_flag("--oracle", cfg.oracle,
               "Evaluate 6j-symbols by the m-sum reference path");
  app.add_option("--parallel", cfg.parallel,
                 "Worker threads for grids and sweeps (ordered merge)");

  std::vector<std::string> jexact, jcompare, jregion, jcaustic, jsphere;
  std::string netfile;
  bool standardize = false;

  CLI::App* exact = app.add_subcommand(
      "exact", "Exact 6j-symbol {j1 j2 j12; j3 j4 j23}");
  exact->add_option("j", jexact, "j1 j2 j12 j3 j4 j23 (integers or n/2)")
      ->expected(6);

  CLI::App* compare = app.add_subcommand(
      "compare",
      "Exact vs semiclassical values across the j23 sweep at fixed j12");
  compare->add_option("j", jcompare, "j1 j2 j3 j4 j12 (integers or n/2)")
      ->expected(5);

  CLI::App* region = app.add_subcommand(
      "region",
      "Classify the (J12, J23) square for edge lengths J1..J4 "
      "(half-integral lengths, e.g. 5 7/2 6 13/2)");
  region->add_option("J", jregion, "J1 J2 J3 J4 edge lengths")->expected(4);

  CLI::App* caustic = app.add_subcommand(
      "caustic", "Flat-configuration oval in the (J12, J23) plane");
  caustic->add_option("J", jcaustic, "J1 J2 J3 J4 edge lengths")->expected(4);

  CLI::App* sphere = app.add_subcommand(
      "sphere",
      "Level curves of J12/J23/J13/V on the reduced phase-space sphere");
  sphere->add_option("J", jsphere, "J1 J2 J3 J4 edge lengths")->expected(4);

  CLI::App* network =
      app.add_subcommand("network", "Evaluate a closed spin-network file");
  network->add_option("file", netfile, "Network JSON file")->required();
  network->add_flag("--standardize", standardize,
                    "Print the standard-form network instead of evaluating");

  app.add_subcommand("selftest", "Quick built-in sanity checks");

  // Global flags remain usable after the subcommand name.
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    validate_config(cfg);
    if (exact->parsed()) {
      cmd_exact(jexact, cfg, out);
    } else if (compare->parsed()) {
      cmd_compare(jcompare, cfg, out);
    } else if (region->parsed()) {
      cmd_region(jregion, cfg, out);
    } else if (caustic->parsed()) {
      cmd_caustic(jcaustic, cfg, out);
    } else if (sphere->parsed()) {
      cmd_sphere(jsphere, cfg, out);
    } else if (network->parsed()) {
      cmd_network(netfile, standardize, cfg, out);
    } else {
      return cmd_selftest(out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace w6j
