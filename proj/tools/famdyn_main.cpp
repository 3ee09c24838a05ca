// Command-line front end.
//
//   famdyn corpus [--emit NAME]          list built-in systems / print a spec file
//   famdyn orbit   --system NAME --x 0:0.1 --N 100        orbit table
//   famdyn detect  --system NAME [...]                    detector battery
//   famdyn compare --system NAME --claims EQ,MIN [...]    paired experiments
//
// Systems come from --system (built-in name) or --spec (JSON file); flags
// override values from the spec file. Every flag can also be set through a
// FAMDYN_* environment variable. Exit codes: 0 ok, 1 error, 2 at least one
// comparison scored a violation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <famdyn/famdyn.hpp>

namespace {

using namespace famdyn;

Point parse_point_literal(const std::string& s) {
  const auto pos = s.find(':');
  bool ok = pos != std::string::npos && pos > 0 && pos + 1 < s.size();
  int comp = 0;
  double coord = 0.0;
  if (ok) {
    try {
      std::size_t used = 0;
      comp = std::stoi(s.substr(0, pos), &used);
      ok = used == pos;
      if (ok) {
        const std::string tail = s.substr(pos + 1);
        coord = std::stod(tail, &used);
        ok = used == tail.size();
      }
    } catch (const std::exception&) {
      ok = false;
    }
  }
  if (!ok) {
    throw InvalidInputError("point literal must look like component:coord, got \"" + s + "\"");
  }
  return Point{comp, coord};
}

struct Options {
  std::string system;
  std::string spec_path;
  long N = 0;
  double eps = 0.0;
  double grid = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  long window = 0;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string out_path;
  std::string format = "json";
  bool timings = false;
};

void add_common_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--system", o.system, "built-in system name (see the corpus subcommand)")
      ->envname("FAMDYN_SYSTEM");
  cmd.add_option("--spec", o.spec_path, "path to a system spec JSON file")
      ->envname("FAMDYN_SPEC");
  cmd.add_option("--N", o.N, "scan horizon (family steps)")->envname("FAMDYN_N");
  cmd.add_option("--eps", o.eps, "target scale for equicontinuity and orbit density")
      ->envname("FAMDYN_EPS");
  cmd.add_option("--grid", o.grid, "spacing of the sampling net")->envname("FAMDYN_GRID");
  cmd.add_option("--tau", o.tau, "closeness threshold for proximality")->envname("FAMDYN_TAU");
  cmd.add_option("--delta", o.delta, "separation threshold for scrambled pairs")
      ->envname("FAMDYN_DELTA");
  cmd.add_option("--window", o.window, "tail start index; -1 means N/2")
      ->envname("FAMDYN_WINDOW");
  cmd.add_option("--seed", o.seed, "seed for sampled nets and random pairs")
      ->envname("FAMDYN_SEED");
  cmd.add_option("--workers", o.workers, "worker threads (output is identical for any count)")
      ->envname("FAMDYN_WORKERS");
  cmd.add_option("--out", o.out_path, "write the report to this file instead of stdout")
      ->envname("FAMDYN_OUT");
  cmd.add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->envname("FAMDYN_FORMAT");
  cmd.add_flag("--timings", o.timings, "include wall-clock timings (nondeterministic)");
}

SystemSpecFile resolve_system(const CLI::App& cmd, const Options& o) {
  if (cmd.count("--system") > 0 && cmd.count("--spec") > 0) {
    throw InvalidInputError("--system and --spec are mutually exclusive");
  }
  SystemSpecFile sys;
  if (!o.spec_path.empty()) {
    sys = load_system_spec(o.spec_path);
  } else if (!o.system.empty()) {
    sys = parse_system_spec(corpus_spec_json(o.system), o.system);
  } else {
    throw InvalidInputError("one of --system or --spec is required");
  }
  if (cmd.count("--N")) sys.params.N = o.N;
  if (cmd.count("--eps")) sys.eps = o.eps;
  if (cmd.count("--grid")) sys.params.eps_grid = o.grid;
  if (cmd.count("--tau")) sys.params.tau = o.tau;
  if (cmd.count("--delta")) sys.params.delta = o.delta;
  if (cmd.count("--window")) sys.params.window = o.window;
  if (cmd.count("--seed")) sys.params.seed = o.seed;
  if (cmd.count("--workers")) sys.params.workers = std::max(1u, o.workers);
  sys.params.validate();
  if (!std::isfinite(sys.eps) || sys.eps <= 0.0) {
    throw InvalidInputError("eps must be positive and finite");
  }
  return sys;
}

void emit(const Options& o, const std::string& text) {
  if (o.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot open output file: " + o.out_path);
  out << text;
}

Point default_start(const SpaceSpec& space) {
  const ComponentSpec& c = space.components.front();
  return Point{0, c.kind == ComponentKind::interval ? c.a : 0.0};
}

int run_corpus(const Options& o, const std::string& emit_name) {
  if (!emit_name.empty()) {
    emit(o, corpus_spec_json(emit_name));
    return 0;
  }
  std::string out;
  for (const std::string& name : corpus_names()) {
    out += name;
    out += '\n';
  }
  emit(o, out);
  return 0;
}

int run_orbit(const CLI::App& cmd, const Options& o, const std::string& x_lit, long stride,
              long offset) {
  SystemSpecFile sys = resolve_system(cmd, o);
  const long N = cmd.count("--N") ? o.N : 100;
  const Point x = normalize(sys.family.space, parse_point_literal(x_lit));
  const Orbit orbit = orbit_segment(sys.family, x, N, stride, offset);
  emit(o, o.format == "csv" ? orbit_csv(sys.family, orbit)
                            : orbit_json(sys.name, sys.family, orbit));
  return 0;
}

struct DetectOptions {
  std::string x_lit;
  std::string y_lit;
  std::vector<std::string> only;
  std::size_t set_size = 10;
};

int run_detect(const CLI::App& cmd, const Options& o, const DetectOptions& d) {
  SystemSpecFile sys = resolve_system(cmd, o);
  const Family& fam = sys.family;
  const HorizonParams& params = sys.params;

  Report rep;
  rep.system = sys.name;
  rep.digest = sys.digest;
  rep.params = params;
  rep.eps = sys.eps;
  rep.include_timings = o.timings;

  const Point x = cmd.count("--x") ? normalize(fam.space, parse_point_literal(d.x_lit))
                                   : default_start(fam.space);
  std::optional<Point> y;
  if (cmd.count("--y")) y = normalize(fam.space, parse_point_literal(d.y_lit));

  static const std::vector<std::string> all = {
      "equicontinuity",        "minimality",          "proximal",      "distality",
      "sensitivity",           "cofinite_sensitivity", "li_yorke_sensitivity",
      "scrambled_set"};
  std::set<std::string> want;
  if (d.only.empty()) {
    want.insert(all.begin(), all.end());
    if (!y) want.erase("proximal");
  } else {
    for (const std::string& name : d.only) {
      if (std::find(all.begin(), all.end(), name) == all.end()) {
        std::string valid;
        for (const std::string& a : all) valid += " " + a;
        throw InvalidInputError("unknown detector \"" + name + "\"; valid:" + valid);
      }
      want.insert(name);
    }
  }
  if (want.count("proximal") && !y) {
    throw InvalidInputError("the proximal detector needs --y");
  }

  auto timed = [&](const std::string& name, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v = fn();
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    rep.timings_ms.emplace_back(name, ms);
    rep.verdicts.emplace_back(name, std::move(v));
  };

  for (const std::string& name : all) {
    if (!want.count(name)) continue;
    if (name == "equicontinuity") {
      timed(name, [&] { return equicontinuity_check(fam, sys.eps, params); });
    } else if (name == "minimality") {
      timed(name, [&] {
        return minimality_evidence(fam, x, sys.eps, params.N, 1, 0, params.net_cap,
                                   params.work_cap);
      });
    } else if (name == "proximal") {
      timed(name, [&] { return proximal_check(fam, x, *y, params); });
    } else if (name == "distality") {
      timed(name, [&] { return distality_check(fam, params); });
    } else if (name == "sensitivity") {
      timed(name, [&] { return sensitivity_check(fam, params); });
    } else if (name == "cofinite_sensitivity") {
      timed(name, [&] { return cofinite_sensitivity_check(fam, params); });
    } else if (name == "li_yorke_sensitivity") {
      timed(name, [&] { return li_yorke_sensitivity_check(fam, params.delta, params); });
    } else if (name == "scrambled_set") {
      timed(name, [&] {
        return scrambled_set_check(fam, scrambled_candidates(fam.space, d.set_size),
                                   params.delta, params);
      });
    }
  }

  emit(o, o.format == "csv" ? report_csv(rep) : report_json(rep));
  return 0;
}

struct CompareOptions {
  std::string x_lit;
  std::vector<std::string> claims;
  std::size_t pairs = 100;
  std::size_t set_size = 10;
  std::size_t power_m = 2;
};

int run_compare(const CLI::App& cmd, const Options& o, const CompareOptions& c) {
  SystemSpecFile sys = resolve_system(cmd, o);
  const Family& fam = sys.family;
  const HorizonParams& params = sys.params;

  Report rep;
  rep.system = sys.name;
  rep.digest = sys.digest;
  rep.params = params;
  rep.eps = sys.eps;
  rep.include_timings = o.timings;

  const Point x = cmd.count("--x") ? normalize(fam.space, parse_point_literal(c.x_lit))
                                   : default_start(fam.space);

  static const std::vector<std::string> all = {"EQ",  "MIN",    "PROX", "DIST", "SEN",
                                               "COFSEN", "LYS", "LYC",  "POWMIN"};
  std::set<std::string> want;
  if (c.claims.empty()) {
    want.insert(all.begin(), all.end());
  } else {
    for (const std::string& name : c.claims) {
      if (std::find(all.begin(), all.end(), name) == all.end()) {
        std::string valid;
        for (const std::string& a : all) valid += " " + a;
        throw InvalidInputError("unknown claim \"" + name + "\"; valid:" + valid);
      }
      want.insert(name);
    }
  }

  auto timed = [&](const std::string& name, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    rep.comparisons.push_back(fn());
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    rep.timings_ms.emplace_back(name, ms);
  };

  for (const std::string& name : all) {
    if (!want.count(name)) continue;
    if (name == "EQ") {
      timed(name, [&] { return compare_equicontinuity(fam, sys.eps, params); });
    } else if (name == "MIN") {
      timed(name, [&] {
        return compare_minimality(fam, x, sys.eps, params.N, params.net_cap, params.work_cap);
      });
    } else if (name == "PROX") {
      timed(name, [&] {
        return compare_proximal(fam, random_pairs(fam.space, c.pairs, params.seed), params);
      });
    } else if (name == "DIST") {
      timed(name, [&] { return compare_distality(fam, params); });
    } else if (name == "SEN") {
      timed(name, [&] { return compare_sensitivity(fam, params); });
    } else if (name == "COFSEN") {
      timed(name, [&] { return compare_cofinite(fam, params); });
    } else if (name == "LYS") {
      timed(name, [&] { return compare_li_yorke_sensitivity(fam, params.delta, params); });
    } else if (name == "LYC") {
      timed(name, [&] {
        return compare_li_yorke_chaos(fam, params.delta, c.set_size, params);
      });
    } else if (name == "POWMIN") {
      timed(name, [&] {
        return power_minimality(composed(fam), c.power_m, x, sys.eps, params.N,
                                params.net_cap, params.work_cap);
      });
    }
  }

  emit(o, o.format == "csv" ? report_csv(rep) : report_json(rep));
  for (const ComparisonReport& r : rep.comparisons) {
    if (r.agreement == Agreement::violation) return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-horizon laboratory for families of maps on compact metric spaces"};
  app.set_version_flag("--version", FAMDYN_VERSION);
  app.require_subcommand(1);

  Options corpus_o, orbit_o, detect_o, compare_o;
  std::string emit_name;
  std::string orbit_x = "0:0";
  long orbit_stride = 1, orbit_offset = 0;
  DetectOptions detect_d;
  CompareOptions compare_c;

  CLI::App* corpus_cmd = app.add_subcommand("corpus", "list built-in systems");
  corpus_cmd->add_option("--emit", emit_name, "print the spec file for this system");
  corpus_cmd->add_option("--out", corpus_o.out_path, "write to this file instead of stdout");

  CLI::App* orbit_cmd = app.add_subcommand("orbit", "tabulate an orbit");
  add_common_flags(*orbit_cmd, orbit_o);
  orbit_cmd->add_option("--x", orbit_x, "start point as component:coord");
  orbit_cmd->add_option("--stride", orbit_stride, "keep every stride-th index")
      ->check(CLI::PositiveNumber);
  orbit_cmd->add_option("--offset", orbit_offset, "first index to keep")
      ->check(CLI::NonNegativeNumber);

  CLI::App* detect_cmd = app.add_subcommand("detect", "run the detector battery");
  add_common_flags(*detect_cmd, detect_o);
  detect_cmd->add_option("--x", detect_d.x_lit, "base point as component:coord");
  detect_cmd->add_option("--y", detect_d.y_lit, "partner point for the proximal detector");
  detect_cmd->add_option("--only", detect_d.only, "comma-separated detector names")
      ->delimiter(',');
  detect_cmd->add_option("--set-size", detect_d.set_size, "scrambled candidate set size")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}));

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "paired family-versus-composition experiments");
  add_common_flags(*compare_cmd, compare_o);
  compare_cmd->add_option("--x", compare_c.x_lit, "start point for minimality claims");
  compare_cmd->add_option("--claims", compare_c.claims, "comma-separated claim names")
      ->delimiter(',');
  compare_cmd->add_option("--pairs", compare_c.pairs, "random pair count for PROX")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  compare_cmd->add_option("--set-size", compare_c.set_size, "scrambled candidate set size")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}));
  compare_cmd->add_option("--power-m", compare_c.power_m, "exponent for POWMIN")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}));

  int code = 0;
  corpus_cmd->callback([&] { code = run_corpus(corpus_o, emit_name); });
  orbit_cmd->callback(
      [&] { code = run_orbit(*orbit_cmd, orbit_o, orbit_x, orbit_stride, orbit_offset); });
  detect_cmd->callback([&] { code = run_detect(*detect_cmd, detect_o, detect_d); });
  compare_cmd->callback([&] { code = run_compare(*compare_cmd, compare_o, compare_c); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const famdyn::InvalidInputError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const famdyn::ResourceLimitError& ex) {
    std::cerr << "resource limit: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return code;
}
