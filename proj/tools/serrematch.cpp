#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

#include "serrematch/cache.hpp"
#include "serrematch/counting.hpp"
#include "serrematch/ffarith.hpp"
#include "serrematch/kernels.hpp"
#include "serrematch/modsym.hpp"
#include "serrematch/serre.hpp"
#include "serrematch/twist.hpp"

namespace {

using nlohmann::ordered_json;
using namespace serrematch;

constexpr const char* kToolVersion = "serrematch 0.1.0";

struct GlobalOptions {
  std::string cache_dir;
  unsigned threads = 0;
  bool json_only = false;
  std::string command_line;

  unsigned effective_threads() const {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
  }

  void progress(const std::string& msg) const {
    if (!json_only) std::cerr << msg << "\n";
  }
};

std::string resolve_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("SERREMATCH_CACHE"); env != nullptr && *env != '\0') return env;
  return ".serrematch-cache";
}

ordered_json report_header(const GlobalOptions& g) {
  ordered_json r;
  r["command_line"] = g.command_line;
  r["tool_version"] = kToolVersion;
  return r;
}

void emit(const ordered_json& report) { std::cout << report.dump(2) << "\n"; }

CountFn cached_count_fn(const JsonCache& cache, const GlobalOptions& g, unsigned count_threads) {
  return [&cache, &g, count_threads](long long d, const Prime& p) -> std::uint64_t {
    CacheKey key{"schoen", d, static_cast<long long>(p.value()), "count", "v1"};
    if (auto hit = cache.get(key)) {
      if (hit->contains("count")) return (*hit)["count"].get<std::uint64_t>();
    }
    g.progress("[count] family=schoen d=" + std::to_string(d) + " p=" + std::to_string(p.value()) + " backend=" +
               root_count_backend_name(static_cast<std::uint32_t>(p.value())));
    std::uint64_t c = count_projective(schoen_form(d), p, count_threads);
    nlohmann::json payload = {{"family", "schoen"}, {"d", d}, {"p", p.value()}, {"count", c}, {"version", "v1"}};
    cache.put(key, payload);
    return c;
  };
}

ordered_json newform_to_json(const Newform& f) {
  ordered_json j;
  j["level"] = f.level;
  j["weight"] = f.weight;
  j["label"] = f.label;
  ordered_json coeffs;
  for (const auto& [n, an] : f.coeffs) coeffs[std::to_string(n)] = an;
  j["coeffs"] = coeffs;
  j["version"] = "v1";
  return j;
}

NewformSource cached_newform_source(const JsonCache& cache, const GlobalOptions& g) {
  return [&cache, &g](long N, long k, long coeff_bound) -> NewformDecomposition {
    CacheKey key{"gamma0", N, k, "newform", "v1"};
    if (auto hit = cache.get(key)) {
      if (hit->value("coeff_bound", 0L) >= coeff_bound) {
        NewformDecomposition dec;
        for (const auto& jf : (*hit)["forms"]) {
          Newform f;
          f.level = jf["level"].get<long>();
          f.weight = jf["weight"].get<long>();
          f.label = jf["label"].get<std::string>();
          for (const auto& [n, an] : jf["coeffs"].items()) f.coeffs[std::stol(n)] = an.get<long long>();
          dec.forms.push_back(std::move(f));
        }
        for (const auto& b : (*hit)["irrational_blocks"]) dec.irrational_blocks.push_back(b.get<std::size_t>());
        return dec;
      }
    }
    g.progress("[forms] level=" + std::to_string(N) + " weight=" + std::to_string(k) + " coeff_bound=" +
               std::to_string(coeff_bound));
    NewformDecomposition dec = rational_newforms(N, k, coeff_bound);
    nlohmann::json forms = nlohmann::json::array();
    for (const auto& f : dec.forms) {
      nlohmann::json coeffs;
      for (const auto& [n, an] : f.coeffs) coeffs[std::to_string(n)] = an;
      forms.push_back({{"level", f.level}, {"weight", f.weight}, {"label", f.label}, {"coeffs", coeffs}});
    }
    nlohmann::json payload = {{"level", N},
                              {"weight", k},
                              {"coeff_bound", coeff_bound},
                              {"forms", forms},
                              {"irrational_blocks", dec.irrational_blocks},
                              {"version", "v1"}};
    cache.put(key, payload);
    return dec;
  };
}

ordered_json count_record_json(long long d, std::uint64_t p, std::uint64_t count) {
  ordered_json rec;
  rec["family"] = "schoen";
  rec["d"] = d;
  rec["p"] = p;
  rec["count"] = count;
  rec["version"] = "v1";
  return rec;
}

ordered_json match_result_json(const MatchResult& r) {
  ordered_json j;
  j["search_box"] = {{"N0", r.search_box.N0}, {"k0", r.search_box.k0}};
  j["primes_checked"] = r.primes_checked;
  ordered_json matches = ordered_json::array();
  for (const auto& m : r.matches) {
    ordered_json e;
    e["level"] = m.level;
    e["weight"] = m.weight;
    e["label"] = m.label;
    e["mode"] = m.mode == FrobeniusData::Mode::exact ? "exact" : "congruence";
    matches.push_back(e);
  }
  j["matches"] = matches;
  j["unique"] = r.unique;
  j["skipped"] = r.skipped;
  j["version"] = "v1";
  return j;
}

CompatibleSystemData schoen_congruence_system(const CountFn& counts) {
  CompatibleSystemData sys;
  sys.S = BadPrimeSet::make({5});
  sys.undefined_primes = {2};  // the U/V coordinate change degenerates mod 2
  sys.det_exponent = 3;
  sys.trace_source = [counts](const Prime& p) { return frobenius_congruence(1, p, counts); };
  return sys;
}

int run_count(const GlobalOptions& g, const JsonCache& cache, long long d, std::uint64_t p_single,
              std::uint64_t pmin, std::uint64_t pmax) {
  CountFn counts = cached_count_fn(cache, g, g.effective_threads());
  std::vector<std::uint64_t> ps;
  if (p_single != 0) {
    ps.push_back(p_single);
  } else {
    for (std::uint64_t p = pmin; p <= pmax; ++p) {
      if (is_prime_u64(p)) ps.push_back(p);
    }
  }
  ordered_json report = report_header(g);
  ordered_json records = ordered_json::array();
  for (auto pv : ps) {
    Prime p(pv);
    records.push_back(count_record_json(d, pv, counts(d, p)));
  }
  report["records"] = records;
  emit(report);
  return 0;
}

int run_nodes(const GlobalOptions& g, long long d, std::uint64_t pv) {
  Prime p(pv);
  auto points = singular_points(schoen_form(d), p);
  ordered_json report = report_header(g);
  report["family"] = "schoen";
  report["d"] = d;
  report["p"] = pv;
  report["count"] = points.size();
  ordered_json pts = ordered_json::array();
  for (const auto& pt : points) pts.push_back(std::vector<std::uint32_t>(pt.begin(), pt.end()));
  report["points"] = pts;
  report["version"] = "v1";
  emit(report);
  return 0;
}

int run_forms(const GlobalOptions& g, const JsonCache& cache, long N, long k, long coeff_bound) {
  NewformSource source = cached_newform_source(cache, g);
  NewformDecomposition dec = source(N, k, coeff_bound);
  ordered_json report = report_header(g);
  report["level"] = N;
  report["weight"] = k;
  ordered_json forms = ordered_json::array();
  for (const auto& f : dec.forms) forms.push_back(newform_to_json(f));
  report["forms"] = forms;
  report["irrational_blocks"] = dec.irrational_blocks;
  report["version"] = "v1";
  emit(report);
  return 0;
}

int run_dim(const GlobalOptions& g, long N, long k) {
  ordered_json report = report_header(g);
  report["level"] = N;
  report["weight"] = k;
  report["dimension"] = dim_cusp_forms(N, k);
  report["version"] = "v1";
  emit(report);
  return 0;
}

int run_match(const GlobalOptions& g, const JsonCache& cache, const std::vector<std::uint64_t>& bad_primes,
              std::uint64_t pmax, bool exact, bool calibrate) {
  CountFn counts = cached_count_fn(cache, g, g.effective_threads());
  MatchOptions opts;
  opts.newforms = cached_newform_source(cache, g);
  BadPrimeSet S = BadPrimeSet::make(bad_primes);
  SerreBounds bounds = rigid_bounds(S);
  g.progress("[match] search box N0=" + std::to_string(bounds.N0) + " k0=" + std::to_string(bounds.k0) +
             " prime bound " + std::to_string(pmax));

  CompatibleSystemData congruence_system = schoen_congruence_system(counts);
  MatchResult congruence_result = match(congruence_system, bounds, pmax, opts);

  ordered_json report = report_header(g);
  if (!exact) {
    ordered_json body = match_result_json(congruence_result);
    for (auto& [key, value] : body.items()) report[key] = value;
    emit(report);
    return congruence_result.unique ? 0 : 1;
  }

  // Exact mode: calibrate the correction model against the congruence-mode
  // winner, then rerun the comparison with exact traces.
  if (!calibrate) {
    g.progress("[match] --exact requires --calibrate (no precomputed model available)");
    return 2;
  }
  if (!congruence_result.unique) {
    ordered_json body = match_result_json(congruence_result);
    for (auto& [key, value] : body.items()) report[key] = value;
    report["calibration"] = {{"status", "skipped"}, {"reason", "congruence match not unique"}};
    emit(report);
    return 1;
  }
  const Newform& f = congruence_result.matches.front().form;
  std::vector<std::uint64_t> cal{7, 11, 13, 17};
  std::vector<std::uint64_t> val{19, 23, 29, 31, 37, 41, 43, 47};
  std::map<std::uint64_t, long long> oracle;
  for (auto pv : cal) oracle[pv] = f.a(static_cast<long>(pv));
  for (auto pv : val) oracle[pv] = f.a(static_cast<long>(pv));

  ordered_json calinfo;
  calinfo["calibration_primes"] = cal;
  calinfo["validation_primes"] = val;
  try {
    CorrectionModel model = calibrate_correction(1, oracle, cal, val, counts);
    ordered_json classes;
    for (int r = 1; r <= 4; ++r) {
      if (model.by_class[r].present) {
        classes[std::to_string(r)] = {{"c1", model.by_class[r].c1}, {"c2", model.by_class[r].c2}};
      }
    }
    calinfo["status"] = "ok";
    calinfo["classes"] = classes;
    CompatibleSystemData exact_system = congruence_system;
    exact_system.trace_source = [counts, model](const Prime& p) { return trace_exact(1, p, model, counts); };
    // Exact traces exist only for calibrated residue classes.
    for (std::uint64_t p = 2; p <= pmax; ++p) {
      if (is_prime_u64(p) && p != 5 && !model.by_class[p % 5].present) exact_system.undefined_primes.insert(p);
    }
    MatchResult exact_result = match(exact_system, bounds, pmax, opts);
    ordered_json body = match_result_json(exact_result);
    for (auto& [key, value] : body.items()) report[key] = value;
    report["calibration"] = calinfo;
    emit(report);
    return exact_result.unique ? 0 : 1;
  } catch (const NoConsistentModelError& e) {
    calinfo["status"] = "no_consistent_model";
    calinfo["detail"] = e.what();
    calinfo["residual_table"] = e.residual_table;
  } catch (const ValidationFailureError& e) {
    calinfo["status"] = "validation_failure";
    calinfo["detail"] = e.what();
    ordered_json failures = ordered_json::array();
    for (const auto& entry : e.failures) {
      failures.push_back({{"p", entry.p}, {"class", entry.residue_class}, {"reason", entry.reason}, {"residual", entry.residual}});
    }
    calinfo["failures"] = failures;
  }
  ordered_json body = match_result_json(congruence_result);
  for (auto& [key, value] : body.items()) report[key] = value;
  report["calibration"] = calinfo;
  emit(report);
  return 1;
}

int run_twist_verify(const GlobalOptions& g, const JsonCache& cache, long long d, std::uint64_t pmax) {
  CountFn counts = cached_count_fn(cache, g, 1);
  NewformSource source = cached_newform_source(cache, g);
  NewformDecomposition dec = source(25, 4, static_cast<long>(pmax));
  if (dec.forms.size() != 1) {
    std::cerr << "twist-verify: expected exactly one rational newform at (25, 4), got " << dec.forms.size() << "\n";
    return 1;
  }
  TwistReport report = verify_twist(d, pmax, dec.forms.front(), counts, g.effective_threads());
  ordered_json out = report_header(g);
  out["d"] = report.d;
  out["primes_checked"] = report.primes_checked;
  ordered_json failures = ordered_json::array();
  for (const auto& fl : report.failures) {
    failures.push_back({{"p", fl.p}, {"expected", fl.expected}, {"observed", fl.observed}});
  }
  out["failures"] = failures;
  out["passed"] = report.passed;
  out["version"] = "v1";
  emit(out);
  return report.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point counts, modular symbols, and Frobenius trace matching for the Schoen quintic family"};
  app.require_subcommand(1);

  GlobalOptions g;
  std::string cache_flag;
  app.add_option("--cache-dir", cache_flag, "Cache directory (overrides SERREMATCH_CACHE)");
  app.add_option("--threads", g.threads, "Worker thread count (default: available parallelism)");
  app.add_flag("--json", g.json_only, "Suppress progress text on stderr");

  auto* cmd_count = app.add_subcommand("count", "Count points of the twisted Schoen quintic over F_p");
  long long count_d = 1;
  std::uint64_t count_p = 0, count_pmin = 0, count_pmax = 0;
  cmd_count->add_option("--d", count_d, "Squarefree twist parameter")->required();
  auto* opt_p = cmd_count->add_option("--p", count_p, "Single prime");
  auto* opt_pmin = cmd_count->add_option("--pmin", count_pmin, "Range start");
  auto* opt_pmax = cmd_count->add_option("--pmax", count_pmax, "Range end");
  opt_pmin->needs(opt_pmax);
  opt_p->excludes(opt_pmin);

  auto* cmd_nodes = app.add_subcommand("nodes", "Enumerate singular points of the twisted Schoen quintic over F_p");
  long long nodes_d = 1;
  std::uint64_t nodes_p = 0;
  cmd_nodes->add_option("--d", nodes_d, "Squarefree twist parameter")->required();
  cmd_nodes->add_option("--p", nodes_p, "Prime")->required();

  auto* cmd_forms = app.add_subcommand("forms", "Rational newforms by modular symbols");
  long forms_level = 0, forms_weight = 0, forms_bound = 20;
  cmd_forms->add_option("--level", forms_level, "Level N")->required();
  cmd_forms->add_option("--weight", forms_weight, "Even weight k")->required();
  cmd_forms->add_option("--coeff-bound", forms_bound, "Coefficients a_n for n up to this bound");

  auto* cmd_dim = app.add_subcommand("dim", "Dimension of the cusp form space by the standard formula");
  long dim_level = 0, dim_weight = 0;
  cmd_dim->add_option("--level", dim_level, "Level N")->required();
  cmd_dim->add_option("--weight", dim_weight, "Even weight k")->required();

  auto* cmd_match = app.add_subcommand("match", "Match Schoen quintic trace data against candidate newforms");
  std::vector<std::uint64_t> match_bad{5};
  std::uint64_t match_pmax = 97;
  bool match_exact = false, match_calibrate = false;
  cmd_match->add_option("--bad-primes", match_bad, "Bad primes S")->delimiter(',');
  cmd_match->add_option("--pmax", match_pmax, "Compare at good primes up to this bound");
  cmd_match->add_flag("--exact", match_exact, "Exact trace comparison (needs --calibrate)");
  cmd_match->add_flag("--calibrate", match_calibrate, "Calibrate the correction model first");

  auto* cmd_twist = app.add_subcommand("twist-verify", "Verify the quadratic twist congruences for X_d");
  long long twist_d = 0;
  std::uint64_t twist_pmax = 47;
  cmd_twist->add_option("--d", twist_d, "Squarefree twist parameter")->required();
  cmd_twist->add_option("--pmax", twist_pmax, "Check primes up to this bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string cmdline;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) cmdline += " ";
    cmdline += argv[i];
  }
  g.command_line = cmdline;

  JsonCache cache(resolve_cache_dir(cache_flag));

  try {
    if (cmd_count->parsed()) {
      if (count_p == 0 && count_pmax == 0) {
        std::cerr << "count: provide --p or --pmin/--pmax\n";
        return 2;
      }
      return run_count(g, cache, count_d, count_p, count_pmin, count_pmax);
    }
    if (cmd_nodes->parsed()) return run_nodes(g, nodes_d, nodes_p);
    if (cmd_forms->parsed()) return run_forms(g, cache, forms_level, forms_weight, forms_bound);
    if (cmd_dim->parsed()) return run_dim(g, dim_level, dim_weight);
    if (cmd_match->parsed()) return run_match(g, cache, match_bad, match_pmax, match_exact, match_calibrate);
    if (cmd_twist->parsed()) return run_twist_verify(g, cache, twist_d, twist_pmax);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
