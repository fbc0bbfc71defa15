// edgelab command-line front end. Exit codes: 0 success, 1 check failure, 2 configuration error.
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <edgelab/dunkl.hpp>
#include <edgelab/edge.hpp>
#include <edgelab/ensembles.hpp>
#include <edgelab/io.hpp>
#include <edgelab/stochastics.hpp>
#include <edgelab/verify.hpp>
#include <edgelab/version.hpp>

using namespace edgelab;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> notes;  // emitted as "# ..." lines
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Outcome {
  Json result = Json::object();
  std::optional<Table> table;
  bool passed = true;
};

struct Common {
  std::string format = "json";
  std::string output;
  bool no_timestamp = false;
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::uint64_t require_seed(const Common& c) {
  if (const char* env = std::getenv("EDGELAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw ConfigError("EDGELAB_SEED must be an unsigned integer");
    }
  }
  if (!c.seed) throw ConfigError("this command is stochastic: pass --seed (or set EDGELAB_SEED)");
  return *c.seed;
}

std::string timestamp() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::vector<std::string>>& rows) {
  for (const auto& [k, v] : j.items()) {
    std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) flatten(v, key, rows);
    else rows.push_back({key, v.is_string() ? v.get<std::string>() : v.dump()});
  }
}

void emit(const std::string& command, const Common& c, const Outcome& o, std::optional<std::uint64_t> seed) {
  std::ostringstream out;
  if (c.format == "csv") {
    Table t;
    if (o.table) {
      t = *o.table;
    } else {
      t.header = {"key", "value"};
      flatten(o.result, "", t.rows);
    }
    out << "# edgelab " << kVersion << " " << command;
    if (seed) out << " seed=" << *seed;
    out << "\n";
    for (const auto& n : t.notes) out << "# " << n << "\n";
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << csv_escape(t.header[i]);
    out << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_escape(r[i]);
      out << "\n";
    }
  } else {
    Json prov;
    prov["tool"] = "edgelab";
    prov["version"] = kVersion;
    Json mods = Json::object();
    for (const char* m : kModules) mods[m] = kVersion;
    prov["modules"] = mods;
    prov["command"] = command;
    prov["seed"] = seed ? Json(*seed) : Json(nullptr);
    prov["threads"] = c.threads;
    if (!c.no_timestamp) prov["timestamp"] = timestamp();
    Json doc;
    doc["provenance"] = prov;
    doc["passed"] = o.passed;
    doc["result"] = o.result;
    out << doc.dump(2) << "\n";
  }
  if (c.output.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(c.output);
    if (!f) throw ConfigError("cannot write " + c.output);
    f << out.str();
  }
}

CumulantKind kind_for(const std::optional<long>& N) { return N ? CumulantKind::finite(*N) : CumulantKind::limiting(); }

Json estimate_json(const MCEstimate& e) { return estimate_to_json(e); }

LowerConvention parse_convention(const std::string& s) {
  if (s == "exact") return LowerConvention::exact;
  if (s == "counting") return LowerConvention::counting;
  if (s == "simplified") return LowerConvention::simplified;
  throw ConfigError("convention must be exact, counting or simplified");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edgelab: moments, edge asymptotics and Monte Carlo for beta-ensemble additions"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  std::uint64_t seed_value = 0;
  app.add_option("--format", common.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output,-o", common.output, "write output to this file");
  app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp from provenance");
  app.add_option("--threads", common.threads, "worker threads for Monte Carlo")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed (required for stochastic commands)");

  std::string spec_path;
  std::optional<long> N_opt;
  long N = 1, reps = 0, max_index = 10, max_L = 10, n_samples = 1000, survival_L = 0, grid = 1024;
  int M = 0, main_var = 1;
  std::string method = "nc", theta_str = "1", convention = "exact";
  std::vector<int> joint, powers{2};
  std::vector<long> drift;
  double T = 1, beta = 2, t1 = 0.2, t2 = 0.8, offset = 1.0;

  auto add_spec = [&](CLI::App* s) { s->add_option("--spec", spec_path, "ensemble spec JSON")->required(); };

  auto* c_cum = app.add_subcommand("cumulants", "exact free cumulants");
  add_spec(c_cum);
  c_cum->add_option("--N", N_opt, "finite size (default: limiting)");
  c_cum->add_option("--max-index", max_index, "largest l")->check(CLI::PositiveNumber);

  auto* c_mom = app.add_subcommand("moments", "limiting moment m_M by one route");
  add_spec(c_mom);
  c_mom->add_option("--M", M, "moment order")->required()->check(CLI::NonNegativeNumber);
  c_mom->add_option("--method", method, "nc|coeff|contour|asymptotic")
      ->check(CLI::IsMember({"nc", "coeff", "contour", "asymptotic"}));
  c_mom->add_option("--N", N_opt, "finite-size cumulants");

  auto* c_edge = app.add_subcommand("edge-params", "edge parameters from the Voiculescu transform");
  add_spec(c_edge);
  c_edge->add_option("--N", N_opt, "finite size");
  c_edge->add_option("--drift", drift, "sizes for the critical-point drift table")->delimiter(',');

  auto* c_univ = app.add_subcommand("universality-check", "sigma P_{-1} (mu/(2 C0))^{3/2} = 1/2");
  add_spec(c_univ);

  auto* c_ballot = app.add_subcommand("ballot-verify", "ballot and bridge identities on random weights");

  auto* c_dunkl = app.add_subcommand("dunkl-expand", "exact Dunkl expansion of E[p_M]");
  add_spec(c_dunkl);
  c_dunkl->add_option("--N", N, "number of variables")->required();
  c_dunkl->add_option("--theta", theta_str, "theta = beta/2 as a rational");
  c_dunkl->add_option("--M", M, "power");
  c_dunkl->add_option("--convention", convention, "exact|counting|simplified");
  c_dunkl->add_option("--main-var", main_var, "variable the expansion runs through (1-based)");
  c_dunkl->add_option("--joint", joint, "joint moment E[prod p_k] for these k")->delimiter(',');

  auto* c_walk = app.add_subcommand("walk-mc", "weighted excursions: down-step homogeneity, max tail, survival");
  add_spec(c_walk);
  c_walk->add_option("--M", M, "excursion length")->required();
  c_walk->add_option("--samples", n_samples, "excursions");
  c_walk->add_option("--t1", t1, "window start");
  c_walk->add_option("--t2", t2, "window end");
  c_walk->add_option("--survival-L", survival_L, "also estimate sqrt(L) P[survival] at this L");

  auto* c_exc = app.add_subcommand("excursion-mc", "E[int e] from Brownian excursions and, with --spec, rescaled walks");
  c_exc->add_option("--spec", spec_path, "step law for the walk route");
  c_exc->add_option("--M", M, "walk length for the walk route");
  c_exc->add_option("--n-paths", n_samples, "paths per route");
  c_exc->add_option("--grid", grid, "Brownian grid size");
  c_exc->add_option("--offset", offset, "walk height offset");

  auto* c_airy = app.add_subcommand("airy-laplace", "Monte Carlo of the Airy first-moment Laplace formula");
  c_airy->add_option("--T", T, "Laplace variable")->required();
  c_airy->add_option("--beta", beta, "beta")->required();
  c_airy->add_option("--n-paths", n_samples, "excursions");
  c_airy->add_option("--grid", grid, "grid size");

  auto* c_tri = app.add_subcommand("tridiag-mc", "tridiagonal beta-ensemble edge statistics");
  add_spec(c_tri);
  c_tri->add_option("--N", N, "matrix size")->required();
  c_tri->add_option("--beta", beta, "beta")->required();
  c_tri->add_option("--reps", reps, "replicas")->required();
  c_tri->add_option("--T", T, "Laplace variable");

  auto* c_add = app.add_subcommand("addition-mc", "dense beta in {1,2} additions: joint power-sum moments");
  add_spec(c_add);
  c_add->add_option("--N", N, "matrix size")->required();
  c_add->add_option("--beta", beta, "1 or 2")->required();
  c_add->add_option("--reps", reps, "replicas")->required();
  c_add->add_option("--powers", powers, "E[prod p_k] for these k")->delimiter(',');

  auto* c_all = app.add_subcommand("verify-all", "exact-equality suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (seed_opt->count()) common.seed = seed_value;

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  std::optional<std::uint64_t> used_seed;
  Outcome o;
  try {
    if (sub == c_cum) {
      auto k = cumulants(load_spec(spec_path), kind_for(N_opt), static_cast<int>(max_index));
      Table t{{}, {"l", "kappa"}, {}};
      Json vals = Json::array();
      for (int l = 1; l <= k.max_index(); ++l) {
        vals.push_back(to_string(k(l)));
        t.rows.push_back({std::to_string(l), to_string(k(l))});
      }
      o.result["kind"] = N_opt ? "finite" : "limiting";
      if (N_opt) o.result["N"] = *N_opt;
      o.result["values"] = vals;
      o.table = t;
    } else if (sub == c_mom) {
      auto spec = load_spec(spec_path);
      auto kind = kind_for(N_opt);
      o.result["method"] = method;
      o.result["M"] = M;
      if (method == "nc" || method == "coeff") {
        auto k = cumulants(spec, kind, M + 1);
        o.result["value"] = to_string(method == "nc" ? moment_nc(k, M) : moment_coefficient(k, M));
      } else {
        VoiculescuTransform vt(spec, kind);
        PowerScaled v = method == "contour" ? static_cast<PowerScaled>(contour_moment(vt, M))
                                            : steepest_descent_moment(edge_parameters(vt), M);
        o.result["normalized"] = v.normalized;
        o.result["base"] = v.base;
        o.result["power"] = v.power;
        o.result["log_value"] = v.log_value();
        o.result["value"] = fmt(static_cast<double>(v.value()));
      }
    } else if (sub == c_edge) {
      auto spec = load_spec(spec_path);
      o.result = edge_to_json(edge_parameters(VoiculescuTransform(spec, kind_for(N_opt))));
      if (!drift.empty()) {
        Table t{{}, {"N", "z_c_N", "scaled_drift"}, {}};
        Json rows = Json::array();
        for (const auto& r : critical_point_drift(spec, drift)) {
          t.rows.push_back({std::to_string(r.N), fmt(r.z_c_N), fmt(r.scaled_drift)});
          rows.push_back(Json{{"N", r.N}, {"z_c_N", r.z_c_N}, {"scaled_drift", r.scaled_drift}});
        }
        o.result["drift"] = rows;
        o.table = t;
      }
    } else if (sub == c_univ) {
      double r = universality_residual(edge_parameters(voiculescu(load_spec(spec_path))));
      o.result["residual"] = r;
      o.passed = std::abs(r) < 1e-10;
    } else if (sub == c_ballot) {
      std::ostringstream os;
      used_seed = common.seed.value_or(1);
      o.passed = check_ballot(os, *used_seed);
      o.result["detail"] = os.str();
    } else if (sub == c_dunkl) {
      auto spec = load_spec(spec_path);
      Rational theta = parse_rational(theta_str);
      if (!joint.empty()) {
        o.result["powers"] = joint;
        o.result["joint_moment"] = to_string(dunkl_joint_moment(spec, N, theta, joint));
      } else {
        auto ex = dunkl_moment(spec, N, theta, M, parse_convention(convention), main_var - 1);
        o.result["N"] = N;
        o.result["theta"] = to_string(theta);
        o.result["M"] = M;
        o.result["convention"] = to_string(ex.convention);
        o.result["moment"] = to_string(ex.moment());
        o.result["total"] = to_string(ex.total);
        o.result["ledger"] = ledger_to_json(ex);
        Table t{{"moment=" + to_string(ex.moment())}, {"k", "p", "value"}, {}};
        for (const auto& [sig, v] : ex.ledger) {
          std::string ks;
          for (std::size_t i = 0; i < sig.k.size(); ++i) ks += (i ? " " : "") + std::to_string(sig.k[i]);
          t.rows.push_back({ks, std::to_string(sig.p), to_string(v)});
        }
        o.table = t;
      }
    } else if (sub == c_walk) {
      used_seed = require_seed(common);
      auto dist = step_distribution(load_spec(spec_path));
      MCOptions opt{*used_seed, common.threads};
      auto fr = summarize(run_samples(n_samples, opt.seed, opt.threads, [&](std::size_t, Rng& g) {
                            return downstep_fraction(sample_excursion(M, dist, g), t1, t2);
                          }),
                          opt.seed);
      o.result["p_minus1"] = dist.p(-1);
      o.result["downstep_fraction"] = estimate_json(fr);
      o.result["z_score"] = (fr.mean - dist.p(-1)) / fr.std_error;
      Table t{{}, {"h", "probability", "count"}, {}};
      Json tail = Json::array();
      for (const auto& r : max_tail_curve(dist, M, n_samples, {splitmix64(opt.seed), opt.threads})) {
        tail.push_back(Json{{"h", r.h}, {"probability", r.probability}, {"count", r.count}});
        t.rows.push_back({fmt(r.h), fmt(r.probability), std::to_string(r.count)});
      }
      o.result["max_tail"] = tail;
      o.table = t;
      if (survival_L > 0) {
        auto s = survival_mc(dist, survival_L, n_samples, {splitmix64(opt.seed + 1), opt.threads});
        o.result["survival"] = estimate_json(s);
      }
    } else if (sub == c_exc) {
      used_seed = require_seed(common);
      MCOptions opt{*used_seed, common.threads};
      auto b = brownian_area(n_samples, static_cast<int>(grid), opt);
      o.result["brownian_area"] = estimate_json(b);
      o.result["exact"] = std::sqrt(std::numbers::pi / 8);
      if (!spec_path.empty()) {
        if (M <= 0) throw ConfigError("walk route needs --M");
        auto w = walk_area(step_distribution(load_spec(spec_path)), M, n_samples, {splitmix64(opt.seed), opt.threads},
                           offset);
        o.result["walk_area"] = estimate_json(w);
        double z = (w.mean - b.mean) / std::hypot(w.std_error, b.std_error);
        o.result["z_score"] = z;
        o.passed = std::abs(z) < 3;
      }
    } else if (sub == c_airy) {
      used_seed = require_seed(common);
      auto e = airy_laplace_first_moment(T, beta, n_samples, static_cast<int>(grid), {*used_seed, common.threads});
      o.result["T"] = T;
      o.result["beta"] = beta;
      o.result["estimate"] = estimate_json(e);
    } else if (sub == c_tri) {
      used_seed = require_seed(common);
      auto spec = load_spec(spec_path);
      auto p = edge_parameters(VoiculescuTransform(spec, CumulantKind::finite(N)));
      std::vector<double> top(reps), lap(reps), pw(reps);
      const long Mpow = edge_power(T, N);
      parallel_for(reps, common.threads, [&](std::size_t i) {
        Rng g = stream_rng(*used_seed, i);
        auto s = sample_spec_spectrum(spec, N, beta, g);
        top[i] = edge_rescale(s.largest(), p, N) / p.c0;
        lap[i] = empirical_laplace(s, T, p);
        pw[i] = empirical_power_sum(s, Mpow, p);
      });
      o.result["edge"] = edge_to_json(p);
      o.result["lambda1_rescaled"] = estimate_json(summarize(top, *used_seed));
      o.result["laplace"] = estimate_json(summarize(lap, *used_seed));
      o.result["power_sum"] = estimate_json(summarize(pw, *used_seed));
      o.result["power"] = Mpow;
      Table t{{}, {"rep", "lambda1_rescaled", "laplace", "power_sum"}, {}};
      for (long i = 0; i < reps; ++i) t.rows.push_back({std::to_string(i), fmt(top[i]), fmt(lap[i]), fmt(pw[i])});
      o.table = t;
    } else if (sub == c_add) {
      used_seed = require_seed(common);
      if (beta != 1 && beta != 2) throw ConfigError("addition-mc needs --beta 1 or 2");
      auto spec = load_spec(spec_path);
      int kmax = 0;
      for (int k : powers) {
        if (k < 1) throw ConfigError("powers must be positive");
        kmax = std::max(kmax, k);
      }
      auto v = run_samples(reps, *used_seed, common.threads, [&](std::size_t, Rng& g) {
        auto t = trace_powers(sample_classical_matrix(spec, N, static_cast<int>(beta), g), kmax);
        double prod = 1;
        for (int k : powers) prod *= t[k - 1];
        return prod;
      });
      auto e = summarize(v, *used_seed);
      o.result["powers"] = powers;
      o.result["estimate"] = estimate_json(e);
      int total = 0;
      for (int k : powers) total += k;
      if (N <= 4 && total <= 7) {
        Rational ex = dunkl_joint_moment(spec, N, make_rational(static_cast<long>(beta), 2), powers);
        o.result["exact"] = to_string(ex);
        double z = (e.mean - to_double(ex)) / e.std_error;
        o.result["z_score"] = z;
        o.passed = std::abs(z) < 4;
      }
    } else if (sub == c_all) {
      used_seed = common.seed.value_or(1);
      Json checks = Json::array();
      Table t{{}, {"id", "name", "passed", "detail"}, {}};
      for (const auto& r : run_exact_suite(*used_seed)) {
        checks.push_back(Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        t.rows.push_back({r.id, r.name, r.passed ? "true" : "false", r.detail});
        o.passed = o.passed && r.passed;
      }
      o.result["checks"] = checks;
      o.table = t;
    }
    emit(command, common, o, used_seed);
  } catch (const std::exception& e) {
    std::cerr << "edgelab " << command << ": " << e.what() << "\n";
    return 2;
  }
  return o.passed ? 0 : 1;
}
