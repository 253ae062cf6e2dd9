#include "slicewalk/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <variant>

#include "slicewalk/counting.hpp"
#include "slicewalk/error.hpp"
#include "slicewalk/experiments.hpp"
#include "slicewalk/graph_gen.hpp"
#include "slicewalk/report.hpp"
#include "slicewalk/rng.hpp"
#include "slicewalk/slices.hpp"
#include "slicewalk/verify.hpp"
#include "slicewalk/walks.hpp"

namespace slicewalk {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  std::string config;
  int threads = 0;
  bool timing = false;
};

struct GraphSource {
  std::string in;
  int n = 0;
  int degree = 0;
  bool plain = false;
  std::string method = "auto";
};

struct SliceChoice {
  bool two_sided = false;
  bool one_sided = false;
  bool regular = false;
  int kx = 1;
  int ky = 1;
  int k = 2;
  double lambda = 0.05;
};

void add_graph_options(CLI::App* sub, GraphSource& g) {
  sub->add_option("--in", g.in, "graph file (gen-graph format)");
  sub->add_option("--n", g.n, "generate: vertices per side (or vertex count with --plain-graph)");
  sub->add_option("--degree", g.degree, "generate: degree");
  sub->add_flag("--plain-graph", g.plain, "generate a plain regular graph instead of a bipartite one");
  sub->add_option("--gen-method", g.method, "auto, rejection or repair")
      ->check(CLI::IsMember({"auto", "rejection", "repair"}));
}

void add_slice_options(CLI::App* sub, SliceChoice& s) {
  sub->add_flag("--two-sided", s.two_sided, "two-sided slice I_{kx,ky}");
  sub->add_flag("--one-sided", s.one_sided, "one-sided hardcore slice");
  sub->add_flag("--regular", s.regular, "independent k-sets of a plain graph");
  sub->add_option("--kx", s.kx, "two-sided: vertices in X");
  sub->add_option("--ky", s.ky, "two-sided: vertices in Y");
  sub->add_option("--k", s.k, "one-sided / regular: set size");
  sub->add_option("--lambda", s.lambda, "fugacity");
}

AnyGraph obtain_graph(const GraphSource& g, std::uint64_t seed) {
  if (!g.in.empty()) return load_graph(g.in);
  if (g.n <= 0 || g.degree <= 0) throw UsageError("give --in <file>, or --n and --degree to generate a graph");
  GenOptions opt;
  opt.method = gen_method_from_string(g.method);
  if (g.plain) return gen_regular(g.n, g.degree, seed, opt);
  return gen_bipartite_regular(g.n, g.degree, seed, opt);
}

Json graph_json(const AnyGraph& g, const GraphSource& src) {
  Json j;
  if (const auto* b = std::get_if<BipartiteRegularGraph>(&g)) {
    j["kind"] = "bipartite";
    j["n"] = b->n_side();
    j["degree"] = b->degree();
  } else {
    const auto& r = std::get<RegularGraph>(g);
    j["kind"] = "regular";
    j["n"] = r.vertex_count();
    j["degree"] = r.degree();
  }
  j["source"] = src.in.empty() ? std::string("generated") : src.in;
  return j;
}

std::shared_ptr<const BipartiteGraph> need_bipartite(const AnyGraph& g, const char* what) {
  if (const auto* b = std::get_if<BipartiteRegularGraph>(&g)) return std::make_shared<const BipartiteGraph>(*b);
  throw UsageError(std::string(what) + " needs a bipartite graph");
}

std::shared_ptr<const Graph> plain_of(const AnyGraph& g) {
  if (const auto* b = std::get_if<BipartiteRegularGraph>(&g)) return std::make_shared<const Graph>(b->as_graph());
  return std::make_shared<const Graph>(std::get<RegularGraph>(g));
}

const char* family_of(const SliceChoice& s) {
  const int chosen = int(s.two_sided) + int(s.one_sided) + int(s.regular);
  if (chosen != 1) throw UsageError("choose exactly one of --two-sided, --one-sided, --regular");
  return s.two_sided ? "two_sided" : s.one_sided ? "one_sided" : "regular";
}

SlicePtr make_slice(const AnyGraph& g, const SliceChoice& s) {
  const std::string fam = family_of(s);
  if (fam == "two_sided") return std::make_shared<const TwoSidedSlice>(need_bipartite(g, "--two-sided"), s.kx, s.ky);
  if (fam == "one_sided")
    return std::make_shared<const OneSidedSlice>(need_bipartite(g, "--one-sided"), s.k, s.lambda);
  return std::make_shared<const RegularSlice>(plain_of(g), s.k);
}

Json slice_json(const SliceChoice& s) {
  Json j;
  j["family"] = family_of(s);
  if (s.two_sided) {
    j["k_x"] = s.kx;
    j["k_y"] = s.ky;
  } else {
    j["k"] = s.k;
  }
  if (s.one_sided) j["lambda"] = s.lambda;
  return j;
}

// Every option of the app and of the chosen subcommand, given or defaulted.
// The output path is left out so a report does not depend on where it was written.
Json options_json(const CLI::App* app) {
  Json j;
  for (const CLI::Option* o : app->get_options()) {
    const std::string name = o->get_single_name();
    if (name.empty() || name == "help" || name == "version" || name == "out") continue;
    std::string value;
    if (o->count() > 0) {
      const auto res = o->reduced_results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? " " : "") + res[i];
    } else {
      value = o->get_default_str();
      if (value.empty() && o->get_expected_min() == 0) value = "false";
    }
    j[name] = value;
  }
  return j;
}

void write_stanza_comments(std::ostream& out, const Json& stanza) {
  const Json flat = flatten(stanza);
  for (auto it = flat.begin(); it != flat.end(); ++it)
    out << "# " << it.key() << '=' << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
        << '\n';
}

template <typename F>
void with_output(const std::string& path, std::ostream& fallback, F&& f) {
  if (path.empty()) {
    f(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot open --out file '" + path + "'");
  f(file);
  if (!file) throw Error("write to '" + path + "' failed");
}

std::vector<std::string> with_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : read_config_file(path)) {
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (!given) merged.push_back(flag + "=" + value);
  }
  return merged;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw InvalidArgument(path + ":" + std::to_string(lineno) + ": empty key");
    kv.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return kv;
}

int cli_dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"slicewalk-lab: down-up walks, counting and spectral checks on random regular graphs"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Globals gl;
  app.add_option("--seed", gl.seed, "master seed");
  app.add_option("--out", gl.out, "output file (default stdout)");
  app.add_option("--format", gl.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--config", gl.config, "key=value file; keys are long option names");
  app.add_option("--threads", gl.threads, "worker threads (0: hardware)");
  app.add_flag("--timing", gl.timing, "add wall_time_seconds to the report");

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "random regular graph from the pairing model");
  bool gen_bip = false, gen_reg = false;
  int gen_n = 0, gen_delta = 3;
  std::string gen_method = "auto";
  double gen_sweeps = 1.0;
  gen->add_flag("--bipartite", gen_bip, "bipartite, n vertices per side (default)");
  gen->add_flag("--regular", gen_reg, "plain regular graph on n vertices");
  gen->add_option("--n", gen_n, "vertices (per side for bipartite)")->required();
  gen->add_option("--delta", gen_delta, "degree");
  gen->add_option("--method", gen_method, "auto, rejection or repair")
      ->check(CLI::IsMember({"auto", "rejection", "repair"}));
  gen->add_option("--mixing-sweeps", gen_sweeps, "repair: switches per edge after repair");

  // sample
  auto* sample = app.add_subcommand("sample", "run the down-up walk on a slice");
  GraphSource s_src;
  SliceChoice s_slice;
  std::uint64_t s_steps = 100000, s_burn = 0, s_thin = 0, s_cap = 2000;
  bool s_strict = false;
  int s_emit = 20;
  add_graph_options(sample, s_src);
  add_slice_options(sample, s_slice);
  sample->add_option("--steps", s_steps, "chain steps");
  sample->add_option("--burn-in", s_burn, "steps discarded (0: steps/2)");
  sample->add_option("--thinning", s_thin, "steps between samples (0: facet size)");
  sample->add_flag("--non-lazy", s_strict, "plain down-up steps instead of lazy ones");
  sample->add_option("--emit", s_emit, "samples listed in the report");
  sample->add_option("--oracle-cap", s_cap, "exact comparison when the slice has at most this many facets");

  // estimate-z
  auto* est = app.add_subcommand("estimate-z", "approximate counting by telescoping link estimates");
  GraphSource e_src;
  std::string e_mode = "hat";
  double e_lambda = 0.05, e_eps = 0.1, e_delta = 0.1, e_gamma = 0.1, e_ell = 2.0, e_alpha = -1, e_beta = -1;
  double e_chain = 20.0, e_pilot = 10.0;
  int e_k = 2, e_kx = 1, e_ky = 1, e_reps = 0;
  std::uint64_t e_max = 20000000;
  bool e_exact = false;
  add_graph_options(est, e_src);
  est->add_option("--mode", e_mode, "hat (partition function), one-sided or two-sided")
      ->check(CLI::IsMember({"hat", "one-sided", "two-sided"}));
  est->add_option("--lambda", e_lambda, "fugacity");
  est->add_option("--eps", e_eps, "relative accuracy");
  est->add_option("--delta", e_delta, "failure probability");
  est->add_option("--gamma", e_gamma, "hat: alpha = log D / ((2+gamma) D)");
  est->add_option("--ell", e_ell, "recorded with the thresholds");
  est->add_option("--alpha", e_alpha, "hat: explicit alpha (with --beta)");
  est->add_option("--beta", e_beta, "hat: explicit beta (with --alpha)");
  est->add_option("--k", e_k, "one-sided size");
  est->add_option("--kx", e_kx, "two-sided X size");
  est->add_option("--ky", e_ky, "two-sided Y size");
  est->add_option("--repetitions", e_reps, "median of this many runs (0: ceil(12 ln(1/delta)))");
  est->add_option("--chain-constant", e_chain, "burn-in constant");
  est->add_option("--pilot-factor", e_pilot, "pilot samples per m ln m");
  est->add_option("--max-samples", e_max, "per-level sample cap");
  est->add_flag("--exact", e_exact, "also report the exact value (small graphs)");

  // verify-spectral
  auto* ver = app.add_subcommand("verify-spectral", "check top-link spectral bounds on codim-2 faces");
  GraphSource v_src;
  SliceChoice v_slice;
  std::size_t v_cap = 100000, v_sample = 10000;
  bool v_no_id = false;
  add_graph_options(ver, v_src);
  add_slice_options(ver, v_slice);
  ver->add_option("--exhaustive-cap", v_cap, "enumerate all faces up to this count");
  ver->add_option("--sample-size", v_sample, "faces sampled above the cap");
  ver->add_flag("--no-identities", v_no_id, "one-sided: skip the identity and PSD checks");

  // experiment
  auto* exp = app.add_subcommand("experiment", "sampled checks of the random-graph lemmas");
  ExperimentConfig xc;
  std::string x_gen = "auto";
  exp->add_option("name", xc.name, "experiment")
      ->required()
      ->check(CLI::IsMember(
          {"concentration", "large-set", "set-size", "slow-mixing", "ramanujan", "common-neighbors"}));
  exp->add_option("--n-side", xc.n_side, "vertices per side (vertex count for --regular-graphs)");
  exp->add_option("--delta", xc.delta, "degree");
  exp->add_option("--kx", xc.k_x);
  exp->add_option("--ky", xc.k_y);
  exp->add_option("--k", xc.k, "slow-mixing set size (0: from c)");
  exp->add_option("--lambda", xc.lambda);
  exp->add_option("--gamma", xc.gamma);
  exp->add_option("--ell", xc.ell);
  exp->add_option("--a", xc.a, "large-set: |tau| = |X| / D^a");
  exp->add_option("--b", xc.b, "large-set: threshold |Y| / D^b");
  exp->add_option("--c", xc.c, "slow-mixing: k = |X| / D^c when --k 0");
  exp->add_option("--samples", xc.samples);
  exp->add_option("--runs", xc.runs);
  exp->add_option("--steps", xc.steps);
  exp->add_option("--tolerance", xc.tolerance);
  exp->add_option("--ceiling", xc.ceiling);
  exp->add_option("--mode", xc.mode, "slow-mixing: exact, empirical or both");
  exp->add_flag("--regular-graphs", xc.regular, "ramanujan: plain regular graphs");
  exp->add_option("--gen-method", x_gen)->check(CLI::IsMember({"auto", "rejection", "repair"}));
  exp->add_option("--mixing-sweeps", xc.gen.mixing_sweeps);

  std::vector<std::string> args;
  try {
    args = with_config(raw_args);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ReportFormat fmt = report_format_from_string(gl.format);
    CLI::App* chosen = app.get_subcommands().front();
    Json config = options_json(&app);
    const Json sub_opts = options_json(chosen);
    for (auto it = sub_opts.begin(); it != sub_opts.end(); ++it) config[it.key()] = it.value();
    Json doc;
    doc["reproducibility"] = reproducibility_stanza(chosen->get_name(), gl.seed, config);
    auto finish = [&](const std::string& records) {
      if (gl.timing)
        doc["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      with_output(gl.out, out, [&](std::ostream& o) { write_report(o, doc, fmt, records); });
    };

    if (gen->parsed()) {
      if (gen_bip && gen_reg) throw UsageError("choose one of --bipartite, --regular");
      GenOptions go;
      go.method = gen_method_from_string(gen_method);
      go.mixing_sweeps = gen_sweeps;
      GenStats st;
      AnyGraph g = gen_reg ? AnyGraph(gen_regular(gen_n, gen_delta, gl.seed, go, &st))
                           : AnyGraph(gen_bipartite_regular(gen_n, gen_delta, gl.seed, go, &st));
      doc["reproducibility"]["config"]["gen_stats"] = to_json(st);
      with_output(gl.out, out, [&](std::ostream& o) {
        write_stanza_comments(o, doc["reproducibility"]);
        std::visit([&](const auto& gg) { write_graph(o, gg); }, g);
      });
      return 0;
    }

    if (sample->parsed()) {
      const AnyGraph g = obtain_graph(s_src, gl.seed);
      const SlicePtr slice = make_slice(g, s_slice);
      ChainConfig cc;
      cc.steps = s_steps;
      cc.lazy = !s_strict;
      cc.seed = derive_seed(gl.seed, 1);
      if (s_burn > 0) cc.burn_in = s_burn;
      if (s_thin > 0) cc.thinning = s_thin;
      RunOptions ro;
      ro.oracle_cap = s_cap;
      ro.keep_samples = false;
      Json listed = Json::array();
      std::uint64_t seen = 0;
      ro.on_sample = [&](const Facet& f) {
        if (seen < static_cast<std::uint64_t>(std::max(0, s_emit)))
          listed.push_back(Json{{"index", seen}, {"facet", slice->format_facet(f)}});
        ++seen;
      };
      const RunResult rr = run_chain(slice, cc, ro);
      Json body;
      body["graph"] = graph_json(g, s_src);
      body["slice"] = slice_json(s_slice);
      body["initial"] = slice->format_facet(rr.initial);
      body["report"] = to_json(rr.report);
      body["samples"] = listed;
      doc["sample"] = body;
      finish("samples");
      return 0;
    }

    if (est->parsed()) {
      const AnyGraph ag = obtain_graph(e_src, gl.seed);
      const auto g = need_bipartite(ag, "estimate-z");
      CountingOptions co;
      co.epsilon = e_eps;
      co.delta = e_delta;
      co.seed = derive_seed(gl.seed, 1);
      co.chain_constant = e_chain;
      co.pilot_factor = e_pilot;
      co.repetitions = e_reps;
      co.threads = gl.threads;
      co.max_samples_per_level = e_max;
      Json body;
      body["graph"] = graph_json(ag, e_src);
      body["mode"] = e_mode;
      const bool small = g->x_count() + g->y_count() <= 40;
      std::string records;
      if (e_mode == "hat") {
        const int degree = g->regular_degree().value_or(0);
        ThresholdParams t;
        if (e_alpha >= 0 || e_beta >= 0) {
          if (e_alpha < 0 || e_beta < 0) throw UsageError("--alpha and --beta go together");
          t = custom_thresholds(e_alpha, e_beta, e_lambda);
        } else {
          t = thresholds(degree, e_lambda, e_gamma, e_ell);
        }
        const auto e = estimate_partition_hat(*g, e_lambda, t, co);
        body["estimate"] = to_json(e);
        if (e_exact && small) {
          const auto h = exact_partition_hat(*g, e_lambda, t);
          body["exact"] = Json{{"z", static_cast<double>(h.z)},
                               {"z_hat", static_cast<double>(h.z_hat)},
                               {"double_counted", static_cast<double>(h.double_counted)},
                               {"dropped", static_cast<double>(h.dropped)},
                               {"relative_error_vs_z_hat", e.estimate() / static_cast<double>(h.z_hat) - 1.0}};
        }
        records = "bands";
      } else {
        const bool one = e_mode == "one-sided";
        const auto e = one ? estimate_one_sided_partition(*g, e_k, e_lambda, co)
                           : estimate_two_sided_count(*g, e_kx, e_ky, co);
        body["estimate"] = to_json(e);
        if (e_exact && small) {
          const double exact = static_cast<double>(one ? exact_one_sided_partition(*g, e_k, e_lambda)
                                                       : exact_slice_count(*g, e_kx, e_ky));
          body["exact"] = Json{{"value", exact}, {"relative_error", exact > 0 ? e.estimate() / exact - 1.0 : 0.0}};
        }
        records = "trace";
      }
      if (e_exact && !small) body["exact"] = "skipped: more than 40 vertices";
      // csv rows come from the estimate's own records
      doc["estimate"] = fmt == ReportFormat::csv ? body["estimate"] : body;
      finish(records);
      return 0;
    }

    if (ver->parsed()) {
      const AnyGraph g = obtain_graph(v_src, gl.seed);
      LinkPolicy pol;
      pol.exhaustive_cap = v_cap;
      pol.sample_size = v_sample;
      pol.seed = derive_seed(gl.seed, 1);
      const std::string fam = family_of(v_slice);
      VerificationReport r;
      if (fam == "two_sided")
        r = verify_top_link_two_sided(*need_bipartite(g, "--two-sided"), v_slice.kx, v_slice.ky, pol);
      else if (fam == "one_sided")
        r = verify_top_link_one_sided(*need_bipartite(g, "--one-sided"), v_slice.k, v_slice.lambda, pol, !v_no_id);
      else
        r = verify_top_link_regular(*plain_of(g), v_slice.k, pol);
      doc["graph"] = graph_json(g, v_src);
      doc["slice"] = slice_json(v_slice);
      doc["verification"] = to_json(r);
      if (fmt == ReportFormat::csv) {
        doc.erase("graph");
        doc.erase("slice");
      }
      finish("links");
      return r.all_pass() ? 0 : 1;
    }

    if (exp->parsed()) {
      xc.seed = gl.seed;
      xc.threads = gl.threads;
      xc.out = gl.out;
      xc.gen.method = gen_method_from_string(x_gen);
      xc.validate();
      Json result;
      if (xc.name == "concentration") result = to_json(experiment_neighborhood_concentration(xc));
      else if (xc.name == "large-set") result = to_json(experiment_large_set_expansion(xc));
      else if (xc.name == "set-size") result = to_json(experiment_independent_set_size(xc));
      else if (xc.name == "slow-mixing") result = to_json(experiment_slow_mixing(xc));
      else if (xc.name == "ramanujan") result = to_json(experiment_ramanujan(xc));
      else result = to_json(experiment_common_neighbors(xc));
      doc["experiment"] = Json{{"config", to_json(xc)}, {"result", result}};
      finish("");
      return 0;
    }
    throw UsageError("no subcommand");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const CapExceeded& e) {
    err << "size cap exceeded: " << e.what() << " (use a smaller instance)\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cli_dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace slicewalk
