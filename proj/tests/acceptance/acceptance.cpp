// Acceptance checks. One "[PASS]/[FAIL] criterion N: ..." line per criterion,
// followed by indented detail lines.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "slicewalk/cli.hpp"
#include "slicewalk/counting.hpp"
#include "slicewalk/error.hpp"
#include "slicewalk/experiments.hpp"
#include "slicewalk/graph_gen.hpp"
#include "slicewalk/rng.hpp"
#include "slicewalk/slices.hpp"
#include "slicewalk/spectra.hpp"
#include "slicewalk/verify.hpp"
#include "slicewalk/walks.hpp"

using namespace slicewalk;

namespace {

constexpr std::uint64_t kSeed = 20240917;

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

// ---- small-graph corpus shared by 1 and 2 ---------------------------------------

struct CorpusSlice {
  SlicePtr slice;
  std::string label;
};

std::vector<CorpusSlice> small_corpus() {
  constexpr std::size_t cap = 2000;
  std::vector<CorpusSlice> out;
  auto keep = [&](SlicePtr s, std::string label) {
    try {
      const auto n = enumerate_facets(*s, cap).size();
      if (n >= 2) out.push_back({std::move(s), std::move(label)});
    } catch (const CapExceeded&) {
    }
  };
  for (int i = 0; i < 20; ++i) {
    const int d = 2 + i % 3;
    auto g = std::make_shared<const BipartiteGraph>(gen_bipartite_regular(7, d, derive_seed(kSeed, i)));
    const std::string gl = fmt("bip%d(D=%d)", i, d);
    for (int kx = 0; kx <= 7; ++kx)
      for (int ky = 0; ky <= 7; ++ky) {
        if (kx + ky == 0) continue;
        if (exact_slice_count(*g, kx, ky) < 2) continue;
        keep(std::make_shared<TwoSidedSlice>(g, kx, ky), fmt("%s two-sided %d,%d", gl.c_str(), kx, ky));
      }
    for (int k = 1; k <= 6; ++k)
      for (double lam : {0.5, 2.0})
        keep(std::make_shared<OneSidedSlice>(g, k, lam), fmt("%s one-sided k=%d l=%g", gl.c_str(), k, lam));
  }
  for (int i = 0; i < 20; ++i) {
    const int d = 2 + i % 3;
    auto g = std::make_shared<const Graph>(gen_regular(14, d, derive_seed(kSeed, 100 + i)));
    for (int k = 1; k <= 7; ++k) {
      auto s = std::make_shared<RegularSlice>(g, k);
      if (!has_facet(*s)) break;
      keep(s, fmt("reg%d(D=%d) k=%d", i, d, k));
    }
  }
  return out;
}

// ---- 1 ----------------------------------------------------------------------

Outcome stationary_correctness() {
  constexpr std::uint64_t steps = 1000000;
  constexpr std::uint64_t burn = 10000;
  const auto corpus = small_corpus();
  double worst_defect = 0.0, worst_tv = 0.0;
  std::string worst_tv_label;
  int reducible = 0, tv_checked = 0, tv_failed = 0, db_failed = 0;
  std::size_t biggest = 0;
  std::map<SliceKind, int> per_kind;
  for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
    const auto& [s, label] = corpus[idx];
    ++per_kind[s->kind()];
    const auto dist = exact_distribution(*s, 2000);
    biggest = std::max(biggest, dist.facets.size());
    const Eigen::MatrixXd p = exact_transition_matrix(*s, false, 2000);
    const Eigen::VectorXd pi = Eigen::Map<const Eigen::VectorXd>(dist.prob.data(), static_cast<Eigen::Index>(dist.prob.size()));
    const double defect = detailed_balance_defect(p, pi);
    worst_defect = std::max(worst_defect, defect);
    if (defect > 1e-12) ++db_failed;
    if (communicating_classes(p) != 1) {
      ++reducible;
      continue;
    }
    Rng rng(derive_seed(kSeed, 1000 + idx));
    auto chain = make_chain(s, greedy_initial_state(*s, rng));
    std::vector<double> hist(dist.facets.size(), 0.0);
    for (std::uint64_t t = 1; t <= steps; ++t) {
      chain->lazy_step(rng);
      if (t > burn) hist[dist.index_of(chain->facet())] += 1.0;
    }
    const double tv = tv_distance(hist, dist.prob);
    ++tv_checked;
    if (tv > 0.02) ++tv_failed;
    if (tv > worst_tv) {
      worst_tv = tv;
      worst_tv_label = label + fmt(" (%zu facets)", dist.facets.size());
    }
  }
  Outcome o;
  o.pass = db_failed == 0 && tv_failed == 0 && tv_checked > 0;
  o.summary = fmt("%zu slices, max detailed-balance defect %.2e, max TV %.4f over %d irreducible chains", corpus.size(),
                  worst_defect, worst_tv, tv_checked);
  o.details.push_back(fmt("two-sided %d, one-sided %d, regular %d slices; largest state space %zu",
                          per_kind[SliceKind::two_sided], per_kind[SliceKind::one_sided], per_kind[SliceKind::regular],
                          biggest));
  o.details.push_back(fmt("detailed balance > 1e-12: %d; TV > 0.02: %d; worst TV at %s", db_failed, tv_failed,
                          worst_tv_label.c_str()));
  o.details.push_back(fmt("reducible slices (no TV check, the walk cannot reach every facet): %d", reducible));
  return o;
}

// ---- 2 ----------------------------------------------------------------------

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

Outcome closed_form_equivalence() {
  const auto corpus = small_corpus();
  std::size_t faces = 0, empty = 0, mismatched = 0, slices = 0;
  double worst = 0.0;
  std::string worst_label;
  for (const auto& [s, label] : corpus) {
    if (s->free_size() < 2) continue;
    ++slices;
    const auto taus = codim2_faces_exhaustive(*s, 1000000);
    for (const auto& tau : *taus) {
      SlicePtr l;
      try {
        l = link(*s, tau);
      } catch (const EmptyLink&) {
        ++empty;
        continue;
      }
      std::optional<LinkOperator> cf, en;
      try {
        cf = closed_form_link(*l);
      } catch (const EmptyLink&) {
      }
      try {
        en = local_walk_exact(*l);
      } catch (const EmptyLink&) {
      }
      ++faces;
      if (!cf && !en) continue;
      if (!cf || !en || cf->ground != en->ground || cf->dropped != en->dropped) {
        ++mismatched;
        worst_label = label + " " + s->format_facet(tau) + " (ground sets differ)";
        continue;
      }
      const double d = std::max(max_abs_diff(cf->P, en->P), max_abs_diff(cf->pi, en->pi));
      if (d > 1e-12) ++mismatched;
      if (d > worst) {
        worst = d;
        worst_label = label + " " + s->format_facet(tau);
      }
    }
  }
  Outcome o;
  o.pass = mismatched == 0 && faces > 0;
  o.summary = fmt("%zu codim-2 links over %zu slices, max entrywise |closed form - enumerated| %.2e, %zu mismatches",
                  faces, slices, worst, mismatched);
  o.details.push_back(fmt("faces with an empty link: %zu", empty));
  if (!worst_label.empty()) o.details.push_back("worst: " + worst_label);
  return o;
}

// ---- 3 ----------------------------------------------------------------------

Outcome spectral_sweeps() {
  constexpr int instances = 20;
  LinkPolicy policy;
  policy.exhaustive_cap = 1000000;
  std::size_t ts_links = 0, ts_fail = 0, ts_adj_fail = 0, ts_same = 0;
  int complement_fail = 0;
  double complement_worst = -1e9;
  std::size_t os_links = 0, os_checked = 0, os_fail = 0, os_hyp = 0, os_id_fail = 0, os_psd_fail = 0, os_psd_gated = 0;
  double id_dev = 0.0;
  std::size_t rg_links = 0, rg_fail = 0, rg_corr_fail = 0, rg_adj_fail = 0;
  double rg_worst = 0.0;
  bool exhaustive = true;
  for (int i = 0; i < instances; ++i) {
    const auto g = gen_bipartite_regular(12, 3, derive_seed(kSeed, 300 + i));
    const auto ic = complement_interlacing_check(g);
    if (!ic.holds) ++complement_fail;
    complement_worst = std::max(complement_worst, ic.lhs - ic.rhs);
    for (auto [kx, ky] : {std::pair{2, 2}, std::pair{3, 1}, std::pair{1, 3}}) {
      const auto r = verify_top_link_two_sided(g, kx, ky, policy);
      exhaustive = exhaustive && r.coverage == "exhaustive";
      ts_links += r.links.size();
      ts_fail += r.failed;
      ts_adj_fail += r.adjacency_failed;
      for (const auto& l : r.links) ts_same += l.face_type != "cross";
    }
    for (int k : {3, 4}) {
      const auto r = verify_top_link_one_sided(g, k, 0.25, policy, true);
      exhaustive = exhaustive && r.coverage == "exhaustive";
      os_links += r.links.size();
      os_checked += r.checked;
      os_fail += r.failed;
      os_hyp += r.hypothesis_failed;
      os_id_fail += r.identity_failed;
      os_psd_fail += r.psd_failed;
      os_psd_gated += r.psd_skipped;
      id_dev = std::max(id_dev, r.identity_max_deviation);
    }
    const auto rg = gen_regular(16, 3, derive_seed(kSeed, 350 + i));
    for (int k : {3, 4}) {
      const auto r = verify_top_link_regular(rg, k, policy);
      exhaustive = exhaustive && r.coverage == "exhaustive";
      rg_links += r.links.size();
      rg_fail += r.failed;
      rg_corr_fail += r.corrected_failed;
      rg_adj_fail += r.adjacency_failed;
      for (const auto& l : r.links)
        if (l.bound) rg_worst = std::max(rg_worst, l.lambda2 - *l.bound);
    }
  }
  const bool two_ok = ts_fail == 0 && ts_adj_fail == 0;
  const bool comp_ok = complement_fail == 0;
  const bool one_ok = os_fail == 0 && os_id_fail == 0 && id_dev <= 1e-10 && os_psd_fail == 0;
  const bool reg_ok = rg_fail == 0;
  Outcome o;
  o.pass = exhaustive && two_ok && comp_ok && one_ok && reg_ok;
  o.summary = fmt("%d bipartite (n_side 12) and %d regular (n 16) instances, D = 3: two-sided %s, complement %s, "
                  "one-sided %s, regular %s",
                  instances, instances, two_ok ? "ok" : "FAIL", comp_ok ? "ok" : "FAIL", one_ok ? "ok" : "FAIL",
                  reg_ok ? "ok" : "FAIL");
  o.details.push_back(fmt("coverage exhaustive on every instance: %s", exhaustive ? "yes" : "no"));
  o.details.push_back(fmt("two-sided: %zu links (%zu same-side), bound failures %zu, adjacency failures %zu", ts_links,
                          ts_same, ts_fail, ts_adj_fail));
  o.details.push_back(fmt("bipartite complement lambda2 <= lambda2(G): failures %d, max lhs - rhs %.4f",
                          complement_fail, complement_worst));
  o.details.push_back(fmt("one-sided (lambda 0.25): %zu links, %zu bounds evaluated, %zu failures, %zu outside the "
                          "common-neighbor hypothesis",
                          os_links, os_checked, os_fail, os_hyp));
  o.details.push_back(fmt("matrix-exponent identity: failures %zu, max deviation %.2e", os_id_fail, id_dev));
  o.details.push_back(fmt("PSD chain: failures %zu, gated goals skipped on %zu links", os_psd_fail, os_psd_gated));
  o.details.push_back(fmt("regular, stated bound: %zu links, failures %zu, max lambda2 - bound %.4f", rg_links, rg_fail,
                          rg_worst));
  o.details.push_back(fmt("regular, bound with denominator |W| - 1 - D: failures %zu; adjacency failures %zu",
                          rg_corr_fail, rg_adj_fail));
  return o;
}

// ---- 4 ----------------------------------------------------------------------

Outcome counting_accuracy() {
  constexpr int graphs = 50;
  CountingOptions opt;
  opt.epsilon = 0.1;
  opt.delta = 0.1;
  int ts_runs = 0, ts_ok = 0, os_runs = 0, os_ok = 0;
  double ts_worst = 0.0, os_worst = 0.0;
  for (int i = 0; i < graphs; ++i) {
    const auto g = gen_bipartite_regular(8, 3, derive_seed(kSeed, 400 + i));
    for (int kx = 0; kx <= 4; ++kx)
      for (int ky = 0; kx + ky <= 4; ++ky) {
        if (kx + ky == 0) continue;
        const long double exact = exact_slice_count(g, kx, ky);
        if (exact == 0) continue;
        opt.seed = derive_seed(kSeed, 10000 * i + 10 * kx + ky);
        const double rel = std::abs(estimate_two_sided_count(g, kx, ky, opt).estimate() / static_cast<double>(exact) - 1);
        ++ts_runs;
        ts_ok += rel <= 0.1;
        ts_worst = std::max(ts_worst, rel);
      }
    for (int k = 1; k <= 4; ++k) {
      const long double exact = exact_one_sided_partition(g, k, 0.5);
      opt.seed = derive_seed(kSeed, 10000 * i + 100 + k);
      const double rel = std::abs(estimate_one_sided_partition(g, k, 0.5, opt).estimate() / static_cast<double>(exact) - 1);
      ++os_runs;
      os_ok += rel <= 0.1;
      os_worst = std::max(os_worst, rel);
    }
  }

  // Z-hat with the upper band edge at 1: nothing is dropped and every set with
  // both sides above the alpha cut is counted twice.
  int hat_runs = 0, hat_ok = 0, band_bad = 0;
  double hat_worst = 0.0, hat_vs_z_worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto g = gen_bipartite_regular(8, 3, derive_seed(kSeed, 400 + i));
    const auto prof = size_profile(g);
    for (double lam : {0.05, 0.5}) {
      const auto t = custom_thresholds(thresholds(3, lam).alpha, 1.0, lam);
      const auto hd = exact_partition_hat(g, lam, t);
      const int ac = alpha_cut(t.alpha, 8);
      long double z = 0, dbl = 0;
      for (std::size_t a = 0; a < prof.size(); ++a)
        for (std::size_t b = 0; b < prof[a].size(); ++b) {
          const long double w = prof[a][b] * std::pow(static_cast<long double>(lam), static_cast<long double>(a + b));
          z += w;
          if (static_cast<int>(a) > ac && static_cast<int>(b) > ac) dbl += w;
        }
      const double band_err = static_cast<double>(std::abs(hd.double_counted / dbl - 1) + std::abs(hd.z / z - 1) +
                                                  std::abs(hd.z_hat / (z + dbl) - 1) + std::abs(hd.dropped));
      if (band_err > 1e-10) ++band_bad;
      opt.seed = derive_seed(kSeed, 900000 + 10 * i + (lam > 0.1));
      const double est = estimate_partition_hat(g, lam, t, opt).estimate();
      const double rel = std::abs(est / static_cast<double>(hd.z_hat) - 1);
      ++hat_runs;
      hat_ok += rel <= opt.epsilon;
      hat_worst = std::max(hat_worst, rel);
      hat_vs_z_worst = std::max(hat_vs_z_worst, static_cast<double>(std::abs(est / static_cast<double>(hd.z) - 1)));
    }
  }
  const double ts_rate = static_cast<double>(ts_ok) / ts_runs;
  const double os_rate = static_cast<double>(os_ok) / os_runs;
  const double hat_rate = static_cast<double>(hat_ok) / hat_runs;
  Outcome o;
  o.pass = ts_rate >= 0.9 && os_rate >= 0.9 && hat_rate >= 0.9 && band_bad == 0;
  o.summary = fmt("within 10%%: two-sided %d/%d, one-sided %d/%d; Z-hat within eps of Z + double band: %d/%d", ts_ok,
                  ts_runs, os_ok, os_runs, hat_ok, hat_runs);
  o.details.push_back(fmt("%d graphs, n_side 8, D = 3, eps = delta = 0.1; worst relative error two-sided %.4f, "
                          "one-sided (lambda 0.5) %.4f",
                          graphs, ts_worst, os_worst));
  o.details.push_back(fmt("Z-hat: worst error against exact Z-hat %.4f; against Z itself %.4f (the double band)",
                          hat_worst, hat_vs_z_worst));
  o.details.push_back(fmt("band correction recomputed from the size profile disagrees on %d of %d cases", band_bad,
                          hat_runs));
  return o;
}

// ---- 5 ----------------------------------------------------------------------

Outcome band_identity() {
  int cases = 0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int d = 2 + i % 4;
    const auto g = gen_bipartite_regular(10, d, derive_seed(kSeed, 500 + i));
    for (double lam : {0.01, 0.1, 0.5, 1.0, 3.0}) {
      long double sum = 0;
      for (int k = 0; k <= g.x_count(); ++k) sum += exact_one_sided_partition(g, k, lam);
      const long double z = exact_partition(g, lam);
      worst = std::max(worst, static_cast<double>(std::abs(sum / z - 1)));
      ++cases;
    }
  }
  Outcome o;
  o.pass = worst <= 1e-10;
  o.summary = fmt("%d cases (20 graphs on 20 vertices x 5 fugacities), max relative error %.2e", cases, worst);
  return o;
}

// ---- 6 ----------------------------------------------------------------------

Outcome ramanujan() {
  Outcome o;
  o.pass = true;
  std::vector<std::string> parts;
  for (int d : {3, 8}) {
    ExperimentConfig cfg;
    cfg.name = "ramanujan";
    cfg.n_side = 2000;
    cfg.delta = d;
    cfg.samples = 100;
    cfg.seed = derive_seed(kSeed, 600 + d);
    const auto r = experiment_ramanujan(cfg);
    o.pass = o.pass && r.within.rate >= 0.95;
    parts.push_back(fmt("D=%d %llu/%llu", d, static_cast<unsigned long long>(r.within.hits),
                        static_cast<unsigned long long>(r.within.trials)));
    const auto [mn, mx] = std::minmax_element(r.lambda2.begin(), r.lambda2.end());
    o.details.push_back(fmt("D=%d: threshold %.4f, lambda2 in [%.4f, %.4f], generator %s", d, r.threshold, *mn, *mx,
                            r.gen_method.c_str()));
  }
  o.summary = "n_side 2000, lambda2 <= 2 sqrt(D-1) + 0.2: " + parts[0] + ", " + parts[1] + " (need 95%)";
  return o;
}

// ---- 7 ----------------------------------------------------------------------

Outcome concentration() {
  ExperimentConfig cfg;
  cfg.name = "concentration";
  cfg.n_side = 50000;
  cfg.delta = 64;
  cfg.gamma = 0.1;
  cfg.ell = 2.0;
  cfg.samples = 200;
  cfg.tolerance = 0.15;
  cfg.seed = derive_seed(kSeed, 700);
  const auto r = experiment_neighborhood_concentration(cfg);
  auto line = [](const char* name, const SizeProbe& p) {
    return fmt("%s: |tau| = %d, hits %llu/%llu, mean uncovered %.1f, threshold %.1f", name, p.tau_size,
               static_cast<unsigned long long>(p.hits.hits), static_cast<unsigned long long>(p.hits.trials), p.mean,
               p.threshold);
  };
  Outcome o;
  o.pass = r.at_alpha.hits.rate >= 0.95 && r.expansion.hits.rate >= 0.95 && r.anti_expansion.hits.rate >= 0.95;
  o.summary = fmt("sampled tau only: bracket %.3f, expansion %.3f, anti-expansion %.3f (need 0.95 each)",
                  r.at_alpha.hits.rate, r.expansion.hits.rate, r.anti_expansion.hits.rate);
  o.details.push_back(fmt("alpha %.6f, prediction %.1f, pairing-model mean %.1f", r.alpha, r.prediction, r.exact_mean));
  o.details.push_back(line("bracket +-15%", r.at_alpha));
  o.details.push_back(line("expansion (ell+1) log D / sqrt D |Y|", r.expansion));
  o.details.push_back(line("anti-expansion ell log D / sqrt D |Y|", r.anti_expansion));
  o.details.push_back(fmt("largest ell the anti-expansion probe supports at 95%%: %.3f (ell = 2 needs more than |Y| "
                          "uncovered vertices)",
                          r.anti_expansion_max_ell));
  return o;
}

// ---- 8 ----------------------------------------------------------------------

Outcome slow_mixing() {
  ExperimentConfig cfg;
  cfg.name = "slow-mixing";
  cfg.n_side = 8;
  cfg.delta = 2;
  cfg.k = 4;
  cfg.lambda = 0.5;
  cfg.runs = 100;
  cfg.steps = 1000000;
  cfg.mode = "both";
  cfg.seed = derive_seed(kSeed, 800);
  const auto r = experiment_slow_mixing(cfg);
  const double factor = r.factor.value_or(0.0);
  const double stay = r.runs ? static_cast<double>(r.never_left) / r.runs : 0.0;
  Outcome o;
  o.pass = factor >= 5.0 && stay >= 0.99;
  o.summary = fmt("within-component conductance / phi(S) = %.3f (need 5), chains that never left S %llu/%d (need 99%%)",
                  factor, static_cast<unsigned long long>(r.never_left), r.runs);
  o.details.push_back(fmt("%zu facets, mu(S) %.4f, phi(S) %.4f, within-component conductance %.4f, boundary ratio %.4f",
                          r.facets.value_or(0), r.mass_s.value_or(0), r.phi_s.value_or(0),
                          r.within_conductance.value_or(0), r.boundary_ratio.value_or(0)));
  o.details.push_back(fmt("median escape step %.1f", r.median_escape));
  o.details.push_back(fmt("control (one connected graph): phi %.4f, factor %.3f", r.control_phi.value_or(0),
                          r.control_factor.value_or(0)));
  return o;
}

// ---- 9 ----------------------------------------------------------------------

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / fmt("slicewalk_accept_%llu", static_cast<unsigned long long>(kSeed));
  fs::create_directories(dir);
  const std::string conf = (dir / "est.conf").string();
  {
    std::ofstream c(conf);
    c << "# estimate-z\nlambda = 0.3\neps = 0.2\ndelta = 0.2\nn = 6\ndegree = 3\n";
  }
  const std::string graph = (dir / "g.txt").string();
  const std::vector<std::vector<std::string>> cmds = {
      {"--seed", "7", "gen-graph", "--bipartite", "--n", "60", "--delta", "3"},
      {"--seed", "7", "gen-graph", "--regular", "--n", "60", "--delta", "5", "--method", "repair"},
      {"--seed", "7", "gen-graph", "--bipartite", "--n", "10", "--delta", "3", "--out", graph},
      {"--seed", "3", "sample", "--in", graph, "--two-sided", "--kx", "2", "--ky", "2", "--steps", "20000"},
      {"--seed", "3", "--format", "csv", "sample", "--one-sided", "--k", "3", "--lambda", "0.4", "--n", "8",
       "--degree", "3", "--steps", "20000"},
      {"--seed", "3", "sample", "--regular", "--k", "3", "--n", "12", "--degree", "3", "--steps", "20000"},
      {"--seed", "3", "estimate-z", "--mode", "two-sided", "--kx", "2", "--ky", "1", "--n", "6", "--degree", "3"},
      {"--seed", "3", "estimate-z", "--mode", "one-sided", "--k", "2", "--lambda", "0.5", "--n", "6", "--degree",
       "3"},
      {"--seed", "3", "--config", conf, "estimate-z", "--exact"},
      {"--seed", "3", "--format", "csv", "verify-spectral", "--two-sided", "--kx", "2", "--ky", "2", "--n", "8",
       "--degree", "3"},
      {"--seed", "3", "verify-spectral", "--regular", "--k", "3", "--n", "12", "--degree", "3"},
      {"--seed", "3", "experiment", "concentration", "--n-side", "2000", "--delta", "8", "--samples", "20"},
      {"--seed", "3", "experiment", "large-set", "--n-side", "2000", "--delta", "8", "--samples", "20"},
      {"--seed", "3", "experiment", "set-size", "--n-side", "50", "--delta", "3", "--samples", "100"},
      {"--seed", "3", "--out", (dir / "slow.json").string(), "experiment", "slow-mixing", "--n-side", "4", "--delta",
       "2", "--k", "2", "--runs", "4", "--steps", "2000"},
      {"--seed", "3", "experiment", "ramanujan", "--n-side", "100", "--delta", "3", "--samples", "5"},
      {"--seed", "3", "--format", "csv", "experiment", "common-neighbors", "--n-side", "200", "--delta", "3",
       "--samples", "5"},
  };
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  int differ = 0, errored = 0;
  std::vector<std::string> bad;
  for (const auto& c : cmds) {
    std::string text[2];
    int rc[2];
    // --out goes to a different file on each run; the contents must still match
    const auto out_at = std::find(c.begin(), c.end(), "--out");
    for (int rep = 0; rep < 2; ++rep) {
      auto args = c;
      std::string target;
      if (out_at != c.end()) {
        target = *(out_at + 1) + (rep ? ".b" : "");
        args[static_cast<std::size_t>(out_at - c.begin()) + 1] = target;
      }
      std::ostringstream out, err;
      rc[rep] = cli_dispatch(args, out, err);
      text[rep] = out.str();
      if (!target.empty()) text[rep] += slurp(target);
    }
    std::string joined;
    for (const auto& a : c) joined += (joined.empty() ? "" : " ") + a;
    if (rc[0] > 1 || rc[1] > 1) {
      ++errored;
      bad.push_back(fmt("exit %d: ", rc[0]) + joined);
    } else if (text[0] != text[1] || rc[0] != rc[1] || text[0].empty()) {
      ++differ;
      bad.push_back("differs: " + joined);
    }
  }
  fs::remove_all(dir);
  Outcome o;
  o.pass = differ == 0 && errored == 0;
  o.summary = fmt("%zu commands run twice in process: %d differ, %d errored", cmds.size(), differ, errored);
  o.details = bad;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slicewalk acceptance checks"};
  std::vector<int> which;
  app.add_option("--criterion", which, "criterion number (repeatable; default all)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  const std::map<int, std::pair<const char*, std::function<Outcome()>>> table = {
      {1, {"stationary correctness", stationary_correctness}},
      {2, {"closed-form link walks", closed_form_equivalence}},
      {3, {"spectral inequality sweeps", spectral_sweeps}},
      {4, {"counting accuracy", counting_accuracy}},
      {5, {"band identity", band_identity}},
      {6, {"near-Ramanujan frequency", ramanujan}},
      {7, {"neighborhood concentration", concentration}},
      {8, {"slow mixing", slow_mixing}},
      {9, {"determinism", determinism}},
  };
  int failed = 0;
  for (int n : which) {
    const auto& [name, fn] = table.at(n);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << n << " (" << name << "): " << o.summary << '\n';
    for (const auto& d : o.details) std::cout << "    " << d << '\n';
    std::cout << "    time " << fmt("%.1f", secs) << " s" << std::endl;
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
