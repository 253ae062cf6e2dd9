#include "slicewalk/report.hpp"

#include <algorithm>
#include <ostream>
#include <vector>

#include "slicewalk/error.hpp"

namespace slicewalk {

namespace {

template <typename T>
Json opt(const std::optional<T>& v) {
  if (!v) return nullptr;
  return Json(*v);
}

void flatten_into(const Json& j, const std::string& prefix, Json& out) {
  if (j.is_object()) {
    if (j.empty() && !prefix.empty()) out[prefix] = nullptr;
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_into(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  if (j.is_array()) {
    bool scalars = true;
    for (const auto& e : j) scalars = scalars && !e.is_structured();
    if (scalars) {
      std::string joined;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) joined += ';';
        joined += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
      }
      out[prefix] = joined;
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten_into(j[i], prefix + "." + std::to_string(i), out);
    }
    return;
  }
  out[prefix] = j;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw InvalidArgument("unknown format '" + s + "' (expected json or csv)");
}

Json reproducibility_stanza(const std::string& command, std::uint64_t seed, const Json& config) {
  Json j;
  j["tool"] = "slicewalk-lab";
  j["version"] = kVersion;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config;
  return j;
}

Json to_json(const GenStats& s) {
  return Json{{"method", to_string(s.used)}, {"attempts", s.attempts}, {"switches", s.switches}};
}

Json to_json(const CommonNeighborStats& s) {
  return Json{{"max_common", s.max_common},
              {"pairs_above_two", s.pairs_above_two},
              {"vertices_with_multiple_doubles", s.vertices_with_multiple_doubles},
              {"at_most_two", s.at_most_two()},
              {"unique_doubles", s.unique_doubles()}};
}

Json to_json(const SpectrumSummary& s) {
  return Json{{"lambda1", s.lambda1}, {"lambda2", s.lambda2},   {"lambda_min", s.lambda_min},
              {"method", to_string(s.method)}, {"residual", s.residual}, {"iterations", s.iterations}};
}

Json to_json(const GapInfo& g) {
  return Json{{"lambda2", g.lambda2}, {"lambda_star", g.lambda_star}, {"gap", g.gap}};
}

Json to_json(const MixingReport& m) {
  Json j;
  j["steps"] = m.steps;
  j["samples"] = m.samples;
  j["distinct"] = m.distinct;
  j["tv"] = opt(m.tv);
  j["gap"] = m.gap ? to_json(*m.gap) : Json(nullptr);
  j["mean_observable"] = m.mean_observable;
  j["autocorrelation_time"] = m.autocorrelation_time;
  return j;
}

Json to_json(const PsdResult& p) { return Json{{"holds", p.holds}, {"min_eigenvalue", p.min_eigenvalue}}; }

Json to_json(const LinkRecord& r) {
  Json j;
  j["tau"] = r.tau;
  j["label"] = r.label;
  j["face_type"] = r.face_type;
  j["link_size"] = r.link_size;
  j["lambda2"] = r.lambda2;
  j["bound"] = opt(r.bound);
  j["vacuous"] = r.vacuous;
  j["hypothesis_met"] = r.hypothesis_met;
  j["pass"] = r.pass;
  j["margin"] = r.margin;
  if (r.corrected_bound) {
    j["corrected_bound"] = *r.corrected_bound;
    j["corrected_pass"] = opt(r.corrected_pass);
  }
  if (r.adjacency_lambda2) {
    j["adjacency_lambda2"] = *r.adjacency_lambda2;
    j["adjacency_bound"] = opt(r.adjacency_bound);
    j["adjacency_pass"] = opt(r.adjacency_pass);
  }
  if (r.delta_tau) j["delta_tau"] = *r.delta_tau;
  if (r.intermediate_bound) j["intermediate_bound"] = *r.intermediate_bound;
  if (r.identity) j["identity"] = Json{{"holds", r.identity->holds}, {"max_deviation", r.identity->max_deviation}};
  if (r.psd) {
    Json p;
    p["hypothesis_met"] = r.psd->hypothesis_met;
    p["max_common"] = r.psd->max_common;
    p["max_double_partners"] = r.psd->max_double_partners;
    p["goal1"] = r.psd->goal1 ? to_json(*r.psd->goal1) : Json("skipped");
    p["goal3"] = r.psd->goal3 ? to_json(*r.psd->goal3) : Json("skipped");
    p["goal4"] = to_json(r.psd->goal4);
    j["psd"] = p;
  }
  return j;
}

Json to_json(const VerificationReport& r) {
  Json j;
  j["lemma"] = r.lemma;
  j["coverage"] = r.coverage;
  j["graph_lambda2"] = r.graph_lambda2;
  j["graph_lambda_min"] = r.graph_lambda_min;
  j["max_degree"] = r.max_degree;
  j["checked"] = r.checked;
  j["passed"] = r.passed;
  j["failed"] = r.failed;
  j["vacuous"] = r.vacuous;
  j["hypothesis_failed"] = r.hypothesis_failed;
  j["empty_links"] = r.empty_links;
  j["pass_rate"] = r.pass_rate;
  j["worst_margin"] = opt(r.worst_margin);
  j["corrected_failed"] = r.corrected_failed;
  j["adjacency_failed"] = r.adjacency_failed;
  j["identity_failed"] = r.identity_failed;
  j["identity_max_deviation"] = r.identity_max_deviation;
  j["psd_failed"] = r.psd_failed;
  j["psd_skipped"] = r.psd_skipped;
  if (r.complement_check)
    j["complement_check"] =
        Json{{"holds", r.complement_check->holds}, {"lhs", r.complement_check->lhs}, {"rhs", r.complement_check->rhs}};
  else
    j["complement_check"] = nullptr;
  j["all_pass"] = r.all_pass();
  Json links = Json::array();
  for (const auto& l : r.links) links.push_back(to_json(l));
  j["links"] = links;
  return j;
}

Json to_json(const TraceEntry& t) {
  return Json{{"pinned", t.pinned},
              {"marginal", t.marginal},
              {"pilot_marginal", t.pilot_marginal},
              {"samples", t.samples},
              {"autocorrelation_time", t.autocorrelation_time}};
}

Json to_json(const CountEstimate& e) {
  Json j;
  j["log_estimate"] = e.log_estimate;
  j["estimate"] = e.estimate();
  j["epsilon"] = e.epsilon;
  j["delta"] = e.delta;
  j["repetitions"] = e.repetitions;
  j["samples"] = e.samples;
  j["base_log_weight"] = e.base_log_weight;
  j["repetition_logs"] = e.repetition_logs;
  Json tr = Json::array();
  for (const auto& t : e.trace) tr.push_back(to_json(t));
  j["trace"] = tr;
  return j;
}

Json to_json(const ThresholdParams& t) {
  return Json{{"alpha", t.alpha},   {"beta", t.beta},     {"gamma", t.gamma},
              {"ell", t.ell},       {"lambda", t.lambda}, {"degree", t.degree},
              {"bands_degenerate", t.bands_degenerate}};
}

Json to_json(const BandTerm& b) {
  return Json{{"kind", b.kind},       {"k_lo", b.k_lo},           {"k_hi", b.k_hi},      {"k_y_lo", b.k_y_lo},
              {"k_y_hi", b.k_y_hi},   {"value_log", b.value_log}, {"samples", b.samples}};
}

Json to_json(const PartitionHatEstimate& e) {
  Json j;
  j["log_estimate"] = e.log_estimate;
  j["estimate"] = e.estimate();
  j["epsilon"] = e.epsilon;
  j["delta"] = e.delta;
  j["thresholds"] = to_json(e.thresholds);
  j["samples"] = e.samples;
  Json bands = Json::array();
  for (const auto& b : e.bands) bands.push_back(to_json(b));
  j["bands"] = bands;
  return j;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["name"] = c.name;
  j["n_side"] = c.n_side;
  j["delta"] = c.delta;
  j["k_x"] = c.k_x;
  j["k_y"] = c.k_y;
  j["k"] = c.k;
  j["lambda"] = c.lambda;
  j["gamma"] = c.gamma;
  j["ell"] = c.ell;
  j["a"] = c.a;
  j["b"] = c.b;
  j["c"] = c.c;
  j["samples"] = c.samples;
  j["runs"] = c.runs;
  j["steps"] = c.steps;
  j["tolerance"] = c.tolerance;
  j["ceiling"] = c.ceiling;
  j["mode"] = c.mode;
  j["regular"] = c.regular;
  j["gen_method"] = to_string(c.gen.method);
  j["seed"] = c.seed;
  return j;
}

Json to_json(const Frequency& f) {
  return Json{{"hits", f.hits}, {"trials", f.trials}, {"rate", f.rate}, {"lo", f.lo}, {"hi", f.hi}};
}

Json to_json(const SizeProbe& p) {
  return Json{{"tau_size", p.tau_size},
              {"mean", p.mean},
              {"threshold", p.threshold},
              {"hits", to_json(p.hits)},
              {"uncovered", p.uncovered}};
}

Json to_json(const ConcentrationReport& r) {
  Json j;
  j["n_side"] = r.n_side;
  j["delta"] = r.delta;
  j["alpha"] = r.alpha;
  j["prediction"] = r.prediction;
  j["exact_mean"] = r.exact_mean;
  j["at_alpha"] = to_json(r.at_alpha);
  j["expansion"] = to_json(r.expansion);
  j["anti_expansion"] = to_json(r.anti_expansion);
  j["anti_expansion_max_ell"] = r.anti_expansion_max_ell;
  j["gen_method"] = r.gen_method;
  j["note"] = r.note;
  return j;
}

Json to_json(const LargeSetReport& r) {
  return Json{{"n_side", r.n_side},
              {"delta", r.delta},
              {"tau_size", r.tau_size},
              {"threshold", r.threshold},
              {"mean_uncovered", r.mean_uncovered},
              {"expected_uncovered", r.expected_uncovered},
              {"pass", to_json(r.pass)},
              {"insufficient_scale", r.insufficient_scale},
              {"gen_method", r.gen_method}};
}

Json to_json(const SetSizeReport& r) {
  Json j;
  j["n_side"] = r.n_side;
  j["delta"] = r.delta;
  j["lambda"] = r.lambda;
  j["alpha"] = r.alpha;
  j["size_threshold"] = r.size_threshold;
  j["mean_size"] = r.mean_size;
  j["large_total"] = to_json(r.large_total);
  j["both_sides_large"] = to_json(r.both_sides_large);
  j["ceiling"] = r.ceiling;
  j["pass"] = r.pass;
  j["max_exact_marginal"] = opt(r.max_exact_marginal);
  j["marginal_bound"] = r.marginal_bound;
  j["sweeps"] = r.sweeps;
  j["gen_method"] = r.gen_method;
  return j;
}

Json to_json(const SlowMixingReport& r) {
  Json j;
  j["n_side"] = r.n_side;
  j["delta"] = r.delta;
  j["k"] = r.k;
  j["lambda"] = r.lambda;
  j["facets"] = opt(r.facets);
  j["mass_s"] = opt(r.mass_s);
  j["phi_s"] = opt(r.phi_s);
  j["boundary_ratio"] = opt(r.boundary_ratio);
  j["within_conductance"] = opt(r.within_conductance);
  j["factor"] = opt(r.factor);
  j["control_facets"] = opt(r.control_facets);
  j["control_phi"] = opt(r.control_phi);
  j["control_within"] = opt(r.control_within);
  j["control_factor"] = opt(r.control_factor);
  j["theorem_shape"] = opt(r.theorem_shape);
  j["runs"] = r.runs;
  j["steps"] = r.steps;
  j["never_left"] = r.never_left;
  j["median_escape"] = r.median_escape;
  j["escape_times"] = r.escape_times;
  j["gen_method"] = r.gen_method;
  return j;
}

Json to_json(const RamanujanReport& r) {
  return Json{{"n_side", r.n_side},         {"delta", r.delta},       {"regular", r.regular},
              {"threshold", r.threshold},   {"within", to_json(r.within)}, {"lambda2", r.lambda2},
              {"residual", r.residual},     {"gen_method", r.gen_method}};
}

Json to_json(const CommonNeighborReport& r) {
  return Json{{"n_side", r.n_side},
              {"delta", r.delta},
              {"all_pairs_at_most_two", to_json(r.all_pairs_at_most_two)},
              {"unique_doubles", to_json(r.unique_doubles)},
              {"expected_pairs_above_two", r.expected_pairs_above_two},
              {"max_common", r.max_common},
              {"pairs_above_two", r.pairs_above_two},
              {"vertices_with_multiple_doubles", r.vertices_with_multiple_doubles},
              {"gen_method", r.gen_method}};
}

Json flatten(const Json& j) {
  Json out = Json::object();
  flatten_into(j, "", out);
  return out;
}

void write_report(std::ostream& out, const Json& doc, ReportFormat format, const std::string& records) {
  if (format == ReportFormat::json) {
    out << doc.dump(2) << '\n';
    return;
  }
  if (doc.contains("reproducibility")) {
    const Json stanza = flatten(doc["reproducibility"]);
    for (auto it = stanza.begin(); it != stanza.end(); ++it)
      out << "# " << it.key() << '=' << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
          << '\n';
  }
  std::vector<Json> rows;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() == "reproducibility") continue;
    const Json& body = it.value();
    if (!records.empty() && body.is_object() && body.contains(records) && body[records].is_array()) {
      for (const auto& rec : body[records]) rows.push_back(flatten(rec));
    } else {
      rows.push_back(flatten(body));
    }
  }
  std::vector<std::string> cols;
  for (const auto& r : rows)
    for (auto it = r.begin(); it != r.end(); ++it)
      if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << csv_cell(Json(cols[c]));
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out << ',';
      if (r.contains(cols[c])) out << csv_cell(r[cols[c]]);
    }
    out << '\n';
  }
}

}  // namespace slicewalk
