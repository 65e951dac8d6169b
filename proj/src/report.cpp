#include "coexist/report.hpp"

#include <cstdio>
#include <fstream>

namespace coexist {

ojson to_json(const KernelConstants& k) {
  return ojson{{"d", k.d},     {"D", k.D},         {"S", k.S},
               {"Sc", k.Sc},   {"s", k.s_in},      {"sc", k.sc_in},
               {"nodes", k.n}, {"max-rel-change", k.max_rel_change}};
}

ojson to_json(const KernelBoundsReport& r) {
  return ojson{{"pass", r.pass},
               {"upper-margin", r.upper_margin},
               {"lower-margin", r.lower_margin},
               {"window-integral", r.window_integral},
               {"upper-witness", {r.upper_witness[0], r.upper_witness[1]}},
               {"lower-witness", {r.lower_witness[0], r.lower_witness[1]}},
               {"samples", r.samples}};
}

ojson to_json(const CertCheck& c) {
  ojson j{{"name", c.name},     {"lhs", c.lhs},       {"rhs", c.rhs},
          {"margin", c.margin}, {"strict", c.strict}, {"pass", c.pass}};
  if (c.refinement != 0.0) j["refinement"] = c.refinement;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

ojson to_json(const Certificate& c) {
  ojson j;
  j["theorem"] = c.theorem;
  j["r"] = {c.r[0], c.r[1]};
  j["R"] = {c.R[0], c.R[1]};
  if (c.A) j["A"] = {(*c.A)[0], (*c.A)[1]};
  if (c.B) j["B"] = {(*c.B)[0], (*c.B)[1]};
  j["checks"] = ojson::array();
  for (const auto& ch : c.checks) j["checks"].push_back(to_json(ch));
  j["verdict"] = c.verdict ? "pass" : "fail";
  j["note"] = c.note;
  return j;
}

ojson to_json(const ConditionReport& c) {
  return ojson{{"flavor", to_string(c.flavor)},
               {"side", to_string(c.side)},
               {"component", c.component + 1},
               {"mode", to_string(c.mode)},
               {"pass", c.pass},
               {"margin", c.margin},
               {"samples", c.samples}};
}

ojson to_json(const Localization& l) {
  return ojson{{"name", l.name},     {"value", l.value}, {"bound", l.bound},
               {"lower", l.lower},   {"margin", l.margin}, {"pass", l.pass}};
}

ojson to_json(const SolverResult& r) {
  ojson j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["sup-norm"] = {r.x[0].size() ? r.x[0].cwiseAbs().maxCoeff() : 0.0,
                   r.x[1].size() ? r.x[1].cwiseAbs().maxCoeff() : 0.0};
  j["trivial"] = {r.trivial[0], r.trivial[1]};
  if (!r.localization.empty()) {
    j["localization"] = ojson::array();
    for (const auto& l : r.localization) j["localization"].push_back(to_json(l));
    j["localized"] = r.localized;
  }
  return j;
}

ojson to_json(const AsymptoticsReport& r) {
  ojson j;
  for (int c = 0; c < 2; ++c) {
    ojson rows = ojson::array();
    for (const auto& row : r.ratio_rows[c])
      rows.push_back(ojson{{"tau", row.tau},
                           {"max-ratio", row.max_ratio},
                           {"tail-ratio", row.tail_ratio},
                           {"slope", row.slope},
                           {"bounded", row.bounded},
                           {"points", row.used}});
    const auto& d = r.divergence[c];
    j["component-" + std::to_string(c + 1)] =
        ojson{{"phi-ratios", rows},
              {"divergence",
               ojson{{"g-mid", d.g_mid},
                     {"g-tail", d.g_tail},
                     {"growth", d.growth},
                     {"divergent", d.divergent}}}};
  }
  j["ratios-bounded"] = r.ratios_bounded;
  j["diverges"] = r.diverges;
  j["label"] = r.label;
  return j;
}

ojson to_json(const BumpReport& r) {
  ojson j;
  j["norm-conditions"] = {to_json(r.norms[0]), to_json(r.norms[1])};
  j["margins-pass"] = r.margins_pass;
  ojson ws = ojson::array();
  for (const auto& w : r.witnesses)
    ws.push_back(ojson{{"R", w.R}, {"theta", w.theta}, {"defect", w.defect}, {"found", w.found}});
  j["non-expansion-witnesses"] = ws;
  j["witness-on-every-sphere"] = r.witness_everywhere;
  j["component-index"] = ojson{{"degree", r.component_index.degree},
                               {"total-turning", r.component_index.total_turning},
                               {"min-boundary-norm", r.component_index.min_boundary_norm},
                               {"evaluations", r.component_index.evaluations}};
  j["predicted-index"] = r.predicted;
  j["fixed-points"] = ojson{{"count", r.fixed_points.size()},
                            {"worst-curve-defect", r.worst_curve_defect},
                            {"worst-map-residual", r.worst_map_residual}};
  return j;
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string stable_dump(const ojson& report) {
  ojson copy = report;
  copy.erase("timings-ms");
  copy.erase("content-hash");
  return copy.dump(2);
}

void finalize_report(ojson& report) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a64(stable_dump(report))));
  report["content-hash"] = buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string solution_csv(const Grid& g, const dvec& x1, const dvec& x2) {
  std::string out = "t,x1,x2\n";
  char line[128];
  for (int i = 0; i < g.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", g.node(i), x1[i], x2[i]);
    out += line;
  }
  return out;
}

}  // namespace coexist
