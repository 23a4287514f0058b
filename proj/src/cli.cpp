#include "mdr/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mdr/cms.hpp"
#include "mdr/cms3.hpp"
#include "mdr/io.hpp"
#include "mdr/mc.hpp"
#include "mdr/ozarow.hpp"
#include "mdr/pmf.hpp"
#include "mdr/subsets.hpp"

namespace mdr::cli {
namespace {

using nlohmann::json;
using io::fmt12;
using io::round12;

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level_from_env() {
  const char* raw = std::getenv("MDREGIONS_LOG");
  if (raw == nullptr) return LogLevel::quiet;
  const std::string value(raw);
  if (value == "debug") return LogLevel::debug;
  if (value == "info") return LogLevel::info;
  return LogLevel::quiet;
}

struct Logger {
  LogLevel level = LogLevel::quiet;
  std::ostream* err = nullptr;

  void info(const std::string& msg) const {
    if (level >= LogLevel::info) *err << "[info] " << msg << "\n";
  }
  void debug(const std::string& msg) const {
    if (level >= LogLevel::debug) *err << "[debug] " << msg << "\n";
  }
};

// All numbers we emit pass through round12 so JSON and CSV agree exactly.
double jnum(double v) { return round12(v); }

json subset_json(const SubsetId& s) {
  json arr = json::array();
  for (int channel : s.channels()) arr.push_back(channel);
  return arr;
}

json family_json(const SubsetFamily& family) {
  json arr = json::array();
  for (const SubsetId& s : family.members()) arr.push_back(subset_json(s));
  return arr;
}

void emit_json(std::ostream& out, const json& doc) { out << doc.dump(2) << "\n"; }

void emit_error(std::ostream& out, const std::string& code, const std::string& message) {
  json doc;
  doc["error"]["code"] = code;
  doc["error"]["message"] = message;
  emit_json(out, doc);
}

std::string csv_bool(bool v) { return v ? "true" : "false"; }

// ---------------------------------------------------------------------------
// User-orientation helpers for the three-description commands.  Computation
// always runs with d1 <= d3; presentation restores the caller's ordering.
// ---------------------------------------------------------------------------

struct OrientedThree {
  ThreeDescDistortions canonical;
  bool swapped = false;
};

OrientedThree orient(double d1, double d2, double d3, double d12, double d23) {
  if (d3 < d1) return {ThreeDescDistortions(d3, d2, d1, d23, d12), true};
  return {ThreeDescDistortions(d1, d2, d3, d12, d23), false};
}

std::string swap_corner_label(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    if (c == '1') c = '3';
    else if (c == '3') c = '1';
  }
  return out;
}

struct PresentedCorner {
  std::string label;
  std::array<double, 3> rates{};       // user orientation
  std::optional<AuxAssignment3> aux;   // absent when the corner has no nonnegative split
  int refined_description = 1;         // which user description carries the refinement split
};

std::vector<PresentedCorner> user_corners(const ThreeRegion& region, bool swapped) {
  std::vector<PresentedCorner> out;
  out.reserve(region.corners.size());
  for (const CornerPoint& corner : region.corners) {
    PresentedCorner pc;
    try {
      pc.aux = aux_assignment(corner, region.distortions);
    } catch (const std::domain_error&) {
      pc.aux.reset();  // away from the induced (2,3) distortion the split can go negative
    }
    pc.refined_description = swapped ? 3 : 1;
    if (swapped) {
      pc.label = swap_corner_label(corner.label);
      pc.rates = {corner.rates[2], corner.rates[1], corner.rates[0]};
    } else {
      pc.label = corner.label;
      pc.rates = corner.rates;
    }
    out.push_back(pc);
  }
  std::sort(out.begin(), out.end(),
            [](const PresentedCorner& a, const PresentedCorner& b) { return a.label < b.label; });
  return out;
}

std::vector<Halfspace> user_halfspaces(const ThreeRegion& region, bool swapped) {
  if (!swapped) return region.halfspaces;
  // Relabel descriptions 1 <-> 3.  The closed forms are symmetric in the two
  // sides of each pair, so only names and coefficient slots move.
  std::vector<Halfspace> out;
  out.reserve(region.halfspaces.size());
  auto find = [&](const std::string& name) -> const Halfspace& {
    for (const Halfspace& h : region.halfspaces)
      if (h.name == name) return h;
    throw std::runtime_error("missing halfspace " + name);
  };
  out.push_back({"R1", {1.0, 0.0, 0.0}, find("R3").bound_bits});
  out.push_back({"R2", {0.0, 1.0, 0.0}, find("R2").bound_bits});
  out.push_back({"R3", {0.0, 0.0, 1.0}, find("R1").bound_bits});
  out.push_back({"R1+R2", {1.0, 1.0, 0.0}, find("R2+R3").bound_bits});
  out.push_back({"R2+R3", {0.0, 1.0, 1.0}, find("R1+R2").bound_bits});
  return out;
}

json halfspace_json(const Halfspace& h) {
  json doc;
  doc["name"] = h.name;
  json coeffs = json::array();
  for (double c : h.coeffs) coeffs.push_back(jnum(c));
  doc["coeffs"] = coeffs;
  doc["bound_bits"] = jnum(h.bound_bits);
  return doc;
}

json corner_json(const PresentedCorner& pc) {
  json c;
  c["label"] = pc.label;
  c["rates"] = {jnum(pc.rates[0]), jnum(pc.rates[1]), jnum(pc.rates[2])};
  if (pc.aux) {
    c["aux"] = {{"r13_shared", jnum(pc.aux->r13_shared)},
                {"r1_refine", jnum(pc.aux->r1_refine)},
                {"r2_refine", jnum(pc.aux->r2_refine)},
                {"refined_description", pc.refined_description}};
  } else {
    c["aux"] = nullptr;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Subcommand implementations.  Each returns the process exit code.
// ---------------------------------------------------------------------------

int run_two_region(double d1, double d2, double d12, bool csv, std::ostream& out,
                   const Logger& log) {
  const TwoDescDistortions dist(d1, d2, d12);
  const OzarowParams params = ozarow_params(dist);
  const std::vector<Halfspace> halfspaces = two_region_halfspaces(dist);
  log.info("two-region: delta_bits=" + fmt12(params.delta_bits));

  if (csv) {
    out << "constraint,coeff_r1,coeff_r2,bound_bits\n";
    for (const Halfspace& h : halfspaces) {
      out << h.name << "," << fmt12(h.coeffs[0]) << "," << fmt12(h.coeffs[1]) << ","
          << fmt12(h.bound_bits) << "\n";
    }
    return kExitOk;
  }

  json doc;
  doc["distortions"] = {{"d1", jnum(d1)}, {"d2", jnum(d2)}, {"d12", jnum(d12)}};
  doc["params"] = {{"sigma1_sq", jnum(params.sigma1_sq)}, {"sigma2_sq", jnum(params.sigma2_sq)},
                   {"pi", jnum(params.pi)},               {"gamma", jnum(params.gamma)},
                   {"d12_max", jnum(params.d12_max)},     {"rho12_star", jnum(params.rho12_star)},
                   {"delta_bits", jnum(params.delta_bits)}};
  json hs = json::array();
  for (const Halfspace& h : halfspaces) hs.push_back(halfspace_json(h));
  doc["halfspaces"] = hs;

  const NoExcessRegion no_excess = no_excess_region(dist);
  doc["no_excess"]["applies"] = no_excess.applies;
  if (no_excess.applies) {
    doc["no_excess"]["bounds"] = {{"R1", jnum(no_excess.bounds[0])},
                                  {"R2", jnum(no_excess.bounds[1])},
                                  {"R1+R2", jnum(no_excess.bounds[2])}};
  }
  emit_json(out, doc);
  return kExitOk;
}

int run_three_region(double d1, double d2, double d3, double d12, double d23, bool csv,
                     std::ostream& out, const Logger& log) {
  const OrientedThree oriented = orient(d1, d2, d3, d12, d23);
  const ThreeRegion region = three_region(oriented.canonical);
  const std::vector<Halfspace> halfspaces = user_halfspaces(region, oriented.swapped);
  const std::vector<PresentedCorner> corners = user_corners(region, oriented.swapped);
  log.info("three-region: swapped=" + std::string(oriented.swapped ? "yes" : "no"));

  if (csv) {
    out << "constraint,coeff_r1,coeff_r2,coeff_r3,bound_bits\n";
    for (const Halfspace& h : halfspaces) {
      out << h.name << "," << fmt12(h.coeffs[0]) << "," << fmt12(h.coeffs[1]) << ","
          << fmt12(h.coeffs[2]) << "," << fmt12(h.bound_bits) << "\n";
    }
    return kExitOk;
  }

  const double delta12_user = oriented.swapped ? region.delta23_bits : region.delta12_bits;
  const double delta23_user = oriented.swapped ? region.delta12_bits : region.delta23_bits;

  json doc;
  doc["distortions"] = {{"d1", jnum(d1)},
                        {"d2", jnum(d2)},
                        {"d3", jnum(d3)},
                        {"d12", jnum(d12)},
                        {"d23", jnum(d23)}};
  doc["roles_swapped"] = oriented.swapped;
  doc["delta12_bits"] = jnum(delta12_user);
  doc["delta23_bits"] = jnum(delta23_user);
  json hs = json::array();
  for (const Halfspace& h : halfspaces) hs.push_back(halfspace_json(h));
  doc["halfspaces"] = hs;
  json cs = json::array();
  for (const PresentedCorner& pc : corners) cs.push_back(corner_json(pc));
  doc["corners"] = cs;
  emit_json(out, doc);
  return kExitOk;
}

int run_corner_points(double d1, double d2, double d3, double d12, double d23, bool csv,
                      std::ostream& out, const Logger& log) {
  const OrientedThree oriented = orient(d1, d2, d3, d12, d23);
  const ThreeRegion region = three_region(oriented.canonical);
  const std::vector<PresentedCorner> corners = user_corners(region, oriented.swapped);
  log.info("corner-points: " + std::to_string(corners.size()) + " corners");

  if (csv) {
    out << "label,r1_bits,r2_bits,r3_bits,r13_shared,r1_refine,r2_refine,refined_description\n";
    for (const PresentedCorner& pc : corners) {
      out << pc.label << "," << fmt12(pc.rates[0]) << "," << fmt12(pc.rates[1]) << ","
          << fmt12(pc.rates[2]) << ",";
      if (pc.aux) {
        out << fmt12(pc.aux->r13_shared) << "," << fmt12(pc.aux->r1_refine) << ","
            << fmt12(pc.aux->r2_refine) << "," << pc.refined_description << "\n";
      } else {
        out << ",,,\n";
      }
    }
    return kExitOk;
  }

  json doc;
  doc["distortions"] = {{"d1", jnum(d1)},
                        {"d2", jnum(d2)},
                        {"d3", jnum(d3)},
                        {"d12", jnum(d12)},
                        {"d23", jnum(d23)}};
  doc["roles_swapped"] = oriented.swapped;
  json cs = json::array();
  for (const PresentedCorner& pc : corners) cs.push_back(corner_json(pc));
  doc["corners"] = cs;
  emit_json(out, doc);
  return kExitOk;
}

std::vector<Halfspace> halfspaces_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open region file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::domain_error(std::string("malformed region file: ") + e.what());
  }
  if (!doc.contains("halfspaces") || !doc["halfspaces"].is_array())
    throw std::domain_error("region file missing halfspaces array");
  std::vector<Halfspace> out;
  for (const json& h : doc["halfspaces"]) {
    if (!h.contains("name") || !h.contains("coeffs") || !h.contains("bound_bits"))
      throw std::domain_error("region halfspace needs name, coeffs, bound_bits");
    Halfspace hs;
    hs.name = h["name"].get<std::string>();
    for (const json& c : h["coeffs"]) hs.coeffs.push_back(c.get<double>());
    hs.bound_bits = h["bound_bits"].get<double>();
    out.push_back(hs);
  }
  if (out.empty()) throw std::domain_error("region file has no halfspaces");
  return out;
}

int run_membership(const std::vector<double>& rates, const std::vector<Halfspace>& halfspaces,
                   bool csv, std::ostream& out, const Logger& log) {
  const std::vector<MembershipRow> rows = evaluate_membership(halfspaces, rates);
  bool member = true;
  for (const MembershipRow& row : rows) member = member && row.satisfied;
  log.info("membership: " + std::string(member ? "inside" : "outside"));

  if (csv) {
    out << "constraint,lhs_bits,bound_bits,satisfied,binding\n";
    for (const MembershipRow& row : rows) {
      out << row.name << "," << fmt12(row.lhs_bits) << "," << fmt12(row.bound_bits) << ","
          << csv_bool(row.satisfied) << "," << csv_bool(row.binding) << "\n";
    }
    return kExitOk;
  }

  json doc;
  json rj = json::array();
  for (double r : rates) rj.push_back(jnum(r));
  doc["rates"] = rj;
  doc["member"] = member;
  json binding = json::array();
  for (const MembershipRow& row : rows)
    if (row.binding) binding.push_back(row.name);
  doc["binding"] = binding;
  json rowsj = json::array();
  for (const MembershipRow& row : rows) {
    rowsj.push_back({{"name", row.name},
                     {"lhs_bits", jnum(row.lhs_bits)},
                     {"bound_bits", jnum(row.bound_bits)},
                     {"satisfied", row.satisfied},
                     {"binding", row.binding}});
  }
  doc["rows"] = rowsj;
  emit_json(out, doc);
  return kExitOk;
}

int run_regime_map(double d1, double d2, double d3, int d12_steps, int d23_steps, bool csv,
                   std::ostream& out, const Logger& log) {
  const RegimeMap map = regime_map(d1, d2, d3, d12_steps, d23_steps);
  log.info("regime-map: " + std::to_string(map.cells.size()) + " cells");

  if (csv) {
    out << "d12,d23,label,d23_star,delta12_bits,delta23_bits,min_sum_rate_bits\n";
    for (const RegimeCell& cell : map.cells) {
      out << fmt12(cell.d12) << "," << fmt12(cell.d23) << "," << regime_name(cell.label.label)
          << "," << fmt12(cell.label.d23_star_value) << "," << fmt12(cell.label.delta12_bits)
          << "," << fmt12(cell.label.delta23_bits) << "," << fmt12(cell.label.min_sum_rate_bits)
          << "\n";
    }
    return kExitOk;
  }

  json doc;
  doc["d1"] = jnum(d1);
  doc["d2"] = jnum(d2);
  doc["d3"] = jnum(d3);
  doc["d12_steps"] = d12_steps;
  doc["d23_steps"] = d23_steps;
  doc["roles_swapped"] = d3 < d1;
  json cells = json::array();
  for (const RegimeCell& cell : map.cells) {
    cells.push_back({{"d12", jnum(cell.d12)},
                     {"d23", jnum(cell.d23)},
                     {"label", regime_name(cell.label.label)},
                     {"d23_star", jnum(cell.label.d23_star_value)},
                     {"delta12_bits", jnum(cell.label.delta12_bits)},
                     {"delta23_bits", jnum(cell.label.delta23_bits)},
                     {"min_sum_rate_bits", jnum(cell.label.min_sum_rate_bits)},
                     {"near_complete", cell.near_complete}});
  }
  doc["cells"] = cells;
  emit_json(out, doc);
  return kExitOk;
}

int run_mc_validate_two(double d1, double d2, double d12, long long n, unsigned long long seed,
                        bool csv, std::ostream& out, const Logger& log) {
  const TwoDescDistortions dist(d1, d2, d12);
  const OzarowParams params = ozarow_params(dist);
  TwoDescChannelSpec spec;
  spec.d1 = d1;
  spec.d2 = d2;
  spec.rho = params.rho12_star;
  SimConfig config;
  config.n = static_cast<std::uint64_t>(n);
  config.seed = seed;
  config.spec = spec;
  const SimReport report = simulate(config);
  log.info("mc-validate two: pass=" + std::string(report.pass ? "yes" : "no"));

  if (csv) {
    out << "check,name,empirical,stderr,analytic,closed_form_bits,mi_bits,abs_diff,pass\n";
    for (const DistortionCheck& check : report.distortions) {
      out << "distortion," << check.decoder << "," << fmt12(check.empirical) << ","
          << fmt12(check.stderr_value) << "," << fmt12(check.analytic) << ",,,,"
          << csv_bool(check.pass) << "\n";
    }
  } else {
    json doc;
    doc["mode"] = "two";
    doc["n"] = report.n;
    doc["seed"] = report.seed;
    doc["requested"] = {{"d1", jnum(d1)}, {"d2", jnum(d2)}, {"d12", jnum(d12)}};
    doc["construction"] = {{"sigma1_sq", jnum(params.sigma1_sq)},
                           {"sigma2_sq", jnum(params.sigma2_sq)},
                           {"rho", jnum(params.rho12_star)}};
    json checks = json::array();
    for (const DistortionCheck& check : report.distortions) {
      checks.push_back({{"decoder", check.decoder},
                        {"empirical", jnum(check.empirical)},
                        {"stderr", jnum(check.stderr_value)},
                        {"analytic", jnum(check.analytic)},
                        {"pass", check.pass}});
    }
    doc["distortions"] = checks;
    doc["pass"] = report.pass;
    emit_json(out, doc);
  }
  return report.pass ? kExitOk : kExitValidationFailure;
}

int run_mc_validate_three(double d1, double d2, double d3, double d12, bool have_d23, double d23,
                          long long n, unsigned long long seed, bool csv, std::ostream& out,
                          const Logger& log) {
  const TestChannelSpec3 spec = test_channels(d1, d2, d3, d12);
  const double star = d23_star(d1, d2, d3, d12);
  if (have_d23 && d23 < star - 1e-9) {
    throw std::domain_error("requested d23 below the value this construction achieves");
  }
  SimConfig config;
  config.n = static_cast<std::uint64_t>(n);
  config.seed = seed;
  config.spec = spec;
  const SimReport report = simulate(config);
  const std::vector<RateBoundCheck> bounds = validate_rate_bounds(d1, d2, d3, d12);
  bool bounds_pass = true;
  for (const RateBoundCheck& check : bounds) bounds_pass = bounds_pass && check.pass;
  const bool pass = report.pass && bounds_pass;
  log.info("mc-validate three: pass=" + std::string(pass ? "yes" : "no"));

  if (csv) {
    out << "check,name,empirical,stderr,analytic,closed_form_bits,mi_bits,abs_diff,pass\n";
    for (const DistortionCheck& check : report.distortions) {
      out << "distortion," << check.decoder << "," << fmt12(check.empirical) << ","
          << fmt12(check.stderr_value) << "," << fmt12(check.analytic) << ",,,,"
          << csv_bool(check.pass) << "\n";
    }
    for (const RateBoundCheck& check : bounds) {
      out << "rate_bound," << check.name << ",,,," << fmt12(check.closed_form_bits) << ","
          << fmt12(check.mi_bits) << "," << fmt12(check.abs_diff) << "," << csv_bool(check.pass)
          << "\n";
    }
  } else {
    json doc;
    doc["mode"] = "three";
    doc["n"] = report.n;
    doc["seed"] = report.seed;
    json requested = {{"d1", jnum(d1)}, {"d2", jnum(d2)}, {"d3", jnum(d3)}, {"d12", jnum(d12)}};
    requested["d23"] = jnum(have_d23 ? d23 : star);
    doc["requested"] = requested;
    doc["construction"] = {{"sigma1t_sq", jnum(spec.sigma1t_sq)},
                           {"sigma2t_sq", jnum(spec.sigma2t_sq)},
                           {"sigma3t_sq", jnum(spec.sigma3t_sq)},
                           {"rho12", jnum(spec.rho12)},
                           {"pair23_rho", jnum(spec.pair23_rho())}};
    doc["d23_star"] = jnum(star);
    json checks = json::array();
    for (const DistortionCheck& check : report.distortions) {
      checks.push_back({{"decoder", check.decoder},
                        {"empirical", jnum(check.empirical)},
                        {"stderr", jnum(check.stderr_value)},
                        {"analytic", jnum(check.analytic)},
                        {"pass", check.pass}});
    }
    doc["distortions"] = checks;
    json boundsj = json::array();
    for (const RateBoundCheck& check : bounds) {
      boundsj.push_back({{"name", check.name},
                         {"closed_form_bits", jnum(check.closed_form_bits)},
                         {"mi_bits", jnum(check.mi_bits)},
                         {"abs_diff", jnum(check.abs_diff)},
                         {"pass", check.pass}});
    }
    doc["rate_bounds"] = boundsj;
    doc["pass"] = pass;
    emit_json(out, doc);
  }
  return pass ? kExitOk : kExitValidationFailure;
}

std::string family_token(const SubsetFamily& family) {
  std::string out;
  for (const SubsetId& s : family.members()) {
    if (!out.empty()) out += "+";
    out += s.label();
  }
  return out;
}

std::string support_token(const CmsConstraint& constraint) {
  std::string out;
  for (const SubsetId& s : constraint.shared_support) {
    if (!out.empty()) out += "+";
    out += "R''" + s.label();
  }
  for (int l : constraint.base_support) {
    if (!out.empty()) out += "+";
    out += "R'" + std::to_string(l);
  }
  return out;
}

int run_discrete_eval(const std::string& path, bool csv, std::ostream& out, const Logger& log) {
  const io::PmfDocument doc_in = io::load_pmf_file(path);
  const JointPmf& pmf = doc_in.pmf;
  const std::vector<CmsConstraint> constraints = cms_constraints(pmf);
  log.info("discrete-eval: " + std::to_string(constraints.size()) + " constraints");

  if (csv) {
    out << "Q,support,bound_bits\n";
    for (const CmsConstraint& c : constraints) {
      out << family_token(c.q) << "," << support_token(c) << "," << fmt12(c.bound_bits) << "\n";
    }
    return kExitOk;
  }

  json doc;
  doc["channel_count"] = pmf.channel_count();
  json vars = json::array();
  for (const VariableRole& role : pmf.roles()) vars.push_back(role.name());
  doc["variables"] = vars;
  json cons = json::array();
  for (const CmsConstraint& c : constraints) {
    json shared = json::array();
    for (const SubsetId& s : c.shared_support) shared.push_back(subset_json(s));
    json base = json::array();
    for (int l : c.base_support) base.push_back(l);
    cons.push_back({{"Q", family_json(c.q)},
                    {"support", {{"shared", shared}, {"base", base}}},
                    {"bound_bits", jnum(c.bound_bits)}});
  }
  doc["constraints"] = cons;

  if (!doc_in.reconstructions.empty()) {
    json recon = json::array();
    for (const ReconstructionMap& map : doc_in.reconstructions) {
      recon.push_back({{"decoder", subset_json(map.decoder)},
                       {"expected_distortion", jnum(expected_distortion(pmf, map))}});
    }
    doc["expected_distortions"] = recon;
  }

  // Replica-mode rate bounds are defined for two channels with every role
  // declared (constants still count when given single-letter alphabets).
  if (pmf.channel_count() == 2) {
    const bool has_all = pmf.find(RoleKind::layer, SubsetId::from_mask(0b01, 2)) >= 0 &&
                         pmf.find(RoleKind::layer, SubsetId::from_mask(0b10, 2)) >= 0 &&
                         pmf.find(RoleKind::layer, SubsetId::from_mask(0b11, 2)) >= 0 &&
                         pmf.find(RoleKind::shared, SubsetId::from_mask(0b11, 2)) >= 0;
    if (has_all) {
      const ZbReplicaBounds zb = zb_replica_bounds(pmf);
      doc["replica_bounds"] = {{"r1_bits", jnum(zb.r1_bits)},
                               {"r2_bits", jnum(zb.r2_bits)},
                               {"sum_bits", jnum(zb.sum_bits)}};
    }
  }
  emit_json(out, doc);
  return kExitOk;
}

int run_q_star(int channels, bool csv, std::ostream& out, const Logger& log) {
  const std::vector<SubsetFamily> families = enumerate_q_star(channels);
  log.info("q-star: " + std::to_string(families.size()) + " families");

  if (csv) {
    out << "index,family\n";
    for (std::size_t i = 0; i < families.size(); ++i) {
      out << i << "," << family_token(families[i]) << "\n";
    }
    return kExitOk;
  }

  json doc;
  doc["channel_count"] = channels;
  doc["count"] = families.size();
  json fam = json::array();
  for (const SubsetFamily& family : families) fam.push_back(family_json(family));
  doc["families"] = fam;
  emit_json(out, doc);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Logger log{log_level_from_env(), &err};

  CLI::App app{"multiple-description rate-distortion regions"};
  app.require_subcommand(1);

  // Distortions are normalized MSE in (0, 1]; rejecting out-of-range values at
  // the parser names the offending flag in the error document.
  const CLI::Validator unit_interval(
      [](std::string& input) -> std::string {
        char* end = nullptr;
        const double v = std::strtod(input.c_str(), &end);
        if (end == input.c_str() || *end != '\0') return "is not a number";
        if (!(v > 0.0) || v > 1.0) return "must lie in (0, 1]";
        return {};
      },
      "FLOAT in (0,1]", "UNIT_INTERVAL");

  // two-region ------------------------------------------------------------
  auto* two = app.add_subcommand("two-region", "two-description quadratic-Gaussian region");
  double t_d1 = 0, t_d2 = 0, t_d12 = 0;
  bool t_csv = false;
  two->add_option("--d1", t_d1, "side distortion 1")->check(unit_interval)->required();
  two->add_option("--d2", t_d2, "side distortion 2")->check(unit_interval)->required();
  two->add_option("--d12", t_d12, "central distortion")->check(unit_interval)->required();
  two->add_flag("--csv", t_csv, "emit CSV instead of JSON");

  // three-region ----------------------------------------------------------
  auto* three = app.add_subcommand("three-region", "three-description cross-section");
  double h_d1 = 0, h_d2 = 0, h_d3 = 0, h_d12 = 0, h_d23 = 0;
  bool h_csv = false;
  three->add_option("--d1", h_d1, "side distortion 1")->check(unit_interval)->required();
  three->add_option("--d2", h_d2, "side distortion 2")->check(unit_interval)->required();
  three->add_option("--d3", h_d3, "side distortion 3")->check(unit_interval)->required();
  three->add_option("--d12", h_d12, "pair (1,2) distortion")->check(unit_interval)->required();
  three->add_option("--d23", h_d23, "pair (2,3) distortion")->check(unit_interval)->required();
  three->add_flag("--csv", h_csv, "emit CSV instead of JSON");

  // corner-points ---------------------------------------------------------
  auto* corners = app.add_subcommand("corner-points", "corner points with refinement splits");
  double c_d1 = 0, c_d2 = 0, c_d3 = 0, c_d12 = 0, c_d23 = 0;
  bool c_csv = false;
  corners->add_option("--d1", c_d1, "side distortion 1")->check(unit_interval)->required();
  corners->add_option("--d2", c_d2, "side distortion 2")->check(unit_interval)->required();
  corners->add_option("--d3", c_d3, "side distortion 3")->check(unit_interval)->required();
  corners->add_option("--d12", c_d12, "pair (1,2) distortion")->check(unit_interval)->required();
  corners->add_option("--d23", c_d23, "pair (2,3) distortion")->check(unit_interval)->required();
  corners->add_flag("--csv", c_csv, "emit CSV instead of JSON");

  // membership --------------------------------------------------------------
  auto* member = app.add_subcommand("membership", "test a rate point against a region");
  double m_r1 = 0, m_r2 = 0, m_r3 = 0;
  double m_d1 = 0, m_d2 = 0, m_d3 = 0, m_d12 = 0, m_d23 = 0;
  std::string m_region_file;
  bool m_csv = false;
  member->add_option("--r1", m_r1, "rate 1 in bits")->required();
  member->add_option("--r2", m_r2, "rate 2 in bits")->required();
  auto* m_r3_opt = member->add_option("--r3", m_r3, "rate 3 in bits");
  auto* m_file_opt = member->add_option("--region", m_region_file, "region JSON file");
  auto* m_d1_opt = member->add_option("--d1", m_d1, "side distortion 1")->check(unit_interval);
  auto* m_d2_opt = member->add_option("--d2", m_d2, "side distortion 2")->check(unit_interval);
  auto* m_d3_opt = member->add_option("--d3", m_d3, "side distortion 3")->check(unit_interval);
  auto* m_d12_opt = member->add_option("--d12", m_d12, "pair (1,2) distortion")->check(unit_interval);
  auto* m_d23_opt = member->add_option("--d23", m_d23, "pair (2,3) distortion")->check(unit_interval);
  member->add_flag("--csv", m_csv, "emit CSV instead of JSON");

  // regime-map --------------------------------------------------------------
  auto* regime = app.add_subcommand("regime-map", "classify a grid of pair distortions");
  double g_d1 = 0, g_d2 = 0, g_d3 = 0;
  int g_d12_steps = 100, g_d23_steps = 100;
  bool g_csv = false;
  regime->add_option("--d1", g_d1, "side distortion 1")->check(unit_interval)->required();
  regime->add_option("--d2", g_d2, "side distortion 2")->check(unit_interval)->required();
  regime->add_option("--d3", g_d3, "side distortion 3")->check(unit_interval)->required();
  regime->add_option("--d12-steps", g_d12_steps, "grid steps along d12 (default 100)")
      ->check(CLI::Range(2, 2000));
  regime->add_option("--d23-steps", g_d23_steps, "grid steps along d23 (default 100)")
      ->check(CLI::Range(2, 2000));
  regime->add_flag("--csv", g_csv, "emit CSV instead of JSON");

  // mc-validate -------------------------------------------------------------
  auto* mc = app.add_subcommand("mc-validate", "Monte Carlo check of a test-channel construction");
  double v_d1 = 0, v_d2 = 0, v_d3 = 0, v_d12 = 0, v_d23 = 0;
  long long v_n = 1000000;
  unsigned long long v_seed = 1;
  bool v_two = false, v_csv = false;
  mc->add_flag("--two", v_two, "validate the two-description construction");
  mc->add_option("--d1", v_d1, "side distortion 1")->check(unit_interval)->required();
  mc->add_option("--d2", v_d2, "side distortion 2")->check(unit_interval)->required();
  auto* v_d3_opt = mc->add_option("--d3", v_d3, "side distortion 3")->check(unit_interval);
  auto* v_d12_opt = mc->add_option("--d12", v_d12, "pair (1,2) distortion")->check(unit_interval);
  auto* v_d23_opt = mc->add_option("--d23", v_d23, "pair (2,3) distortion (echoed)")->check(unit_interval);
  mc->add_option("--n", v_n, "sample count (default 1000000)");
  mc->add_option("--seed", v_seed, "generator seed (default 1)");
  mc->add_flag("--csv", v_csv, "emit CSV instead of JSON");

  // discrete-eval -----------------------------------------------------------
  auto* discrete = app.add_subcommand("discrete-eval", "rate constraints of a finite-alphabet construction");
  std::string e_path;
  bool e_csv = false;
  discrete->add_option("--pmf", e_path, "joint pmf JSON file")->required();
  discrete->add_flag("--csv", e_csv, "emit CSV instead of JSON");

  // q-star ------------------------------------------------------------------
  auto* qstar = app.add_subcommand("q-star", "enumerate nonempty upward-closed families");
  int q_channels = 0;
  bool q_csv = false;
  qstar->add_option("--channels", q_channels, "number of descriptions (2..5)")->required();
  qstar->add_flag("--csv", q_csv, "emit CSV instead of JSON");

  std::vector<const char*> argv;
  argv.push_back("mdregions");
  for (const std::string& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream help;
    app.exit(e, help, help);
    out << help.str();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    emit_error(out, "usage_error", e.what());
    return kExitDomainError;
  }

  try {
    if (two->parsed()) return run_two_region(t_d1, t_d2, t_d12, t_csv, out, log);
    if (three->parsed())
      return run_three_region(h_d1, h_d2, h_d3, h_d12, h_d23, h_csv, out, log);
    if (corners->parsed())
      return run_corner_points(c_d1, c_d2, c_d3, c_d12, c_d23, c_csv, out, log);
    if (member->parsed()) {
      std::vector<double> rates{m_r1, m_r2};
      if (m_r3_opt->count() > 0) rates.push_back(m_r3);
      std::vector<Halfspace> halfspaces;
      if (m_file_opt->count() > 0) {
        halfspaces = halfspaces_from_file(m_region_file);
      } else if (m_d3_opt->count() > 0) {
        if (m_d1_opt->count() == 0 || m_d2_opt->count() == 0 || m_d12_opt->count() == 0 ||
            m_d23_opt->count() == 0) {
          throw std::domain_error(
              "membership needs --region, or --d1 --d2 --d12, or --d1 --d2 --d3 --d12 --d23");
        }
        const OrientedThree oriented = orient(m_d1, m_d2, m_d3, m_d12, m_d23);
        halfspaces = user_halfspaces(three_region(oriented.canonical), oriented.swapped);
      } else if (m_d1_opt->count() > 0 && m_d2_opt->count() > 0 && m_d12_opt->count() > 0) {
        halfspaces = two_region_halfspaces(TwoDescDistortions(m_d1, m_d2, m_d12));
      } else {
        throw std::domain_error(
            "membership needs --region, or --d1 --d2 --d12, or --d1 --d2 --d3 --d12 --d23");
      }
      return run_membership(rates, halfspaces, m_csv, out, log);
    }
    if (regime->parsed())
      return run_regime_map(g_d1, g_d2, g_d3, g_d12_steps, g_d23_steps, g_csv, out, log);
    if (mc->parsed()) {
      if (v_n < static_cast<long long>(kMinSamples))
        throw std::domain_error("mc-validate needs --n >= 10000");
      if (v_two) {
        if (v_d12_opt->count() == 0)
          throw std::domain_error("mc-validate --two needs --d1 --d2 --d12");
        return run_mc_validate_two(v_d1, v_d2, v_d12, v_n, v_seed, v_csv, out, log);
      }
      if (v_d3_opt->count() == 0 || v_d12_opt->count() == 0)
        throw std::domain_error("mc-validate needs --d1 --d2 --d3 --d12 (and optionally --d23)");
      return run_mc_validate_three(v_d1, v_d2, v_d3, v_d12, v_d23_opt->count() > 0, v_d23, v_n,
                                   v_seed, v_csv, out, log);
    }
    if (discrete->parsed()) return run_discrete_eval(e_path, e_csv, out, log);
    if (qstar->parsed()) return run_q_star(q_channels, q_csv, out, log);
    emit_error(out, "usage_error", "no subcommand given");
    return kExitDomainError;
  } catch (const std::domain_error& e) {
    emit_error(out, "domain_error", e.what());
    return kExitDomainError;
  } catch (const std::exception& e) {
    emit_error(out, "error", e.what());
    return kExitDomainError;
  }
}

}  // namespace mdr::cli
