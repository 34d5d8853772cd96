// Command-line driver. Every command writes one "# {metadata}" line, a CSV
// header and data rows (or a single JSON document with --format json).
// Failures go to stderr as a JSON record with a nonzero exit status.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <variant>

#include "involutions/involutions.hpp"

using namespace involutions;
using nlohmann::json;

namespace {

using Cell = std::variant<long long, double, std::string>;

std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) return *d;
  return std::get<std::string>(c);
}

struct Table {
  json meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void write(std::ostream& out, const std::string& format) const {
    if (format == "json") {
      json doc{{"meta", meta}, {"columns", columns}, {"rows", json::array()}};
      for (const auto& r : rows) {
        json row = json::array();
        for (const auto& c : r) row.push_back(cell_json(c));
        doc["rows"].push_back(row);
      }
      out << doc.dump(2) << "\n";
      return;
    }
    out << "# " << meta.dump() << "\n";
    for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& r : rows) {
      for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_cell(r[i]);
      out << "\n";
    }
  }
};

std::string join(const std::vector<int>& v, char sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return s;
}

// Scalar kernel-limit CDF with memoisation keyed on the exact argument.
struct LimitCdf {
  SoftEdgeParams p;
  std::map<double, double> cache;
  double operator()(double s) {
    if (s > 10.0) return 1.0;
    if (s < -9.0) return 0.0;
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    return cache[s] = joint_distribution_exact(ScaledWindow({s}), p).value;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Increasing subsequences of random involutions: kernels, distributions and samplers"};
  app.require_subcommand(1);
  std::string format = "csv", output;
  std::uint64_t seed = 20030101;
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", output, "output file (default: stdout)");
  app.add_option("--seed", seed, "random seed");

  Table table;
  std::function<void()> action;
  auto base_meta = [&](const std::string& command) {
    table.meta = {{"command", command}, {"version", version}, {"seed", seed}, {"format_version", 1}};
  };

  // sample
  int s_n = -1, s_m = -1, s_samples = 1, s_kmax = 3;
  double s_Q = -1, s_alpha = 1.0;
  auto* sample = app.add_subcommand("sample", "draw involutions and their RSK shapes");
  sample->add_option("--n", s_n, "number of 2-cycles (fixed ensemble)");
  sample->add_option("--m", s_m, "number of fixed points (fixed ensemble)");
  sample->add_option("--Q", s_Q, "Poissonization parameter (instead of --n/--m)");
  sample->add_option("--alpha", s_alpha, "fixed-point weight for the Poissonized ensemble");
  sample->add_option("--samples", s_samples)->check(CLI::Range(1, 10000000));
  sample->add_option("--kmax", s_kmax, "rows reported")->check(CLI::Range(1, 100));
  sample->callback([&] {
    base_meta("sample");
    const bool pois = s_Q > 0;
    require(pois || (s_n >= 0 && s_m >= 0), ErrorKind::InvalidArgument, "sample: give --n and --m, or --Q");
    table.meta["params"] = pois ? json{{"Q", s_Q}, {"alpha", s_alpha}} : json{{"n", s_n}, {"m", s_m}};
    table.meta["params"]["samples"] = s_samples;
    table.meta["params"]["kmax"] = s_kmax;
    table.columns = {"sample", "N", "two_cycles", "fixed_points", "involution", "shape"};
    for (int k = 1; k <= s_kmax; ++k) table.columns.push_back("lambda" + std::to_string(k));
    const RngStream rng{seed, 0};
    std::mt19937_64 gen = rng.engine();
    const PoissonParams pp = pois ? PoissonParams(s_Q, s_alpha) : PoissonParams(1.0, 1.0);
    for (int i = 0; i < s_samples; ++i) {
      const Involution inv = pois ? sample_poissonized(pp, gen) : sample_involution(s_n, s_m, gen);
      const Partition shape = rsk_shape(inv);
      std::vector<Cell> row{(long long)i, (long long)inv.size(), (long long)inv.two_cycles(),
                            (long long)inv.fixed_points(), join(inv.map, ' '), join(shape.parts, ' ')};
      for (int k = 0; k < s_kmax; ++k) row.push_back((long long)shape.part(k));
      table.rows.push_back(std::move(row));
    }
  });

  // kernel-finite
  int kf_M = 2, kf_x = 0, kf_y = 0;
  double kf_q = 0.3, kf_alpha = 0.4;
  auto* kfin = app.add_subcommand("kernel-finite", "finite-model kernel block at (x, y)");
  kfin->add_option("--M", kf_M)->required();
  kfin->add_option("--q", kf_q)->required();
  kfin->add_option("--alpha", kf_alpha)->required();
  kfin->add_option("--x", kf_x)->required();
  kfin->add_option("--y", kf_y)->required();
  kfin->callback([&] {
    base_meta("kernel-finite");
    table.meta["params"] = {{"M", kf_M}, {"q", kf_q}, {"alpha", kf_alpha}, {"x", kf_x}, {"y", kf_y}};
    const FiniteModelParams p(kf_M, kf_q, kf_alpha);
    const KernelBlock b = kernel_block(kf_x, kf_y, p);
    table.columns = {"x", "y", "S", "I", "D", "S_t"};
    table.rows.push_back({(long long)kf_x, (long long)kf_y, b.s, b.i, b.d, b.s_t});
  });

  // kernel-poisson
  double kp_Q = 4, kp_alpha = 0.5;
  int kp_x = 0, kp_y = 0;
  std::string kp_gauge = "printed";
  auto* kpois = app.add_subcommand("kernel-poisson", "Poissonized (Bessel) kernel block at (x, y)");
  kpois->add_option("--Q", kp_Q)->required();
  kpois->add_option("--alpha", kp_alpha)->required();
  kpois->add_option("--x", kp_x)->required();
  kpois->add_option("--y", kp_y)->required();
  kpois->add_option("--gauge", kp_gauge)->check(CLI::IsMember({"printed", "balanced"}));
  kpois->callback([&] {
    base_meta("kernel-poisson");
    table.meta["params"] = {{"Q", kp_Q}, {"alpha", kp_alpha}, {"x", kp_x}, {"y", kp_y}, {"gauge", kp_gauge}};
    const PoissonParams p(kp_Q, kp_alpha);
    const KernelBlock b = kernel_block_poisson(kp_x, kp_y, p, {},
                                               kp_gauge == "printed" ? KernelGauge::Printed : KernelGauge::Balanced);
    table.columns = {"x", "y", "S", "I", "D", "S_t"};
    table.rows.push_back({(long long)kp_x, (long long)kp_y, b.s, b.i, b.d, b.s_t});
  });

  // kernel-airy
  double ka_u = 0, ka_x = 0, ka_y = 0;
  auto* kairy = app.add_subcommand("kernel-airy", "soft-edge matrix kernel entries at (X, Y)");
  kairy->add_option("--u", ka_u)->required();
  kairy->add_option("--x", ka_x)->required();
  kairy->add_option("--y", ka_y)->required();
  kairy->callback([&] {
    base_meta("kernel-airy");
    table.meta["params"] = {{"u", ka_u}, {"x", ka_x}, {"y", ka_y}};
    const AiryBlock b = f_block(ka_x, ka_y, SoftEdgeParams(ka_u));
    table.columns = {"X", "Y", "f11", "f12", "f21", "f22"};
    table.rows.push_back({ka_x, ka_y, b.f11, b.f12, b.f21, b.f22});
  });

  // gap
  double g_w = 0;
  std::vector<double> g_s;
  int g_terms = 8, g_nodes = 32;
  bool g_exact = false;
  auto* gap = app.add_subcommand("gap", "joint distribution of the scaled rightmost rows");
  gap->add_option("--w", g_w)->required();
  gap->add_option("--s", g_s, "thresholds s1 > s2 > ... (up to 3)")->required()->delimiter(',');
  gap->add_option("--terms", g_terms, "series truncation order p_max")->check(CLI::Range(1, 12));
  gap->add_option("--nodes", g_nodes, "quadrature nodes per interval (doubled as a check)");
  gap->add_flag("--exact", g_exact, "evaluate without truncating the series");
  gap->callback([&] {
    base_meta("gap");
    table.meta["params"] = {{"w", g_w}, {"s", g_s}, {"terms", g_terms}, {"nodes", g_nodes}, {"exact", g_exact}};
    const ScaledWindow sw(g_s, g_nodes);
    table.meta["tolerances"] = {{"series_tail", 1e-6}, {"node_doubling", 1e-7}, {"cutoff", sw.cutoff}};
    const SoftEdgeParams p = SoftEdgeParams::from_w(g_w);
    const JointDistribution f = g_exact ? joint_distribution_exact(sw, p) : joint_distribution(sw, p, g_terms);
    table.columns = {"w", "s", "probability", "last_term", "quadrature_change", "terms", "nodes"};
    std::ostringstream s;
    for (size_t i = 0; i < g_s.size(); ++i) s << (i ? " " : "") << format_cell(g_s[i]);
    table.rows.push_back({g_w, s.str(), f.value, f.last_term, f.quadrature_change, (long long)f.p_max, (long long)f.nodes});
  });

  // density
  std::string d_regime = "airy";
  std::vector<double> d_points;
  double d_u = 0, d_Q = 4, d_alpha = 0.5, d_q = 0.3;
  int d_M = 2;
  auto* density = app.add_subcommand("density", "k-point correlation rho_k at the given points");
  density->add_option("--regime", d_regime)->check(CLI::IsMember({"finite", "poisson", "airy"}));
  density->add_option("--points", d_points)->required()->delimiter(',');
  density->add_option("--u", d_u);
  density->add_option("--Q", d_Q);
  density->add_option("--alpha", d_alpha);
  density->add_option("--M", d_M);
  density->add_option("--q", d_q);
  density->callback([&] {
    base_meta("density");
    table.meta["params"] = {{"regime", d_regime}, {"points", d_points}};
    std::vector<int> ints;
    for (double x : d_points) {
      if (d_regime != "airy")
        require(x == std::floor(x), ErrorKind::InvalidArgument, "density: lattice regimes need integer points");
      ints.push_back(static_cast<int>(x));
    }
    double rho;
    if (d_regime == "airy") {
      table.meta["params"]["u"] = d_u;
      rho = rho_k_scaled(d_points, SoftEdgeParams(d_u));
    } else if (d_regime == "poisson") {
      table.meta["params"]["Q"] = d_Q;
      table.meta["params"]["alpha"] = d_alpha;
      rho = rho_k_poisson(ints, PoissonParams(d_Q, d_alpha));
    } else {
      table.meta["params"]["M"] = d_M;
      table.meta["params"]["q"] = d_q;
      table.meta["params"]["alpha"] = d_alpha;
      rho = rho_k(ints, FiniteModelParams(d_M, d_q, d_alpha));
    }
    table.columns = {"regime", "k", "points", "rho"};
    std::ostringstream s;
    for (size_t i = 0; i < d_points.size(); ++i) s << (i ? " " : "") << format_cell(d_points[i]);
    table.rows.push_back({d_regime, (long long)d_points.size(), s.str(), rho});
  });

  // compare
  int c_n = 2000, c_samples = 10000;
  double c_w = 0, c_ks_tol = 0.05, c_s1 = 0.0, c_s2 = -1.0;
  auto* compare = app.add_subcommand("compare", "Monte Carlo scaled lambda^(1) against the soft-edge limit");
  compare->add_option("--n", c_n);
  compare->add_option("--w", c_w);
  compare->add_option("--samples", c_samples);
  compare->add_option("--ks-tol", c_ks_tol);
  compare->add_option("--s1", c_s1);
  compare->add_option("--s2", c_s2);
  compare->callback([&] {
    base_meta("compare");
    const bool report_only = c_n < 500 || c_samples < 1000;
    table.meta["params"] = {{"n", c_n}, {"w", c_w}, {"samples", c_samples}, {"s1", c_s1}, {"s2", c_s2}};
    table.meta["tolerances"] = {{"ks", c_ks_tol}, {"joint_sigmas", 3}};
    table.meta["report_only"] = report_only;
    const ScalingSpec spec = ScalingSpec::from_w(c_n, c_w);
    const EmpiricalScaled e = empirical_scaled_cdf(spec, 2, c_samples, RngStream{seed, 0});
    const SoftEdgeParams p = SoftEdgeParams::from_w(c_w);
    LimitCdf F{p, {}};
    const double ks = ks_lattice(e, 0, std::ref(F));
    const double joint_emp = e.joint({c_s1, c_s2});
    const double joint_lim = joint_distribution_exact(ScaledWindow({c_s1, c_s2}), p).value;
    const double sigma = std::sqrt(joint_lim * (1 - joint_lim) / c_samples);
    table.columns = {"statistic", "empirical", "limit", "tolerance", "verdict"};
    auto verdict = [&](bool ok) { return std::string(report_only ? "report-only" : (ok ? "pass" : "fail")); };
    table.rows.push_back({std::string("ks"), ks, 0.0, c_ks_tol, verdict(ks < c_ks_tol)});
    table.rows.push_back({std::string("joint"), joint_emp, joint_lim, 3 * sigma,
                          verdict(std::abs(joint_emp - joint_lim) <= 3 * sigma)});
    table.meta["m"] = spec.m;
    table.meta["N"] = spec.N();
  });

  // depoissonize
  double dp_Q = 200, dp_w = 0;
  int dp_samples = 10000;
  auto* depois = app.add_subcommand("depoissonize", "fixed-(n,m) against Poissonized lambda^(1) distribution");
  depois->add_option("--Q", dp_Q);
  depois->add_option("--w", dp_w);
  depois->add_option("--samples", dp_samples);
  depois->callback([&] {
    base_meta("depoissonize");
    table.meta["params"] = {{"Q", dp_Q}, {"w", dp_w}, {"samples", dp_samples}};
    const DepoissonizationReport r = depoissonization_compare(dp_Q, dp_w, dp_samples, RngStream{seed, 0});
    table.meta["n"] = r.spec.n;
    table.meta["m"] = r.spec.m;
    table.meta["max_discrepancy"] = r.max_discrepancy;
    table.columns = {"lambda", "scaled", "fixed_cdf", "poissonized_cdf", "difference"};
    for (size_t i = 0; i < r.thresholds.size(); ++i)
      table.rows.push_back({(long long)r.thresholds[i], r.scaled[i], r.fixed[i], r.poissonized[i],
                            r.fixed[i] - r.poissonized[i]});
  });

  auto fail = [&](const std::string& kind, const std::string& message, int code) {
    json err{{"error", kind}, {"message", message}};
    if (app.get_subcommands().size() == 1) err["command"] = app.get_subcommands().front()->get_name();
    std::cerr << err.dump() << "\n";
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config-parse", e.what(), 2);
  } catch (const Error& e) {
    return fail(to_string(e.kind()), e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 4);
  }

  if (output.empty()) {
    table.write(std::cout, format);
  } else {
    std::ofstream out(output);
    if (!out) return fail("io", "cannot open " + output, 5);
    table.write(out, format);
  }
  return 0;
}
