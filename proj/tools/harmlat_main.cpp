// Command-line front end: exact measures, removal prices, the selection
// strategy, gallery builders, Monte Carlo estimators and the named
// experiments. Exit code 0 iff no hard assertion failed.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "harmlat/constructions.hpp"
#include "harmlat/experiments.hpp"
#include "harmlat/montecarlo.hpp"
#include "harmlat/report.hpp"
#include "harmlat/solver.hpp"
#include "harmlat/strategy.hpp"

using namespace harmlat;

namespace {

struct Global {
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int threads = 1;  // solves are single-threaded; accepted for compatibility
  std::string out;
  std::string format = "json";
};

void emit(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream f(g.out);
    if (!f) throw CLI::RuntimeError("cannot open output file: " + g.out, 1);
    f << text << '\n';
  }
}

SiteSet load_set(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CLI::RuntimeError("cannot open set file: " + path, 1);
  std::stringstream buf;
  buf << f.rdbuf();
  return siteset_from_json(buf.str());
}

Point parse_point(const std::string& text) {
  std::vector<std::int64_t> c;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) c.push_back(std::stoll(part));
  return Point(c);
}

Json measure_json(const MeasureVector& m) {
  Json j;
  j["support"] = Json::parse(siteset_to_json(m.support));
  j["weights"] = m.weights;
  j["method"] = m.method;
  j["error_estimate"] = m.error_estimate;
  j["converged"] = m.converged;
  return j;
}

std::string measure_csv(const MeasureVector& m) {
  std::ostringstream out;
  out << "site,weight\n";
  for (std::size_t i = 0; i < m.support.size(); ++i)
    out << '"' << m.support[i].str() << "\"," << m.weights[i] << '\n';
  return out.str();
}

MeasureMethod parse_method(const std::string& name) {
  if (name == "auto") return MeasureMethod::auto_select;
  if (name == "wired") return MeasureMethod::wired_extrapolated;
  if (name == "dense") return MeasureMethod::dense_kernel;
  if (name == "escape") return MeasureMethod::es_over_cap;
  throw CLI::RuntimeError("unknown method: " + name, 1);
}

Json chain_json(const GalleryChain& g) {
  Json j;
  j["states"] = g.state_labels;
  j["start"] = g.start_state;
  Json edges = Json::array();
  for (std::size_t i = 0; i < g.chain.n_transient; ++i)
    for (const auto& [k, p] : g.chain.trans[i])
      edges.push_back({{"from", i}, {"to", k}, {"p", p}});
  j["edges"] = edges;
  Json absorbing = Json::array();
  for (std::size_t i = 0; i < g.chain.n_transient; ++i)
    for (const auto& [t, p] : g.chain.absorb[i])
      absorbing.push_back(
          {{"from", i}, {"target", g.chain.absorbing_labels[t]}, {"p", p}});
  j["absorbing"] = absorbing;
  return j;
}

Json mc_json(const McEstimate& e) {
  Json j;
  j["value"] = e.value;
  j["stderr"] = e.stderr_value;
  j["samples"] = e.samples;
  j["seed"] = e.seed;
  j["restarts"] = e.restarts;
  j["conditioning_fraction"] = e.conditioning_fraction;
  if (e.kill_radius) j["kill_radius"] = *e.kill_radius;
  if (e.measure) {
    j["measure"] = measure_json(*e.measure);
    j["stderr_weights"] = e.stderr_weights;
  }
  return j;
}

int emit_report(const Global& g, const ExperimentReport& r) {
  for (const auto& v : r.verdicts)
    std::cerr << '[' << v.status << "] " << v.name << " (" << v.criterion
              << "): " << v.detail << '\n';
  emit(g, g.format == "csv" ? report_to_csv(r) : report_to_json(r).dump(2));
  return r.all_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice potential theory: harmonic measures, removal prices "
               "and vertex-removal experiments"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--tol", g.tol, "solver tolerance");
  app.add_option("--threads", g.threads, "worker threads (reserved)");
  app.add_option("--out", g.out, "write output to this file instead of stdout");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));

  // ---- measure ----
  auto* measure = app.add_subcommand("measure", "harmonic measure from infinity");
  std::string m_set, m_method = "auto";
  measure->add_option("--set", m_set, "SiteSet JSON file")->required();
  measure->add_option("--method", m_method, "auto|wired|dense|escape");

  // ---- rho ----
  auto* rho = app.add_subcommand("rho", "removal price rho_{A,y}(z)");
  std::string r_set, r_y = "", r_z = "";
  bool r_min = false;
  rho->add_option("--set", r_set, "SiteSet JSON file")->required();
  rho->add_option("--y", r_y, "kept vertex (default origin), e.g. \"0,0\"");
  rho->add_option("--z", r_z, "removed vertex, e.g. \"1,0\"");
  rho->add_flag("--min", r_min, "minimize over all removable z");

  // ---- strategy ----
  auto* strat = app.add_subcommand("strategy", "d=2 removal-vertex selection");
  std::string s_set;
  strat->add_option("--set", s_set, "SiteSet JSON file")->required();

  // ---- gallery ----
  auto* gallery = app.add_subcommand("gallery", "named example sets and chains");
  std::string g_name;
  std::int64_t g_m = 5, g_n = 6, g_k = 4, g_r = 40, g_size = 8, g_window = 10;
  int g_d = 2;
  bool g_star = false;
  gallery->add_option("name", g_name,
                      "tube|spiral|tetration|klein|hairs|tree|random")
      ->required();
  gallery->add_option("--m", g_m, "tube length");
  gallery->add_option("--n", g_n, "size parameter (spiral/tetration/klein/tree)");
  gallery->add_option("--k", g_k, "hair index");
  gallery->add_option("--r", g_r, "truncation radius (hairs)");
  gallery->add_option("--d", g_d, "dimension");
  gallery->add_option("--size", g_size, "random set size");
  gallery->add_option("--window", g_window, "random set window radius");
  gallery->add_flag("--star-connected", g_star, "grow a *-connected random set");

  // ---- mc ----
  auto* mc = app.add_subcommand("mc", "Monte Carlo estimators");
  mc->require_subcommand(1);
  std::size_t mc_samples = 100000;
  std::string mc_set, mc_x = "0,0";
  double mc_start_radius = 0.0, mc_kill = 0.0;
  int mc_len = 4, mc_dim = 2;
  auto* mch = mc->add_subcommand("hitting", "hitting distribution from far away");
  mch->add_option("--set", mc_set, "SiteSet JSON file")->required();
  mch->add_option("--samples", mc_samples, "sample count");
  mch->add_option("--start-radius", mc_start_radius,
                  "start sphere radius (default 8x bbox radius)");
  auto* mce = mc->add_subcommand("escape", "killed escape probability, d>=3");
  mce->add_option("--set", mc_set, "SiteSet JSON file")->required();
  mce->add_option("--x", mc_x, "start vertex in A");
  mce->add_option("--kill-radius", mc_kill, "kill radius")->required();
  mce->add_option("--samples", mc_samples, "sample count");
  auto* mcg = mc->add_subcommand("gamma", "straight-corridor traversal");
  mcg->add_option("--length", mc_len, "corridor length");
  mcg->add_option("--d", mc_dim, "dimension");
  mcg->add_option("--samples", mc_samples, "sample count");

  // ---- exp ----
  auto* exp = app.add_subcommand("exp", "named experiments with verdicts");
  exp->require_subcommand(1);
  auto* exp_rho = exp->add_subcommand("rho", "removal-price ensemble, d=2");
  RhoEnsembleParams rp;
  exp_rho->add_option("--count", rp.count, "number of random sets");
  exp_rho->add_option("--size-min", rp.size_min, "smallest set size");
  exp_rho->add_option("--size-max", rp.size_max, "largest set size");
  exp_rho->add_option("--window", rp.window, "sampling window radius");
  auto* exp_klein = exp->add_subcommand("klein", "Klein-bottle escape ratios");
  KleinRatioParams kp;
  exp_klein->add_option("--n", kp.n_list, "side parameters (even, >= 4)");
  exp_klein->add_option("--margin", kp.margin, "box margin");
  exp_klein->add_flag("--allow-large", kp.allow_large, "lift the n <= 8 cap");
  auto* exp_mn = exp->add_subcommand("mn", "least positive measure brute force");
  MnBruteforceParams mp;
  exp_mn->add_option("--n-max", mp.n_max, "largest set size (<= 5)");
  exp_mn->add_option("--window-radius", mp.window_radius, "window radius (<= 2)");
  auto* exp_rates = exp->add_subcommand("rates", "decay-rate fits");
  RateFitParams fp;
  exp_rates->add_option("--spiral-max", fp.spiral_max, "largest spiral prefix");
  exp_rates->add_option("--tetration-max-k", fp.tetration_max_k,
                        "last tetration ratio index");
  exp_rates->add_option("--tree-n", fp.tree_n, "tunnel recurrence length");
  auto* exp_battery =
      exp->add_subcommand("battery", "re-run the core identity suites");

  // let global flags (--seed, --format, ...) appear after a subcommand
  std::function<void(CLI::App*)> allow_globals = [&](CLI::App* cmd) {
    for (auto* sub : cmd->get_subcommands({})) {
      sub->fallthrough();
      allow_globals(sub);
    }
  };
  allow_globals(&app);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*measure) {
      auto m = harmonic_measure_infinity(load_set(m_set), g.tol,
                                         parse_method(m_method));
      emit(g, g.format == "csv" ? measure_csv(m) : measure_json(m).dump(2));
      return 0;
    }
    if (*rho) {
      SiteSet a = load_set(r_set);
      Point y = r_y.empty() ? Point::origin(a.dim()) : parse_point(r_y);
      Json j;
      if (r_min) {
        auto mn = min_removal_price(a, y, g.tol);
        j["z_star"] = mn.z_star.str();
        j["rho_min"] = mn.rho_min;
      } else {
        if (r_z.empty())
          throw CLI::RuntimeError("need --z or --min", 1);
        j["rho"] = removal_price(a, y, parse_point(r_z), g.tol);
      }
      emit(g, j.dump(2));
      return 0;
    }
    if (*strat) {
      SiteSet a = load_set(s_set);
      RemovalDecision dec = select_removal_vertex(a);
      Json j;
      j["z_dagger"] = dec.z_dagger.str();
      j["case"] = to_string(dec.case_label);
      j["type"] = to_string(dec.type_tag);
      if (dec.witness) j["witness"] = dec.witness->str();
      if (dec.cluster_id) j["cluster"] = *dec.cluster_id;
      emit(g, j.dump(2));
      return 0;
    }
    if (*gallery) {
      if (g_name == "tube") {
        emit(g, siteset_to_json(tube_set(g_m).set));
      } else if (g_name == "spiral") {
        emit(g, siteset_to_json(spiral_set(std::size_t(g_n))));
      } else if (g_name == "tetration") {
        emit(g, siteset_to_json(tetration_set(int(g_n))));
      } else if (g_name == "klein") {
        emit(g, siteset_to_json(klein_bottle(g_n, g_d == 2 ? 3 : g_d).set));
      } else if (g_name == "hairs") {
        emit(g, chain_json(hairs_chain(int(g_k), int(g_r))).dump(2));
      } else if (g_name == "tree") {
        emit(g, chain_json(tree_tunnel_chain(int(g_n))).dump(2));
      } else if (g_name == "random") {
        RandomSiteParams p;
        p.d = g_d;
        p.size = std::size_t(g_size);
        p.window = g_window;
        p.star_connected = g_star;
        emit(g, siteset_to_json(random_site_set(p, g.seed)));
      } else {
        throw CLI::RuntimeError("unknown gallery name: " + g_name, 1);
      }
      return 0;
    }
    if (*mc) {
      McEstimate e;
      if (*mch) {
        SiteSet a = load_set(mc_set);
        double r0 = mc_start_radius;
        if (r0 <= 0.0) r0 = 8.0 * double(a.bbox().linf_radius() + 1);
        e = mc_hitting_far(a, r0, mc_samples, g.seed);
      } else if (*mce) {
        e = mc_escape(load_set(mc_set), parse_point(mc_x), mc_kill, mc_samples,
                      g.seed);
      } else {
        Path eta;
        eta.kind = Adjacency::plain;
        for (int i = 0; i <= mc_len; ++i) {
          Point p = Point::origin(mc_dim);
          p.c[0] = i;
          eta.vertices.push_back(p);
        }
        e = mc_path_traversal(eta, mc_samples, g.seed);
      }
      emit(g, mc_json(e).dump(2));
      return 0;
    }
    if (*exp) {
      if (*exp_rho) return emit_report(g, exp_rho_ensemble(rp, g.seed));
      if (*exp_klein) return emit_report(g, exp_klein_ratio(kp));
      if (*exp_mn) return emit_report(g, exp_mn_bruteforce(mp));
      if (*exp_rates) return emit_report(g, exp_rate_fits(fp));
      if (*exp_battery) return emit_report(g, exp_lemma_battery(g.seed));
    }
  } catch (const CLI::RuntimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.get_exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
