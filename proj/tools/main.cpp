// Command-line front end: runs named experiments and writes JSON/CSV
// reports. Exit codes: 0 all checks pass, 1 a numerical check failed,
// 2 usage or configuration error.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cubexp/arcs.hpp"
#include "cubexp/experiments.hpp"
#include "cubexp/parallel.hpp"
#include "cubexp/report.hpp"

namespace {

using cubexp::experiments::Config;
using cubexp::report::RunReport;

// Flat key = value configuration file; CLI flags override file values.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw std::runtime_error("config: expected key = value, got: " + line);
      }
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<double> parse_delta_grid(const std::string& text) {
  // "lo:hi:step" or comma list
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string lo, hi, step;
    std::getline(ss, lo, ':');
    std::getline(ss, hi, ':');
    std::getline(ss, step, ':');
    std::vector<double> out;
    const double l = std::stod(lo), h = std::stod(hi), s = std::stod(step);
    if (s <= 0.0) throw std::runtime_error("delta-grid step must be positive");
    for (int i = 0; l + i * s <= h + 1e-12; ++i) {
      out.push_back(std::min(l + i * s, 1.0));
    }
    return out;
  }
  return parse_grid(text);
}

int finish(const RunReport& rep, const Config& cfg, const std::string& stem,
           bool quiet) {
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    rep.write_json(cfg.out_dir + "/" + stem + ".json");
  }
  if (!quiet) std::cout << rep.to_json();
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exponential-sum and sumset-expansion experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path, out_dir, p_grid_text, w_text = "1";
  int threads = 0;
  std::uint64_t seed = 1;
  double epsilon = 0.1, tolerance_scale = 1.0;
  bool quiet = false;
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--out", out_dir, "directory for JSON/CSV reports");
  app.add_option("--threads", threads, "worker cap (0: hardware)");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--p-grid", p_grid_text, "comma-separated P values");
  app.add_option("--epsilon", epsilon, "exponent in P^{1+eps} floors");
  app.add_option("--tolerance-scale", tolerance_scale, "threshold multiplier");
  app.add_flag("--quiet", quiet, "suppress stdout report");

  // sum-eval
  auto* sum_cmd = app.add_subcommand("sum-eval", "evaluate one sum or integral");
  cubexp::experiments::SumEvalRequest req;
  sum_cmd->add_option("--sum", req.sum,
                      "S U Ustar W T kappa local-series f g G Fw Fw-direct I J K")
      ->required();
  sum_cmd->add_option("--q", req.q, "modulus");
  sum_cmd->add_option("--a", req.a, "first coefficient");
  sum_cmd->add_option("--a2", req.a2, "second coefficient");
  sum_cmd->add_option("--b", req.b, "linear twist");
  sum_cmd->add_option("--alpha", req.alpha, "phase alpha (or alpha1)");
  sum_cmd->add_option("--alpha2", req.alpha2, "phase alpha2");
  sum_cmd->add_option("--beta1", req.beta1, "integral phase beta1");
  sum_cmd->add_option("--beta2", req.beta2, "integral phase beta2");
  sum_cmd->add_option("--x", req.x, "range bound X");
  sum_cmd->add_option("--y", req.y, "range bound Y");
  sum_cmd->add_option("--p", req.p, "main parameter P");
  sum_cmd->add_option("--w", req.w, "squarefree w or 'primorial'");

  // arc-classify
  auto* arc_cmd = app.add_subcommand("arc-classify", "classify alpha into arcs");
  std::string arc_alpha = "0";
  double arc_p = 400.0;
  arc_cmd->add_option("--alpha", arc_alpha, "alpha as double or 'n/m'")->required();
  arc_cmd->add_option("--p", arc_p, "main parameter P");
  arc_cmd->add_option("--w", w_text, "squarefree w or 'primorial'");

  auto* ident_cmd = app.add_subcommand("verify-identities", "exact identity suite");
  auto* env_cmd =
      app.add_subcommand("verify-envelopes", "vanishing and envelope suites");
  auto* major_cmd =
      app.add_subcommand("major-approx", "major-arc residual and theorem reports");

  // expander
  auto* exp_cmd = app.add_subcommand("expander", "sumset-expansion experiment");
  cubexp::experiments::ExpanderSpec spec;
  exp_cmd->add_option("--n", spec.N, "bound N");
  exp_cmd->add_option("--kind", spec.kind, "random | two-cubes | kth:<k> | explicit");
  exp_cmd->add_option("--delta", spec.delta, "density for random sets");
  std::string elements_text;
  exp_cmd->add_option("--elements", elements_text, "comma list for kind=explicit");

  // bound-table
  auto* bt_cmd = app.add_subcommand("bound-table", "density lower-bound table");
  std::string delta_grid = "0:1:0.05";
  bt_cmd->add_option("--delta-grid", delta_grid, "lo:hi:step or comma list");

  try {
    app.parse(argc, argv);

    // config file values act as defaults for flags not set on the line
    if (!config_path.empty()) {
      const auto kv = read_config_file(config_path);
      const std::map<std::string, int> known{
          {"out", 0},        {"threads", 0}, {"seed", 0},  {"p-grid", 0},
          {"epsilon", 0},    {"tolerance-scale", 0},       {"n", 0},
          {"kind", 0},       {"delta", 0},   {"delta-grid", 0},
          {"w", 0},          {"alpha", 0}};
      for (const auto& [k, v] : kv) {
        if (known.find(k) == known.end()) {
          std::cerr << "config: unknown key '" << k << "'\n";
          return 2;
        }
      }
      auto has_flag = [&](const char* name) {
        return app.count(name) > 0 || sum_cmd->count(name) > 0 ||
               arc_cmd->count(name) > 0 || exp_cmd->count(name) > 0 ||
               bt_cmd->count(name) > 0;
      };
      auto value = [&](const char* key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
      };
      if (const auto* v = value("out"); v && !has_flag("--out")) out_dir = *v;
      if (const auto* v = value("threads"); v && !has_flag("--threads"))
        threads = std::stoi(*v);
      if (const auto* v = value("seed"); v && !has_flag("--seed"))
        seed = std::stoull(*v);
      if (const auto* v = value("p-grid"); v && !has_flag("--p-grid"))
        p_grid_text = *v;
      if (const auto* v = value("epsilon"); v && !has_flag("--epsilon"))
        epsilon = std::stod(*v);
      if (const auto* v = value("tolerance-scale"); v && !has_flag("--tolerance-scale"))
        tolerance_scale = std::stod(*v);
      if (const auto* v = value("n"); v && !exp_cmd->count("--n"))
        spec.N = std::stoull(*v);
      if (const auto* v = value("kind"); v && !exp_cmd->count("--kind")) spec.kind = *v;
      if (const auto* v = value("delta"); v && !exp_cmd->count("--delta"))
        spec.delta = std::stod(*v);
      if (const auto* v = value("delta-grid"); v && !bt_cmd->count("--delta-grid"))
        delta_grid = *v;
      if (const auto* v = value("w"); v && !arc_cmd->count("--w")) w_text = *v;
      if (const auto* v = value("alpha"); v && !arc_cmd->count("--alpha"))
        arc_alpha = *v;
    }

    Config cfg;
    cfg.out_dir = out_dir;
    cfg.threads = threads;
    cfg.seed = seed;
    cfg.epsilon = epsilon;
    cfg.tolerance_scale = tolerance_scale;
    if (!p_grid_text.empty()) cfg.p_grid = parse_grid(p_grid_text);
    if (threads > 0) cubexp::set_thread_limit(threads);
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    if (sum_cmd->parsed()) {
      req.threads = threads;
      const auto cells = cubexp::experiments::sum_eval(req);
      std::string header, row;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
          header += ',';
          row += ',';
        }
        header += cells[i].first;
        row += cells[i].second;
      }
      std::cout << header << "\r\n" << row << "\r\n";
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(out_dir + "/sum_eval.csv", std::ios::binary);
        out << header << "\r\n" << row << "\r\n";
      }
      return 0;
    }

    if (arc_cmd->parsed()) {
      const auto w = cubexp::experiments::parse_w(w_text);
      const auto wm =
          w.primorial
              ? cubexp::nt::SquarefreeModulus::primorial(std::pow(arc_p, 0.25))
              : cubexp::nt::SquarefreeModulus::integer(w.value);
      cubexp::arcs::ArcLabel label;
      const auto slash = arc_alpha.find('/');
      if (slash != std::string::npos) {
        const auto num = std::stoll(arc_alpha.substr(0, slash));
        const auto den = std::stoull(arc_alpha.substr(slash + 1));
        label =
            cubexp::arcs::classify(cubexp::arcs::Rational::make(num, den), arc_p, wm);
      } else {
        label = cubexp::arcs::classify(std::stod(arc_alpha), arc_p, wm);
      }
      RunReport rep("arc-classify");
      rep.add_config("alpha", arc_alpha);
      rep.add_config("P", arc_p);
      rep.add_config("w", w_text);
      cubexp::report::CheckRecord rec;
      rec.name = label.kind == cubexp::arcs::ArcKind::Minor    ? "arc.minor"
                 : label.kind == cubexp::arcs::ArcKind::MajorN ? "arc.major_N"
                                                               : "arc.major_M";
      rec.observed = label.upsilon;
      rec.threshold = 1.0;
      rec.pass = true;
      if (label.approximant) {
        rec.note = "q=" + std::to_string(label.approximant->q) +
                   " a=" + std::to_string(label.approximant->a) + " beta=" +
                   cubexp::report::format_double(label.approximant->beta) +
                   " xi=" + cubexp::report::format_double(label.xi) +
                   (label.boundary_ambiguous ? " boundary-ambiguous" : "");
      }
      rep.add_check(rec);
      return finish(rep, cfg, "arc_classify", quiet);
    }

    if (ident_cmd->parsed()) {
      return finish(cubexp::experiments::verify_identities(cfg), cfg,
                    "verify_identities", quiet);
    }
    if (env_cmd->parsed()) {
      const auto vanish = cubexp::experiments::verify_vanishing(cfg);
      const auto envelopes = cubexp::experiments::verify_envelopes(cfg);
      RunReport rep("verify-envelopes");
      rep.add_config("seed", seed);
      rep.add_config("epsilon", epsilon);
      rep.add_config("tolerance_scale", tolerance_scale);
      for (const auto& c : vanish.checks()) rep.add_check(c);
      for (const auto& c : envelopes.checks()) rep.add_check(c);
      return finish(rep, cfg, "verify_envelopes", quiet);
    }
    if (major_cmd->parsed()) {
      const auto resid = cubexp::experiments::major_arc_residual(cfg);
      const auto thm = cubexp::experiments::theorem_envelope_report(cfg);
      RunReport rep("major-approx");
      rep.add_config("seed", seed);
      rep.add_config("epsilon", epsilon);
      rep.add_config("p_grid", p_grid_text.empty() ? "1000,4000,16000" : p_grid_text);
      for (const auto& c : resid.checks()) rep.add_check(c);
      for (const auto& c : thm.checks()) rep.add_check(c);
      return finish(rep, cfg, "major_approx", quiet);
    }
    if (exp_cmd->parsed()) {
      if (!elements_text.empty()) {
        for (double v : parse_grid(elements_text)) {
          spec.elements.push_back(static_cast<std::uint64_t>(v));
        }
      }
      return finish(cubexp::experiments::expander_experiment(spec, cfg), cfg,
                    "expander", quiet);
    }
    if (bt_cmd->parsed()) {
      return finish(
          cubexp::experiments::bound_table_grid(parse_delta_grid(delta_grid), cfg),
          cfg, "bound_table", quiet);
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
