// SPDX-License-Identifier: Apache-2.0
//
// pssml - maximum-likelihood PSS detection and integer frequency offset recovery
// Copyright (C) 2026 The pssml authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pssml/channel.hpp"
#include "pssml/detector.hpp"
#include "pssml/harness.hpp"
#include "pssml/rankbasis.hpp"
#include "pssml/simulator.hpp"
#include "pssml/tap_profile.hpp"
#include "pssml/window_io.hpp"
#include "pssml/zc.hpp"

namespace pssml::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(trim(s), &used);
  } catch (const std::exception&) {
    throw UsageError("not an integer: '" + s + "'");
  }
  if (used != trim(s).size()) throw UsageError("not an integer: '" + s + "'");
  return v;
}

double to_double(const std::string& s) {
  const std::string t = trim(s);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != t.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

// Output goes to --out when given, otherwise to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DomainError("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct ScenarioFlags {
  std::string snr = "8";
  int theta = kDefaultThetaMax;
  int theta_max = kDefaultThetaMax;
  int n_q = kDefaultWindowLength;
  std::string profile = "etu";
  std::string ifo = "-3..3";

  void add_to(CLI::App* cmd, bool with_snr, bool with_theta) {
    if (with_snr) cmd->add_option("--snr", snr, "SNR in dB per PSS bin ('inf' = noiseless)");
    if (with_theta) cmd->add_option("--theta", theta, "residual timing error in samples");
    cmd->add_option("--theta-max", theta_max, "largest timing error covered by the model");
    cmd->add_option("--nq", n_q, "OFDM symbols per observation window");
    cmd->add_option("--profile", profile, "tap profile: etu, eva, epa or a file of 'delay_ns power_db' lines");
    cmd->add_option("--ifo", ifo, "IFO search set, 'a..b' or comma list");
  }

  SimScenario scenario() const {
    SimScenario s;
    s.snr_db = to_double(snr);
    s.theta = theta;
    s.theta_max = theta_max;
    s.n_q = n_q;
    s.profile = resolve_tap_profile(profile);
    s.ifo_set = parse_int_list(ifo);
    return s;
  }
};

std::vector<DetectorSpec> parse_kinds(const std::string& kinds, int p) {
  std::vector<DetectorSpec> specs;
  for (const std::string& k : split(kinds, ',')) {
    DetectorSpec spec = parse_detector_spec(trim(k));
    if (trim(k).find(':') == std::string::npos) spec.p = p;
    specs.push_back(spec);
  }
  if (specs.empty()) throw UsageError("no detector kinds given");
  return specs;
}

nlohmann::json scenario_json(const SimScenario& s) {
  nlohmann::json j;
  j["snr_db"] = std::isinf(s.snr_db) ? nlohmann::json("inf") : nlohmann::json(s.snr_db);
  j["theta"] = s.theta;
  j["theta_max"] = s.theta_max;
  j["n_q"] = s.n_q;
  j["profile"] = s.profile.name;
  j["dft_size"] = s.dft_size;
  j["sample_rate"] = s.sample_rate;
  j["rolloff"] = s.pulse.rolloff;
  j["pulse_support"] = s.pulse.support;
  j["ifo_set"] = s.ifo_set;
  j["root"] = s.root ? nlohmann::json(s.root->value()) : nlohmann::json(nullptr);
  j["nu"] = s.nu ? nlohmann::json(*s.nu) : nlohmann::json(nullptr);
  j["q"] = s.q ? nlohmann::json(*s.q) : nlohmann::json(nullptr);
  return j;
}

void print_sweep(const SweepConfig& cfg, const std::string& out_path, std::ostream& out) {
  const std::vector<ErrorRates> rates = run_sweep(cfg);
  Sink sink(out_path, out);
  write_sweep_csv(sink.get(), cfg, rates);
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  const std::string t = trim(text);
  if (const auto dots = t.find(".."); dots != std::string::npos) {
    const int lo = to_int(t.substr(0, dots));
    const int hi = to_int(t.substr(dots + 2));
    if (hi < lo) throw UsageError("empty range '" + text + "'");
    std::vector<int> out;
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::vector<int> out;
  for (const std::string& part : split(t, ',')) out.push_back(to_int(part));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.find("..") != std::string::npos) {
    std::vector<double> out;
    for (int v : parse_int_list(t)) out.push_back(v);
    return out;
  }
  std::vector<double> out;
  for (const std::string& part : split(t, ',')) out.push_back(to_double(part));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pssml: ML detection of the LTE primary synchronization signal", "pssml"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand help for every subcommand");

  // zc
  int zc_root = 25;
  auto* zc = app.add_subcommand("zc", "dump the PSS for one root as CSV n,re,im");
  zc->add_option("--root", zc_root, "ZC root index (25, 29 or 34)")->required();

  // simulate
  ScenarioFlags sim_flags;
  std::optional<int> sim_nu;
  std::optional<int> sim_root;
  std::optional<int> sim_q;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "synthesize one observation window (k,n,re,im CSV + .json sidecar)");
  sim_flags.add_to(sim, true, true);
  sim->add_option("--nu", sim_nu, "true IFO (default: random from the IFO set)");
  sim->add_option("--root", sim_root, "true ZC root (default: random)");
  sim->add_option("--q", sim_q, "true PSS symbol index, 1-based (default: random)");
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--out", sim_out, "window CSV path; metadata goes to <out>.json")->required();

  // detect
  std::string det_window;
  std::string det_kind = "ammse";
  int det_p = 5;
  int det_leq = kDefaultAmmseCirLength;
  bool det_table = false;
  std::string det_out;
  ScenarioFlags det_flags;
  auto* det = app.add_subcommand("detect", "estimate (q, u, nu) from a window file");
  det->add_option("--window", det_window, "window CSV (k,n,re,im)")->required();
  det->add_option("--kind", det_kind, "mmse, ammse, prr, pcrr, cfdc or dd");
  det->add_option("--p", det_p, "basis rank P");
  det->add_option("--l-eq", det_leq, "AMMSE design CIR length");
  det->add_flag("--table", det_table, "also print the full metric table q,u,nu,metric");
  det->add_option("--out", det_out, "write output here instead of stdout");
  det_flags.add_to(det, false, false);

  // basis-mse
  std::string mse_kind = "all";
  std::string mse_range = "1..12";
  int mse_leq = kDefaultAmmseCirLength;
  int mse_theta_max = kDefaultThetaMax;
  std::string mse_profile = "etu";
  std::string mse_out;
  auto* mse = app.add_subcommand("basis-mse", "MSE(B) vs P for the reduced-rank bases (CSV kind,P,mse)");
  mse->add_option("--kind", mse_kind, "mmse, ammse, prr, pcrr or all");
  mse->add_option("--p-range", mse_range, "ranks, 'a..b' or comma list");
  mse->add_option("--l-eq", mse_leq, "AMMSE design CIR length");
  mse->add_option("--theta-max", mse_theta_max, "uniform timing-error prior on [0, theta_max]");
  mse->add_option("--profile", mse_profile, "tap profile: etu, eva, epa or a file");
  mse->add_option("--out", mse_out, "write CSV here instead of stdout");

  // sweeps
  struct SweepFlags {
    ScenarioFlags scenario;
    std::string values;
    std::string kinds;
    int p = 5;
    long long trials = 2000;
    std::uint64_t seed = 1;
    int jobs = 0;
    int l_eq = kDefaultAmmseCirLength;
    std::string out;
    std::string config;
  };
  SweepFlags sw_snr, sw_theta, sw_p;
  sw_snr.values = "0,2,4,6,8,10";
  sw_snr.kinds = "ammse,prr,pcrr,cfdc,dd";
  sw_theta.values = "0,10,20,30,40";
  sw_theta.kinds = "ammse,prr,pcrr,cfdc,dd";
  sw_p.values = "1..12";
  sw_p.kinds = "ammse,prr,pcrr";
  auto add_sweep = [&](const char* name, const char* help, SweepFlags& f, SweepAxis axis) {
    auto* cmd = app.add_subcommand(name, help);
    f.scenario.add_to(cmd, axis != SweepAxis::Snr, axis != SweepAxis::Theta);
    switch (axis) {
      case SweepAxis::Snr: cmd->add_option("--snr", f.values, "SNR points in dB"); break;
      case SweepAxis::Theta: cmd->add_option("--theta", f.values, "timing-error points"); break;
      case SweepAxis::P: break;
    }
    if (axis == SweepAxis::P) {
      cmd->add_option("--p", f.values, "ranks, 'a..b' or comma list");
    } else {
      cmd->add_option("--p", f.p, "basis rank for reduced-rank detectors");
    }
    cmd->add_option("--kinds", f.kinds, "comma list of detectors (kind or kind:P)");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials per point");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--jobs", f.jobs, "worker threads (0 = all cores)");
    cmd->add_option("--l-eq", f.l_eq, "AMMSE design CIR length");
    cmd->add_option("--out", f.out, "write CSV here instead of stdout");
    cmd->add_option("--config", f.config, "JSON sweep description (replaces the scenario flags)");
    return cmd;
  };
  auto* snr_cmd = add_sweep("sweep-snr", "error rates vs SNR", sw_snr, SweepAxis::Snr);
  auto* theta_cmd = add_sweep("sweep-theta", "error rates vs timing error", sw_theta, SweepAxis::Theta);
  auto* p_cmd = add_sweep("sweep-p", "error rates vs basis rank", sw_p, SweepAxis::P);

  // flops
  std::string fl_kind = "ammse";
  int fl_nnu = 7;
  int fl_p = 5;
  auto* fl = app.add_subcommand("flops", "operation count per OFDM symbol");
  fl->add_option("--kind", fl_kind, "ammse, mmse, prr, pcrr, cfdc or dd");
  fl->add_option("--nnu", fl_nnu, "number of IFO hypotheses");
  fl->add_option("--p", fl_p, "basis rank");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (zc->parsed()) {
      const PssSequence seq = generate_pss(ZcRoot::from_value(zc_root));
      out << std::setprecision(17) << "n,re,im\n";
      for (int n = -kPssHalfWidth; n <= kPssHalfWidth; ++n) {
        out << n << ',' << seq.at(n).real() << ',' << seq.at(n).imag() << '\n';
      }
    } else if (sim->parsed()) {
      SimScenario s = sim_flags.scenario();
      s.nu = sim_nu;
      s.q = sim_q;
      if (sim_root) s.root = ZcRoot::from_value(*sim_root);
      Rng rng(sim_seed);
      const SimulatedWindow w = simulate_window(s, rng);
      {
        Sink sink(sim_out, out);
        write_window_csv(sink.get(), w.window);
      }
      nlohmann::json meta;
      meta["scenario"] = scenario_json(s);
      meta["seed"] = sim_seed;
      meta["truth"] = {{"q", w.truth.q}, {"u", w.truth.u.value()}, {"nu", w.truth.nu}};
      meta["snr_definition"] = "E|H(n)a_u(n)|^2/sigma_w^2 per PSS bin; data rows sigma_k^2=1+sigma_w^2";
      meta["window_hash"] = window_hash(w.window);
      Sink side(sim_out + ".json", out);
      side.get() << meta.dump(2) << '\n';
    } else if (det->parsed()) {
      std::ifstream in(det_window);
      if (!in) throw DomainError("cannot open window file " + det_window);
      const SchWindow window = read_window_csv(in);
      SimScenario s = det_flags.scenario();
      s.n_q = window.n_q();
      const DetectorConfig config =
          make_detector({parse_detector_kind(det_kind), det_p}, s, BasisDesign{det_leq});
      const DetectionResult r = detect(window, config, det_table);
      Sink sink(det_out, out);
      std::ostream& o = sink.get();
      o << std::setprecision(17) << "q,u,nu,metric\n"
        << r.estimate.q << ',' << r.estimate.u.value() << ',' << r.estimate.nu << ',' << r.metric_value << '\n';
      if (det_table) {
        o << "# metric table\nq,u,nu,metric\n";
        for (const MetricEntry& e : r.metric_table) {
          o << e.hypothesis.q << ',' << e.hypothesis.u.value() << ',' << e.hypothesis.nu << ',' << e.metric << '\n';
        }
      }
    } else if (mse->parsed()) {
      BasisMseSetup setup;
      setup.profile = resolve_tap_profile(mse_profile);
      setup.theta_max = mse_theta_max;
      setup.design.ammse_cir_length = mse_leq;
      std::vector<BasisKind> kinds;
      if (mse_kind == "all") {
        kinds = {BasisKind::Mmse, BasisKind::Ammse, BasisKind::Prr, BasisKind::Pcrr};
      } else {
        kinds = {parse_basis_kind(mse_kind)};
      }
      const std::vector<int> ps = parse_int_list(mse_range);
      Sink sink(mse_out, out);
      std::ostream& o = sink.get();
      o << "# profile=" << setup.profile.name << " theta_max=" << setup.theta_max
        << " theta_prior=uniform ammse_l_eq=" << setup.design.ammse_cir_length << '\n'
        << std::setprecision(12) << "kind,P,mse\n";
      for (BasisKind k : kinds) {
        for (int p : ps) {
          if (k == BasisKind::Prr && p > kMaxPrrRank) continue;
          for (const BasisMsePoint& pt : basis_mse_curve(k, p, p, setup)) {
            o << to_string(pt.kind) << ',' << pt.p << ',' << pt.mse << '\n';
          }
        }
      }
    } else if (fl->parsed()) {
      out << flops_estimate(parse_detector_kind(fl_kind), fl_nnu, fl_p) << '\n';
    } else {
      const std::pair<CLI::App*, std::pair<SweepFlags*, SweepAxis>> sweeps[] = {
          {snr_cmd, {&sw_snr, SweepAxis::Snr}},
          {theta_cmd, {&sw_theta, SweepAxis::Theta}},
          {p_cmd, {&sw_p, SweepAxis::P}}};
      for (const auto& [cmd, entry] : sweeps) {
        if (!cmd->parsed()) continue;
        SweepFlags& f = *entry.first;
        SweepConfig cfg;
        if (!f.config.empty()) {
          std::ifstream in(f.config);
          if (!in) throw DomainError("cannot open sweep config " + f.config);
          std::stringstream text;
          text << in.rdbuf();
          cfg = parse_sweep_config(text.str());
          if (cfg.axis != entry.second) {
            throw UsageError("config axis '" + std::string(to_string(cfg.axis)) + "' does not match " +
                             cmd->get_name());
          }
          if (cmd->count("--jobs") > 0) cfg.jobs = f.jobs;
        } else {
          cfg.axis = entry.second;
          cfg.values = parse_double_list(f.values);
          cfg.trials = f.trials;
          cfg.master_seed = f.seed;
          cfg.jobs = f.jobs;
          cfg.base = f.scenario.scenario();
          cfg.design.ammse_cir_length = f.l_eq;
          cfg.detectors = parse_kinds(f.kinds, f.p);
        }
        print_sweep(cfg, f.out, out);
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: domain: " << e.what() << '\n';
    return kExitFailure;
  } catch (const NumericError& e) {
    err << "error: numeric: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace pssml::cli
