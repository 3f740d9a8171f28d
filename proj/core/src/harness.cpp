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

#include "pssml/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace pssml {
namespace {

using DetectorList = std::vector<std::pair<DetectorSpec, DetectorConfig>>;

DetectorList build_detectors(const std::vector<DetectorSpec>& specs, const SimScenario& scenario,
                             const BasisDesign& design) {
  DetectorList out;
  out.reserve(specs.size());
  for (const auto& spec : specs) out.emplace_back(spec, make_detector(spec, scenario, design));
  return out;
}

SimScenario scenario_at(const SweepConfig& config, double value) {
  SimScenario s = config.base;
  switch (config.axis) {
    case SweepAxis::Snr: s.snr_db = value; break;
    case SweepAxis::Theta: s.theta = static_cast<int>(std::lround(value)); break;
    case SweepAxis::P: break;
  }
  return s;
}

std::vector<DetectorSpec> specs_at(const SweepConfig& config, double value) {
  std::vector<DetectorSpec> specs = config.detectors;
  if (config.axis == SweepAxis::P) {
    for (auto& d : specs) d.p = static_cast<int>(std::lround(value));
  }
  return specs;
}

int effective_p(const DetectorSpec& spec) {
  if (spec.kind == DetectorKind::Cfdc) return 1;
  if (spec.kind == DetectorKind::Dd) return 0;
  return spec.p;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

DetectorConfig make_detector(const DetectorSpec& spec, const SimScenario& scenario,
                             const BasisDesign& design) {
  DetectorConfig config;
  config.kind = spec.kind;
  config.ifo_set = scenario.ifo_set;
  switch (spec.kind) {
    case DetectorKind::Cfdc:
    case DetectorKind::Dd:
      break;
    case DetectorKind::Ammse:
      config.basis = std::make_shared<const ExpansionBasis>(
          ammse_basis(spec.p, design.ammse_cir_length, scenario.dft_size));
      break;
    case DetectorKind::Prr:
      config.basis = std::make_shared<const ExpansionBasis>(prr_basis(spec.p));
      break;
    case DetectorKind::Pcrr:
      config.basis = std::make_shared<const ExpansionBasis>(pcrr_basis(spec.p));
      break;
    case DetectorKind::Mmse: {
      const ChannelModel model(scenario.profile, scenario.pulse, scenario.sample_rate);
      const CirCovariance cov =
          build_cir_covariance(model, ThetaPrior::uniform(scenario.theta_max), scenario.theta_max);
      const FourierMatrix F = make_fourier_matrix(model.length() + scenario.theta_max, scenario.dft_size);
      config.basis = std::make_shared<const ExpansionBasis>(mmse_basis(cov, F, spec.p));
      break;
    }
  }
  config.validate();
  return config;
}

DetectorSpec parse_detector_spec(std::string_view text) {
  DetectorSpec spec;
  const auto colon = text.find(':');
  spec.kind = parse_detector_kind(text.substr(0, colon));
  if (colon != std::string_view::npos) {
    const std::string digits(text.substr(colon + 1));
    std::size_t used = 0;
    int p = 0;
    try {
      p = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != digits.size()) {
      throw DomainError("bad detector rank in '" + std::string(text) + "'");
    }
    spec.p = p;
  }
  return spec;
}

std::string label_of(const DetectorSpec& spec) {
  std::string label(to_string(spec.kind));
  if (needs_basis(spec.kind)) label += ":" + std::to_string(spec.p);
  return label;
}

std::uint64_t window_hash(const SchWindow& window) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const SchRow& row : window.rows()) {
    for (const cplx& v : row) {
      double parts[2] = {v.real(), v.imag()};
      unsigned char bytes[sizeof parts];
      std::memcpy(bytes, parts, sizeof parts);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

std::vector<TrialOutcome> run_trial(const Simulator& simulator, const DetectorList& detectors,
                                    std::uint64_t master_seed, std::uint64_t trial_index) {
  Rng rng = trial_rng(master_seed, trial_index);
  const SimulatedWindow sim = simulator.simulate(rng);
  const std::uint64_t hash = window_hash(sim.window);
  std::vector<TrialOutcome> out;
  out.reserve(detectors.size());
  for (const auto& [spec, config] : detectors) {
    out.push_back(TrialOutcome{spec, sim.truth, detect(sim.window, config).estimate, hash});
  }
  return out;
}

std::vector<TrialOutcome> run_trial(const SimScenario& scenario, const std::vector<DetectorSpec>& detectors,
                                    std::uint64_t master_seed, std::uint64_t trial_index) {
  return run_trial(Simulator(scenario), build_detectors(detectors, scenario, {}), master_seed, trial_index);
}

Interval wilson_interval(long long k, long long n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double ErrorRates::ci95() const {
  const Interval ci = ci_f();
  return (ci.hi - ci.lo) / 2.0;
}

std::string_view to_string(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::Snr: return "snr";
    case SweepAxis::Theta: return "theta";
    case SweepAxis::P: return "p";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  if (text == "snr") return SweepAxis::Snr;
  if (text == "theta") return SweepAxis::Theta;
  if (text == "p") return SweepAxis::P;
  throw DomainError("unknown sweep axis '" + std::string(text) + "'");
}

void SweepConfig::validate() const {
  if (trials < 1) throw DomainError("sweep needs at least one trial");
  if (values.empty()) throw DomainError("sweep needs at least one axis value");
  if (detectors.empty()) throw DomainError("sweep needs at least one detector");
  for (double v : values) {
    if (axis != SweepAxis::Snr && (v != std::floor(v) || std::isinf(v))) {
      throw DomainError("theta and P sweep values must be integers");
    }
    (void)scenario_at(*this, v);
  }
  base.validate();
}

std::vector<ErrorRates> run_sweep(const SweepConfig& config) {
  config.validate();
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto jobs = static_cast<unsigned>(config.jobs > 0 ? config.jobs : static_cast<int>(hw));
  const auto trials = static_cast<std::size_t>(config.trials);

  std::vector<ErrorRates> records;
  std::shared_ptr<const DetectorList> shared_detectors;
  for (double value : config.values) {
    const SimScenario scenario = scenario_at(config, value);
    scenario.validate();
    const Simulator simulator(scenario);
    // Bases depend on the scenario only through P (and MMSE's profile), so
    // they are reused across SNR/theta points.
    if (!shared_detectors || config.axis == SweepAxis::P ||
        std::any_of(config.detectors.begin(), config.detectors.end(),
                    [](const DetectorSpec& d) { return d.kind == DetectorKind::Mmse; })) {
      shared_detectors = std::make_shared<const DetectorList>(
          build_detectors(specs_at(config, value), scenario, config.design));
    }
    const DetectorList& detectors = *shared_detectors;

    std::vector<std::vector<TrialOutcome>> outcomes(trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::size_t t = next++; t < trials; t = next++) {
        try {
          outcomes[t] = run_trial(simulator, detectors, config.master_seed, t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = trials;
        }
      }
    };
    const unsigned n_threads = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(trials, 1)));
    if (n_threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t d = 0; d < detectors.size(); ++d) {
      ErrorRates r;
      r.axis = config.axis;
      r.axis_value = value;
      r.detector = detectors[d].first;
      r.trials = config.trials;
      r.seed = config.master_seed;
      for (const auto& trial : outcomes) {
        const TrialOutcome& o = trial[d];
        r.errors_q += o.q_error();
        r.errors_u += o.u_error();
        r.errors_nu += o.nu_error();
        r.failures += o.failure();
      }
      records.push_back(r);
    }
  }
  return records;
}

void write_sweep_csv(std::ostream& out, const SweepConfig& config, const std::vector<ErrorRates>& rates) {
  const SimScenario& s = config.base;
  auto opt = [](const auto& v, auto fmt) { return v ? fmt(*v) : std::string("random"); };
  out << "# pssml sweep\n"
      << "# axis=" << to_string(config.axis) << '\n'
      << "# seed=" << config.master_seed << " trials=" << config.trials << '\n'
      << "# snr_db=" << format_double(s.snr_db) << " theta=" << s.theta << " theta_max=" << s.theta_max
      << " n_q=" << s.n_q << " dft_size=" << s.dft_size
      << " sample_rate_hz=" << format_double(s.sample_rate) << '\n'
      << "# profile=" << s.profile.name << " taps=" << s.profile.taps.size()
      << " pulse=raised_cosine rolloff=" << format_double(s.pulse.rolloff)
      << " support=" << s.pulse.support << '\n'
      << "# ifo_set=" << join_ints(s.ifo_set)
      << " root=" << opt(s.root, [](ZcRoot r) { return std::to_string(r.value()); })
      << " nu=" << opt(s.nu, [](int v) { return std::to_string(v); })
      << " q=" << opt(s.q, [](int v) { return std::to_string(v); }) << '\n'
      << "# ammse_l_eq=" << config.design.ammse_cir_length
      << " mmse_theta_prior=uniform[0,theta_max]\n"
      << "# snr_definition=E|H(n)a_u(n)|^2/sigma_w^2 per PSS bin; data rows sigma_k^2=1+sigma_w^2\n";
  out << "axis,detector,P,p_q,p_u,p_nu,p_f,ci95,trials,seed\n";
  for (const ErrorRates& r : rates) {
    const int p = effective_p(r.detector);
    out << format_double(r.axis_value) << ',' << to_string(r.detector.kind) << ','
        << (p > 0 ? std::to_string(p) : std::string("-")) << ',' << format_double(r.p_q()) << ','
        << format_double(r.p_u()) << ',' << format_double(r.p_nu()) << ',' << format_double(r.p_f())
        << ',' << format_double(r.ci95()) << ',' << r.trials << ',' << r.seed << '\n';
  }
}

SweepConfig parse_sweep_config(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("sweep config is not valid JSON: ") + e.what());
  }
  static const std::vector<std::string> top_keys{"axis", "values", "trials", "seed", "jobs",
                                                  "detectors", "scenario", "ammse_l_eq"};
  static const std::vector<std::string> scenario_keys{
      "snr_db", "theta", "theta_max", "nu", "root", "q", "n_q", "profile",
      "rolloff", "pulse_support", "sample_rate", "dft_size", "ifo_set"};
  auto check_keys = [](const json& obj, const std::vector<std::string>& allowed, std::string_view where) {
    if (!obj.is_object()) throw DomainError(std::string(where) + " must be a JSON object");
    for (const auto& item : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
        throw DomainError("unknown field '" + item.key() + "' in " + std::string(where));
      }
    }
  };

  try {
    check_keys(doc, top_keys, "sweep config");
    SweepConfig cfg;
    cfg.axis = parse_sweep_axis(doc.at("axis").get<std::string>());
    cfg.values = doc.at("values").get<std::vector<double>>();
    cfg.trials = doc.value("trials", cfg.trials);
    cfg.master_seed = doc.value("seed", cfg.master_seed);
    cfg.jobs = doc.value("jobs", cfg.jobs);
    cfg.design.ammse_cir_length = doc.value("ammse_l_eq", cfg.design.ammse_cir_length);
    for (const json& d : doc.at("detectors")) {
      if (d.is_string()) {
        cfg.detectors.push_back(parse_detector_spec(d.get<std::string>()));
      } else {
        check_keys(d, {"kind", "p"}, "detector entry");
        DetectorSpec spec;
        spec.kind = parse_detector_kind(d.at("kind").get<std::string>());
        spec.p = d.value("p", spec.p);
        cfg.detectors.push_back(spec);
      }
    }
    if (doc.contains("scenario")) {
      const json& s = doc.at("scenario");
      check_keys(s, scenario_keys, "scenario");
      SimScenario& b = cfg.base;
      if (s.contains("snr_db")) {
        const json& v = s.at("snr_db");
        b.snr_db = v.is_string() && v.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity()
                                                                  : v.get<double>();
      }
      b.theta = s.value("theta", b.theta);
      b.theta_max = s.value("theta_max", b.theta_max);
      b.n_q = s.value("n_q", b.n_q);
      b.dft_size = s.value("dft_size", b.dft_size);
      b.sample_rate = s.value("sample_rate", b.sample_rate);
      b.pulse.rolloff = s.value("rolloff", b.pulse.rolloff);
      b.pulse.support = s.value("pulse_support", b.pulse.support);
      if (s.contains("ifo_set")) b.ifo_set = s.at("ifo_set").get<std::vector<int>>();
      if (s.contains("profile")) b.profile = resolve_tap_profile(s.at("profile").get<std::string>());
      if (s.contains("nu") && !s.at("nu").is_null()) b.nu = s.at("nu").get<int>();
      if (s.contains("q") && !s.at("q").is_null()) b.q = s.at("q").get<int>();
      if (s.contains("root") && !s.at("root").is_null()) b.root = ZcRoot::from_value(s.at("root").get<int>());
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw DomainError(std::string("sweep config: ") + e.what());
  }
}

long long flops_estimate(DetectorKind kind, int n_nu, int p) {
  if (n_nu < 1) throw DomainError("N_nu must be positive");
  if (needs_basis(kind) && p < 1) throw DomainError("P must be positive");
  const long long nn = n_nu;
  const long long pp = p;
  switch (kind) {
    case DetectorKind::Mmse:
    case DetectorKind::Ammse: return 291 + 1116 * nn + 1494 * nn * pp;
    case DetectorKind::Prr: return 291 + 1116 * nn + 750 * nn * pp;
    case DetectorKind::Pcrr: return 291 + 1485 * nn + 9 * nn * pp;
    case DetectorKind::Cfdc: return 291 + 1494 * nn;
    // 372 flops for Z plus 245 for the differential numerator, per (u, nu) couple
    case DetectorKind::Dd: return 291 + (372 + 245) * 3 * nn;
  }
  return 0;
}

std::vector<BasisMsePoint> basis_mse_curve(BasisKind kind, int p_first, int p_last,
                                           const BasisMseSetup& setup) {
  if (p_first < 1 || p_last < p_first) throw DomainError("invalid P range");
  const ChannelModel model(setup.profile, setup.pulse, setup.sample_rate);
  const CirCovariance cov = build_cir_covariance(model, ThetaPrior::uniform(setup.theta_max), setup.theta_max);
  const FourierMatrix F = make_fourier_matrix(model.length() + setup.theta_max, setup.dft_size);
  const FourierMatrix F_design = make_fourier_matrix(setup.design.ammse_cir_length, setup.dft_size);

  std::vector<BasisMsePoint> out;
  for (int p = p_first; p <= p_last; ++p) {
    ExpansionBasis basis = [&] {
      switch (kind) {
        case BasisKind::Mmse: return mmse_basis(cov, F, p);
        case BasisKind::Ammse: return ammse_basis(p, F_design);
        case BasisKind::Prr: return prr_basis(p);
        case BasisKind::Pcrr: return pcrr_basis(p);
      }
      throw DomainError("unknown basis kind");
    }();
    out.push_back({kind, p, mse_of_basis(basis, cov, F)});
  }
  return out;
}

}  // namespace pssml
