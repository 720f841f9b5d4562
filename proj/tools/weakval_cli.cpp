// Command-line harness for the weak-value estimation toolkit: regime sweeps,
// three-regime comparison, the optical gate report, and effective-coupling
// fitting of tabulated data.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wvsim/analysis.hpp"
#include "wvsim/optics.hpp"

using namespace wvsim;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Accepts plain radians ("0.35") or pi literals ("0.18pi", "pi", "-pi").
double parse_angle(const std::string& text) {
  std::string t = text;
  double factor = 1.0;
  if (t.size() >= 2 && t.substr(t.size() - 2) == "pi") {
    factor = M_PI;
    t = t.substr(0, t.size() - 2);
    if (t.empty() || t == "-" || t == "+") t += "1";
  }
  size_t pos = 0;
  double value;
  try {
    value = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse angle '" + text + "'");
  }
  if (pos != t.size())
    throw std::invalid_argument("cannot parse angle '" + text + "'");
  return value * factor;
}

// "start:stop:N" with angle syntax in start/stop.
std::vector<double> parse_gamma_range(const std::string& text) {
  std::istringstream is(text);
  std::string a, b, c;
  if (!std::getline(is, a, ':') || !std::getline(is, b, ':') ||
      !std::getline(is, c))
    throw std::invalid_argument("gamma range must be start:stop:N");
  double start = parse_angle(a);
  double stop = parse_angle(b);
  int n = 0;
  try {
    n = std::stoi(c);
  } catch (const std::exception&) {
    throw std::invalid_argument("gamma point count must be an integer");
  }
  if (n < 1) throw std::invalid_argument("gamma range needs at least 1 point");
  if (n > 1 && stop <= start)
    throw std::invalid_argument("gamma range must be increasing");
  return linspace(start, stop, n);
}

Regime parse_regime(const std::string& name) {
  if (name == "weak") return Regime::WeakInteraction;
  if (name == "insensitive") return Regime::InsensitivePointer;
  if (name == "erasure") return Regime::Erasure;
  throw std::invalid_argument("unknown regime '" + name + "'");
}

FeedforwardMode parse_feedforward(const std::string& name) {
  if (name == "true-operator") return FeedforwardMode::TrueOperator;
  if (name == "simulated") return FeedforwardMode::SimulatedProjection;
  if (name == "off") return FeedforwardMode::Off;
  throw std::invalid_argument("unknown feed-forward mode '" + name + "'");
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("WEAKVAL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("WEAKVAL_SEED is not an integer");
    }
  }
  return 0;
}

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw std::ios_base::failure("cannot open '" + path + "'");
      os = &file;
    }
  }
};

RegimeConfig make_config(Regime regime, double coupling, FeedforwardMode ff) {
  CouplingMeaning meaning = regime == Regime::WeakInteraction
                                ? CouplingMeaning::PhaseShiftPhi
                                : CouplingMeaning::PointerDelta;
  return {regime, {}, {coupling, meaning}, ff};
}

void write_row(std::ostream& os, const SweepResult& sr, const SweepPoint& p,
               bool regime_col) {
  if (regime_col) os << regime_name(sr.regime) << ",";
  os << fmt(p.gamma) << ",";
  if (p.valid)
    os << fmt(p.exact_aw) << "," << fmt(p.estimated_aw) << ","
       << (sr.shots > 0 ? fmt(p.stderr_aw) : "");
  else
    os << ",,";
  os << "," << fmt(p.p_postselect) << "," << fmt(p.system_fidelity) << ","
     << (p.valid ? "1" : "0") << "\n";
}

void write_points_csv(std::ostream& os, const SweepResult& sr, bool regime_col) {
  os << (regime_col ? "regime,gamma" : "gamma")
     << ",exact_aw,estimated_aw,stderr,p_postselect,system_fidelity,valid\n";
  for (const SweepPoint& p : sr.points) write_row(os, sr, p, regime_col);
}

json point_json(const SweepResult& sr, const SweepPoint& p) {
  json j;
  j["gamma"] = p.gamma;
  j["exact_aw"] = p.valid ? json(p.exact_aw) : json(nullptr);
  j["estimated_aw"] = p.valid ? json(p.estimated_aw) : json(nullptr);
  j["stderr"] = sr.shots > 0 && p.valid ? json(p.stderr_aw) : json(nullptr);
  j["p_postselect"] = p.p_postselect;
  j["system_fidelity"] = p.system_fidelity;
  j["valid"] = p.valid;
  return j;
}

json sweep_meta_json(const SweepResult& sr) {
  json j;
  j["regime"] = regime_name(sr.regime);
  j["coupling_nominal"] = sr.nominal_coupling;
  j["coupling_fitted"] = sr.fitted_coupling;
  j["seed"] = sr.master_seed;
  j["shots"] = sr.shots;
  j["tool_version"] = kToolVersion;
  return j;
}

void write_sweep(std::ostream& os, const SweepResult& sr, const std::string& format) {
  if (format == "json") {
    json j = sweep_meta_json(sr);
    j["points"] = json::array();
    for (const SweepPoint& p : sr.points) j["points"].push_back(point_json(sr, p));
    os << j.dump(2) << "\n";
    return;
  }
  os << "# regime=" << regime_name(sr.regime) << "\n"
     << "# coupling_nominal=" << fmt(sr.nominal_coupling) << "\n"
     << "# coupling_fitted=" << fmt(sr.fitted_coupling) << "\n"
     << "# seed=" << sr.master_seed << "\n"
     << "# shots=" << sr.shots << "\n"
     << "# tool_version=" << kToolVersion << "\n";
  write_points_csv(os, sr, false);
}

int cmd_sweep(const std::string& regime_s, const std::string& coupling_s,
              const std::string& gamma_s, long shots,
              std::optional<std::uint64_t> seed, const std::string& ff_s,
              const std::string& format, const std::string& out) {
  Regime regime = parse_regime(regime_s);
  double coupling = parse_angle(coupling_s);
  std::vector<double> grid = parse_gamma_range(gamma_s);
  RegimeConfig cfg = make_config(regime, coupling, parse_feedforward(ff_s));
  SweepResult sr = sweep(cfg, grid, shots, seed ? *seed : default_seed());
  Output o(out);
  write_sweep(*o.os, sr, format);
  return kExitOk;
}

int cmd_compare(const std::string& cw_s, const std::string& ci_s,
                const std::string& ce_s, const std::string& gamma_s, long shots,
                std::optional<std::uint64_t> seed, const std::string& ff_s,
                const std::string& format, const std::string& out) {
  std::vector<double> grid = parse_gamma_range(gamma_s);
  std::uint64_t master = seed ? *seed : default_seed();
  ComparisonReport rep =
      compare_regimes(grid, parse_angle(cw_s), parse_angle(ci_s), parse_angle(ce_s),
                      shots, master, parse_feedforward(ff_s));

  Output o(out);
  const SweepResult* sweeps[3] = {&rep.weak, &rep.insensitive, &rep.erasure};
  if (format == "json") {
    json j;
    for (const SweepResult* sr : sweeps) {
      json js = sweep_meta_json(*sr);
      js["points"] = json::array();
      for (const SweepPoint& p : sr->points) js["points"].push_back(point_json(*sr, p));
      j["sweeps"].push_back(js);
    }
    j["consistent"] = rep.consistent;
    j["consistent_fraction"] = rep.consistent_fraction;
    j["max_pairwise_delta"] = rep.max_pairwise_delta;
    j["seed"] = master;
    j["tool_version"] = kToolVersion;
    *o.os << j.dump(2) << "\n";
  } else {
    *o.os << "# coupling_fitted_weak=" << fmt(rep.weak.fitted_coupling) << "\n"
          << "# coupling_fitted_insensitive=" << fmt(rep.insensitive.fitted_coupling) << "\n"
          << "# coupling_fitted_erasure=" << fmt(rep.erasure.fitted_coupling) << "\n"
          << "# seed=" << master << "\n"
          << "# shots=" << rep.weak.shots << "\n"
          << "# consistent=" << (rep.consistent ? "true" : "false") << "\n"
          << "# consistent_fraction=" << fmt(rep.consistent_fraction) << "\n"
          << "# max_pairwise_delta=" << fmt(rep.max_pairwise_delta) << "\n"
          << "# tool_version=" << kToolVersion << "\n"
          << "regime,gamma,exact_aw,estimated_aw,stderr,p_postselect,system_fidelity,valid\n";
    for (const SweepResult* sr : sweeps)
      for (const SweepPoint& p : sr->points) write_row(*o.os, *sr, p, true);
  }
  std::cout << "consistent=" << (rep.consistent ? "true" : "false")
            << " consistent_fraction=" << fmt(rep.consistent_fraction)
            << " max_pairwise_delta=" << fmt(rep.max_pairwise_delta) << "\n";
  return kExitOk;
}

void print_amplitudes(std::ostream& os, const char* label,
                      const optics::TwoPhotonAmplitudes& a) {
  os << label;
  const char* basis[4] = {"HH", "HV", "VH", "VV"};
  for (int i = 0; i < 4; ++i) {
    cx m = a.merged[static_cast<size_t>(i)];
    cx u = a.upper[static_cast<size_t>(i)];
    if (std::abs(m) > 1e-12)
      os << "  " << basis[i] << ":" << fmt(std::real(m)) << (std::imag(m) < 0 ? "-" : "+")
         << fmt(std::abs(std::imag(m))) << "i";
    if (std::abs(u) > 1e-12)
      os << "  up" << basis[i] << ":" << fmt(std::real(u)) << (std::imag(u) < 0 ? "-" : "+")
         << fmt(std::abs(std::imag(u))) << "i";
  }
  os << "\n";
}

// Frobenius distance minimized over a global phase.
double phase_aligned_distance(const Operator& a, const Operator& b) {
  cx overlap{0, 0};
  for (size_t i = 0; i < a.entries().size(); ++i)
    overlap += std::conj(b.entries()[i]) * a.entries()[i];
  cx phase = std::abs(overlap) < 1e-15 ? cx{1, 0} : overlap / std::abs(overlap);
  double acc = 0.0;
  for (size_t i = 0; i < a.entries().size(); ++i)
    acc += std::norm(a.entries()[i] - phase * b.entries()[i]);
  return std::sqrt(acc);
}

int cmd_optics(const std::string& phi_s, bool no_balance, const std::string& out) {
  double phi = parse_angle(phi_s);
  Output o(out);
  std::ostream& os = *o.os;

  optics::OpticalChain balanced = optics::build_chain(phi, true);
  optics::OpticalChain raw = optics::build_chain(phi, false);
  optics::EffectiveGate gb = optics::effective_gate(balanced);
  optics::EffectiveGate gu = optics::effective_gate(raw);

  os << "phi=" << fmt(phi) << "\n";
  os << "elements:\n" << optics::describe_chain(no_balance ? raw : balanced);

  const optics::OpticalChain& traced = no_balance ? raw : balanced;
  for (int s = 0; s < 2; ++s) {
    os << "trace input " << (s == 0 ? "VH" : "VV") << ":\n";
    auto trace = optics::evaluate_chain(traced, optics::TwoPhotonAmplitudes::basis(1, s));
    for (size_t i = 0; i < trace.size(); ++i) {
      std::string label = "  after " + traced.elements[i].name + ":";
      print_amplitudes(os, label.c_str(), trace[i]);
    }
  }

  os << "unbalanced_amplitudes=";
  for (int i = 0; i < 4; ++i)
    os << (i ? "," : "") << fmt(gu.basis_amplitudes[static_cast<size_t>(i)]);
  os << "\n";
  os << "balanced_success_probability=" << fmt(gb.success_probability) << "\n";

  // target: pointer phase plate then the controlled phase, pointer index first
  std::vector<cx> target(16, cx{0, 0});
  cx em = std::exp(cx{0, -phi / 2});
  target[0] = target[5] = cx{1, 0};
  target[10] = em;
  target[15] = em * std::exp(cx{0, phi});
  Operator want(std::move(target), 4, OpKind::Unitary);
  Operator got = gb.gate.scaled(cx{std::sqrt(6.0), 0});
  double dist = phase_aligned_distance(got, want);
  os << "distance_to_target=" << fmt(dist) << "\n";
  os << "effective_gate (x sqrt(6)):\n";
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      cx v = got.at(r, c);
      os << (c ? "  " : "  ") << fmt(std::real(v))
         << (std::imag(v) < 0 ? "-" : "+") << fmt(std::abs(std::imag(v))) << "i";
    }
    os << "\n";
  }
  return kExitOk;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string cell;
  while (std::getline(is, cell, ',')) out.push_back(cell);
  return out;
}

int cmd_fit(const std::string& input, std::string regime_s, const std::string& out) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + input + "'");

  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::vector<std::pair<double, double>> pts;  // (gamma, raw_stat)
  bool sweep_schema = false;
  double fitted_meta = 0.0;

  std::string line;
  long row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      size_t eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        while (!key.empty() && key.front() == ' ') key.erase(key.begin());
        meta[key] = line.substr(eq + 1);
      }
      continue;
    }
    std::vector<std::string> cells = split_csv_line(line);
    if (header.empty()) {
      header = cells;
      sweep_schema = header.size() >= 3 && header[0] == "gamma" &&
                     header[1] == "exact_aw" && header[2] == "estimated_aw";
      if (!sweep_schema && !(header.size() >= 2 && header[0] == "gamma" &&
                             header[1] == "raw_stat"))
        throw std::invalid_argument(
            "row " + std::to_string(row) +
            ": header must be gamma,raw_stat or the sweep schema");
      if (sweep_schema) {
        if (meta.count("regime")) regime_s = meta["regime"];
        if (!meta.count("coupling_fitted"))
          throw std::invalid_argument("sweep file lacks coupling_fitted metadata");
        fitted_meta = std::stod(meta["coupling_fitted"]);
      }
      continue;
    }
    try {
      if (sweep_schema) {
        if (cells.size() < 7) throw std::invalid_argument("short row");
        if (cells[6] == "0") continue;  // invalid point
        pts.push_back({std::stod(cells[0]), std::stod(cells[2])});
      } else {
        if (cells.size() < 2) throw std::invalid_argument("short row");
        pts.push_back({std::stod(cells[0]), std::stod(cells[1])});
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("row " + std::to_string(row) + ": malformed data");
    }
  }

  if (regime_s.empty())
    throw std::invalid_argument("--regime required for plain gamma,raw_stat input");
  Regime regime = parse_regime(regime_s);

  // Sweep files tabulate inverted estimates; map them back to raw pointer
  // statistics with the file's own fitted coupling before refitting.
  if (sweep_schema) {
    for (auto& [gamma, v] : pts) {
      switch (regime) {
        case Regime::WeakInteraction:
          v = 1.0 - fitted_meta * fitted_meta * v * v;
          break;
        case Regime::InsensitivePointer:
          v = fitted_meta * (1.0 - 2.0 * v);
          break;
        case Regime::Erasure:
          v = 4.0 * fitted_meta * (1.0 - 2.0 * v);
          break;
      }
    }
  }

  auto [coupling, residual] = fit_effective_coupling(pts, regime);
  Output o(out);
  *o.os << "regime=" << regime_name(regime) << "\n"
        << "fitted_coupling=" << fmt(coupling) << "\n"
        << "fit_residual=" << fmt(residual) << "\n"
        << "gamma,estimated_aw\n";
  for (const auto& [gamma, raw] : pts)
    *o.os << fmt(gamma) << "," << fmt(invert_raw(regime, raw, coupling)) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-value estimation toolkit"};
  app.require_subcommand(1);

  std::string regime = "weak", coupling = "0.18pi", gamma = "0:0.7pi:13";
  std::string cw = "0.18pi", ci = "0.21", ce = "0.08";
  std::string cmp_gamma = "0:0.6pi:13", fit_regime;
  std::string feedforward = "true-operator";
  std::string format = "csv", out, phi, input;
  long shots = 0, cmp_shots = 3000;
  std::optional<std::uint64_t> seed;
  bool no_balance = false;

  CLI::App* s = app.add_subcommand("sweep", "Sweep one regime over gamma");
  s->add_option("--regime", regime, "weak | insensitive | erasure");
  s->add_option("--coupling", coupling, "phase (weak) or pointer deviation");
  s->add_option("--gamma", gamma, "grid as start:stop:N (angles accept 'pi')");
  s->add_option("--shots", shots, "coincidences per point; 0 = exact mode");
  s->add_option("--seed", seed, "master seed (default: WEAKVAL_SEED or 0)");
  s->add_option("--feedforward", feedforward, "true-operator | simulated | off");
  s->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  s->add_option("--out", out, "output path (default: stdout)");

  CLI::App* c = app.add_subcommand("compare", "Run all three regimes on one grid");
  c->add_option("--coupling-weak", cw);
  c->add_option("--coupling-insensitive", ci);
  c->add_option("--coupling-erasure", ce);
  c->add_option("--gamma", cmp_gamma);
  c->add_option("--shots", cmp_shots);
  c->add_option("--seed", seed);
  c->add_option("--feedforward", feedforward);
  c->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  c->add_option("--out", out);

  CLI::App* g = app.add_subcommand("optics", "Report the optical gate model");
  g->add_option("--phi", phi, "controlled phase (accepts 'pi' literals)")->required();
  g->add_flag("--no-balance", no_balance, "trace the chain without attenuators");
  g->add_option("--out", out);

  CLI::App* f = app.add_subcommand("fit", "Fit an effective coupling to a table");
  f->add_option("--input", input, "CSV of gamma,raw_stat or a sweep output")->required();
  f->add_option("--regime", fit_regime);
  f->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (s->parsed())
      return cmd_sweep(regime, coupling, gamma, shots, seed, feedforward, format, out);
    if (c->parsed())
      return cmd_compare(cw, ci, ce, cmp_gamma, cmp_shots, seed, feedforward, format, out);
    if (g->parsed()) return cmd_optics(phi, no_balance, out);
    if (f->parsed()) return cmd_fit(input, fit_regime, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
