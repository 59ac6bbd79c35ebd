#include "dmcd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dmcd {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

}  // namespace

std::string KernelSpec::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case KernelKind::gaussian: os << "gaussian:" << size; break;
    case KernelKind::disk: os << "disk:" << size; break;
    case KernelKind::delta: os << "delta"; break;
  }
  return os.str();
}

KernelSpec parse_kernel(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  KernelSpec k;
  if (kind == "gaussian") k.kind = KernelKind::gaussian;
  else if (kind == "disk") k.kind = KernelKind::disk;
  else if (kind == "delta") k.kind = KernelKind::delta;
  else throw ConfigError("kernel: unknown kind '" + kind + "' (expected gaussian, disk or delta)");
  if (colon == std::string::npos) {
    if (k.kind != KernelKind::delta) throw ConfigError("kernel: missing size, e.g. '" + kind + ":20'");
    k.size = 1.0;
    return k;
  }
  k.size = to_double("kernel", text.substr(colon + 1));
  if (!(k.size >= 1.0)) throw ConfigError("kernel: size must be >= 1");
  return k;
}

ThresholdRule parse_threshold(const std::string& text) {
  const std::string prefix = "adaptive:";
  if (text.rfind(prefix, 0) == 0) {
    return ThresholdRule::adaptive(to_double("threshold", text.substr(prefix.size())));
  }
  return ThresholdRule::fixed(to_double("threshold", text));
}

void ExperimentConfig::validate() const {
  if (input.empty()) throw ConfigError("input path is required");
  if (output.empty()) throw ConfigError("output directory is required");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ConfigError("noise_sigma must be finite and nonnegative");
  }
  solver.validate();
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  SolverParams& p = cfg.solver;
  if (key == "input") cfg.input = value;
  else if (key == "output") cfg.output = value;
  else if (key == "preset") apply_preset(cfg, value);
  else if (key == "kernel") cfg.kernel = parse_kernel(value);
  else if (key == "noise_sigma") cfg.noise_sigma = to_double(key, value);
  else if (key == "seed") {
    const long long s = to_integer(key, value);
    if (s < 0) throw ConfigError("seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "L") p.curvature_directions = static_cast<int>(to_integer(key, value));
  else if (key == "S") p.texture_directions = static_cast<int>(to_integer(key, value));
  else if (key == "beta") p.beta.fill(to_double(key, value));
  else if (key.size() == 5 && key.rfind("beta", 0) == 0 && key[4] >= '1' && key[4] <= '7') {
    p.beta[static_cast<std::size_t>(key[4] - '1')] = to_double(key, value);
  } else if (key == "alpha") p.step = to_double(key, value);
  else if (key == "mu1") p.mu1 = parse_threshold(value);
  else if (key == "mu2") p.mu2 = parse_threshold(value);
  else if (key == "nu_rho") p.nu_rho = parse_threshold(value);
  else if (key == "nu_eps") p.nu_eps = parse_threshold(value);
  else if (key == "tol") p.tol = to_double(key, value);
  else if (key == "max_iters") p.max_iters = static_cast<int>(to_integer(key, value));
  else if (key == "cst_scales") p.cst.scales = static_cast<int>(to_integer(key, value));
  else if (key == "cst_directions") p.cst.directions = static_cast<int>(to_integer(key, value));
  else if (key == "cst_dilation") p.cst.dilation = to_double(key, value);
  else if (key == "cst_c") p.cst.c = to_double(key, value);
  else if (key == "cst_family") {
    try {
      p.cst.family = parse_family(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "cst_mode") {
    try {
      p.cst.mode = parse_mode(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "coupling") p.coupling = parse_coupling(value);
  else if (key == "emit_components") cfg.emit_components = to_bool(key, value);
  else if (key == "emit_spectra") cfg.emit_spectra = to_bool(key, value);
  else if (key == "emit_checkpoint") cfg.emit_checkpoint = to_bool(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      set_config_value(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void apply_preset(ExperimentConfig& cfg, const std::string& name) {
  SolverParams& p = cfg.solver;
  if (name == "fig2") {
    cfg.kernel = {KernelKind::gaussian, 20.0};
    cfg.noise_sigma = 0.0;
    p.curvature_directions = p.texture_directions = 10;
    p.beta.fill(1e10);
    p.mu1 = ThresholdRule::fixed(1e10);
    p.mu2 = ThresholdRule::fixed(4e10);
    p.nu_rho = ThresholdRule::fixed(20.0);
    p.nu_eps = ThresholdRule::fixed(0.0);
    p.step = 0.1;
  } else if (name == "fig8") {
    cfg.kernel = {KernelKind::gaussian, 50.0};
    cfg.noise_sigma = 10.0;
    p.curvature_directions = p.texture_directions = 10;
    p.beta.fill(1e10);
    p.mu1 = ThresholdRule::fixed(1e10);
    p.mu2 = ThresholdRule::fixed(3e10);
    p.nu_rho = ThresholdRule::fixed(15.0);
    p.nu_eps = ThresholdRule::fixed(6.5);
    p.step = 0.1;
  } else {
    throw ConfigError("unknown preset '" + name + "' (demix presets: fig2, fig8)");
  }
}

std::vector<std::string> demix_preset_names() { return {"fig2", "fig8"}; }

FilterbankPreset filterbank_preset(const std::string& name) {
  FilterbankPreset p;
  if (name == "fig3" || name == "fig9") {
    p.single_scale = true;
    p.frames.scales = 1;
    p.frames.directions = 4;
    p.frames.c = name == "fig3" ? 0.1 : 10.0;
    p.kernel_size = 10.0;
  } else if (name == "fig6" || name == "fig7") {
    p.frames.scales = 3;
    p.frames.directions = 4;
    p.frames.dilation = 2.0;
    p.frames.c = 1.0;
    p.analyze = name == "fig7";
  } else {
    throw ConfigError("unknown filterbank preset '" + name + "' (fig3, fig6, fig7, fig9)");
  }
  return p;
}

std::vector<std::string> filterbank_preset_names() { return {"fig3", "fig6", "fig7", "fig9"}; }

}  // namespace dmcd
