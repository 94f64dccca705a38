#include "fgns/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "fgns/csv.hpp"
#include "fgns/errors.hpp"

namespace fgns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

int to_int32(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < -(1LL << 31) || x >= (1LL << 31)) throw ConfigError(key + ": value out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::string list_text(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + fmt(xs[i]);
  return s;
}

struct Entry {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Entry real_entry(T ExperimentConfig::*m) {
  return {[m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = to_double(k, v); },
          [m](const ExperimentConfig& c) { return fmt(c.*m); }};
}

Entry int_entry(int ExperimentConfig::*m) {
  return {[m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = to_int32(k, v); },
          [m](const ExperimentConfig& c) { return std::to_string(c.*m); }};
}

Entry list_entry(std::vector<double> ExperimentConfig::*m) {
  return {[m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = parse_list(v, k); },
          [m](const ExperimentConfig& c) { return list_text(c.*m); }};
}

Entry string_entry(std::string ExperimentConfig::*m) {
  return {[m](ExperimentConfig& c, const std::string&, const std::string& v) { c.*m = v; },
          [m](const ExperimentConfig& c) { return c.*m; }};
}

const std::map<std::string, Entry>& table() {
  static const std::map<std::string, Entry> t = [] {
    std::map<std::string, Entry> m;
    m["grid.dim"] = int_entry(&ExperimentConfig::dim);
    m["grid.N"] = int_entry(&ExperimentConfig::n_axis);
    m["grid.L"] = real_entry(&ExperimentConfig::box_len);
    m["model.alpha"] = real_entry(&ExperimentConfig::alpha);
    m["model.beta"] = real_entry(&ExperimentConfig::beta);
    m["lorentz.p"] = real_entry(&ExperimentConfig::lorentz_p);
    m["lorentz.q"] = real_entry(&ExperimentConfig::lorentz_q);
    m["horizon.T"] = real_entry(&ExperimentConfig::horizon);
    m["mesh.nodes"] = int_entry(&ExperimentConfig::mesh_nodes);
    m["mesh.gamma"] = real_entry(&ExperimentConfig::mesh_gamma);
    m["windows.J"] = int_entry(&ExperimentConfig::windows_levels);
    m["windows.stride"] = int_entry(&ExperimentConfig::windows_stride);
    m["solver.max_iter"] = int_entry(&ExperimentConfig::max_iter);
    m["solver.tol"] = real_entry(&ExperimentConfig::tol);
    m["solver.shrink"] = {[](ExperimentConfig& c, const std::string& k, const std::string& v) { c.shrink = to_bool(k, v); },
                          [](const ExperimentConfig& c) { return std::string(c.shrink ? "true" : "false"); }};
    m["seed"] = {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   if (v.empty() || v[0] == '-') throw ConfigError(k + ": expected an unsigned integer");
                   std::size_t used = 0;
                   try {
                     c.seed = std::stoull(v, &used);
                   } catch (const std::exception&) {
                     throw ConfigError(k + ": expected an unsigned integer, got '" + v + "'");
                   }
                   if (used != v.size()) throw ConfigError(k + ": expected an unsigned integer, got '" + v + "'");
                 },
                 [](const ExperimentConfig& c) { return std::to_string(c.seed); }};
    m["eps"] = list_entry(&ExperimentConfig::eps);
    m["out"] = string_entry(&ExperimentConfig::out);
    m["data.kind"] = string_entry(&ExperimentConfig::data_kind);
    m["data.amplitude"] = real_entry(&ExperimentConfig::data_amplitude);
    m["data.indicator"] = real_entry(&ExperimentConfig::data_indicator);
    m["quad.gamma"] = real_entry(&ExperimentConfig::quad_gamma);
    m["quad.M"] = int_entry(&ExperimentConfig::quad_panels);
    m["bilinear.C"] = real_entry(&ExperimentConfig::bilinear_c);
    m["bilinear.samples"] = int_entry(&ExperimentConfig::bilinear_samples);
    m["kernel.dim"] = int_entry(&ExperimentConfig::kernel_dim);
    m["kernel.N"] = int_entry(&ExperimentConfig::kernel_n_aux);
    m["kernel.L"] = real_entry(&ExperimentConfig::kernel_box);
    m["kernel.beta"] = list_entry(&ExperimentConfig::kernel_betas);
    m["kernel.t"] = list_entry(&ExperimentConfig::kernel_times);
    m["kernel.r"] = real_entry(&ExperimentConfig::kernel_r);
    m["verify.pairs"] = int_entry(&ExperimentConfig::verify_pairs);
    m["input"] = string_entry(&ExperimentConfig::input);
    return m;
  }();
  return t;
}

}  // namespace

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key + ": empty list entry");
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const auto it = table().find(key);
  if (it == table().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second.set(*this, key, trim(value));
}

std::string ExperimentConfig::get(const std::string& key) const {
  const auto it = table().find(key);
  if (it == table().end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second.get(*this);
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> out;
    for (const auto& [name, e] : table()) out.push_back(name);
    return out;
  }();
  return k;
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> m;
  for (const auto& [name, e] : table()) m[name] = e.get(*this);
  return m;
}

void ExperimentConfig::validate() const {
  (void)grid();
  model().validate();
  picard().validate();
  // an explicit p must agree with q
  if (lorentz_p > 0.0) (void)lorentz();
  if (out.empty()) throw ConfigError("out: output directory must not be empty");
  for (double e : eps) {
    if (!(e > 0.0)) throw ConfigError("eps: every entry must be positive");
  }
  if (data_amplitude < 0.0) throw ConfigError("data.amplitude must be >= 0");
  if (data_indicator < 0.0 || data_indicator >= 1.0) throw ConfigError("data.indicator must lie in [0, 1)");
  if (bilinear_c < 0.0) throw ConfigError("bilinear.C must be >= 0");
  if (bilinear_samples < 10) throw ConfigError("bilinear.samples must be >= 10");
  if (kernel_dim != 2 && kernel_dim != 3) throw ConfigError("kernel.dim must be 2 or 3");
  if (kernel_n_aux < 8 || kernel_n_aux % 2) throw ConfigError("kernel.N must be even and >= 8");
  if (!(kernel_box > 0.0)) throw ConfigError("kernel.L must be positive");
  for (double b : kernel_betas) {
    if (!(b > 0.5 && b <= 1.0)) throw ConfigError("kernel.beta entries must lie in (1/2, 1]");
  }
  for (double t : kernel_times) {
    if (!(t > 0.0)) throw ConfigError("kernel.t entries must be positive");
  }
  if (!(kernel_r >= 1.0)) throw ConfigError("kernel.r must be >= 1");
  if (verify_pairs < 1) throw ConfigError("verify.pairs must be >= 1");
}

TorusGrid ExperimentConfig::grid() const {
  if (dim != 2 && dim != 3) throw ConfigError("grid.dim must be 2 or 3");
  if (n_axis < 8 || n_axis % 2) throw ConfigError("grid.N must be even and >= 8");
  if (!(box_len > 0.0)) throw ConfigError("grid.L must be positive");
  return TorusGrid(dim, box_len, n_axis);
}

ModelParams ExperimentConfig::model() const {
  ModelParams m{alpha, beta, dim};
  m.validate();
  return m;
}

LorentzParams ExperimentConfig::lorentz() const {
  if (lorentz_p > 0.0 && lorentz_q > 0.0) {
    LorentzParams lp{lorentz_p, lorentz_q, beta, dim};
    lp.validate();
    return lp;
  }
  if (lorentz_q > 0.0) return LorentzParams::from_q(lorentz_q, beta, dim);
  if (lorentz_p > 0.0) return LorentzParams::from_p(lorentz_p, beta, dim);
  throw ConfigError("lorentz: set lorentz.q or lorentz.p");
}

PicardConfig ExperimentConfig::picard() const {
  PicardConfig p;
  p.horizon = horizon;
  p.intervals = mesh_nodes;
  p.grading = mesh_gamma;
  p.max_iter = max_iter;
  p.stop_tol = tol;
  p.model = ModelParams{alpha, beta, dim};
  p.window_levels = windows_levels;
  p.window_stride = windows_stride;
  p.rule = QuadratureRule{quad_gamma, quad_panels};
  p.bilinear_constant = bilinear_c > 0.0 ? bilinear_c : 1.0;
  p.shrink_horizon = shrink;
  return p;
}

KernelGridSpec ExperimentConfig::kernel_grid() const { return KernelGridSpec{kernel_n_aux, kernel_box}; }

void load_config_text(const std::string& text, ExperimentConfig& cfg, const std::string& origin) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  load_config_text(ss.str(), cfg, path);
}

}  // namespace fgns
