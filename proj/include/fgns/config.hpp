#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fgns/grid.hpp"
#include "fgns/kernels.hpp"
#include "fgns/norms.hpp"
#include "fgns/picard.hpp"

namespace fgns {

// Every experiment setting. Keys are dotted names (grid.N, model.beta, ...);
// see keys() for the full list.
struct ExperimentConfig {
  int dim = 2;
  int n_axis = 64;
  double box_len = 2.0 * 3.14159265358979323846;
  double alpha = 0.5;
  double beta = 0.75;
  // 0 means "solve from the other exponent".
  double lorentz_p = 0.0;
  double lorentz_q = 8.0;
  double horizon = 1.0;
  int mesh_nodes = 32;
  double mesh_gamma = 2.0;
  int windows_levels = 6;
  int windows_stride = 0;
  int max_iter = 20;
  double tol = 1e-8;
  bool shrink = false;
  std::uint64_t seed = 42;
  std::vector<double> eps{0.2, 0.1, 0.05};
  std::string out = "fgns_out";
  std::string data_kind = "taylor_green_mixed";
  double data_amplitude = 1.0;
  // When > 0, rescale the data so that 4 C ||e_0||_X equals this value.
  double data_indicator = 0.0;
  double quad_gamma = 2.0;
  int quad_panels = 32;
  // 0 means "estimate from a seeded sample".
  double bilinear_c = 0.0;
  int bilinear_samples = 10;
  int kernel_dim = 3;
  int kernel_n_aux = 64;
  double kernel_box = 4.0 * 3.14159265358979323846;
  std::vector<double> kernel_betas{0.75, 1.0};
  std::vector<double> kernel_times{0.25, 0.5, 1.0, 2.0};
  double kernel_r = 2.0;
  int verify_pairs = 10;
  std::string input;

  // Sets one key from its text value; throws ConfigError naming the key.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  static const std::vector<std::string>& keys();
  // key -> canonical text, for manifests.
  std::map<std::string, std::string> echo() const;

  void validate() const;
  TorusGrid grid() const;
  ModelParams model() const;
  LorentzParams lorentz() const;
  PicardConfig picard() const;
  KernelGridSpec kernel_grid() const;
};

// Parses `key = value` lines ('#' starts a comment) into cfg.
void load_config_file(const std::string& path, ExperimentConfig& cfg);
void load_config_text(const std::string& text, ExperimentConfig& cfg, const std::string& origin = "<text>");

std::vector<double> parse_list(const std::string& text, const std::string& key);

}  // namespace fgns
