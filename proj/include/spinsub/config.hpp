#pragma once

#include "json.hpp"
#include <optional>
#include <string>
#include <vector>

#include "spinsub/fourier.hpp"
#include "spinsub/render.hpp"
#include "spinsub/substitution.hpp"

namespace spinsub {

/// Loaded and validated system file. Either `spin` or only `qubit` is set;
/// `qubit` is always populated (spin systems expose their letter table).
struct SystemConfig {
  std::string name;
  std::string kind;  // "spin" or "qubit"
  std::optional<SpinSystem> spin;
  std::optional<Substitution> qubit;
  bool assert_aperiodic = false;
  std::size_t max_cells = kDefaultMaxCells;
  double measure_tolerance = 0.05;
  double se_factor = 3.0;
  std::vector<int> lyapunov_n{10, 11, 12, 13};
  long lyapunov_grid = 0;
  MatrixNorm lyapunov_norm = MatrixNorm::Frobenius;
  std::vector<Rgb> palette;

  const Substitution& substitution() const { return *qubit; }
  const DigitSystem& digits() const { return qubit->digits(); }
  /// Throws NoGroupStructure for qubit systems.
  const SpinSystem& spin_system() const;
};

/// Parses a system document; `base_dir` resolves file references of
/// Kronecker factors. Errors name the offending field.
SystemConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
SystemConfig load_config(const std::string& path);

/// "10..13", "10,12" or "11".
std::vector<int> parse_int_list(const std::string& text);
/// "1", "1,0" -> exponents.
std::vector<int> parse_exponents(const std::string& text);

}  // namespace spinsub
