#pragma once

// Beam splitting: grouping micro-mirrors so that groups deliver power in a
// prescribed ratio, and multi-region target fields for the phased array.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "oirs/error.hpp"
#include "oirs/grid.hpp"
#include "oirs/ma.hpp"

namespace oirs::split {

struct SplitTarget {
  geom::Vec3 center;     // 3-D aim point (mirrors) or focal-plane (u, v) in x, y
  double weight = 1.0;   // k_i
  double radius = 0.0;   // region radius on the focal plane, m
};

struct SplitSpec {
  std::vector<SplitTarget> targets;

  void validate() const;
  std::vector<double> weights() const;
};

/// Deliverable power p_e·cosθ_e^(k) of every element toward one target.
struct PowerMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major

  double operator()(int r, int c) const { return values[static_cast<std::size_t>(r * cols + c)]; }
};

/// group[e] ∈ {0 (idle), 1..m}.
struct Partition {
  int rows = 0;
  int cols = 0;
  std::vector<int> group;
  std::vector<double> group_power;  // P_k, k = 1..m at index k − 1
  double total = 0.0;               // Σ P_k
  double deviation = 1.0;           // max_k |P_k/ΣP − w_k/Σw|
  double ratio_tol = 0.05;

  bool feasible() const { return deviation <= ratio_tol; }
};

struct GroupingConfig {
  double ratio_tol = 0.05;
  int restarts = 32;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Raised when no partition meets the ratio tolerance; carries the best one.
class InfeasibleRatioError : public Error {
 public:
  InfeasibleRatioError(const std::string& what, Partition best)
      : Error(ErrorKind::InfeasibleRatio, what), best_(std::move(best)) {}
  const Partition& best() const noexcept { return best_; }

 private:
  Partition best_;
};

std::vector<PowerMatrix> power_matrices(const ma::MirrorArray& array, const ma::GaussianBeam& beam,
                                        const SplitSpec& spec);

/// Recomputes P_k, ΣP and the deviation of an assignment.
Partition evaluate(const std::vector<PowerMatrix>& matrices, const std::vector<double>& weights,
                   const std::vector<int>& group, double ratio_tol);

/// Greedy seeding plus first-improvement local search (moves and swaps,
/// idle included) over several restarts. Objective, lexicographically:
/// smallest ratio excess max(0, deviation − ε), then largest ΣP.
Partition optimize_grouping(const std::vector<PowerMatrix>& matrices,
                            const std::vector<double>& weights, const GroupingConfig& config = {});

/// Exhaustive search over all (m + 1)^(I·J) assignments; TooLarge above 10⁷.
Partition brute_force_grouping(const std::vector<PowerMatrix>& matrices,
                               const std::vector<double>& weights, double ratio_tol = 0.05);

/// Assignment vector for aim_elements: group − 1, idle → −1.
std::vector<int> aim_assignment(const Partition& partition);

struct ComposeOptions {
  /// Amplitude of the heaviest region; the others scale by √(k_i/k_max).
  double amplitude = 1.0;
  /// Rescale each region so that its discrete energy equals amplitude²·πr².
  bool exact_area = true;
  /// When set, overrides `amplitude` so that the field carries this energy.
  std::optional<double> energy;
};

/// Σ A_i·disk_i on the focal grid, with A_i ∝ √k_i.
FieldGrid compose_target_field(const SplitSpec& spec, const GridAxis& u, const GridAxis& v,
                               const ComposeOptions& options = {});

/// `row,col,group` rows in row-major order.
void write_partition(std::ostream& os, const Partition& partition);

}  // namespace oirs::split
