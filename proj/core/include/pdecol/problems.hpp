#pragma once

#include "pdecol/mesh.hpp"
#include "pdecol/problem.hpp"
#include "pdecol/transcription.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pdecol {

namespace burgers {
inline constexpr double kControlWeight = 0.01;  ///< sigma
inline constexpr double kViscosity = 0.1;       ///< nu
inline constexpr double kControlMax = 0.015;
inline constexpr double kControlMin = -0.015;
inline constexpr double kTarget = 0.035;
inline constexpr double kFinalTime = 1.0;
inline constexpr double kProbeX = 0.2388;  ///< default x_c for temporal studies
}  // namespace burgers

namespace heat {
inline constexpr double kCapacityConst = 4.0;      ///< a1
inline constexpr double kCapacitySlope = 1.0;      ///< a2
inline constexpr double kConductivityConst = 4.0;  ///< a3
inline constexpr double kConductivitySlope = -1.0; ///< a4
inline constexpr double kRate = -1.0;              ///< rho
inline constexpr double kFinalTime = 0.5;
inline constexpr double kControlWeight = 1e-3;  ///< gamma
inline constexpr double kRobin = 1.0;           ///< g
inline constexpr double kControlMax = 0.1;
inline constexpr double kControlMin = -1e19;
inline constexpr double kProbeX = 1.0 / 3.0;
}  // namespace heat

/// Published optimal objectives used as acceptance references.
struct ReferenceObjective {
  const char* problem;
  int points_per_interval;
  int intervals;
  int n_nodes;
  double objective;
};

inline constexpr ReferenceObjective kReferenceObjectives[] = {
  {"burgers", 5, 3, 34, 2.8709506e-5},
  {"burgers", 3, 10, 34, 2.8709897e-5},
  {"burgers", 5, 3, 68, 2.8905775e-5},
  {"burgers", 2, 22, 68, 2.8903518e-5},
  {"heat", 7, 3, 20, 3.6232288e-5},
  {"heat", 3, 33, 50, 3.8283815e-5},
  {"heat", 7, 3, 50, 3.8283491e-5},
  {"heat", 4, 10, 50, 3.8283552e-5},
  {"heat-constrained", 3, 17, 50, 3.8669419e-5},
  {"heat-constrained", 5, 10, 50, 3.8669506e-5},
};

ProblemDefinition burgers_problem();
/// Kiln-probe heating problem; `constrained` adds the cosine control ceiling.
ProblemDefinition heat_problem(bool constrained);
/// "burgers", "heat" or "heat-constrained"; throws InvalidConfig otherwise.
ProblemDefinition problem_by_name(const std::string& name);

enum class Backend { Fem, Fd };

struct MeshConfig {
  int points_per_interval = 5;
  int intervals = 3;
  int n_nodes = 34;
  int degree = 1;
  int quad_points = 3;
  RadauKind kind = RadauKind::Flipped;
};

std::unique_ptr<Transcription> build_transcription(const ProblemDefinition& problem,
                                                   const MeshConfig& mesh,
                                                   Backend backend = Backend::Fem);

/// Structural comparison of flipped and standard Radau transcriptions of the
/// same problem and mesh.
struct RadauComparison {
  int columns_flipped = 0;
  int columns_standard = 0;
  std::vector<int> empty_columns_flipped;
  std::vector<int> empty_columns_standard;
  std::vector<std::string> empty_labels_standard;  ///< e.g. "u2[14]"
};

/// Decision variables whose Jacobian column has no structural nonzero.
std::vector<int> empty_jacobian_columns(const Transcription& tr);
std::string variable_label(const DecisionLayout& layout, int index);

RadauComparison compare_radau(const ProblemDefinition& problem, const MeshConfig& mesh);

}  // namespace pdecol
