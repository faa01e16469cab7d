#pragma once

#include <Eigen/Dense>

#include <compare>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tad {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;

/// Raised for any invalid or inconsistent scenario description. The message
/// carries the offending field path (e.g. "visibility_radii.d2").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A participant of the game. Defenders carry a 1-based index.
struct PlayerId {
  enum class Kind { Defender, Target, Attacker };

  Kind kind = Kind::Attacker;
  int index = 0;

  static PlayerId defender(int i) { return {Kind::Defender, i}; }
  static PlayerId target() { return {Kind::Target, 0}; }
  static PlayerId attacker() { return {Kind::Attacker, 0}; }

  bool is_defender() const { return kind == Kind::Defender; }
  bool is_target() const { return kind == Kind::Target; }
  bool is_attacker() const { return kind == Kind::Attacker; }

  /// "d1".."dn", "tau", "a".
  std::string name() const;
  /// Inverse of name(); throws ConfigError for anything else.
  static PlayerId parse(const std::string& s);

  auto operator<=>(const PlayerId&) const = default;
};

enum class Interaction { I1, I2 };

std::string to_string(Interaction mode);

/// Observation radius. The target in I1 sees everything, which is kept as its
/// own state instead of a large sentinel value.
class VisibilityRadius {
 public:
  VisibilityRadius() = default;
  static VisibilityRadius unbounded() { return VisibilityRadius{}; }
  static VisibilityRadius finite(double r) {
    VisibilityRadius v;
    v.radius_ = r;
    return v;
  }

  bool is_unbounded() const { return !radius_.has_value(); }
  double value() const {
    return radius_.value_or(std::numeric_limits<double>::infinity());
  }
  /// Closed ball: a player exactly on the boundary is visible.
  bool covers(double distance) const {
    return is_unbounded() || distance <= *radius_;
  }

  bool operator==(const VisibilityRadius&) const = default;

 private:
  std::optional<double> radius_;
};

/// Terminal/running weights of the pair (p, a) for p a defender or the
/// target: f_pa, q_pa belong to p's own objective, f_ap, q_ap to the
/// attacker's.
struct PairWeights {
  double f_pa = 1.0;
  double f_ap = 1.0;
  double q_pa = 1.0;
  double q_ap = 1.0;

  bool operator==(const PairWeights&) const = default;
};

struct DefenderParams {
  Vec2 position = Vec2::Zero();
  double capture_radius = 0.1;
  VisibilityRadius visibility = VisibilityRadius::unbounded();
  PairWeights weights;
  double control_penalty = 1.0;
};

struct TargetParams {
  Vec2 position = Vec2::Zero();
  VisibilityRadius visibility = VisibilityRadius::unbounded();
  PairWeights weights;
  double control_penalty = 1.0;
};

struct AttackerParams {
  Vec2 position = Vec2::Zero();
  double capture_radius = 0.1;
  double control_penalty = 1.0;
};

/// Full description of one game instance.
struct ScenarioConfig {
  std::string name;
  Interaction interaction = Interaction::I1;
  std::vector<DefenderParams> defenders;
  TargetParams target;
  AttackerParams attacker;
  int lambda = 1;
  double horizon = 6.0;
  double step = 0.005;
  std::vector<double> gamma_weights;

  int n() const { return static_cast<int>(defenders.size()); }
  /// Dimension of the reduced state, 2(n+1).
  int dim() const { return 2 * (n() + 1); }
  /// Number of grid intervals, T/step rounded.
  int intervals() const;

  Vec2 position(PlayerId p) const;
  VisibilityRadius visibility(PlayerId p) const;

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

/// Equal gamma weights for the given interaction (4 for I1, 3 for I2).
std::vector<double> default_gammas(Interaction mode);

/// Every constant matrix of both game formulations.
struct GameMatrices {
  int n = 0;
  int dim = 0;
  Interaction interaction = Interaction::I1;

  Mat B_d, B_tau, B_a, B_dtau;
  Mat F_d, F_tau, F_a;
  Mat Q_d, Q_tau, Q_a;
  Mat R_d, R_tau, R_a, R_dtau;
  Mat R_d_inv, R_tau_inv, R_a_inv, R_dtau_inv;
  // Zero-sum aggregates.
  Mat F, Q;
  // S_p = B_p R_p^{-1} B_p'.
  Mat S_d, S_tau, S_a, S_dtau;

  /// Input map of a single defender, (e_i ⊗ I_2) padded to dim rows.
  Mat B_defender(int i) const;
};

GameMatrices build_matrices(const ScenarioConfig& cfg);

/// Absolute positions of every player.
struct Positions {
  std::vector<Vec2> defenders;
  Vec2 target = Vec2::Zero();
  Vec2 attacker = Vec2::Zero();

  Vec2 of(PlayerId p) const;
  static Positions from_config(const ScenarioConfig& cfg);
  /// Throws ConfigError when a player of the n-defender roster is missing.
  static Positions from_map(const std::map<PlayerId, Vec2>& m, int n);
};

/// Relative coordinates z = col(z_d1, ..., z_dn, z_tau), z_p = X_p - X_a.
class ReducedState {
 public:
  ReducedState() = default;
  explicit ReducedState(Vec z);

  int n() const { return static_cast<int>(z_.size()) / 2 - 1; }
  const Vec& vector() const { return z_; }
  /// Displacement of a player; zero for the attacker.
  Vec2 of(PlayerId p) const;

 private:
  Vec z_;
};

ReducedState to_reduced(const Positions& pos);
Positions from_reduced(const ReducedState& z, const Vec2& attacker);

/// Block (i, j) of size 2x2, zero-based block indices.
inline auto block2(Mat& m, int i, int j) { return m.block(2 * i, 2 * j, 2, 2); }
inline auto block2(const Mat& m, int i, int j) {
  return m.block(2 * i, 2 * j, 2, 2);
}

/// (M + M') / 2.
inline Mat symmetrized(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace tad
