// Copyright 2026 The nmwit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "nmwit/numcore.hpp"

namespace nmw {

// Qubit channel in Bloch (affine) form: x -> M x + kappa. In the 4x4 block
// form F = [[1, 0], [kappa, M]] acting on (1, x).
struct AffineMap {
  RMat m = RMat::identity(3);
  Vec3 kappa{};

  static AffineMap identity() { return {}; }
  static AffineMap from_matrix4(const RMat& f);
  RMat matrix4() const;

  bool unital(double tol = 0.0) const;
  // Linear extension to arbitrary 2x2 operators (not only states).
  CMat apply(const CMat& x) const;
  BlochVec apply(const BlochVec& x) const;
};

// later o earlier
AffineMap compose(const AffineMap& later, const AffineMap& earlier);

class KrausSet {
 public:
  explicit KrausSet(std::vector<CMat> operators, double tol = 1e-9);

  const std::vector<CMat>& operators() const { return ops_; }
  CMat apply(const CMat& x) const;
  double completeness_defect() const;

 private:
  std::vector<CMat> ops_;
};

struct ChoiNegativity {
  double min_choi_eig = 0.0;
};

AffineMap affine_from_kraus(const KrausSet& k);
std::variant<KrausSet, ChoiNegativity> kraus_from_affine(const AffineMap& f, double tol = 1e-9);

// (I (x) map)[B] for a 4x4 two-qubit operator B; the map acts on the second
// factor.
CMat apply_to_second(const AffineMap& f, const CMat& b);

// (I (x) map)[|Psi><Psi|] with |Psi> = |00> + |11>, trace 2 for TP maps.
HermMat choi_matrix(const AffineMap& f);

struct CptpReport {
  bool cp = true;
  double min_choi_eig = 0.0;
  double tp_defect = 0.0;
};

CptpReport cptp_report(const AffineMap& f, double tol = 1e-9);

using RateFn = std::function<double(double)>;

struct LindbladTerm {
  CMat op;
  RateFn rate;
};

/// Time-dependent GKSL-like generator
///   L(t)[rho] = -i[H(t), rho] + sum_j g_j(t) (L_j rho L_j^+ - {L_j^+ L_j, rho}/2).
struct GeneratorSpec {
  std::vector<LindbladTerm> terms;
  std::function<CMat(double)> hamiltonian;  // optional

  // Real 4x4 matrix G with G_ij = Tr(sigma_i L(t)[sigma_j]) / 2.
  RMat pauli_generator(double t) const;
};

/// Time-ordered exponential over [0, t] with midpoint exponential steps of
/// size <= dt. Throws SingularRateError when a rate is not finite.
AffineMap propagate_generator(const GeneratorSpec& g, double t, double dt);

enum class CpPolicy { raise, allow };
enum class Representation { affine, kraus, generator };

struct PhaseCovariantParams;

class DynamicalMap {
 public:
  using AffineFn = std::function<AffineMap(double)>;
  using KrausFn = std::function<KrausSet(double)>;

  static DynamicalMap from_affine(std::string name, AffineFn fn, double t_min, double t_max);
  static DynamicalMap from_kraus(std::string name, KrausFn fn, double t_min, double t_max);
  /// Integrates the generator once on [0, t_max] and keeps checkpoints every
  /// dt; evaluation finishes with one partial midpoint step.
  static DynamicalMap from_generator(std::string name, GeneratorSpec g, double t_max, double dt);

  AffineMap at(double t) const;
  KrausSet kraus_at(double t) const;
  HermMat choi(double t) const;
  CptpReport is_cptp(double t, double tol = 1e-9) const;

  DynamicalMap with_cp_policy(CpPolicy policy) const;
  DynamicalMap with_phase_covariant(std::shared_ptr<const PhaseCovariantParams> params) const;

  const std::string& name() const { return name_; }
  Representation representation() const { return repr_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  CpPolicy cp_policy() const { return policy_; }
  const PhaseCovariantParams* phase_covariant() const { return phase_cov_.get(); }
  const GeneratorSpec* generator() const { return generator_.get(); }

 private:
  AffineMap raw_at(double t) const;

  std::string name_;
  Representation repr_ = Representation::affine;
  AffineFn affine_;
  KrausFn kraus_;
  std::shared_ptr<const GeneratorSpec> generator_;
  std::shared_ptr<const std::vector<RMat>> checkpoints_;
  double dt_ = 0.0;
  double t_min_ = 0.0;
  double t_max_ = 0.0;
  CpPolicy policy_ = CpPolicy::raise;
  std::shared_ptr<const PhaseCovariantParams> phase_cov_;
};

double purity(const CMat& rho);

}  // namespace nmw
