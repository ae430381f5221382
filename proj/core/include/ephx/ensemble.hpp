#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ephx/potentials.hpp"
#include "ephx/units.hpp"

namespace ephx {

struct Member {
  WaveFunction psi;
  double weight = 0.0;  // M_j / M
};

// Weighted pure-state mixture with non-negative weights summing to one.
struct Ensemble {
  std::vector<Member> members;

  Ensemble() = default;
  explicit Ensemble(std::vector<Member> m);
  static Ensemble pure(const WaveFunction& psi);

  const Grid& grid() const;
  double total_weight() const;
  void validate() const;
};

// Output of a blind collision update: weights may be negative, so this is not a density matrix.
struct SignedEnsemble {
  std::vector<Member> members;
  const Grid& grid() const;
  double total_weight() const;
};

struct CollisionDelta {
  Member removed;
  Member added;
  void validate() const;
};

CollisionDelta make_delta(const WaveFunction& removed, const WaveFunction& added, double weight);

std::vector<double> presence_density(const Ensemble& ens);
std::vector<double> presence_density(const SignedEnsemble& ens);

// Strict path: removed.psi must match a member (fidelity >= 1 - 1e-6); throws MemberNotFound.
Ensemble apply_collision_strict(const Ensemble& ens, const CollisionDelta& delta);
// Blind path: subtracts removed and adds added without checking membership.
SignedEnsemble apply_collision_blind(const Ensemble& ens, const CollisionDelta& delta);
std::variant<Ensemble, SignedEnsemble> apply_collision(const Ensemble& ens, const CollisionDelta& delta, bool strict);

double ensemble_energy(const Ensemble& ens, const PotentialProfile& V, double m = Constants::m_eff);
double ensemble_energy(const SignedEnsemble& ens, const PotentialProfile& V, double m = Constants::m_eff);
double delta_energy(const CollisionDelta& delta, const PotentialProfile& V, double m = Constants::m_eff);

// index.csv (member, weight, file) plus one snapshot file per member.
void write_ensemble(const std::string& dir, const Ensemble& ens);

}  // namespace ephx
