#include "ephx/ensemble.hpp"

#include <cmath>
#include <filesystem>

#include "ephx/csv.hpp"
#include "ephx/errors.hpp"
#include "ephx/propagator.hpp"

namespace ephx {

namespace {
constexpr double kWeightTol = 1e-9;
constexpr double kMatchFidelity = 1.0 - 1e-6;
constexpr double kSameState = 1.0 - 1e-12;

std::vector<double> weighted_density(const std::vector<Member>& members) {
  if (members.empty()) throw InvalidArgument("presence density of an empty ensemble");
  const Grid& g = members.front().psi.grid;
  std::vector<double> q(g.nx, 0.0);
  for (const auto& mb : members) {
    require_same_grid(mb.psi.grid, g);
    for (int i = 0; i < g.nx; ++i) q[i] += mb.weight * std::norm(mb.psi.amp[i]);
  }
  return q;
}

double weighted_energy(const std::vector<Member>& members, const PotentialProfile& V, double m) {
  double e = 0.0;
  for (const auto& mb : members) e += mb.weight * expect_h0(mb.psi, V, m);
  return e;
}
}  // namespace

Ensemble::Ensemble(std::vector<Member> m) : members(std::move(m)) { validate(); }

Ensemble Ensemble::pure(const WaveFunction& psi) { return Ensemble({Member{psi, 1.0}}); }

const Grid& Ensemble::grid() const {
  if (members.empty()) throw InvalidArgument("empty ensemble");
  return members.front().psi.grid;
}

double Ensemble::total_weight() const {
  double s = 0.0;
  for (const auto& mb : members) s += mb.weight;
  return s;
}

void Ensemble::validate() const {
  if (members.empty()) throw InvalidArgument("ensemble: no members");
  for (const auto& mb : members) {
    if (!(mb.weight >= 0.0)) throw InvalidArgument("ensemble: negative weight");
    require_same_grid(mb.psi.grid, members.front().psi.grid);
  }
  if (std::abs(total_weight() - 1.0) > kWeightTol) throw InvalidArgument("ensemble: weights do not sum to one");
}

const Grid& SignedEnsemble::grid() const {
  if (members.empty()) throw InvalidArgument("empty ensemble");
  return members.front().psi.grid;
}

double SignedEnsemble::total_weight() const {
  double s = 0.0;
  for (const auto& mb : members) s += mb.weight;
  return s;
}

void CollisionDelta::validate() const {
  require_same_grid(removed.psi.grid, added.psi.grid);
  if (removed.weight != added.weight) throw InvalidArgument("collision delta: removed and added weights differ");
  if (!(removed.weight >= 0.0)) throw InvalidArgument("collision delta: negative weight");
}

CollisionDelta make_delta(const WaveFunction& removed, const WaveFunction& added, double weight) {
  CollisionDelta d{Member{removed, weight}, Member{added, weight}};
  d.validate();
  return d;
}

std::vector<double> presence_density(const Ensemble& ens) { return weighted_density(ens.members); }
std::vector<double> presence_density(const SignedEnsemble& ens) { return weighted_density(ens.members); }

Ensemble apply_collision_strict(const Ensemble& ens, const CollisionDelta& delta) {
  delta.validate();
  require_same_grid(delta.removed.psi.grid, ens.grid());
  std::vector<Member> out = ens.members;
  int hit = -1;
  for (int j = 0; j < static_cast<int>(out.size()); ++j)
    if (fidelity(out[j].psi, delta.removed.psi) >= kMatchFidelity && out[j].weight + kWeightTol >= delta.removed.weight) {
      hit = j;
      break;
    }
  if (hit < 0) throw MemberNotFound("apply_collision: removed state is not a member of the ensemble");
  out[hit].weight -= delta.removed.weight;
  if (out[hit].weight <= kWeightTol * 1e-3) out.erase(out.begin() + hit);
  bool merged = false;
  for (auto& mb : out)
    if (fidelity(mb.psi, delta.added.psi) >= kSameState) {
      mb.weight += delta.added.weight;
      merged = true;
      break;
    }
  if (!merged) out.push_back(delta.added);
  Ensemble e;
  e.members = std::move(out);
  e.validate();
  return e;
}

SignedEnsemble apply_collision_blind(const Ensemble& ens, const CollisionDelta& delta) {
  delta.validate();
  require_same_grid(delta.removed.psi.grid, ens.grid());
  SignedEnsemble s;
  s.members = ens.members;
  s.members.push_back(Member{delta.removed.psi, -delta.removed.weight});
  s.members.push_back(delta.added);
  return s;
}

std::variant<Ensemble, SignedEnsemble> apply_collision(const Ensemble& ens, const CollisionDelta& delta, bool strict) {
  if (strict) return apply_collision_strict(ens, delta);
  return apply_collision_blind(ens, delta);
}

double ensemble_energy(const Ensemble& ens, const PotentialProfile& V, double m) {
  return weighted_energy(ens.members, V, m);
}

double ensemble_energy(const SignedEnsemble& ens, const PotentialProfile& V, double m) {
  return weighted_energy(ens.members, V, m);
}

double delta_energy(const CollisionDelta& delta, const PotentialProfile& V, double m) {
  delta.validate();
  return delta.added.weight * expect_h0(delta.added.psi, V, m) - delta.removed.weight * expect_h0(delta.removed.psi, V, m);
}

void write_ensemble(const std::string& dir, const Ensemble& ens) {
  std::filesystem::create_directories(dir);
  CsvWriter idx(dir + "/index.csv");
  idx.header({"member", "weight", "file"});
  for (std::size_t j = 0; j < ens.members.size(); ++j) {
    std::string file = "member_" + std::to_string(j) + ".csv";
    idx.row(j, ens.members[j].weight, file);
    TrajectoryWriter w(dir + "/" + file, false);
    w.write(0.0, ens.members[j].psi);
  }
}

}  // namespace ephx
