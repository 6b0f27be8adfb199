#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "mix/types.hpp"

namespace mix {

enum class Statistics { Bose, Fermi };

using Occupation = std::vector<int>;

/// One sparse matrix element: <to| op |from> = amplitude.
struct Transition {
  std::uint32_t from;
  std::uint32_t to;
  double amplitude;
};

/// Element of the pair-annihilation map  a_l a_k |config> = amplitude |target>.
struct PairEntry {
  std::uint32_t config;
  std::uint16_t k;
  std::uint16_t l;
  double amplitude;
};

class OneBodyTable;
class PairTable;

/// Number-conserving Fock space of one species.
///
/// Configurations are stored in descending lexicographic order, so the first
/// entry is the lowest-orbital filling (|N,0,...> for bosons, |1,..,1,0,...> for fermions).
class SpeciesSector {
 public:
  /// Throws InfeasibleSectorError for Fermi statistics with N > M.
  static SpeciesSector enumerate(Statistics statistics, int particles, int orbitals);

  Statistics statistics() const { return statistics_; }
  int particles() const { return particles_; }
  int orbitals() const { return orbitals_; }
  std::size_t dimension() const { return configs_.size(); }

  const Occupation& config(std::size_t k) const { return configs_.at(k); }
  const std::vector<Occupation>& configs() const { return configs_; }

  std::optional<std::size_t> find(const Occupation& occ) const;
  /// Throws IndexError when occ is not part of the sector.
  std::size_t index_of(const Occupation& occ) const;

  /// Lazily built operator tables; shared between copies of the sector.
  const OneBodyTable& one_body() const;
  const PairTable& pairs() const;

 private:
  struct Cache;

  SpeciesSector(Statistics statistics, int particles, int orbitals, std::vector<Occupation> configs);

  Statistics statistics_;
  int particles_;
  int orbitals_;
  std::vector<Occupation> configs_;
  std::map<Occupation, std::size_t> index_;
  std::shared_ptr<Cache> cache_;
};

/// Annihilate a particle in `orbital`, multiplying `amplitude` by the bosonic
/// factor sqrt(n) or the fermionic sign (-1)^(occupied orbitals below). Returns
/// false when the result vanishes.
bool annihilate(Statistics statistics, Occupation& occ, int orbital, double& amplitude);
bool create(Statistics statistics, Occupation& occ, int orbital, double& amplitude);

/// Sparse action of every bilinear a^dagger_m a_n on a sector.
class OneBodyTable {
 public:
  explicit OneBodyTable(const SpeciesSector& sector);

  int orbitals() const { return orbitals_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<Transition>& entries(int m, int n) const;

  /// (a^dagger_m a_n) state.
  Vec apply(int m, int n, const Vec& state) const;
  /// Dense matrix of sum_mn h_mn a^dagger_m a_n.
  Mat operator_matrix(const Mat& h) const;
  /// D_mn = sum_c <bra_c| a^dagger_m a_n |ket_c> over matching columns.
  Mat transition(const Mat& bra, const Mat& ket) const;

 private:
  int orbitals_;
  std::size_t dimension_;
  std::vector<std::vector<Transition>> entries_;
};

/// Pair annihilation a_l a_k into the (N-2)-particle sector, grouped by target.
class PairTable {
 public:
  explicit PairTable(const SpeciesSector& sector);

  int orbitals() const { return orbitals_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<std::vector<PairEntry>>& by_target() const { return by_target_; }

  /// Dense matrix of 1/2 sum_ijkl V[(i,j),(k,l)] a^dagger_i a^dagger_j a_l a_k.
  Mat operator_matrix(const Mat& pair_tensor) const;
  /// Two-body density D2[(i,j),(k,l)] = sum_c <s_c| a^dagger_i a^dagger_j a_l a_k |s_c>.
  Mat density(const Mat& states) const;

 private:
  int orbitals_;
  std::size_t dimension_;
  std::vector<std::vector<PairEntry>> by_target_;
};

inline SpeciesSector enumerate(Statistics statistics, int particles, int orbitals) {
  return SpeciesSector::enumerate(statistics, particles, orbitals);
}

/// (a^dagger_m a_n)|state>. Throws ShapeError on dimension mismatch, IndexError on bad orbitals.
Vec apply_bilinear(const SpeciesSector& sector, int m, int n, const Vec& state);

/// D_mn = <bra| a^dagger_m a_n |ket>.
Mat one_body_transition(const SpeciesSector& sector, const Vec& bra, const Vec& ket);

}  // namespace mix
