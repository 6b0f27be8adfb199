#pragma once

#include <string>

#include "mix/basis.hpp"
#include "mix/fock.hpp"
#include "mix/types.hpp"

namespace mix {

/// States are passed as columns of a matrix whose rows index the sector; the
/// density is summed over columns. A pure state is a single column; a species of
/// a mixture eigenstate is C (bosons) or C^T (fermions).

/// D_mn = <a^dagger_m a_n>.
Mat one_body_density_matrix(const SpeciesSector& sector, const Mat& states);
/// D2[(i,j),(k,l)] = <a^dagger_i a^dagger_j a_l a_k>. Throws ObservableError when N < 2.
Mat two_body_density_matrix(const SpeciesSector& sector, const Mat& states);

/// rho1(x) normalized to one particle.
Vec rho1_grid(const SpeciesSector& sector, const Mat& states, const OrbitalBasis& basis);
/// rho2(x1, x2) normalized to one pair. Throws ObservableError when N < 2.
Mat rho2_grid(const SpeciesSector& sector, const Mat& states, const OrbitalBasis& basis);

/// rho2 / (rho1 x rho1) where both factors exceed density_floor * max(rho1); NaN elsewhere.
Mat g2_grid(const Vec& rho1, const Mat& rho2, double density_floor = 1e-6);

enum class Provenance { Full, Smf, Effective, Schmidt1 };
std::string name(Provenance p);

struct CorrelationSet {
  Provenance provenance = Provenance::Full;
  Vec rho1;
  Mat rho2;
  Mat g2;
};

CorrelationSet correlations(const SpeciesSector& sector, const Mat& states, const OrbitalBasis& basis,
                            Provenance provenance, double density_floor = 1e-6);

/// Values of a grid kernel along x1 = x2 and along x1 = -x2.
Vec diagonal_cut(const Mat& kernel);
Vec antidiagonal_cut(const Mat& kernel);

/// Ordered signs of the runs of `values - 1`, e.g. "+-+"; entries with |values - 1| below
/// dead_band or NaN are skipped.
std::string sign_pattern(const Vec& values, double dead_band);

}  // namespace mix
