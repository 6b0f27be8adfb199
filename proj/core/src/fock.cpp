#include "mix/fock.hpp"

#include <cmath>
#include <limits>

#include "mix/error.hpp"

namespace mix {

struct SpeciesSector::Cache {
  std::once_flag one_body_once;
  std::once_flag pairs_once;
  std::unique_ptr<OneBodyTable> one_body;
  std::unique_ptr<PairTable> pairs;
};

namespace {

void enumerate_recursive(Statistics statistics, int remaining, int orbital, Occupation& current,
                         std::vector<Occupation>& out) {
  const int m = static_cast<int>(current.size());
  if (orbital == m) {
    if (remaining == 0) out.push_back(current);
    return;
  }
  const int max_here = statistics == Statistics::Fermi ? std::min(1, remaining) : remaining;
  for (int n = max_here; n >= 0; --n) {
    current[static_cast<std::size_t>(orbital)] = n;
    enumerate_recursive(statistics, remaining - n, orbital + 1, current, out);
  }
  current[static_cast<std::size_t>(orbital)] = 0;
}

int occupied_below(const Occupation& occ, int orbital) {
  int count = 0;
  for (int i = 0; i < orbital; ++i) count += occ[static_cast<std::size_t>(i)];
  return count;
}

}  // namespace

SpeciesSector::SpeciesSector(Statistics statistics, int particles, int orbitals, std::vector<Occupation> configs)
    : statistics_(statistics),
      particles_(particles),
      orbitals_(orbitals),
      configs_(std::move(configs)),
      cache_(std::make_shared<Cache>()) {
  for (std::size_t k = 0; k < configs_.size(); ++k) index_.emplace(configs_[k], k);
}

SpeciesSector SpeciesSector::enumerate(Statistics statistics, int particles, int orbitals) {
  if (particles < 0) throw InfeasibleSectorError("particle number must be non-negative");
  if (orbitals < 1) throw InfeasibleSectorError("sector needs at least one orbital");
  if (statistics == Statistics::Fermi && particles > orbitals) {
    throw InfeasibleSectorError("cannot place " + std::to_string(particles) + " fermions in " +
                                std::to_string(orbitals) + " orbitals");
  }
  std::vector<Occupation> configs;
  Occupation current(static_cast<std::size_t>(orbitals), 0);
  enumerate_recursive(statistics, particles, 0, current, configs);
  if (configs.size() > std::numeric_limits<std::uint32_t>::max()) throw CapacityError("sector too large");
  return SpeciesSector(statistics, particles, orbitals, std::move(configs));
}

std::optional<std::size_t> SpeciesSector::find(const Occupation& occ) const {
  auto it = index_.find(occ);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SpeciesSector::index_of(const Occupation& occ) const {
  auto k = find(occ);
  if (!k) throw IndexError("occupation vector is not part of the sector");
  return *k;
}

const OneBodyTable& SpeciesSector::one_body() const {
  std::call_once(cache_->one_body_once, [this] { cache_->one_body = std::make_unique<OneBodyTable>(*this); });
  return *cache_->one_body;
}

const PairTable& SpeciesSector::pairs() const {
  std::call_once(cache_->pairs_once, [this] { cache_->pairs = std::make_unique<PairTable>(*this); });
  return *cache_->pairs;
}

bool annihilate(Statistics statistics, Occupation& occ, int orbital, double& amplitude) {
  int& n = occ[static_cast<std::size_t>(orbital)];
  if (n == 0) return false;
  if (statistics == Statistics::Bose) {
    amplitude *= std::sqrt(static_cast<double>(n));
  } else if (occupied_below(occ, orbital) % 2 == 1) {
    amplitude = -amplitude;
  }
  --n;
  return true;
}

bool create(Statistics statistics, Occupation& occ, int orbital, double& amplitude) {
  int& n = occ[static_cast<std::size_t>(orbital)];
  if (statistics == Statistics::Bose) {
    amplitude *= std::sqrt(static_cast<double>(n + 1));
  } else {
    if (n == 1) return false;
    if (occupied_below(occ, orbital) % 2 == 1) amplitude = -amplitude;
  }
  ++n;
  return true;
}

OneBodyTable::OneBodyTable(const SpeciesSector& sector)
    : orbitals_(sector.orbitals()), dimension_(sector.dimension()) {
  const int m_orb = orbitals_;
  entries_.resize(static_cast<std::size_t>(m_orb * m_orb));
  const Statistics stats = sector.statistics();
  for (std::size_t k = 0; k < dimension_; ++k) {
    const Occupation& base = sector.config(k);
    for (int n = 0; n < m_orb; ++n) {
      if (base[static_cast<std::size_t>(n)] == 0) continue;
      for (int m = 0; m < m_orb; ++m) {
        Occupation occ = base;
        double amp = 1.0;
        annihilate(stats, occ, n, amp);
        if (!create(stats, occ, m, amp)) continue;
        const std::size_t to = sector.index_of(occ);
        entries_[static_cast<std::size_t>(m * m_orb + n)].push_back(
            {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(to), amp});
      }
    }
  }
}

const std::vector<Transition>& OneBodyTable::entries(int m, int n) const {
  if (m < 0 || n < 0 || m >= orbitals_ || n >= orbitals_) throw IndexError("orbital index out of range");
  return entries_[static_cast<std::size_t>(m * orbitals_ + n)];
}

Vec OneBodyTable::apply(int m, int n, const Vec& state) const {
  if (static_cast<std::size_t>(state.size()) != dimension_) throw ShapeError("state dimension does not match sector");
  Vec out = Vec::Zero(state.size());
  for (const Transition& t : entries(m, n)) out[t.to] += t.amplitude * state[t.from];
  return out;
}

Mat OneBodyTable::operator_matrix(const Mat& h) const {
  if (h.rows() != orbitals_ || h.cols() != orbitals_) throw ShapeError("one-body matrix must be M x M");
  const auto d = static_cast<Eigen::Index>(dimension_);
  Mat out = Mat::Zero(d, d);
  for (int m = 0; m < orbitals_; ++m)
    for (int n = 0; n < orbitals_; ++n) {
      const double hmn = h(m, n);
      if (hmn == 0.0) continue;
      for (const Transition& t : entries_[static_cast<std::size_t>(m * orbitals_ + n)]) {
        out(t.to, t.from) += hmn * t.amplitude;
      }
    }
  return out;
}

Mat OneBodyTable::transition(const Mat& bra, const Mat& ket) const {
  if (static_cast<std::size_t>(bra.rows()) != dimension_ || static_cast<std::size_t>(ket.rows()) != dimension_ ||
      bra.cols() != ket.cols()) {
    throw ShapeError("states do not match sector dimension");
  }
  Mat d = Mat::Zero(orbitals_, orbitals_);
  for (int m = 0; m < orbitals_; ++m)
    for (int n = 0; n < orbitals_; ++n) {
      double s = 0.0;
      for (const Transition& t : entries_[static_cast<std::size_t>(m * orbitals_ + n)]) {
        s += t.amplitude * bra.row(t.to).dot(ket.row(t.from));
      }
      d(m, n) = s;
    }
  return d;
}

PairTable::PairTable(const SpeciesSector& sector) : orbitals_(sector.orbitals()), dimension_(sector.dimension()) {
  if (sector.particles() < 2) return;
  const SpeciesSector target = SpeciesSector::enumerate(sector.statistics(), sector.particles() - 2, orbitals_);
  by_target_.resize(target.dimension());
  const Statistics stats = sector.statistics();
  for (std::size_t a = 0; a < dimension_; ++a) {
    const Occupation& base = sector.config(a);
    for (int k = 0; k < orbitals_; ++k) {
      Occupation once = base;
      double amp_k = 1.0;
      if (!annihilate(stats, once, k, amp_k)) continue;
      for (int l = 0; l < orbitals_; ++l) {
        Occupation twice = once;
        double amp = amp_k;
        if (!annihilate(stats, twice, l, amp)) continue;
        const std::size_t c = target.index_of(twice);
        by_target_[c].push_back({static_cast<std::uint32_t>(a), static_cast<std::uint16_t>(k),
                                 static_cast<std::uint16_t>(l), amp});
      }
    }
  }
}

Mat PairTable::operator_matrix(const Mat& pair_tensor) const {
  const int m = orbitals_;
  if (pair_tensor.rows() != m * m || pair_tensor.cols() != m * m) throw ShapeError("pair tensor must be M^2 x M^2");
  const auto d = static_cast<Eigen::Index>(dimension_);
  Mat out = Mat::Zero(d, d);
  for (const auto& group : by_target_) {
    for (const PairEntry& bra : group) {
      const Eigen::Index row = bra.k * m + bra.l;
      for (const PairEntry& ket : group) {
        const double v = pair_tensor(row, ket.k * m + ket.l);
        if (v == 0.0) continue;
        out(bra.config, ket.config) += 0.5 * v * bra.amplitude * ket.amplitude;
      }
    }
  }
  return out;
}

Mat PairTable::density(const Mat& states) const {
  const int m = orbitals_;
  if (static_cast<std::size_t>(states.rows()) != dimension_) throw ShapeError("states do not match sector dimension");
  Mat d2 = Mat::Zero(m * m, m * m);
  Mat x(m * m, states.cols());
  for (const auto& group : by_target_) {
    x.setZero();
    for (const PairEntry& e : group) x.row(e.k * m + e.l) += e.amplitude * states.row(e.config);
    d2.noalias() += x * x.transpose();
  }
  return d2;
}

Vec apply_bilinear(const SpeciesSector& sector, int m, int n, const Vec& state) {
  if (static_cast<std::size_t>(state.size()) != sector.dimension()) {
    throw ShapeError("state dimension does not match sector");
  }
  return sector.one_body().apply(m, n, state);
}

Mat one_body_transition(const SpeciesSector& sector, const Vec& bra, const Vec& ket) {
  return sector.one_body().transition(bra, ket);
}

}  // namespace mix
