#pragma once

#include <Eigen/Dense>
#include <string_view>

namespace mix {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Species { Boson, Fermion };

constexpr Species other(Species s) noexcept {
  return s == Species::Boson ? Species::Fermion : Species::Boson;
}

constexpr std::string_view name(Species s) noexcept {
  return s == Species::Boson ? "boson" : "fermion";
}

}  // namespace mix
