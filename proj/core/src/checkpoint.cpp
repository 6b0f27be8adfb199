#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "mix/error.hpp"
#include "mix/hamiltonian.hpp"

// Layout (all integers and doubles little-endian):
//   char[8]  magic "MIXEIGV1"
//   u32      format version (1)
//   u32      N_b, N_f, M
//   u64      dim_b, dim_f
//   f64      g_bf, g_bb, g_ff
//   u32      state count
//   per state: f64 energy, f64 residual, u32 flags (bit 0 = degenerate), u32 index,
//              dim_b * dim_f f64 coefficients, boson-major

namespace mix {

namespace {

constexpr std::array<char, 8> kMagic{'M', 'I', 'X', 'E', 'I', 'G', 'V', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename U>
void put(std::ostream& os, U value) {
  std::array<unsigned char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xffu);
  os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(U));
}

void put_f64(std::ostream& os, double v) { put(os, std::bit_cast<std::uint64_t>(v)); }

template <typename U>
U get(std::istream& is) {
  std::array<unsigned char, sizeof(U)> bytes{};
  if (!is.read(reinterpret_cast<char*>(bytes.data()), sizeof(U))) throw Error("checkpoint truncated");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get<std::uint64_t>(is)); }

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const MixtureHamiltonian& h,
                      const std::vector<MixtureEigenstate>& states) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open checkpoint for writing: " + path.string());
  const MixtureModel& m = h.model();
  os.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(m.bosons));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(m.fermions));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(m.orbitals));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(h.boson_dimension()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(h.fermion_dimension()));
  put_f64(os, m.couplings.boson_fermion);
  put_f64(os, m.couplings.boson_boson);
  put_f64(os, m.couplings.fermion_fermion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(states.size()));
  for (const auto& s : states) {
    if (s.coefficients.rows() != h.boson_dimension() || s.coefficients.cols() != h.fermion_dimension()) {
      throw ShapeError("state does not match the Hamiltonian dimensions");
    }
    put_f64(os, s.energy);
    put_f64(os, s.residual);
    put<std::uint32_t>(os, s.degenerate ? 1u : 0u);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(s.index));
    for (Eigen::Index b = 0; b < s.coefficients.rows(); ++b)
      for (Eigen::Index f = 0; f < s.coefficients.cols(); ++f) put_f64(os, s.coefficients(b, f));
  }
  if (!os) throw Error("failed writing checkpoint: " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open checkpoint: " + path.string());
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw Error("not a mix checkpoint: " + path.string());
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) throw Error("unsupported checkpoint version " + std::to_string(version));
  Checkpoint cp;
  cp.model.bosons = static_cast<int>(get<std::uint32_t>(is));
  cp.model.fermions = static_cast<int>(get<std::uint32_t>(is));
  cp.model.orbitals = static_cast<int>(get<std::uint32_t>(is));
  cp.boson_dimension = static_cast<Eigen::Index>(get<std::uint64_t>(is));
  cp.fermion_dimension = static_cast<Eigen::Index>(get<std::uint64_t>(is));
  cp.model.couplings.boson_fermion = get_f64(is);
  cp.model.couplings.boson_boson = get_f64(is);
  cp.model.couplings.fermion_fermion = get_f64(is);
  const auto count = get<std::uint32_t>(is);
  for (std::uint32_t k = 0; k < count; ++k) {
    MixtureEigenstate s;
    s.energy = get_f64(is);
    s.residual = get_f64(is);
    s.degenerate = (get<std::uint32_t>(is) & 1u) != 0;
    s.index = static_cast<int>(get<std::uint32_t>(is));
    s.coefficients.resize(cp.boson_dimension, cp.fermion_dimension);
    for (Eigen::Index b = 0; b < cp.boson_dimension; ++b)
      for (Eigen::Index f = 0; f < cp.fermion_dimension; ++f) s.coefficients(b, f) = get_f64(is);
    cp.states.push_back(std::move(s));
  }
  return cp;
}

}  // namespace mix
