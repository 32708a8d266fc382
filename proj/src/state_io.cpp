#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "xylab/errors.hpp"
#include "xylab/spin_state.hpp"

namespace xylab {

namespace {

constexpr std::array<char, 4> kMagic{'X', 'Y', 'S', 'V'};
constexpr std::uint32_t kVersion = 1;
constexpr int kMaxDumpSites = 30;

template <typename T>
void put_le(std::ostream& os, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bytes{};
  is.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!is) throw IoError("state file truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

SpinState::SpinState(int n, Eigen::VectorXcd amplitudes) : n_(n), amplitudes_(std::move(amplitudes)) {
  if (n < 1 || n > kMaxDumpSites || amplitudes_.size() != (Eigen::Index{1} << n)) {
    throw ParameterError("state vector length must be 2^n");
  }
}

SpinState SpinState::basis(int n, std::uint64_t index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return SpinState(n, std::move(v));
}

void SpinState::normalize() {
  const double nrm = amplitudes_.norm();
  if (nrm == 0.0) throw ParameterError("cannot normalize the zero vector");
  amplitudes_ /= nrm;
}

cplx inner(const SpinState& a, const SpinState& b) {
  if (a.n() != b.n()) throw ParameterError("inner product of states with different n");
  return a.amplitudes().dot(b.amplitudes());
}

SpinState product_state(std::span<const Spinor> spinors) {
  const int n = static_cast<int>(spinors.size());
  Eigen::VectorXcd v(1);
  v(0) = 1.0;
  for (const Spinor& s : spinors) {
    Eigen::VectorXcd next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * s(0);
      next(2 * i + 1) = v(i) * s(1);
    }
    v = std::move(next);
  }
  return SpinState(n, std::move(v));
}

void write_state(const std::filesystem::path& path, const SpinState& state) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kVersion);
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(state.n()));
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) {
    put_le<double>(os, state.amplitudes()(i).real());
    put_le<double>(os, state.amplitudes()(i).imag());
  }
  if (!os) throw IoError("write failed for " + path.string());
}

SpinState read_state(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw IoError(path.string() + ": not a state dump");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kVersion) {
    std::ostringstream os;
    os << path.string() << ": unsupported state dump version " << version;
    throw IoError(os.str());
  }
  const auto n = get_le<std::uint64_t>(is);
  if (n < 1 || n > kMaxDumpSites) throw IoError(path.string() + ": bad site count");
  Eigen::VectorXcd v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    v(i) = cplx(re, im);
  }
  return SpinState(static_cast<int>(n), std::move(v));
}

}  // namespace xylab
