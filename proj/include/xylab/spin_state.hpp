#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace xylab {

using cplx = std::complex<double>;

// Single-site spinor; component 0 is spin down, component 1 spin up.
using Spinor = Eigen::Vector2cd;

// Dense state of n spins. Basis index bit (n-1-j) holds site j (site 0 is the
// most significant bit), a set bit meaning spin up (Z = +1).
class SpinState {
 public:
  SpinState() = default;
  SpinState(int n, Eigen::VectorXcd amplitudes);

  static SpinState basis(int n, std::uint64_t index);

  int n() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }
  void normalize();

 private:
  int n_ = 0;
  Eigen::VectorXcd amplitudes_;
};

inline int site_bit(int n, int site) { return n - 1 - site; }

cplx inner(const SpinState& a, const SpinState& b);

// Tensor product of single-site spinors, site 0 first.
SpinState product_state(std::span<const Spinor> spinors);

// Binary dump: 16-byte header ("XYSV", uint32 version, uint64 n) followed by
// 2^n little-endian (re, im) doubles.
void write_state(const std::filesystem::path& path, const SpinState& state);
SpinState read_state(const std::filesystem::path& path);

}  // namespace xylab
