#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace sep4 {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Party dimensions d_1..d_n. Basis index is row-major mixed radix with
// party 1 (index 0 here) most significant.
using Dims = std::vector<int>;

inline constexpr int kMaxTotalDim = 4096;

// Set of parties, bit i <-> party i (0-based).
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t bits) : bits_(bits) {}

  static SubsetMask of(std::initializer_list<int> parties) {
    std::uint32_t b = 0;
    for (int p : parties) b |= 1u << p;
    return SubsetMask(b);
  }
  static SubsetMask all(int n) { return SubsetMask(n >= 32 ? ~0u : (1u << n) - 1u); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool contains(int party) const { return (bits_ >> party) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const;
  std::vector<int> parties() const;
  SubsetMask complement(int n) const { return SubsetMask(all(n).bits() & ~bits_); }
  // True iff no bit at or above n is set.
  bool valid_for(int n) const { return (bits_ & ~all(n).bits()) == 0; }

  friend constexpr SubsetMask operator^(SubsetMask a, SubsetMask b) {
    return SubsetMask(a.bits_ ^ b.bits_);
  }
  friend constexpr bool operator==(SubsetMask a, SubsetMask b) = default;

 private:
  std::uint32_t bits_ = 0;
};

long total_dim(const Dims& dims);

// Mixed-radix digit helpers for the shared index convention.
std::vector<long> strides(const Dims& dims);
std::vector<int> digits(long index, const Dims& dims);

}  // namespace sep4
