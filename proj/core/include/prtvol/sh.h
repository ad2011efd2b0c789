// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

// Real spherical harmonics.
//
// Basis: real orthonormal SH with the Condon-Shortley phase included,
//   Y_l^0      = K_l^0 P_l^0(cos theta)
//   Y_l^m      = sqrt(2) K_l^m cos(m phi) P_l^m(cos theta)      m > 0
//   Y_l^{-m}   = sqrt(2) K_l^m sin(m phi) P_l^m(cos theta)      m > 0
// with theta measured from +z and phi from +x toward +y.
//
// Coefficient order: band l, order m in [-l, l] live at the zero-based
// index l^2 + l + m. The one-based index l^2 + l + m + 1 is what the file
// formats call "j".

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "prtvol/math.h"

namespace prtvol {

inline constexpr int kDefaultShDegree = 4;
inline constexpr int kMaxShDegree = 16;

constexpr int sh_count(int degree) { return (degree + 1) * (degree + 1); }
constexpr int sh_index(int l, int m) { return l * l + l + m; }

/// Name of the index convention, written into every serialized SH file.
inline constexpr const char* kShConvention =
    "real-orthonormal-condon-shortley; j = l*l + l + m + 1 (1-based)";

/// Coefficients of a band-limited spherical function, bands 0..degree.
class ShVector {
 public:
  /// All-zero vector of the given degree.
  explicit ShVector(int degree = kDefaultShDegree);

  /// Takes ownership of `coeffs`; throws unless coeffs.size() == (degree+1)^2.
  ShVector(std::vector<double> coeffs, int degree);

  /// Unit vector e_index (zero-based).
  static ShVector basis_vector(int index, int degree = kDefaultShDegree);

  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }

  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  /// Leading bands of this vector as a lower-degree vector.
  ShVector truncated(int degree) const;

  double norm() const;

  ShVector& operator+=(const ShVector& o);
  ShVector& operator*=(double s);

  friend bool operator==(const ShVector&, const ShVector&) = default;

 private:
  std::vector<double> coeffs_;
  int degree_;
};

ShVector operator+(ShVector a, const ShVector& b);
ShVector operator*(ShVector a, double s);
ShVector operator*(double s, ShVector a);

/// Writes Y_0..Y_{(degree+1)^2 - 1} at `dir` into `out`.
/// `out.size()` must be at least sh_count(degree).
void eval_basis(const Direction& dir, int degree, std::span<double> out);
ShVector eval_basis(const Direction& dir, int degree = kDefaultShDegree);

/// sum_j v_j Y_j(dir)
double reconstruct(const ShVector& v, const Direction& dir);

/// sum_j u_j v_j; throws on length mismatch.
double inner_product(const ShVector& u, const ShVector& v);

/// Resolution of the latitude-longitude quadrature grid.
struct QuadratureSpec {
  int theta = 128;
  int phi = 256;

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

/// Parses "THETAxPHI", e.g. "128x256".
QuadratureSpec parse_quadrature(const std::string& text);
std::string to_string(const QuadratureSpec& spec);

/// Midpoint latitude-longitude rule: node (i, k) sits at
/// theta = (i + 1/2) pi / n_theta, phi = (k + 1/2) 2 pi / n_phi, with weight
/// sin(theta) dtheta dphi. Basis values at every node are tabulated on
/// construction so repeated projections cost one pass over the table.
class SphericalQuadrature {
 public:
  SphericalQuadrature(QuadratureSpec spec, int degree = kDefaultShDegree);

  const QuadratureSpec& spec() const { return spec_; }
  int degree() const { return degree_; }
  std::size_t size() const { return directions_.size(); }

  const Direction& direction(std::size_t i) const { return directions_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> basis(std::size_t i) const {
    return {basis_.data() + i * stride_, stride_};
  }

  /// Projects tabulated samples (one value per node) onto the basis.
  ShVector project(std::span<const double> values) const;

  /// sum_i w_i f(omega_i); throws if f is non-finite anywhere.
  double integrate(const std::function<double(const Direction&)>& f) const;

 private:
  QuadratureSpec spec_;
  int degree_;
  std::size_t stride_;
  std::vector<Direction> directions_;
  std::vector<double> weights_;
  std::vector<double> basis_;
};

/// coeffs_j = integral f(omega) Y_j(omega) d omega, by lat-long quadrature.
/// Throws InvalidArgument below 8x16 or if f returns a non-finite value.
ShVector project(const std::function<double(const Direction&)>& f,
                 QuadratureSpec quad = {}, int degree = kDefaultShDegree);

/// {"degree": d, "convention": "...", "coeffs": [...]}
std::string sh_vector_to_json(const ShVector& v);
ShVector sh_vector_from_json(const std::string& text);

}  // namespace prtvol
