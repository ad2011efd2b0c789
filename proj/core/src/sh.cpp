// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include "prtvol/sh.h"

#include <array>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace prtvol {
namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxShDegree) {
    throw InvalidArgument("SH degree " + std::to_string(degree) + " outside [0, " +
                          std::to_string(kMaxShDegree) + "]");
  }
}

// K_l^m = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!), m >= 0.
struct NormalizationTable {
  std::array<std::array<double, kMaxShDegree + 1>, kMaxShDegree + 1> k{};

  NormalizationTable() {
    for (int l = 0; l <= kMaxShDegree; ++l) {
      for (int m = 0; m <= l; ++m) {
        double ratio = 1.0;
        for (int f = l - m + 1; f <= l + m; ++f) ratio /= f;
        k[l][m] = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * ratio);
      }
    }
  }
};

const NormalizationTable& normalization() {
  static const NormalizationTable table;
  return table;
}

}  // namespace

ShVector::ShVector(int degree) : degree_(degree) {
  check_degree(degree);
  coeffs_.assign(static_cast<std::size_t>(sh_count(degree)), 0.0);
}

ShVector::ShVector(std::vector<double> coeffs, int degree)
    : coeffs_(std::move(coeffs)), degree_(degree) {
  check_degree(degree);
  if (coeffs_.size() != static_cast<std::size_t>(sh_count(degree))) {
    throw InvalidArgument("ShVector: " + std::to_string(coeffs_.size()) +
                          " coefficients given, degree " + std::to_string(degree) +
                          " requires " + std::to_string(sh_count(degree)));
  }
}

ShVector ShVector::basis_vector(int index, int degree) {
  ShVector v(degree);
  if (index < 0 || static_cast<std::size_t>(index) >= v.size()) {
    throw InvalidArgument("ShVector::basis_vector: index out of range");
  }
  v[static_cast<std::size_t>(index)] = 1.0;
  return v;
}

ShVector ShVector::truncated(int degree) const {
  if (degree > degree_) throw InvalidArgument("ShVector::truncated: degree exceeds source");
  std::vector<double> head(coeffs_.begin(), coeffs_.begin() + sh_count(degree));
  return ShVector(std::move(head), degree);
}

double ShVector::norm() const { return std::sqrt(inner_product(*this, *this)); }

ShVector& ShVector::operator+=(const ShVector& o) {
  if (o.size() != size()) throw InvalidArgument("ShVector: length mismatch in +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

ShVector& ShVector::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

ShVector operator+(ShVector a, const ShVector& b) { return a += b; }
ShVector operator*(ShVector a, double s) { return a *= s; }
ShVector operator*(double s, ShVector a) { return a *= s; }

void eval_basis(const Direction& dir, int degree, std::span<double> out) {
  check_degree(degree);
  if (out.size() < static_cast<std::size_t>(sh_count(degree))) {
    throw InvalidArgument("eval_basis: output span too small");
  }
  const double x = dir.x(), y = dir.y(), z = dir.z();
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
    throw InvalidArgument("eval_basis: non-finite direction");
  }

  // (x + iy)^m = sin^m(theta) (cos(m phi) + i sin(m phi)), so the sin^m factor
  // of P_l^m is folded in here and the Legendre recurrence stays polynomial.
  std::array<double, kMaxShDegree + 1> cos_m{};
  std::array<double, kMaxShDegree + 1> sin_m{};
  cos_m[0] = 1.0;
  sin_m[0] = 0.0;
  for (int m = 1; m <= degree; ++m) {
    cos_m[m] = x * cos_m[m - 1] - y * sin_m[m - 1];
    sin_m[m] = x * sin_m[m - 1] + y * cos_m[m - 1];
  }

  const auto& k = normalization().k;
  const double sqrt2 = std::numbers::sqrt2;
  double q_mm = 1.0;  // P_m^m / sin^m = (-1)^m (2m-1)!!
  for (int m = 0; m <= degree; ++m) {
    if (m > 0) q_mm *= -(2.0 * m - 1.0);
    double q_prev = 0.0;
    double q = q_mm;
    for (int l = m; l <= degree; ++l) {
      if (l == m + 1) {
        q_prev = q;
        q = z * (2.0 * m + 1.0) * q_mm;
      } else if (l > m + 1) {
        const double next = ((2.0 * l - 1.0) * z * q - (l + m - 1.0) * q_prev) / (l - m);
        q_prev = q;
        q = next;
      }
      const double scaled = k[l][m] * q;
      if (m == 0) {
        out[static_cast<std::size_t>(sh_index(l, 0))] = scaled;
      } else {
        out[static_cast<std::size_t>(sh_index(l, m))] = sqrt2 * scaled * cos_m[m];
        out[static_cast<std::size_t>(sh_index(l, -m))] = sqrt2 * scaled * sin_m[m];
      }
    }
  }
}

ShVector eval_basis(const Direction& dir, int degree) {
  ShVector v(degree);
  eval_basis(dir, degree, v.coeffs());
  return v;
}

double reconstruct(const ShVector& v, const Direction& dir) {
  std::array<double, sh_count(kMaxShDegree)> basis{};
  eval_basis(dir, v.degree(), basis);
  double sum = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) sum += v[j] * basis[j];
  return sum;
}

double inner_product(const ShVector& u, const ShVector& v) {
  if (u.size() != v.size()) {
    throw InvalidArgument("inner_product: length mismatch (" + std::to_string(u.size()) +
                          " vs " + std::to_string(v.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) sum += u[j] * v[j];
  return sum;
}

QuadratureSpec parse_quadrature(const std::string& text) {
  QuadratureSpec spec;
  char sep = 0;
  std::istringstream in(text);
  if (!(in >> spec.theta >> sep >> spec.phi) || (sep != 'x' && sep != 'X') || !in.eof() ||
      spec.theta <= 0 || spec.phi <= 0) {
    throw InvalidArgument("quadrature must look like 128x256, got '" + text + "'");
  }
  return spec;
}

std::string to_string(const QuadratureSpec& spec) {
  return std::to_string(spec.theta) + "x" + std::to_string(spec.phi);
}

SphericalQuadrature::SphericalQuadrature(QuadratureSpec spec, int degree)
    : spec_(spec), degree_(degree), stride_(static_cast<std::size_t>(sh_count(degree))) {
  check_degree(degree);
  if (spec.theta < 8 || spec.phi < 16) {
    throw InvalidArgument("quadrature " + to_string(spec) + " below minimum 8x16");
  }
  const double d_theta = kPi / spec.theta;
  const double d_phi = 2.0 * kPi / spec.phi;
  const std::size_t n = static_cast<std::size_t>(spec.theta) * spec.phi;
  directions_.reserve(n);
  weights_.reserve(n);
  basis_.resize(n * stride_);
  for (int i = 0; i < spec.theta; ++i) {
    const double theta = (i + 0.5) * d_theta;
    const double w = std::sin(theta) * d_theta * d_phi;
    for (int k = 0; k < spec.phi; ++k) {
      const double phi = (k + 0.5) * d_phi;
      directions_.push_back(Direction::from_spherical(theta, phi));
      weights_.push_back(w);
      eval_basis(directions_.back(), degree,
                 std::span<double>(basis_.data() + (directions_.size() - 1) * stride_, stride_));
    }
  }
}

ShVector SphericalQuadrature::project(std::span<const double> values) const {
  if (values.size() != size()) throw InvalidArgument("SphericalQuadrature::project: size mismatch");
  ShVector out(degree_);
  auto c = out.coeffs();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v)) {
      throw InvalidArgument("project: non-finite sample at node " + std::to_string(i));
    }
    if (v == 0.0) continue;
    const double wv = weights_[i] * v;
    const double* y = basis_.data() + i * stride_;
    for (std::size_t j = 0; j < stride_; ++j) c[j] += wv * y[j];
  }
  return out;
}

double SphericalQuadrature::integrate(const std::function<double(const Direction&)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double v = f(directions_[i]);
    if (!std::isfinite(v)) throw InvalidArgument("integrate: non-finite integrand");
    sum += weights_[i] * v;
  }
  return sum;
}

ShVector project(const std::function<double(const Direction&)>& f, QuadratureSpec quad,
                 int degree) {
  const SphericalQuadrature q(quad, degree);
  std::vector<double> values(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) values[i] = f(q.direction(i));
  return q.project(values);
}

std::string sh_vector_to_json(const ShVector& v) {
  nlohmann::ordered_json doc;
  doc["degree"] = v.degree();
  doc["convention"] = kShConvention;
  doc["coeffs"] = std::vector<double>(v.coeffs().begin(), v.coeffs().end());
  return doc.dump(2) + "\n";
}

ShVector sh_vector_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const int degree = doc.at("degree").get<int>();
    return ShVector(doc.at("coeffs").get<std::vector<double>>(), degree);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("SH vector JSON: ") + e.what());
  }
}

}  // namespace prtvol
