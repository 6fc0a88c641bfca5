#pragma once

// Ambient parameters: generator counts (n, m), the deformation parameter q,
// and the relation mode it dictates.  |q| = 1 with rational angle works in
// the exact half-angle ring (q = h^2, exponents mod 2b); |q| < 1 works
// numerically with Wick rules only.

#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <variant>

#include "qtwist/errors.hpp"
#include "qtwist/scalar.hpp"

namespace qtwist {

// q = exp(2*pi*i*a/b), reduced fraction, 0 <= a < b.
struct UnitCircleRational {
  std::int64_t a = 0;
  std::int64_t b = 1;
};

// |z| < 1.
struct NumericComplex {
  std::complex<double> z;
};

enum class RelMode { Braided, WickOnly };

class Params {
 public:
  Params(int n, int m, UnitCircleRational r) : n_(n), m_(m) {
    check_nm();
    if (r.b < 1) throw mode_error("rational angle needs denominator >= 1");
    std::int64_t a = r.a % r.b;
    if (a < 0) a += r.b;
    const std::int64_t g = std::gcd(a, r.b);
    qmode_ = UnitCircleRational{a / g, r.b / g};
  }

  Params(int n, int m, NumericComplex z) : n_(n), m_(m), qmode_(z) {
    check_nm();
    if (std::abs(z.z) >= 1.0) throw mode_error("numeric q requires |q| < 1");
  }

  int n() const { return n_; }
  int m() const { return m_; }

  RelMode relmode() const { return exact() ? RelMode::Braided : RelMode::WickOnly; }
  bool exact() const { return std::holds_alternative<UnitCircleRational>(qmode_); }

  const UnitCircleRational& rational() const {
    if (!exact()) throw mode_error("not a unit-circle rational parameter");
    return std::get<UnitCircleRational>(qmode_);
  }

  // Exponent modulus of the half-angle ring: h^(2b) = 1.
  std::int64_t h_modulus() const { return exact() ? 2 * rational().b : 0; }

  // phi0 with q = exp(2*pi*i*phi0).
  double phi0() const {
    if (!exact()) throw mode_error("phi0 is defined for unit-circle parameters only");
    return static_cast<double>(rational().a) / static_cast<double>(rational().b);
  }

  std::complex<double> q_value() const {
    if (exact()) {
      const double ang = 2.0 * std::numbers::pi * phi0();
      return {std::cos(ang), std::sin(ang)};
    }
    return std::get<NumericComplex>(qmode_).z;
  }

  // Scalar factories in the ambient backend.
  Scalar one() const { return integer(1); }
  Scalar integer(std::int64_t c) const {
    return exact() ? Scalar::exact_int(c, h_modulus())
                   : Scalar::numeric(static_cast<double>(c));
  }
  Scalar q() const {
    return exact() ? Scalar::q_power(1, h_modulus()) : Scalar::numeric(q_value());
  }
  Scalar qbar() const { return q().conj(); }
  Scalar h() const {
    if (!exact()) throw mode_error("half-angle phase is exact-mode only");
    return Scalar::h_power(1, h_modulus());
  }
  Scalar hbar() const { return h().conj(); }
  Scalar numeric(std::complex<double> z) const {
    if (exact()) throw mode_error("numeric scalar requested in exact mode");
    return Scalar::numeric(z);
  }

 private:
  void check_nm() const {
    if (n_ < 1 || m_ < 1) throw mode_error("generator counts must satisfy n, m >= 1");
  }

  int n_;
  int m_;
  std::variant<UnitCircleRational, NumericComplex> qmode_;
};

}  // namespace qtwist
