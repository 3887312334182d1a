#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

namespace serrematch {

using ExponentVec = std::array<std::uint8_t, 5>;

// A homogeneous quintic in five variables with exact integer coefficients.
class QuinticForm {
 public:
  using TermMap = std::map<ExponentVec, long long>;

  QuinticForm(TermMap terms, std::array<std::string, 5> coordinate_names);

  const TermMap& terms() const { return terms_; }
  const std::array<std::string, 5>& coordinate_names() const { return names_; }
  long long coefficient(const ExponentVec& e) const;

 private:
  TermMap terms_;
  std::array<std::string, 5> names_;
};

bool is_squarefree(long long d);

// The Schoen quintic family in (U, V, X2, X3, X4) coordinates, with the
// V-direction rescaled by sqrt(m):
//   U^5 + 10m U^3 V^2 + 5m^2 U V^4 + 16(X2^5 + X3^5 + X4^5)
//     - 20 (U^2 - m V^2) X2 X3 X4.
// For m = 1 this equals 16 times the quintic sum(Xi^5) - 5 prod(Xi) under
// U = X0 + X1, V = X0 - X1, so for odd p it has the same F_p point count.
// Accepts any nonzero m (used for square-class invariance checks).
QuinticForm schoen_uv_twist(long long m);

// Validated entry point: d must be squarefree and nonzero.
QuinticForm schoen_form(long long d);

}  // namespace serrematch
