#include "subw/rational.hpp"

#include <cctype>

#include "subw/errors.hpp"

namespace subw {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw DomainError("empty rational literal");
  auto dot = s.find('.');
  try {
    if (dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw DomainError("mixed decimal/fraction literal: " + s);
      std::string int_part = s.substr(0, dot);
      std::string frac_part = s.substr(dot + 1);
      bool negative = !int_part.empty() && int_part[0] == '-';
      if (negative || (!int_part.empty() && int_part[0] == '+')) int_part.erase(0, 1);
      if (int_part.empty()) int_part = "0";
      if (frac_part.empty()) frac_part = "0";
      for (char c : int_part + frac_part) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw DomainError("bad rational literal: " + s);
      }
      BigInt denominator;
      mpz_ui_pow_ui(denominator.get_mpz_t(), 10, frac_part.size());
      Rational value(BigInt(int_part + frac_part), denominator);
      value.canonicalize();
      return negative ? Rational(-value) : value;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      char c = s[i];
      bool ok = std::isdigit(static_cast<unsigned char>(c)) || c == '/' || ((c == '-' || c == '+') && i == 0);
      if (!ok) throw DomainError("bad rational literal: " + s);
    }
    if (s[0] == '+') s.erase(0, 1);
    Rational value(s);
    if (value.get_den() == 0) throw DomainError("zero denominator: " + s);
    value.canonicalize();
    return value;
  } catch (const std::invalid_argument&) {
    throw DomainError("bad rational literal: " + s);
  }
}

std::string to_string(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  return v.get_str();
}

BigInt floor_of(const Rational& value) {
  BigInt result;
  mpz_fdiv_q(result.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return result;
}

BigInt ceil_of(const Rational& value) {
  BigInt result;
  mpz_cdiv_q(result.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return result;
}

BigInt floor_power(unsigned long base, const Rational& exponent) {
  if (base == 0) throw DomainError("floor_power: base must be positive");
  if (exponent < 0) throw DomainError("floor_power: exponent must be nonnegative");
  // floor(base^(p/q)) = floor(q-th root of base^p)
  unsigned long p = exponent.get_num().get_ui();
  unsigned long q = exponent.get_den().get_ui();
  BigInt power;
  mpz_ui_pow_ui(power.get_mpz_t(), base, p);
  BigInt root;
  mpz_root(root.get_mpz_t(), power.get_mpz_t(), q);
  return root;
}

int compare_to_power(const Rational& ratio, unsigned long base, const Rational& exponent) {
  if (ratio <= 0) return -1;
  // ratio ? base^(p/q)  <=>  num^q ? base^p * den^q   (p >= 0), mirrored for p < 0
  const unsigned long q = exponent.get_den().get_ui();
  BigInt p_abs = abs(exponent.get_num());
  const unsigned long p = p_abs.get_ui();
  BigInt lhs, rhs, power;
  mpz_pow_ui(lhs.get_mpz_t(), ratio.get_num_mpz_t(), q);
  mpz_pow_ui(rhs.get_mpz_t(), ratio.get_den_mpz_t(), q);
  mpz_ui_pow_ui(power.get_mpz_t(), base, p);
  if (exponent >= 0) {
    rhs *= power;
  } else {
    lhs *= power;
  }
  return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
}

}  // namespace subw
