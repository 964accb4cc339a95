#pragma once

// Exact sparse arithmetic in Z[A, A^-1] and in Z[A, A^-1][V].
//
// LaurentPoly stores exponent -> coefficient with no zero coefficients, so
// structural equality is polynomial equality. PseudoPoly stores V-degree ->
// LaurentPoly with no zero coefficients.

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "pseudobracket/errors.hpp"

namespace pseudobracket {

  using Integer = boost::multiprecision::cpp_int;

  class LaurentPoly {
   public:
    using term_map = std::map<int, Integer>;

    LaurentPoly() = default;

    // The constant polynomial c.
    LaurentPoly(long long c) {  // NOLINT(runtime/explicit)
      if (c != 0) {
        _terms.emplace(0, Integer(c));
      }
    }

    static LaurentPoly monomial(Integer coeff, int exponent) {
      LaurentPoly p;
      if (coeff != 0) {
        p._terms.emplace(exponent, std::move(coeff));
      }
      return p;
    }

    // A^k
    static LaurentPoly A(int k = 1) {
      return monomial(1, k);
    }

    // The loop value d = -A^2 - A^-2.
    static LaurentPoly loop_value() {
      return monomial(-1, 2) + monomial(-1, -2);
    }

    // (-A^-3)^w, the writhe normalisation factor.
    static LaurentPoly writhe_factor(int w) {
      return monomial(w % 2 == 0 ? 1 : -1, -3 * w);
    }

    term_map const& terms() const noexcept {
      return _terms;
    }

    bool is_zero() const noexcept {
      return _terms.empty();
    }

    bool is_monomial() const noexcept {
      return _terms.size() == 1;
    }

    // Coefficient of A^k (zero if absent).
    Integer coefficient(int k) const {
      auto it = _terms.find(k);
      return it == _terms.end() ? Integer(0) : it->second;
    }

    int min_exponent() const {
      return _terms.empty() ? 0 : _terms.begin()->first;
    }

    int max_exponent() const {
      return _terms.empty() ? 0 : _terms.rbegin()->first;
    }

    LaurentPoly& operator+=(LaurentPoly const& q) {
      for (auto const& [e, c] : q._terms) {
        add_term(e, c);
      }
      return *this;
    }

    LaurentPoly& operator-=(LaurentPoly const& q) {
      for (auto const& [e, c] : q._terms) {
        add_term(e, -c);
      }
      return *this;
    }

    LaurentPoly operator-() const {
      LaurentPoly r = *this;
      for (auto& [e, c] : r._terms) {
        c = -c;
      }
      return r;
    }

    friend LaurentPoly operator+(LaurentPoly p, LaurentPoly const& q) {
      p += q;
      return p;
    }

    friend LaurentPoly operator-(LaurentPoly p, LaurentPoly const& q) {
      p -= q;
      return p;
    }

    friend LaurentPoly operator*(LaurentPoly const& p, LaurentPoly const& q) {
      LaurentPoly r;
      for (auto const& [e1, c1] : p._terms) {
        for (auto const& [e2, c2] : q._terms) {
          r.add_term(e1 + e2, c1 * c2);
        }
      }
      return r;
    }

    LaurentPoly& operator*=(LaurentPoly const& q) {
      *this = *this * q;
      return *this;
    }

    // Multiply by A^k.
    LaurentPoly shifted(int k) const {
      LaurentPoly r;
      for (auto const& [e, c] : _terms) {
        r._terms.emplace_hint(r._terms.end(), e + k, c);
      }
      return r;
    }

    LaurentPoly pow(unsigned n) const {
      LaurentPoly result(1);
      LaurentPoly base = *this;
      while (n > 0) {
        if (n & 1u) {
          result *= base;
        }
        n >>= 1;
        if (n > 0) {
          base *= base;
        }
      }
      return result;
    }

    // A -> A^-1
    LaurentPoly mirror() const {
      LaurentPoly r;
      for (auto const& [e, c] : _terms) {
        r._terms.emplace(-e, c);
      }
      return r;
    }

    friend bool operator==(LaurentPoly const&, LaurentPoly const&) = default;

    void add_term(int e, Integer const& c) {
      if (c == 0) {
        return;
      }
      auto [it, inserted] = _terms.try_emplace(e, c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) {
          _terms.erase(it);
        }
      }
    }

   private:
    term_map _terms;
  };

  // Exact quotient p / q in Z[A, A^-1], or nullopt when q does not divide p.
  // Throws DivisionByZero if q == 0.
  inline std::optional<LaurentPoly> exact_divide(LaurentPoly const& p,
                                                 LaurentPoly const& q) {
    if (q.is_zero()) {
      throw DivisionByZero("exact_divide: divisor is the zero polynomial");
    }
    if (p.is_zero()) {
      return LaurentPoly();
    }
    // Strip the monomial units so both sides are ordinary polynomials with a
    // nonzero constant term, then do schoolbook division from the top.
    int const shift = p.min_exponent() - q.min_exponent();
    LaurentPoly rem     = p.shifted(-p.min_exponent());
    LaurentPoly const d = q.shifted(-q.min_exponent());
    int const     d_deg  = d.max_exponent();
    Integer const d_lead = d.coefficient(d_deg);
    LaurentPoly   quot;
    while (!rem.is_zero()) {
      int const r_deg = rem.max_exponent();
      if (r_deg < d_deg) {
        return std::nullopt;
      }
      Integer const r_lead = rem.coefficient(r_deg);
      if (r_lead % d_lead != 0) {
        return std::nullopt;
      }
      auto const t = LaurentPoly::monomial(r_lead / d_lead, r_deg - d_deg);
      quot.add_term(r_deg - d_deg, r_lead / d_lead);
      rem -= t * d;
    }
    return quot.shifted(shift);
  }

  class PseudoPoly {
   public:
    using coeff_map = std::map<int, LaurentPoly>;

    PseudoPoly() = default;

    PseudoPoly(LaurentPoly const& p) {  // NOLINT(runtime/explicit)
      if (!p.is_zero()) {
        _coeffs.emplace(0, p);
      }
    }

    PseudoPoly(long long c)  // NOLINT(runtime/explicit)
        : PseudoPoly(LaurentPoly(c)) {}

    // p * V^k
    static PseudoPoly v_power(LaurentPoly const& p, int k = 1) {
      PseudoPoly r;
      if (!p.is_zero()) {
        r._coeffs.emplace(k, p);
      }
      return r;
    }

    static PseudoPoly V() {
      return v_power(LaurentPoly(1), 1);
    }

    // H = 1 - V d, the weight of the non-oriented smoothing of a pseudo crossing.
    static PseudoPoly horizontal_weight() {
      return PseudoPoly(1) - v_power(LaurentPoly::loop_value(), 1);
    }

    coeff_map const& coeffs() const noexcept {
      return _coeffs;
    }

    bool is_zero() const noexcept {
      return _coeffs.empty();
    }

    bool is_v_free() const noexcept {
      return _coeffs.empty() || (_coeffs.size() == 1 && _coeffs.begin()->first == 0);
    }

    // Highest V power, -1 for the zero polynomial.
    int v_degree() const noexcept {
      return _coeffs.empty() ? -1 : _coeffs.rbegin()->first;
    }

    LaurentPoly coefficient(int k) const {
      auto it = _coeffs.find(k);
      return it == _coeffs.end() ? LaurentPoly() : it->second;
    }

    LaurentPoly constant_part() const {
      return coefficient(0);
    }

    PseudoPoly& operator+=(PseudoPoly const& q) {
      for (auto const& [k, c] : q._coeffs) {
        add_coeff(k, c);
      }
      return *this;
    }

    PseudoPoly& operator-=(PseudoPoly const& q) {
      for (auto const& [k, c] : q._coeffs) {
        add_coeff(k, -c);
      }
      return *this;
    }

    PseudoPoly operator-() const {
      PseudoPoly r;
      for (auto const& [k, c] : _coeffs) {
        r._coeffs.emplace(k, -c);
      }
      return r;
    }

    friend PseudoPoly operator+(PseudoPoly p, PseudoPoly const& q) {
      p += q;
      return p;
    }

    friend PseudoPoly operator-(PseudoPoly p, PseudoPoly const& q) {
      p -= q;
      return p;
    }

    friend PseudoPoly operator*(PseudoPoly const& p, PseudoPoly const& q) {
      PseudoPoly r;
      for (auto const& [k1, c1] : p._coeffs) {
        for (auto const& [k2, c2] : q._coeffs) {
          r.add_coeff(k1 + k2, c1 * c2);
        }
      }
      return r;
    }

    PseudoPoly& operator*=(PseudoPoly const& q) {
      *this = *this * q;
      return *this;
    }

    PseudoPoly scaled(LaurentPoly const& s) const {
      PseudoPoly r;
      for (auto const& [k, c] : _coeffs) {
        r.add_coeff(k, c * s);
      }
      return r;
    }

    PseudoPoly mirror() const {
      PseudoPoly r;
      for (auto const& [k, c] : _coeffs) {
        r._coeffs.emplace(k, c.mirror());
      }
      return r;
    }

    // Everything except the V^0 coefficient.
    PseudoPoly v_part() const {
      PseudoPoly r = *this;
      r._coeffs.erase(0);
      return r;
    }

    friend bool operator==(PseudoPoly const&, PseudoPoly const&) = default;

    void add_coeff(int k, LaurentPoly const& c) {
      if (c.is_zero()) {
        return;
      }
      auto [it, inserted] = _coeffs.try_emplace(k, c);
      if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
          _coeffs.erase(it);
        }
      }
    }

   private:
    coeff_map _coeffs;
  };

  inline PseudoPoly pp_scale(PseudoPoly const& p, LaurentPoly const& s) {
    return p.scaled(s);
  }

  inline PseudoPoly v_part(PseudoPoly const& p) {
    return p.v_part();
  }

  inline PseudoPoly mirror(PseudoPoly const& p) {
    return p.mirror();
  }

  inline LaurentPoly mirror(LaurentPoly const& p) {
    return p.mirror();
  }

  ////////////////////////////////////////////////////////////////////////
  // Rendering
  ////////////////////////////////////////////////////////////////////////

  namespace detail {

    inline void append_monomial(std::string&   out,
                                Integer const& coeff,
                                int            a_exp,
                                int            v_deg,
                                bool           first) {
      bool const negative = coeff < 0;
      Integer const mag  = negative ? Integer(-coeff) : coeff;
      if (first) {
        if (negative) {
          out += '-';
        }
      } else {
        out += negative ? " - " : " + ";
      }
      std::string body;
      if (mag != 1 || (a_exp == 0 && v_deg == 0)) {
        body += mag.str();
      }
      auto factor = [&body](std::string const& f) {
        if (!body.empty()) {
          body += '*';
        }
        body += f;
      };
      if (a_exp == 1) {
        factor("A");
      } else if (a_exp != 0) {
        factor("A^" + std::to_string(a_exp));
      }
      if (v_deg == 1) {
        factor("V");
      } else if (v_deg > 1) {
        factor("V^" + std::to_string(v_deg));
      }
      out += body;
    }

  }  // namespace detail

  // Terms sorted by (V-degree, A-exponent), e.g. "A^-6 + A^-8*V - A^4*V".
  inline std::string to_string(PseudoPoly const& p) {
    if (p.is_zero()) {
      return "0";
    }
    std::string out;
    bool        first = true;
    for (auto const& [k, c] : p.coeffs()) {
      for (auto const& [e, n] : c.terms()) {
        detail::append_monomial(out, n, e, k, first);
        first = false;
      }
    }
    return out;
  }

  inline std::string to_string(LaurentPoly const& p) {
    return to_string(PseudoPoly(p));
  }

  inline std::ostream& operator<<(std::ostream& os, LaurentPoly const& p) {
    return os << to_string(p);
  }

  inline std::ostream& operator<<(std::ostream& os, PseudoPoly const& p) {
    return os << to_string(p);
  }

  ////////////////////////////////////////////////////////////////////////
  // Parsing
  ////////////////////////////////////////////////////////////////////////

  // Accepts sums of monomials built from an integer, A^k and V^k joined by
  // '*', in any order: "A^-7 - A^-3 - A^5", "-2*V*A^4 + 1", "A + V^2".
  inline PseudoPoly parse_pseudo_poly(std::string_view text) {
    std::string s;
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        s += c;
      }
    }
    if (s.empty()) {
      throw ParseError("empty polynomial");
    }
    auto fail = [&s](std::string const& why) {
      throw ParseError("bad polynomial '" + s + "': " + why);
    };
    PseudoPoly  result;
    std::size_t i = 0;
    auto read_int = [&](std::size_t& j) -> long long {
      std::size_t start = j;
      if (j < s.size() && (s[j] == '-' || s[j] == '+')) {
        ++j;
      }
      std::size_t digits = j;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
        ++j;
      }
      if (digits == j) {
        fail("expected integer at position " + std::to_string(start));
      }
      return std::stoll(s.substr(start, j - start));
    };
    while (i < s.size()) {
      int sign = 1;
      if (s[i] == '+' || s[i] == '-') {
        sign = s[i] == '-' ? -1 : 1;
        ++i;
      } else if (i != 0) {
        fail("expected '+' or '-'");
      }
      Integer coeff   = sign;
      int     a_exp   = 0;
      int     v_deg   = 0;
      bool    any     = false;
      bool    need_factor = true;
      while (i < s.size() && need_factor) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
          std::size_t start = i;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
          }
          coeff *= Integer(s.substr(start, i - start));
        } else if (c == 'A' || c == 'V') {
          ++i;
          long long e = 1;
          if (i < s.size() && s[i] == '^') {
            ++i;
            e = read_int(i);
          }
          if (c == 'A') {
            a_exp += static_cast<int>(e);
          } else {
            if (e < 0) {
              fail("negative power of V");
            }
            v_deg += static_cast<int>(e);
          }
        } else {
          fail(std::string("unexpected character '") + c + "'");
        }
        any = true;
        if (i < s.size() && s[i] == '*') {
          ++i;
        } else {
          need_factor = false;
        }
      }
      if (!any || need_factor) {
        fail("dangling operator");
      }
      result.add_coeff(v_deg, LaurentPoly::monomial(coeff, a_exp));
    }
    return result;
  }

  inline LaurentPoly parse_laurent_poly(std::string_view text) {
    PseudoPoly p = parse_pseudo_poly(text);
    if (!p.is_v_free()) {
      throw ParseError("expected a polynomial in A only: " + std::string(text));
    }
    return p.constant_part();
  }

}  // namespace pseudobracket
