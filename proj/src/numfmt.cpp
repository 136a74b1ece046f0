#include "epinarr/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace epinarr {

namespace {

// Shortest-digit mantissa and decimal exponent of |value|, via to_chars
// scientific form "d.ddddde±XX".
void shortest_digits(double value, std::string& digits, int& exp10) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value,
                           std::chars_format::scientific);
  *res.ptr = '\0';
  const char* p = buf;
  digits.clear();
  for (; *p && *p != 'e'; ++p) {
    if (*p != '.') digits.push_back(*p);
  }
  exp10 = (*p == 'e') ? std::atoi(p + 1) : 0;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  if (value == 0.0) return std::signbit(value) ? "-0" : "0";

  std::string digits;
  int exp10 = 0;
  const bool neg = std::signbit(value);
  shortest_digits(neg ? -value : value, digits, exp10);

  std::string out;
  if (neg) out.push_back('-');

  if (exp10 >= -4 && exp10 < 16) {
    if (exp10 >= static_cast<int>(digits.size()) - 1) {
      // 14000, 7
      out += digits;
      out.append(static_cast<size_t>(exp10) - digits.size() + 1, '0');
    } else if (exp10 >= 0) {
      // 36.78794
      out += digits.substr(0, static_cast<size_t>(exp10) + 1);
      out.push_back('.');
      out += digits.substr(static_cast<size_t>(exp10) + 1);
    } else {
      // 0.0005
      out += "0.";
      out.append(static_cast<size_t>(-exp10) - 1, '0');
      out += digits;
    }
  } else {
    // 5.2e-07, 1e+20
    out += digits.substr(0, 1);
    if (digits.size() > 1) {
      out.push_back('.');
      out += digits.substr(1);
    }
    out.push_back('e');
    out.push_back(exp10 < 0 ? '-' : '+');
    int e = exp10 < 0 ? -exp10 : exp10;
    std::string es = std::to_string(e);
    if (es.size() < 2) es.insert(es.begin(), '0');
    out += es;
  }
  return out;
}

std::string format_sbml_double(double value) {
  std::string s = format_double(value);
  if (s.find_first_of(".einf") == std::string::npos) s += ".0";
  return s;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace epinarr
