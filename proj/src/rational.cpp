#include "steinrmt/rational.hpp"

#include <charconv>
#include <stdexcept>

#include "steinrmt/errors.hpp"

namespace steinrmt {

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw ParseError("empty rational");
  Rational q;
  if (q.set_str(std::string(text), 10) != 0) {
    throw ParseError("invalid rational '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) throw ParseError("zero denominator");
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string shortest_repr(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("to_chars failed");
  return std::string(buf, end);
}

}  // namespace steinrmt
