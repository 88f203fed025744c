#include "ecp/ext_real.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ecp {

double ExtReal::value() const {
  if (kind_ != Kind::Finite) throw std::domain_error("ExtReal::value() on an infinite value");
  return value_;
}

ExtReal ExtReal::from_double(double v) {
  if (std::isnan(v)) throw std::domain_error("ExtReal::from_double: NaN");
  if (std::isinf(v)) return v > 0 ? pos_inf() : neg_inf();
  return ExtReal{v};
}

std::string ExtReal::to_string() const {
  switch (kind_) {
    case Kind::PosInf: return "inf";
    case Kind::NegInf: return "-inf";
    default: break;
  }
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

ExtReal ExtReal::parse(const std::string& text) {
  if (text == "inf" || text == "+inf") return pos_inf();
  if (text == "-inf") return neg_inf();
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("ExtReal::parse: trailing characters in '" + text + "'");
  return from_double(v);
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  using K = ExtReal::Kind;
  if ((a.kind_ == K::PosInf && b.kind_ == K::NegInf) || (a.kind_ == K::NegInf && b.kind_ == K::PosInf))
    throw std::domain_error("ExtReal: inf + (-inf) is undefined");
  if (a.kind_ != K::Finite) return a;
  if (b.kind_ != K::Finite) return b;
  return ExtReal{a.value_ + b.value_};
}

ExtReal operator-(const ExtReal& a) {
  using K = ExtReal::Kind;
  switch (a.kind_) {
    case K::PosInf: return ExtReal::neg_inf();
    case K::NegInf: return ExtReal::pos_inf();
    default: return ExtReal{-a.value_};
  }
}

ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }

ExtReal positive_part(const ExtReal& x) { return x < ExtReal{0.0} ? ExtReal{0.0} : x; }

}  // namespace ecp
