#include "superad/precision.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "superad/errors.hpp"

namespace superad {

Precision parse_precision(std::string_view name) {
  if (name == "double") return Precision::double_;
  if (name == "extended") return Precision::extended;
  throw InvalidInput("unknown precision '" + std::string(name) + "' (expected double|extended)");
}

std::string to_string(Precision p) { return p == Precision::double_ ? "double" : "extended"; }

Precision precision_from_env(Precision fallback) {
  const char* v = std::getenv("SUPERAD_PRECISION");
  if (v == nullptr || *v == '\0') return fallback;
  return parse_precision(v);
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_real(const Extended& x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(std::numeric_limits<Extended>::max_digits10);
  os << x;
  return os.str();
}

}  // namespace superad
