#include "orthostab/core.hpp"

#include <charconv>
#include <sstream>

namespace orthostab {

std::string to_string(ScalarBackend backend) {
  return backend == ScalarBackend::float64 ? "float64" : "rational";
}

ScalarBackend parse_backend(const std::string& name) {
  if (name == "float64") return ScalarBackend::float64;
  if (name == "rational" || name == "exact-rational") return ScalarBackend::exact_rational;
  throw ConfigError("unknown scalar mode '" + name + "' (expected float64 or rational)");
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_vector(std::span<const double> x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << format_number(x[i]);
  }
  os << ')';
  return os.str();
}

}  // namespace orthostab
