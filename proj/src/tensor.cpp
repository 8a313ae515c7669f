#include "socialpec/tensor.hpp"

#include <sstream>

namespace socialpec {

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << ", ";
    out << shape[i];
  }
  out << ')';
  return out.str();
}

}  // namespace socialpec
