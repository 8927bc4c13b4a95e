#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace dbcount {

// Arbitrary-precision nonnegative count. All model/solution counts flow through
// this type; powers of two are produced by shifting, never by floating point.
using BigCount = boost::multiprecision::cpp_int;

inline BigCount pow2(unsigned long k) {
  return BigCount(1) << k;
}

inline std::string to_string(const BigCount& c) {
  return c.str();
}

}  // namespace dbcount
