#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace simploc {

using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Integer& value) { return value.str(); }

}  // namespace simploc
