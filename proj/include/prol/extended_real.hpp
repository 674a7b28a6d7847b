#pragma once

// Working precision of the quadrature oracle: 113-bit significand.
#if defined(__GNUC__) && !defined(__clang__) && defined(PROL_HAVE_QUADMATH)
#include <boost/multiprecision/float128.hpp>
namespace prol {
using ExtendedReal = boost::multiprecision::float128;
}
#else
#include <boost/multiprecision/cpp_bin_float.hpp>
namespace prol {
using ExtendedReal = boost::multiprecision::cpp_bin_float_quad;
}
#endif
