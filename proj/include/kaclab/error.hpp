#pragma once

#include <stdexcept>
#include <string>

namespace kaclab {

// Base of every error raised by the library. The CLI maps these to exit
// code 2 (numerical failure); usage problems are reported separately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define KACLAB_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// gaussian
KACLAB_DEFINE_ERROR(NotSymmetric);
KACLAB_DEFINE_ERROR(NotPSD);
KACLAB_DEFINE_ERROR(SingularConditioning);
// kernels
KACLAB_DEFINE_ERROR(DegreeTooLargeForOrder);
KACLAB_DEFINE_ERROR(ChartOverflow);
// roots
KACLAB_DEFINE_ERROR(ZeroPolynomial);
KACLAB_DEFINE_ERROR(EndpointIsRoot);
KACLAB_DEFINE_ERROR(NoConvergence);
// kacrice
KACLAB_DEFINE_ERROR(NearDiagonal);
KACLAB_DEFINE_ERROR(QuadratureBudgetExceeded);
KACLAB_DEFINE_ERROR(MissingTerm);
// multijet
KACLAB_DEFINE_ERROR(InsufficientDerivOrder);
// empirics
KACLAB_DEFINE_ERROR(IllConditionedFit);

#undef KACLAB_DEFINE_ERROR

}  // namespace kaclab
