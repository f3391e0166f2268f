#include "functorad/dual.hpp"

namespace functorad {

double sin_of(double x) { return std::sin(x); }
double cos_of(double x) { return std::cos(x); }

}  // namespace functorad
