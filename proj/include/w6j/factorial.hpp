#pragma once

#include "w6j/half_int.hpp"
#include "w6j/rational.hpp"

namespace w6j {

// Largest n admitted by the factorial cache.  The cache is grow-only and
// thread-safe; raising the cap only affects future lookups.
long factorial_cap();
void set_factorial_cap(long cap);

// n! as an exact integer.  Throws DomainError for n < 0 and ResourceLimit
// for n > factorial_cap().  The reference stays valid for the process
// lifetime (grow-only storage).
const Integer& factorial(long n);

// Factorial of a half-integer sum that must land on a whole integer.
inline const Integer& factorial(HalfInt n) { return factorial(static_cast<long>(n.to_int())); }

}  // namespace w6j
