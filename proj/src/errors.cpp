#include "ewaf/errors.hpp"

#include <sstream>
#include <utility>

namespace ewaf {

namespace {

std::string describe(const std::string& check, std::size_t round, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(17);
  os << "verification failed: " << check << " at round " << round << " (lhs=" << lhs
     << ", rhs=" << rhs << ")";
  return os.str();
}

}  // namespace

VerificationFailure::VerificationFailure(std::string check, std::size_t round, double lhs,
                                         double rhs)
    : std::runtime_error(describe(check, round, lhs, rhs)),
      check_(std::move(check)),
      round_(round),
      lhs_(lhs),
      rhs_(rhs) {}

}  // namespace ewaf
