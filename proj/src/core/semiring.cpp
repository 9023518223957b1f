#include "tta/semiring.hpp"

#include <limits>

#include "tta/error.hpp"

namespace tta {

Price PriceSemiring::times(const Price& a, const Price& b) const {
  if (a.infinite || b.infinite) return Price::inf();
  if (a.value > std::numeric_limits<std::uint64_t>::max() - b.value) fail(ErrorKind::Limit, "cost overflow");
  return Price::of(a.value + b.value);
}

}  // namespace tta
