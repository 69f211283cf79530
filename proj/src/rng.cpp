#include "rkm/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace rkm {

std::size_t sample_from_cumulative(std::span<const double> cumulative, RngStream& rng) {
    if (cumulative.empty() || !(cumulative.back() > 0.0)) {
        throw std::invalid_argument("sample_from_cumulative: total mass must be positive");
    }
    const double total = cumulative.back();
    const double u = rng.next_double() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) {
        // u rounded up to the total; land on the first index that reaches it.
        it = std::lower_bound(cumulative.begin(), cumulative.end(), total);
    }
    return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace rkm
