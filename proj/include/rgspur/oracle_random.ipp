#pragma once

#include <random>

namespace rgspur::oracle {

template <class Rng> ErrorVector random_error_vector(Rng &rng) {
    std::exponential_distribution<double> draw(1.0);
    std::array<double, 4> weights{};
    for (double &v : weights) {
        v = draw(rng);
    }
    return ErrorVector::normalized(weights);
}

} // namespace rgspur::oracle
