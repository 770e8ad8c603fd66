#pragma once

#include "hopnet/parallel.hpp"
#include "hopnet/rng.hpp"

#include <cstddef>

namespace hopnet {

/// Triangle 0, e1, e2 of Z^2 with edges |x - y| + energy_term <= 4.
/// A: neither {0, e1} nor {e1, e2} is an edge. B: {0, e2} is not an edge.
struct FkgEvents {
    bool A = false;
    bool B = false;
};
FkgEvents fkg_events(double e0, double e1, double e2);

struct FkgEstimate {
    std::size_t samples = 0;
    std::size_t count_A = 0;
    std::size_t count_B = 0;
    std::size_t count_AB = 0;
    double PA = 0.0, PB = 0.0, PAB = 0.0;
    double se_A = 0.0, se_B = 0.0, se_AB = 0.0;
};

/// Monte-Carlo frequencies with E0, E1, E2 i.i.d. uniform on [-1, 1]; samples >= 10^4.
FkgEstimate fkg_probabilities(std::size_t samples, RngSeed seed,
                              Execution ex = Execution::parallel);

}  // namespace hopnet
