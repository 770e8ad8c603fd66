#include "hopnet/fkg.hpp"

#include "hopnet/errors.hpp"
#include "hopnet/graph.hpp"
#include "hopnet/stats.hpp"

#include <cmath>
#include <vector>

namespace hopnet {

FkgEvents fkg_events(double e0, double e1, double e2) {
    FkgEvents ev;
    // |0 - e1| = |0 - e2| = 1 and |e1 - e2| = sqrt(2)
    ev.A = energy_term(e0, e1) > 3.0 && energy_term(e1, e2) > 4.0 - std::sqrt(2.0);
    ev.B = energy_term(e0, e2) > 3.0;
    return ev;
}

FkgEstimate fkg_probabilities(std::size_t samples, RngSeed seed, Execution ex) {
    if (samples < 10000) throw ParameterError("fkg sampling needs at least 10000 samples");
    constexpr std::size_t chunks = 64;
    struct Counts {
        std::size_t a = 0, b = 0, ab = 0;
    };
    std::vector<Counts> counts(chunks);
    for_each_index(chunks, ex, [&](std::size_t c) {
        Philox rng(seed.with_stream(c));
        const std::size_t begin = samples * c / chunks, end = samples * (c + 1) / chunks;
        Counts& k = counts[c];
        for (std::size_t s = begin; s < end; ++s) {
            const double e0 = 2.0 * rng.uniform() - 1.0;
            const double e1 = 2.0 * rng.uniform() - 1.0;
            const double e2 = 2.0 * rng.uniform() - 1.0;
            const auto ev = fkg_events(e0, e1, e2);
            k.a += ev.A;
            k.b += ev.B;
            k.ab += ev.A && ev.B;
        }
    });
    FkgEstimate out;
    out.samples = samples;
    for (const auto& k : counts) {
        out.count_A += k.a;
        out.count_B += k.b;
        out.count_AB += k.ab;
    }
    const auto a = binomial(out.count_A, samples), b = binomial(out.count_B, samples),
               ab = binomial(out.count_AB, samples);
    out.PA = a.mean;
    out.PB = b.mean;
    out.PAB = ab.mean;
    out.se_A = a.se;
    out.se_B = b.se;
    out.se_AB = ab.se;
    return out;
}

}  // namespace hopnet
