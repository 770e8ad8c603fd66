#include "hopnet/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace hopnet {

int thread_count() {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("HOPNET_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) n = cap;
        } catch (const std::exception&) {
        }
    }
    return n < 1 ? 1 : n;
}

}  // namespace hopnet
