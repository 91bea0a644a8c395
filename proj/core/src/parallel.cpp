#include "seawake/parallel.hpp"

#include <cstdlib>
#include <string>

namespace seawake {

static int detect_worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("SEAWAKE_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) return cap < hw ? cap : hw;
        } catch (...) {
            // unparsable value: fall through to hardware default
        }
    }
    return hw;
}

int worker_count() {
    static const int count = detect_worker_count();
    return count;
}

}  // namespace seawake
