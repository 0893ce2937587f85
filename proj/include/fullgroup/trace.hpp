#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fullgroup/clopen.hpp"

namespace fullgroup {

/// One resolved step of a synthesis: which construction ran, what was
/// chosen, and the clopen sets it produced.
struct TraceEntry {
    std::string step;
    std::string note;
    std::vector<std::pair<std::string, ClopenSet>> sets;
};

using ProofTrace = std::vector<TraceEntry>;

inline void append(ProofTrace& into, const ProofTrace& more) { into.insert(into.end(), more.begin(), more.end()); }

}  // namespace fullgroup
