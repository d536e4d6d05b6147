#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace omas {

// Index into the potential node set. Stable for a whole run, never reused.
using NodeId = std::uint32_t;

enum class AlgorithmKind { QAOD, QAPOD, QAIOD };

// Per-step operating mode of a node. DepartingSoon / LongTermRemaining are
// only produced under the delay-aware algorithm; the other two algorithms
// classify every active node as Remaining, Arriving or Departing.
enum class Mode {
    Remaining,
    Arriving,
    Departing,
    DepartingSoon,
    LongTermRemaining,
    Inactive,
};

inline const char* to_string(AlgorithmKind k) {
    switch (k) {
        case AlgorithmKind::QAOD: return "qaod";
        case AlgorithmKind::QAPOD: return "qapod";
        case AlgorithmKind::QAIOD: return "qaiod";
    }
    return "?";
}

inline AlgorithmKind algorithm_from_string(const std::string& s) {
    if (s == "qaod") return AlgorithmKind::QAOD;
    if (s == "qapod") return AlgorithmKind::QAPOD;
    if (s == "qaiod") return AlgorithmKind::QAIOD;
    throw std::invalid_argument("unknown algorithm: " + s + " (expected qaod|qapod|qaiod)");
}

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::Remaining: return "remaining";
        case Mode::Arriving: return "arriving";
        case Mode::Departing: return "departing";
        case Mode::DepartingSoon: return "departing_soon";
        case Mode::LongTermRemaining: return "long_term_remaining";
        case Mode::Inactive: return "inactive";
    }
    return "?";
}

}  // namespace omas
