#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace nodalis {

// Exact rational scalar. All arithmetic stays in Q; no floating point.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Reduced decimal string, "3" or "1/2".
inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline Rat rat_parse(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EngineError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace nodalis
