#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace mrf {

// Exact rational scalar. mpq_class keeps values canonical (reduced, positive
// denominator), which is exactly the invariant we need everywhere.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Serialize as "p" or "p/q", always reduced with q > 0.
std::string rat_str(const Rat& r);

// Parse "p" or "p/q". With strict=true the input must already be in lowest
// terms with a positive denominator; otherwise it is canonicalized.
std::optional<Rat> rat_parse(const std::string& text, bool strict = false);

}  // namespace mrf
