#pragma once

#include <cstdint>
#include <string>

namespace axmul {

// Products of two 64-bit operands need up to 128 bits.
using wide_t = __int128;
using uwide_t = unsigned __int128;

inline wide_t wide_abs(wide_t v) { return v < 0 ? -v : v; }

std::string to_string(wide_t v);

} // namespace axmul
