#pragma once

#include <cstdint>

namespace axmul {

// Counter-based 64-bit generator. Output i is the splitmix64 finalizer
// applied to seed + (i+1) * 0x9E3779B97F4A7C15. Random access by index,
// so sample streams are reproducible and mergeable across workers.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t at(std::uint64_t index) const {
        std::uint64_t z = seed_ + (index + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

} // namespace axmul
