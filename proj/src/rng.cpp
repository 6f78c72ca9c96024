#include "deanon/rng.hpp"

namespace deanon {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngSeed RngSeed::derive(std::string_view name) const {
    // FNV-1a over the stage name, then mixed with the parent seed.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return RngSeed{splitmix64(value ^ splitmix64(h))};
}

RngSeed RngSeed::derive(std::uint64_t index) const {
    return RngSeed{splitmix64(splitmix64(value) + 0x632be59bd9b4e019ULL * (index + 1))};
}

}  // namespace deanon
