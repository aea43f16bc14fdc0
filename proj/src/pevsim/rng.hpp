#ifndef PEVSIM_RNG_HPP
#define PEVSIM_RNG_HPP

#include <cstdint>
#include <random>

namespace pevsim {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Named RNG streams, all derived from one run seed.  Keeping the streams
// separate means toggling the solver or the compliance mode does not perturb
// the arrival sequence, which allows A/B comparisons on shared arrivals.
enum class Stream : std::uint64_t {
    arrivals   = 1,  // spawn counts, positions, energies, weight groups
    assignment = 2,  // green-signal draws
    compliance = 3,  // comply/defect draws
    ledger     = 4,  // tip selection
    wind       = 5,  // wind generation walks (salted per station)
    placement  = 6,  // station placement (salted from the base seed, not per run)
};

inline Rng make_stream(std::uint64_t seed, Stream stream, std::uint64_t salt = 0) {
    return Rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream) * 0x51ed2701ULL + salt)));
}

} // namespace pevsim

#endif
