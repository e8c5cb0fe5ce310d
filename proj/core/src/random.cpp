#include "twistlaw/random.hpp"

#include <algorithm>

namespace twistlaw {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t seed, Stream stream, std::uint64_t task) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(stream)) ^ task);
}

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t task) {
    return Rng(split_seed(seed, stream, task));
}

mpz_class uniform_bits(Rng& rng, unsigned bits) {
    mpz_class out = 0;
    unsigned filled = 0;
    while (filled < bits) {
        const unsigned take = std::min(64u, bits - filled);
        std::uint64_t word = rng();
        if (take < 64) word &= (std::uint64_t{1} << take) - 1;
        mpz_class w;
        mpz_import(w.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
        out <<= take;
        out += w;
        filled += take;
    }
    return out;
}

double uniform01(Rng& rng) {
    // 53 random mantissa bits, never exactly 0.
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace twistlaw
