// Shared infrastructure: error types, deterministic RNG, seed mixing.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace milnork {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or semantically invalid user input (text, descriptors, documents).
struct InputError : Error {
    using Error::Error;
};

// Violated mathematical precondition: division by zero, descriptor mismatch,
// unsupported transfer, invertibility failure, and so on.
struct DomainError : Error {
    using Error::Error;
};

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt));
}

// Deterministic RNG. std::mt19937_64 output is fully specified by the
// standard; `below` avoids std::uniform_int_distribution, whose mapping is
// implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    // Unbiased value in [0, n).
    uint64_t below(uint64_t n) {
        if (n == 0) throw DomainError("Rng::below: n must be positive");
        const uint64_t zone = (UINT64_MAX / n) * n;
        uint64_t r = eng_();
        while (r >= zone) r = eng_();
        return r % n;
    }

    int64_t range(int64_t lo, int64_t hi) {  // inclusive
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (eng_() & 1U) != 0; }

private:
    std::mt19937_64 eng_;
};

}  // namespace milnork
