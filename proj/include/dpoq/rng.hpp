#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dpoq {

// splitmix64 finalizer; stateless mixing step used to derive child seeds.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t mix_label(std::string_view label) {
    uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
    for (char c : label) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

// Deterministic seed tree: one 64-bit session seed expands into per-role,
// per-round and per-measurement streams.  Children are independent of the
// order in which siblings are derived.
//
//   session -> child("verifier") / child("prover")
//           -> child(round_index) -> child("challenge"), child("measure"), ...
class SeedStream {
  public:
    explicit SeedStream(uint64_t seed) : state_(seed) {}

    SeedStream child(uint64_t index) const {
        return SeedStream(splitmix64(state_ ^ splitmix64(index + 0x517cc1b727220a95ull)));
    }
    SeedStream child(std::string_view label) const { return child(mix_label(label)); }

    uint64_t value() const { return state_; }

    std::mt19937_64 engine() const { return std::mt19937_64(splitmix64(state_)); }

  private:
    uint64_t state_;
};

// Convenience wrapper: an owned engine plus the helpers the protocol code
// actually needs.
class Rng {
  public:
    explicit Rng(SeedStream s) : eng_(s.engine()) {}
    explicit Rng(uint64_t seed) : eng_(SeedStream(seed).engine()) {}

    bool bit() { return (eng_() >> 33) & 1; }
    uint64_t word() { return eng_(); }

    // uniform in [0, n)
    uint64_t below(uint64_t n) {
        std::uniform_int_distribution<uint64_t> d(0, n - 1);
        return d(eng_);
    }
    double real() {
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(eng_);
    }

    std::mt19937_64 &engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

} // namespace dpoq
