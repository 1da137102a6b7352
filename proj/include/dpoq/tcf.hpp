#pragma once

#include "dpoq/circuit.hpp"
#include "dpoq/rng.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace dpoq {

// Desk-scale 2-to-1 trapdoor function families.  None of the hardness
// properties hold at these sizes; the families exist so the pipeline and the
// brute-force oracles are exercisable end to end.
//
//  - rabin: f(x) = x^2 mod N over the legal domain of units strictly below
//    N/2 (N = p*q, p = q = 3 mod 4).  Squaring is 4-to-1 on units; halving
//    the domain gives the exact 2-to-1 structure.  Inversion takes square
//    roots mod p and q with exponent (p+1)/4 and recombines by CRT.
//  - toy: f(z) = perm(min(z, z xor s)) over all m-bit strings, s != 0 the
//    secret mask, perm a public bijection.  Claws are exactly {z, z xor s}.
//    Zero cryptographic hardness; its value is that the ANF and the BPs
//    stay tiny.  The key carries the composed evaluation table (f is not
//    computable from perm alone), which reveals the function but not the
//    trapdoor fields.

enum class TcfFamily { Rabin, Toy };

struct TcfKey {
    TcfFamily family = TcfFamily::Toy;
    // rabin
    uint64_t modulus = 0;
    // toy
    uint32_t m = 0;
    std::vector<uint32_t> perm;  // bijection over m-bit strings
    std::vector<uint32_t> table; // composed evaluation table f(z)

    uint32_t input_bits() const;
    uint32_t output_bits() const;
    // image pattern used to totalize f over all input strings
    uint32_t reserved_image() const { return (1u << output_bits()) - 1; }
};

struct TcfTrapdoor {
    TcfFamily family = TcfFamily::Toy;
    uint64_t p = 0, q = 0; // rabin
    uint32_t mask = 0;     // toy
};

struct TcfError : std::runtime_error {
    explicit TcfError(const std::string &m) : std::runtime_error(m) {}
};

struct TcfKeyPair {
    TcfKey key;
    TcfTrapdoor trapdoor;
};

// rabin: size_param = max prime bit length, in [3, 16]
// toy:   size_param = input width m, in [2, 12]
TcfKeyPair tcf_gen(TcfFamily family, uint32_t size_param, Rng &rng);

bool tcf_legal(const TcfKey &key, uint64_t x);
uint64_t tcf_eval(const TcfKey &key, uint64_t x); // throws on illegal x

// the two legal preimages in increasing order; nullopt if y not in image
std::optional<std::pair<uint64_t, uint64_t>> tcf_invert(const TcfTrapdoor &td,
                                                        const TcfKey &key, uint64_t y);

bool tcf_chk(const TcfKey &key, uint64_t x, uint64_t y);

struct Claw {
    uint64_t y, x0, x1;
};
// exhaustive claw table (domain <= 2^16); every image has exactly two legal
// preimages
std::vector<Claw> claws_bruteforce(const TcfKey &key);

// Totalized per-output-bit ANF: legal inputs map to f(x), everything else to
// the reserved all-ones image, so the function is total on m-bit strings.
std::vector<AnfPolynomial> function_anf(const TcfKey &key);

// Public fields only; trapdoors never serialize into these objects.
nlohmann::json key_to_json(const TcfKey &key);
TcfKey key_from_json(const nlohmann::json &j);
nlohmann::json trapdoor_to_json(const TcfTrapdoor &td);
TcfTrapdoor trapdoor_from_json(const nlohmann::json &j);

} // namespace dpoq
