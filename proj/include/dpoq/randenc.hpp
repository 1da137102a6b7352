#pragma once

#include "dpoq/bp.hpp"
#include "dpoq/rng.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dpoq {

// Perfect randomized encoding of a mod-2 BP.
//
// The BP's path matrix L(x) is garbled as M = R1 * L(x) * R2, where R1 is
// unit upper-triangular with n*(n-1)/2 random bits above the diagonal
// (diagonal-major order: offset 1 first, row-ascending within an offset) and
// R2 is the identity plus n-1 random bits in the last column.  det M =
// det L(x), so M still decodes to the BP output, while M's distribution
// depends on x only through that output bit.
//
// Each matrix entry expands into monomials T_1..T_k of degree <= 3 (at most
// one factor from each of x, r1, r2).  The local encoding emits, per entry,
// the 2k-bit block
//     (T_1^r_1, ..., T_k^r_k, r_1^r'_1, r'_1^r_2^r'_2, ..., r'_{k-1}^r_k)
// whose total xor is the entry of M.  Every output bit reads at most 4
// preimage bits.  k = 1 degenerates to (T_1^r_1, r_1); k = 0 entries emit
// nothing (the entry is identically zero).

struct Monomial {
    int32_t r1 = -1;    // index into the r1 bits, or -1
    int32_t x_var = -1; // BP input variable, or -1 (constant literal)
    int32_t r2 = -1;    // index into the r2 bits, or -1
};

struct RandomnessLayout {
    uint32_t num_x = 0;
    uint32_t n_r1 = 0, n_r2 = 0;
    std::vector<uint32_t> entry_k; // monomial count per entry, row-major

    // flat preimage string: x | r1 | r2 | all r | all r'
    uint32_t off_r1 = 0, off_r2 = 0, off_r = 0, off_rp = 0;
    std::vector<uint32_t> entry_r_off;  // absolute offset of each entry's r bits
    std::vector<uint32_t> entry_rp_off; // absolute offset of each entry's r' bits
    uint32_t total_bits = 0;            // preimage length including x
    uint32_t rand_bits = 0;             // total_bits - num_x
    uint32_t output_bits = 0;           // sum of 2k over entries
};

struct EncodedOutput {
    std::vector<BitVec> blocks; // one per matrix entry, row-major, 2k bits each

    BitVec concat() const;
    bool operator==(const EncodedOutput &o) const { return blocks == o.blocks; }

    // entry-index-headed text form: "ENTRY <i> <j> <bits> <hex>" lines
    std::string to_lines(uint32_t n) const;
};

struct REInstance {
    Mod2BP bp;
    uint32_t n = 1; // matrix dimension, l - 1
    std::vector<std::vector<AffineForm>> lsym;
    std::vector<std::vector<Monomial>> entries; // row-major, size n*n
    RandomnessLayout layout;

    const std::vector<Monomial> &entry(uint32_t i, uint32_t j) const {
        return entries[i * n + j];
    }
};

struct REError : std::runtime_error {
    explicit REError(const std::string &m) : std::runtime_error(m) {}
};

// Symbolic expansion of R1 * L(x) * R2 into per-entry monomial lists.
// Negative literals expand via !x = 1 ^ x before listing; monomials are
// ordered lexicographically by (k1, k2, literal) of the triple product.
REInstance build_instance(const Mod2BP &bp);

// Reference path, independent of the monomial tables: the garbled matrix by
// direct GF(2) matrix multiplication.
GF2Matrix apply_tilde(const REInstance &inst, const BitVec &x, const BitVec &r1,
                      const BitVec &r2);

// The locality-4 encoding of a flat preimage (layout order x|r1|r2|r|r').
EncodedOutput apply_hat(const REInstance &inst, const BitVec &preimage);

// Xor each block to a matrix entry, then take the GF(2) determinant.
GF2Matrix decode_matrix(const REInstance &inst, const EncodedOutput &y);
bool decode(const REInstance &inst, const EncodedOutput &y);

// Perfect-privacy simulator: samples fresh garbling matrices around the
// canonical matrix with subdiagonal ones and top-right entry y, then fills
// each block uniformly subject to its xor.
EncodedOutput simulate(const REInstance &inst, bool y, Rng &rng);

// Randomness reconstruction: solve the diagonal-indexed linear systems of
// the garbled matrix from the main diagonal upward (each diagonal yields the
// next diagonal of R1 plus one bit of r2), then peel r and r' from the
// blocks.  Returns the rand_bits suffix of the preimage, or nullopt when y
// is not in the image of apply_hat(inst, x, .).
std::optional<BitVec> reconstruct_randomness(const REInstance &inst, const BitVec &x,
                                             const EncodedOutput &y);

// Full-preimage convenience: x | rand.
BitVec make_preimage(const REInstance &inst, const BitVec &x, const BitVec &rand);

// Max number of preimage bits any single output bit depends on.
uint32_t output_locality(const REInstance &inst);

// Qubit accounting for an instance set (one instance per function output
// bit): exact replicated-input / randomness / output / auxiliary counts plus
// the asymptotic width formula.
struct WidthReport {
    uint32_t num_instances = 0;
    uint64_t input_copies = 0; // replicated x qubits (shared x register)
    uint64_t randomness_copies = 0;
    uint64_t output_qubits = 0;
    uint64_t aux_qubits = 0;
    uint64_t total_qubits = 0;
    std::string asymptotic;      // "O(lambda*l^4)"
    std::string full_scale_note; // the out-of-desk-scale width illustration
};
WidthReport estimate_width(const std::vector<REInstance> &insts);

nlohmann::json layout_json(const REInstance &inst);
nlohmann::json width_report_json(const WidthReport &w);

} // namespace dpoq
