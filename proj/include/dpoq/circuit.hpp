#pragma once

#include "dpoq/bitvec.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dpoq {

// Boolean circuit IR.  Wires are indices: 0..num_inputs-1 are circuit inputs,
// num_inputs+g is the output of gate g.  Gates reference only inputs or
// earlier gates, so the gate list is already a topological order.

enum class GateKind { And, Or, Xor, Not, Const0, Const1 };

struct Gate {
    GateKind kind;
    uint32_t a = 0; // unused for Const
    uint32_t b = 0; // used only by And/Or/Xor
};

struct Circuit {
    uint32_t num_inputs = 0;
    std::vector<Gate> gates;
    std::vector<uint32_t> outputs;

    // Names survive parsing for readable serialization; structural equality
    // ignores them.
    std::vector<std::string> input_names;
    std::vector<std::string> gate_names;

    uint32_t wire_count() const { return num_inputs + static_cast<uint32_t>(gates.size()); }

    bool structurally_equal(const Circuit &o) const;
    void validate() const; // arity + reference order; throws CircuitError
};

struct CircuitError : std::runtime_error {
    explicit CircuitError(const std::string &msg) : std::runtime_error(msg) {}
};

// Text format, one statement per line:
//   INPUT <name>
//   <name> = AND|OR|XOR <w1> <w2>
//   <name> = NOT <w>
//   <name> = CONST0 | <name> = CONST1
//   OUTPUT <w>
// '#' starts a comment.  Input declaration order defines bit order.
Circuit parse_circuit(const std::string &text);
std::string serialize_circuit(const Circuit &c);

// Topological sweep; |x| must equal num_inputs.
BitVec eval_circuit(const Circuit &c, const BitVec &x);

struct CircuitStats {
    uint32_t depth = 0;                // longest input-to-output gate path
    std::vector<uint32_t> fanout;      // per wire, min 1 for unused wires
};
CircuitStats analyze(const Circuit &c);

// Algebraic normal form over GF(2): a set of monomials, each a subset of
// variable indices packed as a bitmask.  The empty set (mask 0) is the
// constant-1 monomial.  Set semantics: duplicates cancel mod 2.
struct AnfPolynomial {
    uint32_t num_vars = 0;
    std::vector<uint32_t> monomials; // sorted, unique masks

    bool eval(uint32_t x) const {
        bool acc = false;
        for (uint32_t m : monomials)
            acc ^= (x & m) == m;
        return acc;
    }
    bool eval(const BitVec &x) const {
        uint32_t packed = 0;
        for (size_t i = 0; i < x.size(); ++i)
            packed |= static_cast<uint32_t>(x.get(i)) << i;
        return eval(packed);
    }
    uint32_t max_degree() const {
        uint32_t d = 0;
        for (uint32_t m : monomials)
            d = std::max<uint32_t>(d, static_cast<uint32_t>(__builtin_popcount(m)));
        return d;
    }
};

// ANF by Moebius transform over the full truth table; m <= 16.
AnfPolynomial truth_table_anf(const std::function<bool(uint32_t)> &f, uint32_t m);

} // namespace dpoq
