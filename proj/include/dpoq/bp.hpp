#pragma once

#include "dpoq/bitvec.hpp"
#include "dpoq/circuit.hpp"
#include "dpoq/gf2.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dpoq {

// Mod-2 counting branching program: a DAG over vertices 0..l-1 (s = 0,
// t = l-1, every edge satisfies from < to) whose output is the number of
// s->t paths mod 2 in the subgraph selected by the input.  Parallel edges
// between a vertex pair are allowed; they fold into GF(2)-affine adjacency
// entries.

enum class LabelKind : uint8_t { Const1, Pos, Neg };

struct EdgeLabel {
    LabelKind kind = LabelKind::Const1;
    uint32_t var = 0;

    bool active(const BitVec &x) const {
        switch (kind) {
        case LabelKind::Const1:
            return true;
        case LabelKind::Pos:
            return x.get(var);
        case LabelKind::Neg:
            return !x.get(var);
        }
        return false;
    }
};

struct BpEdge {
    uint32_t from = 0, to = 0;
    EdgeLabel label;
};

struct Mod2BP {
    uint32_t l = 2;        // vertex count, >= 2
    uint32_t num_vars = 0;
    std::vector<BpEdge> edges;

    void validate() const; // from < to, t has no outgoing edges, label vars in range
};

struct BpError : std::runtime_error {
    explicit BpError(const std::string &m) : std::runtime_error(m) {}
};

// Path-count evaluation by dynamic programming over the vertex order.
bool bp_eval_paths(const Mod2BP &bp, const BitVec &x);

// XOR of edge labels, normalized: !x == 1 + x over GF(2).
struct AffineForm {
    bool constant = false;
    std::vector<uint32_t> vars; // sorted, unique (mod-2 multiplicity)

    void add_label(const EdgeLabel &lab);
    bool eval(const BitVec &x) const {
        bool acc = constant;
        for (uint32_t v : vars)
            acc ^= x.get(v);
        return acc;
    }
    bool is_zero() const { return !constant && vars.empty(); }
};

// The (l-1)x(l-1) matrix obtained from (adjacency - identity) by deleting the
// first column and the last row.  Its GF(2) determinant equals the path
// parity.  The subdiagonal is all ones and everything below it is zero for
// any topologically ordered BP.
GF2Matrix path_matrix(const Mod2BP &bp, const BitVec &x);
std::vector<std::vector<AffineForm>> path_matrix_symbolic(const Mod2BP &bp);

inline bool det_gf2(const GF2Matrix &m) { return m.det(); }

// Barrington compiler: a depth-d circuit output becomes a width-5
// permutation program of length O(4^d), converted to a counting BP (one
// bipartite matching per instruction between consecutive 5-pin layers; the
// s->t path count is 1 exactly when the program's permutation is the
// designated 5-cycle).  OR is rewritten by De Morgan, XOR via
// a^b = !(!(a&!b) & !(!a&b)); NOT folds into the preceding instruction.
Mod2BP barrington_compile(const Circuit &c, uint32_t out_bit, uint32_t depth_bound = 6);

// Direct BP for an ANF polynomial: one s->t path per monomial, edges labeled
// by the monomial's variables; the empty monomial becomes a CONST1 edge.
Mod2BP anf_to_bp(const AnfPolynomial &p);

// Line-oriented text form: header "BP l=<n> vars=<m>", then
// "EDGE <from> <to> 1|x<i>|!x<i>" per edge.
std::string serialize_bp(const Mod2BP &bp);
Mod2BP parse_bp(const std::string &text);

} // namespace dpoq
