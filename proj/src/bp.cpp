#include "dpoq/bp.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <map>
#include <memory>
#include <sstream>

namespace dpoq {

void Mod2BP::validate() const {
    if (l < 2)
        throw BpError("BP needs at least the two terminals");
    for (const auto &e : edges) {
        if (e.from >= e.to)
            throw BpError("edge does not respect the vertex order");
        if (e.to >= l)
            throw BpError("edge endpoint out of range");
        if (e.from == l - 1)
            throw BpError("t must have no outgoing edges");
        if (e.label.kind != LabelKind::Const1 && e.label.var >= num_vars)
            throw BpError("edge label references an out-of-range variable");
    }
}

bool bp_eval_paths(const Mod2BP &bp, const BitVec &x) {
    if (x.size() != bp.num_vars)
        throw BpError("bp_eval_paths: input length mismatch");
    // ways[v] = number of s->v paths mod 2; edges go forward only.
    std::vector<char> ways(bp.l, 0);
    ways[0] = 1;
    std::vector<std::vector<const BpEdge *>> out(bp.l);
    for (const auto &e : bp.edges)
        out[e.from].push_back(&e);
    for (uint32_t v = 0; v + 1 < bp.l; ++v) {
        if (!ways[v])
            continue;
        for (const BpEdge *e : out[v])
            if (e->label.active(x))
                ways[e->to] ^= 1;
    }
    return ways[bp.l - 1];
}

void AffineForm::add_label(const EdgeLabel &lab) {
    switch (lab.kind) {
    case LabelKind::Const1:
        constant = !constant;
        return;
    case LabelKind::Neg:
        constant = !constant;
        [[fallthrough]];
    case LabelKind::Pos: {
        auto it = std::lower_bound(vars.begin(), vars.end(), lab.var);
        if (it != vars.end() && *it == lab.var)
            vars.erase(it); // mod-2 cancellation
        else
            vars.insert(it, lab.var);
        return;
    }
    }
}

std::vector<std::vector<AffineForm>> path_matrix_symbolic(const Mod2BP &bp) {
    uint32_t n = bp.l - 1;
    std::vector<std::vector<AffineForm>> m(n, std::vector<AffineForm>(n));
    // entry (r,c) of (A - I) with the first column and last row deleted:
    // adjacency entry (r, c+1), plus the identity bit when r == c+1.
    for (const auto &e : bp.edges) {
        if (e.to == 0)
            continue;
        uint32_t c = e.to - 1;
        if (e.from < n && c < n)
            m[e.from][c].add_label(e.label);
    }
    EdgeLabel one{LabelKind::Const1, 0};
    for (uint32_t r = 1; r < n; ++r)
        m[r][r - 1].add_label(one); // the -I subdiagonal, stored as 1 mod 2
    return m;
}

GF2Matrix path_matrix(const Mod2BP &bp, const BitVec &x) {
    if (x.size() != bp.num_vars)
        throw BpError("path_matrix: input length mismatch");
    uint32_t n = bp.l - 1;
    GF2Matrix m(n, n);
    for (const auto &e : bp.edges) {
        if (e.to == 0)
            continue;
        uint32_t c = e.to - 1;
        if (e.from < n && c < n && e.label.active(x))
            m.flip(e.from, c);
    }
    for (uint32_t r = 1; r < n; ++r)
        m.flip(r, r - 1);
    return m;
}

// ---------------------------------------------------------------------------
// Barrington compiler
// ---------------------------------------------------------------------------

namespace {

using Perm = std::array<uint8_t, 5>;

constexpr Perm kIdentity{0, 1, 2, 3, 4};

Perm compose(const Perm &outer, const Perm &inner) { // outer after inner
    Perm r{};
    for (int i = 0; i < 5; ++i)
        r[i] = outer[inner[i]];
    return r;
}

Perm invert(const Perm &p) {
    Perm r{};
    for (int i = 0; i < 5; ++i)
        r[p[i]] = static_cast<uint8_t>(i);
    return r;
}

bool is_five_cycle(const Perm &p) {
    int i = 0, steps = 0;
    do {
        i = p[i];
        ++steps;
    } while (i != 0 && steps <= 5);
    return steps == 5 && i == 0;
}

// theta with theta . a . theta^-1 = b, for 5-cycles a, b: map a's cycle orbit
// onto b's.
Perm conjugator(const Perm &a, const Perm &b) {
    Perm theta{};
    int ia = 0, ib = 0;
    for (int k = 0; k < 5; ++k) {
        theta[ia] = static_cast<uint8_t>(ib);
        ia = a[ia];
        ib = b[ib];
    }
    return theta;
}

struct Instruction {
    int32_t var = -1; // -1: constant instruction (if1 == if0)
    Perm if1 = kIdentity;
    Perm if0 = kIdentity;
};

using Program = std::vector<Instruction>;

Program inverse_program(const Program &p) {
    Program r;
    r.reserve(p.size());
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        r.push_back({it->var, invert(it->if1), invert(it->if0)});
    return r;
}

// Rewritten expression tree over {AND, NOT, VAR, CONST}; shared subtrees are
// expanded during compilation (the 4^d growth is inherent to the program).
struct Node {
    enum Kind { Var, Const, And, Not } kind;
    uint32_t var = 0;
    bool value = false;
    const Node *a = nullptr;
    const Node *b = nullptr;
};

struct NodeArena {
    std::vector<std::unique_ptr<Node>> pool;
    const Node *make(Node n) {
        pool.push_back(std::make_unique<Node>(n));
        return pool.back().get();
    }
};

const Node *build_tree(const Circuit &c, uint32_t wire, NodeArena &arena,
                       std::vector<const Node *> &memo) {
    if (memo[wire])
        return memo[wire];
    const Node *result = nullptr;
    if (wire < c.num_inputs) {
        result = arena.make({Node::Var, wire, false, nullptr, nullptr});
    } else {
        const Gate &g = c.gates[wire - c.num_inputs];
        auto sub = [&](uint32_t w) { return build_tree(c, w, arena, memo); };
        auto mk_not = [&](const Node *n) {
            return arena.make({Node::Not, 0, false, n, nullptr});
        };
        auto mk_and = [&](const Node *x, const Node *y) {
            return arena.make({Node::And, 0, false, x, y});
        };
        switch (g.kind) {
        case GateKind::And:
            result = mk_and(sub(g.a), sub(g.b));
            break;
        case GateKind::Or: // a|b = !(!a & !b)
            result = mk_not(mk_and(mk_not(sub(g.a)), mk_not(sub(g.b))));
            break;
        case GateKind::Xor: { // a^b = !(!(a&!b) & !(!a&b))
            const Node *a = sub(g.a), *b = sub(g.b);
            result = mk_not(mk_and(mk_not(mk_and(a, mk_not(b))), mk_not(mk_and(mk_not(a), b))));
            break;
        }
        case GateKind::Not:
            result = mk_not(sub(g.a));
            break;
        case GateKind::Const0:
            result = arena.make({Node::Const, 0, false, nullptr, nullptr});
            break;
        case GateKind::Const1:
            result = arena.make({Node::Const, 0, true, nullptr, nullptr});
            break;
        }
    }
    memo[wire] = result;
    return result;
}

// constant-fold: returns 0/1 if the node is a compile-time constant, -1 else
int fold_const(const Node *n) {
    switch (n->kind) {
    case Node::Const:
        return n->value ? 1 : 0;
    case Node::Not: {
        int v = fold_const(n->a);
        return v < 0 ? -1 : 1 - v;
    }
    case Node::And: {
        int va = fold_const(n->a), vb = fold_const(n->b);
        if (va == 0 || vb == 0)
            return 0;
        if (va == 1 && vb == 1)
            return 1;
        return -1;
    }
    default:
        return -1;
    }
}

// base 5-cycles whose commutator (in this file's composition convention) is
// again a 5-cycle; verified once at first use.
struct BaseCycles {
    Perm s1, s2, tau; // tau = s2^-1 . s1^-1 . s2 . s1
    BaseCycles() {
        s1 = Perm{1, 2, 3, 4, 0};
        s2 = Perm{2, 4, 1, 3, 0};
        tau = compose(invert(s2), compose(invert(s1), compose(s2, s1)));
        assert(is_five_cycle(s1) && is_five_cycle(s2) && is_five_cycle(tau));
    }
};

const BaseCycles &base_cycles() {
    static BaseCycles b;
    return b;
}

// Emits a program whose permutation product is `alpha` when the node value
// is 1 and the identity when it is 0.
void compile_node(const Node *n, const Perm &alpha, Program &out) {
    int cv = fold_const(n);
    if (cv == 0)
        return; // identity product
    if (cv == 1) {
        out.push_back({-1, alpha, alpha});
        return;
    }
    switch (n->kind) {
    case Node::Var:
        out.push_back({static_cast<int32_t>(n->var), alpha, kIdentity});
        return;
    case Node::Not: {
        // compile for alpha^-1, then left-multiply the product by alpha:
        // alpha . (alpha^-1)^g  =  alpha^(1-g)
        size_t start = out.size();
        compile_node(n->a, invert(alpha), out);
        if (out.size() == start) {
            out.push_back({-1, alpha, alpha});
        } else {
            Instruction &last = out.back();
            last.if1 = compose(alpha, last.if1);
            last.if0 = compose(alpha, last.if0);
        }
        return;
    }
    case Node::And: {
        const BaseCycles &bc = base_cycles();
        Perm theta = conjugator(bc.tau, alpha);
        Perm theta_inv = invert(theta);
        Perm beta = compose(theta, compose(bc.s1, theta_inv));
        Perm gamma = compose(theta, compose(bc.s2, theta_inv));
        Program pa, pb;
        compile_node(n->a, beta, pa);
        compile_node(n->b, gamma, pb);
        // sequence A, B, A^-1, B^-1: product = gamma^-h . beta^-g . gamma^h . beta^g
        Program painv = inverse_program(pa);
        Program pbinv = inverse_program(pb);
        out.insert(out.end(), pa.begin(), pa.end());
        out.insert(out.end(), pb.begin(), pb.end());
        out.insert(out.end(), painv.begin(), painv.end());
        out.insert(out.end(), pbinv.begin(), pbinv.end());
        return;
    }
    default:
        throw BpError("barrington: unsupported node");
    }
}

Mod2BP trivial_bp(bool value, uint32_t num_vars) {
    Mod2BP bp;
    bp.l = 2;
    bp.num_vars = num_vars;
    if (value)
        bp.edges.push_back({0, 1, {LabelKind::Const1, 0}});
    return bp;
}

Mod2BP program_to_bp(const Program &prog, const Perm &sigma, uint32_t num_vars) {
    // Layers 0..L of 5 pins.  s is pin 0 of layer 0 (vertex 0); t is pin
    // sigma(0) of layer L, placed last in the vertex order.
    uint32_t L = static_cast<uint32_t>(prog.size());
    uint32_t accept_pin = sigma[0];
    uint32_t l = 5 * (L + 1);
    auto vid = [&](uint32_t layer, uint32_t pin) -> uint32_t {
        if (layer == 0)
            return pin; // pin 0 == s == vertex 0
        if (layer < L)
            return 5 * layer + pin;
        // final layer: accept pin goes last
        uint32_t base = 5 * L;
        if (pin == accept_pin)
            return l - 1;
        return base + pin - (pin > accept_pin ? 1 : 0);
    };
    Mod2BP bp;
    bp.l = l;
    bp.num_vars = num_vars;
    for (uint32_t t = 1; t <= L; ++t) {
        const Instruction &ins = prog[t - 1];
        for (uint32_t p = 0; p < 5; ++p) {
            uint32_t from = vid(t - 1, p);
            if (ins.var < 0 || ins.if1[p] == ins.if0[p]) {
                bp.edges.push_back({from, vid(t, ins.if1[p]), {LabelKind::Const1, 0}});
            } else {
                uint32_t v = static_cast<uint32_t>(ins.var);
                bp.edges.push_back({from, vid(t, ins.if1[p]), {LabelKind::Pos, v}});
                bp.edges.push_back({from, vid(t, ins.if0[p]), {LabelKind::Neg, v}});
            }
        }
    }
    return bp;
}

} // namespace

Mod2BP barrington_compile(const Circuit &c, uint32_t out_bit, uint32_t depth_bound) {
    if (out_bit >= c.outputs.size())
        throw BpError("barrington: output index out of range");
    CircuitStats st = analyze(c);
    if (st.depth > depth_bound)
        throw BpError("barrington: circuit depth " + std::to_string(st.depth) +
                      " exceeds bound " + std::to_string(depth_bound));
    uint32_t wire = c.outputs[out_bit];
    if (wire < c.num_inputs) {
        // bare input as output: a single-instruction program
        Mod2BP bp;
        bp.l = 2;
        bp.num_vars = c.num_inputs;
        bp.edges.push_back({0, 1, {LabelKind::Pos, wire}});
        return bp;
    }
    NodeArena arena;
    std::vector<const Node *> memo(c.wire_count(), nullptr);
    const Node *root = build_tree(c, wire, arena, memo);
    int cv = fold_const(root);
    if (cv >= 0)
        return trivial_bp(cv == 1, c.num_inputs);
    Perm sigma{1, 2, 3, 4, 0};
    Program prog;
    compile_node(root, sigma, prog);
    Mod2BP bp = program_to_bp(prog, sigma, c.num_inputs);
    bp.validate();
    return bp;
}

Mod2BP anf_to_bp(const AnfPolynomial &p) {
    if (p.num_vars == 0)
        throw BpError("anf_to_bp: empty variable universe");
    uint32_t intermediates = 0;
    for (uint32_t m : p.monomials) {
        uint32_t deg = static_cast<uint32_t>(__builtin_popcount(m));
        if (deg > 1)
            intermediates += deg - 1;
    }
    Mod2BP bp;
    bp.num_vars = p.num_vars;
    bp.l = 2 + intermediates;
    uint32_t t = bp.l - 1;
    uint32_t next = 1;
    for (uint32_t m : p.monomials) {
        if (m == 0) {
            bp.edges.push_back({0, t, {LabelKind::Const1, 0}});
            continue;
        }
        std::vector<uint32_t> vars;
        for (uint32_t v = 0; v < p.num_vars; ++v)
            if (m & (1u << v))
                vars.push_back(v);
        uint32_t prev = 0;
        for (size_t i = 0; i + 1 < vars.size(); ++i) {
            bp.edges.push_back({prev, next, {LabelKind::Pos, vars[i]}});
            prev = next++;
        }
        bp.edges.push_back({prev, t, {LabelKind::Pos, vars.back()}});
    }
    bp.validate();
    return bp;
}

std::string serialize_bp(const Mod2BP &bp) {
    std::ostringstream os;
    os << "BP l=" << bp.l << " vars=" << bp.num_vars << "\n";
    for (const auto &e : bp.edges) {
        os << "EDGE " << e.from << " " << e.to << " ";
        switch (e.label.kind) {
        case LabelKind::Const1:
            os << "1";
            break;
        case LabelKind::Pos:
            os << "x" << e.label.var;
            break;
        case LabelKind::Neg:
            os << "!x" << e.label.var;
            break;
        }
        os << "\n";
    }
    return os.str();
}

Mod2BP parse_bp(const std::string &text) {
    std::istringstream is(text);
    std::string line;
    Mod2BP bp;
    bool have_header = false;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok))
            continue;
        if (tok == "BP") {
            std::string a, b;
            if (!(ls >> a >> b) || a.rfind("l=", 0) != 0 || b.rfind("vars=", 0) != 0)
                throw BpError("line " + std::to_string(lineno) + ": bad BP header");
            bp.l = static_cast<uint32_t>(std::stoul(a.substr(2)));
            bp.num_vars = static_cast<uint32_t>(std::stoul(b.substr(5)));
            have_header = true;
        } else if (tok == "EDGE") {
            if (!have_header)
                throw BpError("line " + std::to_string(lineno) + ": EDGE before header");
            uint32_t from, to;
            std::string lab;
            if (!(ls >> from >> to >> lab))
                throw BpError("line " + std::to_string(lineno) + ": bad EDGE");
            EdgeLabel label;
            if (lab == "1") {
                label = {LabelKind::Const1, 0};
            } else if (lab.rfind("x", 0) == 0) {
                label = {LabelKind::Pos, static_cast<uint32_t>(std::stoul(lab.substr(1)))};
            } else if (lab.rfind("!x", 0) == 0) {
                label = {LabelKind::Neg, static_cast<uint32_t>(std::stoul(lab.substr(2)))};
            } else {
                throw BpError("line " + std::to_string(lineno) + ": bad label '" + lab + "'");
            }
            bp.edges.push_back({from, to, label});
        } else {
            throw BpError("line " + std::to_string(lineno) + ": unknown directive '" + tok + "'");
        }
    }
    if (!have_header)
        throw BpError("missing BP header");
    bp.validate();
    return bp;
}

} // namespace dpoq
