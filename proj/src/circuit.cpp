#include "dpoq/circuit.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace dpoq {

static uint32_t gate_arity(GateKind k) {
    switch (k) {
    case GateKind::And:
    case GateKind::Or:
    case GateKind::Xor:
        return 2;
    case GateKind::Not:
        return 1;
    default:
        return 0;
    }
}

bool Circuit::structurally_equal(const Circuit &o) const {
    if (num_inputs != o.num_inputs || outputs != o.outputs || gates.size() != o.gates.size())
        return false;
    for (size_t i = 0; i < gates.size(); ++i) {
        if (gates[i].kind != o.gates[i].kind)
            return false;
        uint32_t ar = gate_arity(gates[i].kind);
        if (ar >= 1 && gates[i].a != o.gates[i].a)
            return false;
        if (ar >= 2 && gates[i].b != o.gates[i].b)
            return false;
    }
    return true;
}

void Circuit::validate() const {
    for (size_t g = 0; g < gates.size(); ++g) {
        uint32_t limit = num_inputs + static_cast<uint32_t>(g);
        uint32_t ar = gate_arity(gates[g].kind);
        if (ar >= 1 && gates[g].a >= limit)
            throw CircuitError("gate " + std::to_string(g) + " references a later wire");
        if (ar >= 2 && gates[g].b >= limit)
            throw CircuitError("gate " + std::to_string(g) + " references a later wire");
    }
    for (uint32_t w : outputs)
        if (w >= wire_count())
            throw CircuitError("output references undefined wire");
}

namespace {

std::vector<std::string> tokenize(const std::string &line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t)
        toks.push_back(t);
    return toks;
}

bool valid_name(const std::string &s) {
    if (s.empty())
        return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

[[noreturn]] void fail(size_t lineno, const std::string &msg) {
    throw CircuitError("line " + std::to_string(lineno) + ": " + msg);
}

} // namespace

Circuit parse_circuit(const std::string &text) {
    Circuit c;
    std::map<std::string, uint32_t> wires;
    std::istringstream is(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        auto toks = tokenize(line);
        if (toks.empty())
            continue;
        if (toks[0] == "INPUT") {
            if (toks.size() != 2)
                fail(lineno, "INPUT takes exactly one name");
            if (!valid_name(toks[1]))
                fail(lineno, "bad input name '" + toks[1] + "'");
            if (!c.gates.empty())
                fail(lineno, "INPUT after first gate");
            if (wires.count(toks[1]))
                fail(lineno, "duplicate wire '" + toks[1] + "'");
            wires[toks[1]] = c.num_inputs;
            c.input_names.push_back(toks[1]);
            ++c.num_inputs;
        } else if (toks[0] == "OUTPUT") {
            if (toks.size() != 2)
                fail(lineno, "OUTPUT takes exactly one wire");
            auto it = wires.find(toks[1]);
            if (it == wires.end())
                fail(lineno, "OUTPUT references undefined wire '" + toks[1] + "'");
            c.outputs.push_back(it->second);
        } else {
            // <name> = OP args...
            if (toks.size() < 3 || toks[1] != "=")
                fail(lineno, "expected '<name> = OP ...'");
            if (!valid_name(toks[0]))
                fail(lineno, "bad wire name '" + toks[0] + "'");
            if (wires.count(toks[0]))
                fail(lineno, "duplicate wire '" + toks[0] + "'");
            GateKind kind;
            const std::string &op = toks[2];
            if (op == "AND")
                kind = GateKind::And;
            else if (op == "OR")
                kind = GateKind::Or;
            else if (op == "XOR")
                kind = GateKind::Xor;
            else if (op == "NOT")
                kind = GateKind::Not;
            else if (op == "CONST0")
                kind = GateKind::Const0;
            else if (op == "CONST1")
                kind = GateKind::Const1;
            else
                fail(lineno, "unknown gate kind '" + op + "'");
            uint32_t ar = gate_arity(kind);
            if (toks.size() != 3 + ar)
                fail(lineno, op + " takes " + std::to_string(ar) + " argument(s)");
            Gate g{kind, 0, 0};
            auto resolve = [&](const std::string &name) -> uint32_t {
                auto it = wires.find(name);
                if (it == wires.end())
                    fail(lineno, "reference to undefined wire '" + name + "'");
                return it->second;
            };
            if (ar >= 1)
                g.a = resolve(toks[3]);
            if (ar >= 2)
                g.b = resolve(toks[4]);
            wires[toks[0]] = c.wire_count();
            c.gate_names.push_back(toks[0]);
            c.gates.push_back(g);
        }
    }
    if (c.outputs.empty())
        throw CircuitError("circuit declares no OUTPUT");
    c.validate();
    return c;
}

std::string serialize_circuit(const Circuit &c) {
    auto wire_name = [&](uint32_t w) -> std::string {
        if (w < c.num_inputs)
            return w < c.input_names.size() ? c.input_names[w] : "x" + std::to_string(w);
        uint32_t g = w - c.num_inputs;
        return g < c.gate_names.size() ? c.gate_names[g] : "g" + std::to_string(g);
    };
    std::ostringstream os;
    for (uint32_t i = 0; i < c.num_inputs; ++i)
        os << "INPUT " << wire_name(i) << "\n";
    for (size_t g = 0; g < c.gates.size(); ++g) {
        const Gate &gate = c.gates[g];
        os << wire_name(c.num_inputs + static_cast<uint32_t>(g)) << " = ";
        switch (gate.kind) {
        case GateKind::And:
            os << "AND " << wire_name(gate.a) << " " << wire_name(gate.b);
            break;
        case GateKind::Or:
            os << "OR " << wire_name(gate.a) << " " << wire_name(gate.b);
            break;
        case GateKind::Xor:
            os << "XOR " << wire_name(gate.a) << " " << wire_name(gate.b);
            break;
        case GateKind::Not:
            os << "NOT " << wire_name(gate.a);
            break;
        case GateKind::Const0:
            os << "CONST0";
            break;
        case GateKind::Const1:
            os << "CONST1";
            break;
        }
        os << "\n";
    }
    for (uint32_t w : c.outputs)
        os << "OUTPUT " << wire_name(w) << "\n";
    return os.str();
}

BitVec eval_circuit(const Circuit &c, const BitVec &x) {
    if (x.size() != c.num_inputs)
        throw CircuitError("eval_circuit: input length mismatch");
    std::vector<char> val(c.wire_count(), 0);
    for (uint32_t i = 0; i < c.num_inputs; ++i)
        val[i] = x.get(i);
    for (size_t g = 0; g < c.gates.size(); ++g) {
        const Gate &gate = c.gates[g];
        bool r = false;
        switch (gate.kind) {
        case GateKind::And:
            r = val[gate.a] && val[gate.b];
            break;
        case GateKind::Or:
            r = val[gate.a] || val[gate.b];
            break;
        case GateKind::Xor:
            r = val[gate.a] != val[gate.b];
            break;
        case GateKind::Not:
            r = !val[gate.a];
            break;
        case GateKind::Const0:
            r = false;
            break;
        case GateKind::Const1:
            r = true;
            break;
        }
        val[c.num_inputs + g] = r;
    }
    BitVec out(c.outputs.size());
    for (size_t i = 0; i < c.outputs.size(); ++i)
        out.set(i, val[c.outputs[i]]);
    return out;
}

CircuitStats analyze(const Circuit &c) {
    CircuitStats st;
    st.fanout.assign(c.wire_count(), 0);
    std::vector<uint32_t> depth(c.wire_count(), 0);
    for (size_t g = 0; g < c.gates.size(); ++g) {
        const Gate &gate = c.gates[g];
        uint32_t d = 0;
        uint32_t ar = gate_arity(gate.kind);
        if (ar >= 1) {
            st.fanout[gate.a]++;
            d = std::max(d, depth[gate.a]);
        }
        if (ar >= 2) {
            st.fanout[gate.b]++;
            d = std::max(d, depth[gate.b]);
        }
        depth[c.num_inputs + g] = d + 1;
        st.depth = std::max(st.depth, d + 1);
    }
    for (auto &f : st.fanout)
        if (f == 0)
            f = 1; // unused wires still need one replica
    return st;
}

AnfPolynomial truth_table_anf(const std::function<bool(uint32_t)> &f, uint32_t m) {
    if (m > 16)
        throw std::invalid_argument("truth_table_anf: width exceeds enumeration bound (16)");
    size_t n = size_t{1} << m;
    std::vector<char> a(n);
    for (size_t x = 0; x < n; ++x)
        a[x] = f(static_cast<uint32_t>(x));
    // Moebius transform: coefficient of monomial S is xor of f over subsets of S.
    for (uint32_t bit = 0; bit < m; ++bit) {
        size_t step = size_t{1} << bit;
        for (size_t s = 0; s < n; ++s)
            if (s & step)
                a[s] ^= a[s ^ step];
    }
    AnfPolynomial p;
    p.num_vars = m;
    for (size_t s = 0; s < n; ++s)
        if (a[s])
            p.monomials.push_back(static_cast<uint32_t>(s));
    return p;
}

} // namespace dpoq
