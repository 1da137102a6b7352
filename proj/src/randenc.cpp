#include "dpoq/randenc.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace dpoq {

namespace {

// r1 bits fill the upper triangle diagonal-major: offset 1 rows 0..n-2,
// offset 2 rows 0..n-3, ...  This makes "the entries solved per diagonal"
// contiguous in the reconstruction.
uint32_t r1_index(uint32_t n, uint32_t row, uint32_t col) {
    uint32_t off = col - row;
    uint32_t base = 0;
    for (uint32_t o = 1; o < off; ++o)
        base += n - o;
    return base + row;
}

} // namespace

BitVec EncodedOutput::concat() const {
    BitVec out;
    for (const auto &b : blocks)
        out.append(b);
    return out;
}

std::string EncodedOutput::to_lines(uint32_t n) const {
    std::ostringstream os;
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) {
            const BitVec &b = blocks[i * n + j];
            os << "ENTRY " << i << " " << j << " " << b.size() << " " << b.to_hex() << "\n";
        }
    return os.str();
}

REInstance build_instance(const Mod2BP &bp) {
    bp.validate();
    REInstance inst;
    inst.bp = bp;
    inst.n = bp.l - 1;
    inst.lsym = path_matrix_symbolic(bp);
    uint32_t n = inst.n;
    inst.entries.assign(static_cast<size_t>(n) * n, {});

    auto expand = [&](std::vector<Monomial> &dst, int32_t r1fac, const AffineForm &form,
                      int32_t r2fac) {
        // one monomial per literal of the affine form, constant part first
        if (form.constant)
            dst.push_back({r1fac, -1, r2fac});
        for (uint32_t v : form.vars)
            dst.push_back({r1fac, static_cast<int32_t>(v), r2fac});
    };

    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = 0; j < n; ++j) {
            auto &dst = inst.entries[i * n + j];
            for (uint32_t k1 = i; k1 < n; ++k1) {
                int32_t r1fac = (k1 == i) ? -1 : static_cast<int32_t>(r1_index(n, i, k1));
                if (j + 1 < n) {
                    expand(dst, r1fac, inst.lsym[k1][j], -1);
                } else {
                    for (uint32_t k2 = 0; k2 < n; ++k2) {
                        int32_t r2fac = (k2 + 1 == n) ? -1 : static_cast<int32_t>(k2);
                        expand(dst, r1fac, inst.lsym[k1][k2], r2fac);
                    }
                }
            }
        }
    }

    RandomnessLayout &lay = inst.layout;
    lay.num_x = bp.num_vars;
    lay.n_r1 = n * (n - 1) / 2;
    lay.n_r2 = n - 1;
    lay.off_r1 = lay.num_x;
    lay.off_r2 = lay.off_r1 + lay.n_r1;
    lay.off_r = lay.off_r2 + lay.n_r2;
    lay.entry_k.resize(inst.entries.size());
    lay.entry_r_off.resize(inst.entries.size());
    lay.entry_rp_off.resize(inst.entries.size());
    uint32_t pos = lay.off_r;
    for (size_t e = 0; e < inst.entries.size(); ++e) {
        lay.entry_k[e] = static_cast<uint32_t>(inst.entries[e].size());
        lay.entry_r_off[e] = pos;
        pos += lay.entry_k[e];
    }
    lay.off_rp = pos;
    for (size_t e = 0; e < inst.entries.size(); ++e) {
        lay.entry_rp_off[e] = pos;
        if (lay.entry_k[e] >= 2)
            pos += lay.entry_k[e] - 1;
    }
    lay.total_bits = pos;
    lay.rand_bits = pos - lay.num_x;
    lay.output_bits = 0;
    for (uint32_t k : lay.entry_k)
        lay.output_bits += 2 * k;
    return inst;
}

namespace {

GF2Matrix r1_matrix(uint32_t n, const BitVec &r1) {
    GF2Matrix m = GF2Matrix::identity(n);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = i + 1; j < n; ++j)
            if (r1.get(r1_index(n, i, j)))
                m.set(i, j, true);
    return m;
}

GF2Matrix r2_matrix(uint32_t n, const BitVec &r2) {
    GF2Matrix m = GF2Matrix::identity(n);
    for (uint32_t i = 0; i + 1 < n; ++i)
        if (r2.get(i))
            m.set(i, n - 1, true);
    return m;
}

bool monomial_value(const Monomial &mono, const BitVec &pre, const RandomnessLayout &lay) {
    bool v = true;
    if (mono.r1 >= 0)
        v = v && pre.get(lay.off_r1 + static_cast<uint32_t>(mono.r1));
    if (mono.x_var >= 0)
        v = v && pre.get(static_cast<uint32_t>(mono.x_var));
    if (mono.r2 >= 0)
        v = v && pre.get(lay.off_r2 + static_cast<uint32_t>(mono.r2));
    return v;
}

} // namespace

GF2Matrix apply_tilde(const REInstance &inst, const BitVec &x, const BitVec &r1,
                      const BitVec &r2) {
    if (x.size() != inst.layout.num_x || r1.size() != inst.layout.n_r1 ||
        r2.size() != inst.layout.n_r2)
        throw REError("apply_tilde: length mismatch");
    GF2Matrix l = path_matrix(inst.bp, x);
    return r1_matrix(inst.n, r1).mul(l).mul(r2_matrix(inst.n, r2));
}

EncodedOutput apply_hat(const REInstance &inst, const BitVec &pre) {
    const RandomnessLayout &lay = inst.layout;
    if (pre.size() != lay.total_bits)
        throw REError("apply_hat: preimage length mismatch");
    EncodedOutput out;
    out.blocks.resize(inst.entries.size());
    for (size_t e = 0; e < inst.entries.size(); ++e) {
        uint32_t k = lay.entry_k[e];
        BitVec &block = out.blocks[e];
        block = BitVec(2 * k);
        if (k == 0)
            continue;
        auto rbit = [&](uint32_t m) { return pre.get(lay.entry_r_off[e] + m); };
        auto rpbit = [&](uint32_t m) { return pre.get(lay.entry_rp_off[e] + m); };
        for (uint32_t m = 0; m < k; ++m)
            block.set(m, monomial_value(inst.entries[e][m], pre, lay) ^ rbit(m));
        if (k == 1) {
            block.set(1, rbit(0));
        } else {
            block.set(k, rbit(0) ^ rpbit(0));
            for (uint32_t c = 1; c + 1 < k; ++c)
                block.set(k + c, rpbit(c - 1) ^ rbit(c) ^ rpbit(c));
            block.set(2 * k - 1, rpbit(k - 2) ^ rbit(k - 1));
        }
    }
    return out;
}

GF2Matrix decode_matrix(const REInstance &inst, const EncodedOutput &y) {
    uint32_t n = inst.n;
    if (y.blocks.size() != inst.entries.size())
        throw REError("decode: block count mismatch");
    GF2Matrix m(n, n);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) {
            const BitVec &b = y.blocks[i * n + j];
            if (b.size() != 2 * inst.layout.entry_k[i * n + j])
                throw REError("decode: block length mismatch");
            m.set(i, j, b.parity());
        }
    return m;
}

bool decode(const REInstance &inst, const EncodedOutput &y) {
    return decode_matrix(inst, y).det();
}

EncodedOutput simulate(const REInstance &inst, bool y, Rng &rng) {
    uint32_t n = inst.n;
    BitVec r1 = BitVec::random(inst.layout.n_r1, rng);
    BitVec r2 = BitVec::random(inst.layout.n_r2, rng);
    // canonical matrix: subdiagonal ones, top-right y, zero elsewhere
    GF2Matrix lambda(n, n);
    for (uint32_t r = 1; r < n; ++r)
        lambda.set(r, r - 1, true);
    lambda.set(0, n - 1, lambda.get(0, n - 1) ^ y);
    GF2Matrix m = r1_matrix(n, r1).mul(lambda).mul(r2_matrix(n, r2));
    EncodedOutput out;
    out.blocks.resize(inst.entries.size());
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) {
            size_t e = i * n + j;
            uint32_t k = inst.layout.entry_k[e];
            BitVec &block = out.blocks[e];
            block = BitVec(2 * k);
            if (k == 0) {
                if (m.get(i, j))
                    throw REError("simulate: nonzero entry where the instance is identically 0");
                continue;
            }
            bool acc = false;
            for (uint32_t b = 0; b + 1 < 2 * k; ++b) {
                bool bit = rng.bit();
                block.set(b, bit);
                acc ^= bit;
            }
            block.set(2 * k - 1, acc ^ m.get(i, j));
        }
    return out;
}

BitVec make_preimage(const REInstance &inst, const BitVec &x, const BitVec &rand) {
    if (x.size() != inst.layout.num_x || rand.size() != inst.layout.rand_bits)
        throw REError("make_preimage: length mismatch");
    BitVec pre = x;
    pre.append(rand);
    return pre;
}

std::optional<BitVec> reconstruct_randomness(const REInstance &inst, const BitVec &x,
                                             const EncodedOutput &y) {
    const RandomnessLayout &lay = inst.layout;
    if (x.size() != lay.num_x)
        throw REError("reconstruct: x length mismatch");
    uint32_t n = inst.n;
    GF2Matrix m = decode_matrix(inst, y);
    GF2Matrix l = path_matrix(inst.bp, x);

    BitVec r1(lay.n_r1), r2(lay.n_r2);
    if (n >= 2) {
        // main diagonal: entries i < n-1 expose the second diagonal of R1,
        // the last one exposes the last bit of r2
        for (uint32_t i = 0; i + 1 < n; ++i)
            r1.set(r1_index(n, i, i + 1), m.get(i, i) ^ l.get(i, i));
        r2.set(n - 2, m.get(n - 1, n - 1) ^ l.get(n - 1, n - 1));
        // diagonal offset j: unknowns are the (j+1)-offset diagonal of R1 and
        // the (j+1)-th-from-last bit of r2; everything else is already solved
        for (uint32_t j = 1; j + 1 < n; ++j) {
            for (uint32_t i = 0; i + j + 1 < n; ++i) {
                bool acc = m.get(i, i + j) ^ l.get(i, i + j);
                for (uint32_t k1 = i + 1; k1 <= i + j; ++k1)
                    if (r1.get(r1_index(n, i, k1)))
                        acc ^= l.get(k1, i + j);
                r1.set(r1_index(n, i, i + j + 1), acc);
            }
            {
                uint32_t i = n - 1 - j;
                // all R1 factors in row i are known; the only unknown is
                // r2[i-1], whose coefficient is the subdiagonal 1 of row i
                bool acc = m.get(i, n - 1);
                for (uint32_t k1 = i; k1 < n; ++k1) {
                    bool r1f = (k1 == i) || r1.get(r1_index(n, i, k1));
                    if (!r1f)
                        continue;
                    bool inner = l.get(k1, n - 1);
                    for (uint32_t k2 = 0; k2 + 1 < n; ++k2)
                        if (k2 != i - 1 && r2.get(k2))
                            inner ^= l.get(k1, k2);
                    acc ^= inner;
                }
                r2.set(i - 1, acc);
            }
        }
    }
    // full verification: catches inputs that cannot have produced y
    if (r1_matrix(n, r1).mul(l).mul(r2_matrix(n, r2)) != m)
        return std::nullopt;

    // peel r and r' from the blocks
    BitVec pre(lay.total_bits);
    for (uint32_t i = 0; i < lay.num_x; ++i)
        pre.set(i, x.get(i));
    for (uint32_t i = 0; i < lay.n_r1; ++i)
        pre.set(lay.off_r1 + i, r1.get(i));
    for (uint32_t i = 0; i < lay.n_r2; ++i)
        pre.set(lay.off_r2 + i, r2.get(i));
    for (size_t e = 0; e < inst.entries.size(); ++e) {
        uint32_t k = lay.entry_k[e];
        if (k == 0)
            continue;
        const BitVec &block = y.blocks[e];
        for (uint32_t mi = 0; mi < k; ++mi) {
            bool t = monomial_value(inst.entries[e][mi], pre, lay);
            pre.set(lay.entry_r_off[e] + mi, block.get(mi) ^ t);
        }
        auto rbit = [&](uint32_t i) { return pre.get(lay.entry_r_off[e] + i); };
        if (k == 1) {
            if (block.get(1) != rbit(0))
                return std::nullopt;
        } else {
            pre.set(lay.entry_rp_off[e], block.get(k) ^ rbit(0));
            for (uint32_t c = 1; c + 1 < k; ++c) {
                bool prev = pre.get(lay.entry_rp_off[e] + c - 1);
                pre.set(lay.entry_rp_off[e] + c, block.get(k + c) ^ prev ^ rbit(c));
            }
            if (block.get(2 * k - 1) !=
                (pre.get(lay.entry_rp_off[e] + k - 2) ^ rbit(k - 1)))
                return std::nullopt;
        }
    }
    return pre.slice(lay.num_x, lay.rand_bits);
}

uint32_t output_locality(const REInstance &inst) {
    uint32_t worst = 0;
    for (size_t e = 0; e < inst.entries.size(); ++e) {
        uint32_t k = inst.layout.entry_k[e];
        for (uint32_t m = 0; m < k; ++m) {
            const Monomial &mono = inst.entries[e][m];
            uint32_t deps = 1; // r_m
            if (mono.r1 >= 0)
                ++deps;
            if (mono.x_var >= 0)
                ++deps;
            if (mono.r2 >= 0)
                ++deps;
            worst = std::max(worst, deps);
        }
        if (k == 1)
            worst = std::max(worst, 1u);
        else if (k >= 2)
            worst = std::max(worst, 3u); // widest chain bit
    }
    return worst;
}

WidthReport estimate_width(const std::vector<REInstance> &insts) {
    WidthReport w;
    w.num_instances = static_cast<uint32_t>(insts.size());
    std::vector<uint64_t> x_fanout; // shared x register across instances
    for (const auto &inst : insts) {
        x_fanout.resize(std::max<size_t>(x_fanout.size(), inst.layout.num_x), 0);
        std::vector<uint64_t> rfan(inst.layout.rand_bits, 0);
        auto bump_rand = [&](uint32_t abs_pos) { rfan[abs_pos - inst.layout.num_x]++; };
        for (size_t e = 0; e < inst.entries.size(); ++e) {
            uint32_t k = inst.layout.entry_k[e];
            for (uint32_t m = 0; m < k; ++m) {
                const Monomial &mono = inst.entries[e][m];
                if (mono.r1 >= 0)
                    bump_rand(inst.layout.off_r1 + static_cast<uint32_t>(mono.r1));
                if (mono.x_var >= 0)
                    x_fanout[static_cast<uint32_t>(mono.x_var)]++;
                if (mono.r2 >= 0)
                    bump_rand(inst.layout.off_r2 + static_cast<uint32_t>(mono.r2));
                if (mono.r1 >= 0 && mono.x_var >= 0 && mono.r2 >= 0)
                    w.aux_qubits++; // degree-3 monomials stage through one ancilla
                bump_rand(inst.layout.entry_r_off[e] + m); // the r_m mask
            }
            if (k == 1) {
                bump_rand(inst.layout.entry_r_off[e]);
            } else if (k >= 2) {
                bump_rand(inst.layout.entry_r_off[e]);
                bump_rand(inst.layout.entry_rp_off[e]);
                for (uint32_t c = 1; c + 1 < k; ++c) {
                    bump_rand(inst.layout.entry_rp_off[e] + c - 1);
                    bump_rand(inst.layout.entry_r_off[e] + c);
                    bump_rand(inst.layout.entry_rp_off[e] + c);
                }
                bump_rand(inst.layout.entry_rp_off[e] + k - 2);
                bump_rand(inst.layout.entry_r_off[e] + k - 1);
            }
        }
        for (uint64_t f : rfan)
            w.randomness_copies += std::max<uint64_t>(f, 1);
        w.output_qubits += inst.layout.output_bits;
    }
    for (uint64_t f : x_fanout)
        w.input_copies += std::max<uint64_t>(f, 1);
    w.total_qubits = w.input_copies + w.randomness_copies + w.output_qubits + w.aux_qubits;
    w.asymptotic = "O(lambda*l^4)";
    w.full_scale_note =
        "full-scale LWE instantiations need O(lambda^33) qubits; "
        "not reproducible at desk scale, reported as a formula only";
    return w;
}

nlohmann::json layout_json(const REInstance &inst) {
    const RandomnessLayout &l = inst.layout;
    return nlohmann::json{{"num_x", l.num_x},       {"n_r1", l.n_r1},
                          {"n_r2", l.n_r2},         {"off_r1", l.off_r1},
                          {"off_r2", l.off_r2},     {"off_r", l.off_r},
                          {"off_rp", l.off_rp},     {"total_bits", l.total_bits},
                          {"rand_bits", l.rand_bits}, {"output_bits", l.output_bits},
                          {"entry_k", l.entry_k}};
}

nlohmann::json width_report_json(const WidthReport &w) {
    return nlohmann::json{{"num_instances", w.num_instances},
                          {"input_copies", w.input_copies},
                          {"randomness_copies", w.randomness_copies},
                          {"output_qubits", w.output_qubits},
                          {"aux_qubits", w.aux_qubits},
                          {"total_qubits", w.total_qubits},
                          {"asymptotic", w.asymptotic},
                          {"full_scale_note", w.full_scale_note}};
}

} // namespace dpoq
