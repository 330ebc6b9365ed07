#pragma once

#include <cstdint>
#include <vector>

#include "contprob/prob_core.hpp"
#include "contprob/rng.hpp"

namespace contprob {

// One system's latent quadruple before measurement. Codes are 0/1 indices
// into the model's declared value sets (0 = first label, e.g. a_1 or c_1).
struct SystemRecord {
    std::uint64_t index;  // 1-based
    std::uint8_t a;
    std::uint8_t c;
    std::uint8_t cbar;
    std::uint8_t chat;
};

// Streams n i.i.d. records to fn, one at a time. Record j draws a from the
// a-marginal, then c, cbar, chat from their conditionals given a,
// conditionally independently. Identical (model, n, seed) reproduces the
// identical sequence bit for bit.
template <class Fn>
void visit_iid(const ModelSpec& model, std::uint64_t n, SeedSpec seed, Fn&& fn) {
    require_valid(model);
    CounterStream rng(seed);
    for (std::uint64_t j = 1; j <= n; ++j) {
        SystemRecord rec;
        rec.index = j;
        rec.a = rng.draw_code(model.a_law.p_1);
        const bool a1 = rec.a == 0;
        rec.c = rng.draw_code(a1 ? model.c_given_a1.p_c1_given
                                 : model.c_given_a2.p_c1_given);
        rec.cbar = rng.draw_code(a1 ? model.cbar_given_a1.p_c1_given
                                    : model.cbar_given_a2.p_c1_given);
        rec.chat = rng.draw_code(a1 ? model.chat_given_a1.p_c1_given
                                    : model.chat_given_a2.p_c1_given);
        fn(rec);
    }
}

inline std::vector<SystemRecord> gen_iid(const ModelSpec& model, std::uint64_t n,
                                         SeedSpec seed) {
    std::vector<SystemRecord> out;
    out.reserve(n);
    visit_iid(model, n, seed, [&](const SystemRecord& r) { out.push_back(r); });
    return out;
}

// Streams n records whose coordinates are symmetric fair bits, identically
// distributed and pairwise independent across indices but not mutually
// independent: indices come in tiles of 3 carrying (b1, b2, b1 xor b2) per
// coordinate, from fresh fair bits per tile and per coordinate. Within a
// tile the XOR of the three bits of any coordinate is 0 with probability 1.
template <class Fn>
void visit_pairwise_xor(std::uint64_t n, SeedSpec seed, Fn&& fn) {
    CounterStream rng(seed);
    const std::uint64_t tiles = (n + 2) / 3;
    std::uint64_t j = 1;
    for (std::uint64_t t = 0; t < tiles && j <= n; ++t) {
        const std::uint64_t bits = rng.next_u64();
        std::uint8_t b1[4], b2[4];
        for (int k = 0; k < 4; ++k) {
            b1[k] = static_cast<std::uint8_t>((bits >> (2 * k)) & 1);
            b2[k] = static_cast<std::uint8_t>((bits >> (2 * k + 1)) & 1);
        }
        for (int pos = 0; pos < 3 && j <= n; ++pos, ++j) {
            auto pick = [&](int k) -> std::uint8_t {
                if (pos == 0) return b1[k];
                if (pos == 1) return b2[k];
                return b1[k] ^ b2[k];
            };
            fn(SystemRecord{j, pick(0), pick(1), pick(2), pick(3)});
        }
    }
}

inline std::vector<SystemRecord> gen_pairwise_xor(std::uint64_t n, SeedSpec seed) {
    std::vector<SystemRecord> out;
    out.reserve(n);
    visit_pairwise_xor(n, seed, [&](const SystemRecord& r) { out.push_back(r); });
    return out;
}

}  // namespace contprob
