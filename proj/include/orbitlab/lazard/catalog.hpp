#pragma once

// Bundled rings: abelian, Heisenberg, Heisenberg plus abelian summand, strictly
// upper-triangular u3 and u4, and Heisenberg over Z/p^2.

#include <string>
#include <string_view>
#include <vector>

#include "orbitlab/lazard/lie_ring.hpp"

namespace orbitlab::catalog {

inline LieRing abelian(std::int64_t p, int k, int rank) {
    LieRing g(Modulus(p, k), rank);
    g.declared_class = rank == 0 ? 0 : 1;
    return g;
}

/// h3: [e1, e2] = e3.
inline LieRing heisenberg(std::int64_t p, int k = 1) {
    LieRing g(Modulus(p, k), 3);
    g.set_bracket(0, 1, {0, 0, 1});
    g.declared_class = 2;
    return g;
}

/// h3 + Z/p^k e4.
inline LieRing heisenberg_plus_abelian(std::int64_t p, int k = 1) {
    LieRing g(Modulus(p, k), 4);
    g.set_bracket(0, 1, {0, 0, 1, 0});
    g.declared_class = 2;
    return g;
}

/// Strictly upper-triangular n x n matrices, basis e_ij (i < j) in
/// lexicographic order, [e_ij, e_kl] = d_jk e_il - d_li e_kj.
inline LieRing upper_triangular(std::int64_t p, int n, int k = 1) {
    std::vector<std::pair<int, int>> idx;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) idx.emplace_back(i, j);
    const int r = static_cast<int>(idx.size());
    LieRing g(Modulus(p, k), r);
    auto pos = [&](int i, int j) {
        for (int t = 0; t < r; ++t)
            if (idx[static_cast<std::size_t>(t)] == std::pair{i, j}) return t;
        return -1;
    };
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            auto [i, j] = idx[static_cast<std::size_t>(a)];
            auto [kk, l] = idx[static_cast<std::size_t>(b)];
            Vec v(static_cast<std::size_t>(r), 0);
            if (j == kk) v[static_cast<std::size_t>(pos(i, l))] += 1;
            if (l == i) v[static_cast<std::size_t>(pos(kk, j))] -= 1;
            g.set_bracket(a, b, v);
        }
    g.declared_class = n - 1;
    return g;
}

struct Entry {
    std::string name;
    LieRing ring;
};

/// Every bundled ring for p (u4 needs p >= 5, since its class is 3).
inline std::vector<Entry> bundled(std::int64_t p) {
    std::vector<Entry> out;
    for (int r = 1; r <= 3; ++r) out.push_back({"abelian" + std::to_string(r), abelian(p, 1, r)});
    out.push_back({"h3", heisenberg(p)});
    out.push_back({"h3+a1", heisenberg_plus_abelian(p)});
    out.push_back({"u3", upper_triangular(p, 3)});
    if (p > 3) out.push_back({"u4", upper_triangular(p, 4)});
    out.push_back({"h3/p^2", heisenberg(p, 2)});
    return out;
}

/// The full catalog over p in {3, 5, 7}.
inline std::vector<Entry> full() {
    std::vector<Entry> out;
    for (std::int64_t p : {3, 5, 7})
        for (auto& e : bundled(p)) out.push_back({e.name + "(p=" + std::to_string(p) + ")", std::move(e.ring)});
    return out;
}

/// Looks up "abelian1".."abelian3", "h3", "h3+a1", "u3", "u4", "h3/p^2".
inline LieRing by_name(std::string_view name, std::int64_t p) {
    for (auto& e : bundled(p))
        if (e.name == name) return e.ring;
    if (name == "u4") throw InputError("catalog: u4 has class 3 and needs p >= 5");
    throw InputError("catalog: unknown ring '" + std::string(name) + "'");
}

} // namespace orbitlab::catalog
