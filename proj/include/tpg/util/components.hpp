#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "tpg/common.hpp"

namespace tpg::util {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while(parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }

    /// Members of every set, each sorted, ordered by smallest member.
    std::vector<std::vector<int>> groups() {
        std::map<int, std::vector<int>> by_root;
        for(int i = 0; i < static_cast<int>(parent.size()); ++i) by_root[find(i)].push_back(i);
        std::vector<std::vector<int>> out;
        out.reserve(by_root.size());
        for(auto &[root, members] : by_root) out.push_back(std::move(members));
        std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.front() < b.front(); });
        return out;
    }
};

/// Connected components of the sparsity graph of a square matrix.
inline std::vector<std::vector<int>> connected_components(const SparseXc &m) {
    DisjointSets sets(static_cast<int>(m.rows()));
    for(int k = 0; k < m.outerSize(); ++k)
        for(SparseXc::InnerIterator it(m, k); it; ++it)
            if(it.value() != cplx{}) sets.unite(static_cast<int>(it.row()), static_cast<int>(it.col()));
    return sets.groups();
}

} // namespace tpg::util
