#include "crn/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>

namespace crn {

PetriNetGraph petri_net_graph(const ReactionNetwork& net) {
    PetriNetGraph g;
    g.species_vertices = net.species_count();
    g.reaction_vertices = net.reaction_count();
    for (int j = 0; j < net.reaction_count(); ++j) {
        for (const auto& [s, w] : net.reactions[j].source.coeff)
            g.arcs.push_back({s, j, w, true});
        for (const auto& [s, w] : net.reactions[j].target.coeff)
            g.arcs.push_back({s, j, w, false});
    }
    return g;
}

namespace {

constexpr int kMaxVertices = 60;
constexpr int kMaxReactions = 64;  // reaction candidate sets are uint64 masks

using Mask = std::uint64_t;

// Per-species profile: sorted (source, target) coefficient pairs over all
// reactions the species participates in.
std::vector<std::pair<long long, long long>> species_signature(const ReactionNetwork& net,
                                                               int s) {
    std::vector<std::pair<long long, long long>> sig;
    for (const Reaction& r : net.reactions) {
        long long a = r.source.coefficient(s);
        long long b = r.target.coefficient(s);
        if (a != 0 || b != 0) sig.emplace_back(a, b);
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

bool multiset_includes(const std::vector<std::pair<long long, long long>>& big,
                       const std::vector<std::pair<long long, long long>>& small) {
    size_t i = 0;
    for (const auto& x : small) {
        while (i < big.size() && big[i] < x) ++i;
        if (i == big.size() || big[i] != x) return false;
        ++i;
    }
    return true;
}

// Shared backtracking search. With exact=true it requires a bijection
// (isomorphism); otherwise an injection whose image induces sub (embedding).
struct MatchSearch {
    const ReactionNetwork& a;
    const ReactionNetwork& b;
    bool exact;

    int na, nb, ra, rb;
    std::vector<std::vector<int>> species_candidates;  // per a-species
    std::vector<Mask> reaction_candidates;             // per a-reaction, over b-reactions
    std::vector<int> order;                            // a-species assignment order
    std::vector<int> sigma;                            // a-species -> b-species (-1 unset)
    std::vector<bool> b_used;

    MatchSearch(const ReactionNetwork& a_, const ReactionNetwork& b_, bool exact_)
        : a(a_), b(b_), exact(exact_) {}

    bool reaction_pair_ok_initial(int ja, int jb) const {
        const Reaction& x = a.reactions[ja];
        const Reaction& y = b.reactions[jb];
        if (exact) {
            auto coefs = [](const Complex& c) {
                std::vector<long long> v;
                for (const auto& [s, w] : c.coeff) v.push_back(w);
                std::sort(v.begin(), v.end());
                return v;
            };
            return coefs(x.source) == coefs(y.source) && coefs(x.target) == coefs(y.target);
        }
        // Induced case: sub coefficients must appear among sup's (species not
        // in the image are deleted, so sup may have extras).
        auto fits = [](const Complex& cs, const Complex& cp) {
            std::vector<long long> vs, vp;
            for (const auto& [s, w] : cs.coeff) vs.push_back(w);
            for (const auto& [s, w] : cp.coeff) vp.push_back(w);
            std::sort(vs.begin(), vs.end());
            std::sort(vp.begin(), vp.end());
            size_t i = 0;
            for (long long x : vs) {
                while (i < vp.size() && vp[i] < x) ++i;
                if (i == vp.size() || vp[i] != x) return false;
                ++i;
            }
            return true;
        };
        return fits(x.source, y.source) && fits(x.target, y.target);
    }

    bool prepare() {
        na = a.species_count();
        nb = b.species_count();
        ra = a.reaction_count();
        rb = b.reaction_count();
        if (exact && (na != nb || ra != rb)) return false;
        if (!exact && (na > nb || ra > rb)) return false;

        std::vector<std::vector<std::pair<long long, long long>>> siga(na), sigb(nb);
        for (int i = 0; i < na; ++i) siga[i] = species_signature(a, i);
        for (int i = 0; i < nb; ++i) sigb[i] = species_signature(b, i);

        species_candidates.assign(na, {});
        for (int i = 0; i < na; ++i) {
            for (int j = 0; j < nb; ++j) {
                bool ok = exact ? siga[i] == sigb[j] : multiset_includes(sigb[j], siga[i]);
                if (ok) species_candidates[i].push_back(j);
            }
            if (species_candidates[i].empty()) return false;
        }

        reaction_candidates.assign(ra, 0);
        for (int ja = 0; ja < ra; ++ja) {
            for (int jb = 0; jb < rb; ++jb)
                if (reaction_pair_ok_initial(ja, jb)) reaction_candidates[ja] |= Mask{1} << jb;
            if (reaction_candidates[ja] == 0) return false;
        }

        order.resize(na);
        for (int i = 0; i < na; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            return species_candidates[x].size() < species_candidates[y].size();
        });
        sigma.assign(na, -1);
        b_used.assign(nb, false);
        return true;
    }

    // Narrows reaction candidate masks after assigning a-species u -> v.
    bool narrow(int u, int v, std::vector<Mask>& masks) const {
        for (int ja = 0; ja < ra; ++ja) {
            long long cs = a.reactions[ja].source.coefficient(u);
            long long ct = a.reactions[ja].target.coefficient(u);
            Mask m = masks[ja];
            Mask keep = 0;
            while (m) {
                int jb = std::countr_zero(m);
                m &= m - 1;
                if (b.reactions[jb].source.coefficient(v) == cs &&
                    b.reactions[jb].target.coefficient(v) == ct)
                    keep |= Mask{1} << jb;
            }
            masks[ja] = keep;
            if (keep == 0) return false;
        }
        return true;
    }

    // Standard augmenting-path bipartite matching over the final masks.
    bool reaction_matching(const std::vector<Mask>& masks, std::vector<int>& match_a) const {
        std::vector<int> match_b(rb, -1);
        match_a.assign(ra, -1);
        for (int ja = 0; ja < ra; ++ja) {
            std::vector<bool> visited(rb, false);
            if (!augment(ja, masks, visited, match_a, match_b)) return false;
        }
        if (exact) {
            for (int jb = 0; jb < rb; ++jb)
                if (match_b[jb] < 0) return false;
        }
        return true;
    }

    bool augment(int ja, const std::vector<Mask>& masks, std::vector<bool>& visited,
                 std::vector<int>& match_a, std::vector<int>& match_b) const {
        Mask m = masks[ja];
        while (m) {
            int jb = std::countr_zero(m);
            m &= m - 1;
            if (visited[jb]) continue;
            visited[jb] = true;
            if (match_b[jb] < 0 || augment(match_b[jb], masks, visited, match_a, match_b)) {
                match_a[ja] = jb;
                match_b[jb] = ja;
                return true;
            }
        }
        return false;
    }

    bool search(size_t depth, std::vector<Mask> masks, std::vector<int>& out_rmap) {
        if (depth == order.size()) return reaction_matching(masks, out_rmap);
        int u = order[depth];
        for (int v : species_candidates[u]) {
            if (b_used[v]) continue;
            std::vector<Mask> next = masks;
            if (!narrow(u, v, next)) continue;
            sigma[u] = v;
            b_used[v] = true;
            if (search(depth + 1, std::move(next), out_rmap)) return true;
            sigma[u] = -1;
            b_used[v] = false;
        }
        return false;
    }

    bool run(std::vector<int>& out_smap, std::vector<int>& out_rmap) {
        if (!prepare()) return false;
        if (!search(0, reaction_candidates, out_rmap)) return false;
        out_smap = sigma;
        return true;
    }
};

void check_size(const ReactionNetwork& n, const char* who) {
    if (n.species_count() + n.reaction_count() > kMaxVertices || n.reaction_count() > kMaxReactions)
        throw SizeLimitError(std::string(who) + ": network exceeds the supported desk scale");
}

}  // namespace

std::optional<IsoWitness> is_isomorphic(const ReactionNetwork& a, const ReactionNetwork& b) {
    check_size(a, "is_isomorphic");
    check_size(b, "is_isomorphic");
    MatchSearch s(a, b, /*exact=*/true);
    IsoWitness w;
    if (!s.run(w.species_map, w.reaction_map)) return std::nullopt;
    return w;
}

std::optional<Embedding> is_induced_subnetwork(const ReactionNetwork& sub,
                                               const ReactionNetwork& sup) {
    check_size(sub, "is_induced_subnetwork");
    check_size(sup, "is_induced_subnetwork");
    MatchSearch s(sub, sup, /*exact=*/false);
    Embedding e;
    if (!s.run(e.species_map, e.reaction_map)) return std::nullopt;
    return e;
}

}  // namespace crn
