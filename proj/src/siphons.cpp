#include "nonosc/siphons.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace nonosc {

namespace {

class SiphonSearch {
public:
    explicit SiphonSearch(const Network& net) : ns_(net.n_species()) {
        for (const auto& r : net.reactions) {
            uint64_t reac = 0, prod = 0;
            for (const auto& [i, c] : r.reactants) reac |= uint64_t{1} << i;
            for (const auto& [i, c] : r.products) prod |= uint64_t{1} << i;
            reac_.push_back(reac);
            prod_.push_back(prod);
        }
    }

    std::vector<uint64_t> run() {
        // Partition the search: siphons whose minimum element is i never
        // contain a smaller species.
        for (int i = 0; i < ns_; ++i)
            search(uint64_t{1} << i, (uint64_t{1} << i) - 1);

        // The branching can emit non-minimal closures; keep the inclusion
        // minima only.
        std::sort(found_.begin(), found_.end(), [](uint64_t a, uint64_t b) {
            const int pa = std::popcount(a), pb = std::popcount(b);
            return pa != pb ? pa < pb : a < b;
        });
        found_.erase(std::unique(found_.begin(), found_.end()), found_.end());
        std::vector<uint64_t> minimal;
        for (const uint64_t s : found_) {
            bool has_subset = false;
            for (const uint64_t m : minimal)
                if ((m & s) == m) { has_subset = true; break; }
            if (!has_subset) minimal.push_back(s);
        }
        return minimal;
    }

private:
    // Grows `in` to a siphon avoiding `out`; branches when a violated
    // reaction offers several reactants.
    void search(uint64_t in, uint64_t out) {
        while (true) {
            int violated = -1;
            for (size_t j = 0; j < reac_.size(); ++j) {
                if ((prod_[j] & in) != 0 && (reac_[j] & in) == 0) {
                    violated = static_cast<int>(j);
                    break;
                }
            }
            if (violated < 0) {
                found_.push_back(in);
                return;
            }
            const uint64_t cand = reac_[static_cast<size_t>(violated)] & ~out;
            if (cand == 0) return;           // every fix is forbidden: dead branch
            if (std::popcount(cand) == 1) {  // forced reactant
                in |= cand;
                continue;
            }
            // Branch k takes candidate s_k and forbids s_1..s_{k-1}, so the
            // branches explore disjoint siphon families.
            uint64_t rest = cand;
            uint64_t taken = 0;
            while (rest != 0) {
                const uint64_t bit = rest & (~rest + 1);
                search(in | bit, out | taken);
                taken |= bit;
                rest &= ~bit;
            }
            return;
        }
    }

    int ns_;
    std::vector<uint64_t> reac_, prod_;
    std::vector<uint64_t> found_;
};

std::vector<int> mask_to_vector(uint64_t m) {
    std::vector<int> v;
    for (int i = 0; i < 64; ++i)
        if (m & (uint64_t{1} << i)) v.push_back(i);
    return v;
}

}  // namespace

std::vector<std::vector<int>> minimal_siphons(const Network& net) {
    if (net.n_species() > 32)
        throw TooLargeError("siphon enumeration supports at most 32 species, got " +
                            std::to_string(net.n_species()));
    auto masks = SiphonSearch(net).run();
    std::vector<std::vector<int>> out;
    out.reserve(masks.size());
    for (const uint64_t m : masks) out.push_back(mask_to_vector(m));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

std::vector<Siphon> classify_triviality(const std::vector<std::vector<int>>& siphons,
                                        const std::vector<RatVector>& rays) {
    std::vector<Siphon> out;
    for (const auto& s : siphons) {
        Siphon entry{s, false};
        for (const auto& ray : rays) {
            bool contained = true;
            for (Eigen::Index i = 0; i < ray.size(); ++i) {
                if (ray(i) > 0 &&
                    !std::binary_search(s.begin(), s.end(), static_cast<int>(i))) {
                    contained = false;
                    break;
                }
            }
            if (contained) { entry.trivial = true; break; }
        }
        out.push_back(std::move(entry));
    }
    return out;
}

PersistenceVerdict persistence_verdict(const std::vector<Siphon>& siphons) {
    for (const auto& s : siphons)
        if (!s.trivial) return PersistenceVerdict::Unknown;
    return PersistenceVerdict::Certified;
}

std::string to_string(PersistenceVerdict v) {
    return v == PersistenceVerdict::Certified ? "PersistenceCertified" : "Unknown";
}

}  // namespace nonosc
