#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bq/error.hpp"

namespace bq {

using Permutation = std::vector<std::size_t>;

/// p then q, as maps on points: (p * q)(i) = q(p(i)).
inline Permutation perm_then(const Permutation& p, const Permutation& q) {
    Permutation r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i] = q[p[i]];
    }
    return r;
}

inline Permutation perm_inverse(const Permutation& p) {
    Permutation r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[p[i]] = i;
    }
    return r;
}

inline bool is_permutation(const Permutation& p) {
    std::vector<bool> hit(p.size(), false);
    for (std::size_t x : p) {
        if (x >= p.size() || hit[x]) {
            return false;
        }
        hit[x] = true;
    }
    return true;
}

/// A finite permutation group, elements enumerated by BFS from the identity
/// over the generators. Element 0 is the identity. The product a*b means
/// "apply b, then a" on points, i.e. composition of maps.
class FiniteGroup {
  public:
    FiniteGroup() : FiniteGroup(1, {}) {}

    FiniteGroup(std::size_t degree, std::vector<Permutation> generators, std::size_t order_limit = 5040)
        : degree_(degree), generators_(std::move(generators)) {
        for (const auto& g : generators_) {
            if (g.size() != degree_ || !is_permutation(g)) {
                throw DomainError("group generator is not a permutation of " + std::to_string(degree_) + " points");
            }
        }
        Permutation id(degree_);
        for (std::size_t i = 0; i < degree_; ++i) {
            id[i] = i;
        }
        elements_.push_back(id);
        words_.push_back({});
        index_[id] = 0;
        for (std::size_t k = 0; k < elements_.size(); ++k) {
            for (std::size_t g = 0; g < generators_.size(); ++g) {
                // element * generator as maps: apply generator first.
                Permutation next = perm_then(generators_[g], elements_[k]);
                if (index_.count(next) == 0) {
                    if (elements_.size() >= order_limit) {
                        throw DomainError("group exceeds " + std::to_string(order_limit) + " elements");
                    }
                    index_[next] = elements_.size();
                    elements_.push_back(next);
                    auto w = words_[k];
                    w.push_back(g);
                    words_.push_back(std::move(w));
                }
            }
        }
    }

    static FiniteGroup cyclic(std::size_t n) {
        if (n == 0) {
            throw DomainError("cyclic group of order 0");
        }
        Permutation g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = (i + 1) % n;
        }
        FiniteGroup G(n, n == 1 ? std::vector<Permutation>{} : std::vector<Permutation>{g});
        G.cyclic_order_ = n;
        return G;
    }

    [[nodiscard]] std::size_t order() const { return elements_.size(); }
    [[nodiscard]] std::size_t degree() const { return degree_; }
    [[nodiscard]] const std::vector<Permutation>& generators() const { return generators_; }
    [[nodiscard]] std::size_t cyclic_order() const { return cyclic_order_; }
    [[nodiscard]] const Permutation& element(std::size_t i) const { return elements_.at(i); }

    [[nodiscard]] std::size_t index_of(const Permutation& p) const {
        auto it = index_.find(p);
        if (it == index_.end()) {
            throw DomainError("permutation is not in the group");
        }
        return it->second;
    }

    [[nodiscard]] std::size_t identity() const { return 0; }
    [[nodiscard]] std::size_t multiply(std::size_t a, std::size_t b) const {
        return index_of(perm_then(elements_[b], elements_[a]));
    }
    [[nodiscard]] std::size_t inverse(std::size_t a) const { return index_of(perm_inverse(elements_[a])); }
    [[nodiscard]] std::size_t generator(std::size_t g) const { return index_of(generators_.at(g)); }

    /// Cyclic groups print k for g^k; others print a word in g1, g2, ...
    [[nodiscard]] std::string label(std::size_t i) const {
        if (cyclic_order_ != 0) {
            return std::to_string(i);
        }
        if (words_[i].empty()) {
            return "e";
        }
        std::string s;
        for (std::size_t g : words_[i]) {
            s += (s.empty() ? "g" : ".g") + std::to_string(g + 1);
        }
        return s;
    }

    friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
        return a.degree_ == b.degree_ && a.generators_ == b.generators_;
    }

  private:
    std::size_t degree_;
    std::vector<Permutation> generators_;
    std::vector<Permutation> elements_;
    std::vector<std::vector<std::size_t>> words_;
    std::map<Permutation, std::size_t> index_;
    std::size_t cyclic_order_ = 0;
};

/// A G-grading: one group element per arrow.
struct Grading {
    FiniteGroup group;
    std::vector<std::size_t> degree;
};

} // namespace bq
