#include "sphmach/permutation.hpp"

#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sphmach {

Permutation::Permutation(std::size_t degree) : img_(degree) {
  std::iota(img_.begin(), img_.end(), 0);
}

Permutation::Permutation(std::vector<int> images) : img_(std::move(images)) {
  std::vector<bool> hit(img_.size(), false);
  for (int x : img_) {
    if (x < 0 || static_cast<std::size_t>(x) >= img_.size() || hit[x]) {
      throw std::invalid_argument("Permutation: not a bijection");
    }
    hit[x] = true;
  }
}

Permutation Permutation::from_cycles(
    std::size_t degree, std::vector<std::vector<int>> const& cycles) {
  std::vector<int> img(degree);
  std::iota(img.begin(), img.end(), 0);
  std::vector<bool> used(degree, false);
  for (auto const& c : cycles) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      int x = c[k];
      if (x < 1 || static_cast<std::size_t>(x) > degree) {
        throw std::out_of_range("cycle point " + std::to_string(x) +
                                " outside 1.." + std::to_string(degree));
      }
      if (used[x - 1]) {
        throw std::invalid_argument("cycles are not disjoint at point " +
                                    std::to_string(x));
      }
      used[x - 1] = true;
      img[x - 1] = c[(k + 1) % c.size()] - 1;
    }
  }
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<int> r(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) {
    r[img_[i]] = static_cast<int>(i);
  }
  Permutation p;
  p.img_ = std::move(r);
  return p;
}

Permutation operator*(Permutation const& a, Permutation const& b) {
  if (a.degree() != b.degree()) {
    throw std::invalid_argument("Permutation: degree mismatch");
  }
  Permutation p;
  p.img_.resize(a.degree());
  for (std::size_t i = 0; i < a.degree(); ++i) {
    p.img_[i] = b.img_[a.img_[i]];
  }
  return p;
}

Permutation Permutation::pow(long k) const {
  Permutation base = k < 0 ? inverse() : *this;
  Permutation r(degree());
  for (long i = 0; i < (k < 0 ? -k : k); ++i) {
    r = r * base;
  }
  return r;
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < img_.size(); ++i) {
    if (img_[i] != static_cast<int>(i)) {
      return false;
    }
  }
  return true;
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(img_.size(), false);
  for (std::size_t i = 0; i < img_.size(); ++i) {
    if (seen[i]) {
      continue;
    }
    std::vector<int> c;
    for (int x = static_cast<int>(i); !seen[x]; x = img_[x]) {
      seen[x] = true;
      c.push_back(x);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::uint64_t Permutation::order() const {
  std::uint64_t r = 1;
  for (auto const& c : cycles()) {
    r = std::lcm(r, static_cast<std::uint64_t>(c.size()));
  }
  return r;
}

std::string Permutation::to_string() const {
  std::string s;
  for (auto const& c : cycles()) {
    if (c.size() < 2) {
      continue;
    }
    s += '(';
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k > 0) {
        s += ',';
      }
      s += std::to_string(c[k] + 1);
    }
    s += ')';
  }
  return s;
}

std::vector<std::vector<int>> orbits(std::vector<Permutation> const& gens,
                                     std::size_t degree) {
  std::vector<int> comp(degree, -1);
  std::vector<std::vector<int>> out;
  for (std::size_t s = 0; s < degree; ++s) {
    if (comp[s] >= 0) {
      continue;
    }
    std::vector<int> orb{static_cast<int>(s)};
    comp[s] = static_cast<int>(out.size());
    for (std::size_t k = 0; k < orb.size(); ++k) {
      for (auto const& g : gens) {
        int y = g(orb[k]);
        if (comp[y] < 0) {
          comp[y] = static_cast<int>(out.size());
          orb.push_back(y);
        }
      }
    }
    out.push_back(std::move(orb));
  }
  return out;
}

bool is_transitive(std::vector<Permutation> const& gens, std::size_t degree) {
  return degree <= 1 || orbits(gens, degree).size() == 1;
}

void StabilizerChain::rebuild(Level& L) const {
  L.transversal.assign(degree_, std::nullopt);
  L.transversal[L.base] = Permutation(degree_);
  L.orbit = {L.base};
  for (std::size_t k = 0; k < L.orbit.size(); ++k) {
    int x = L.orbit[k];
    for (auto const& g : L.gens) {
      int y = g(x);
      if (!L.transversal[y]) {
        L.transversal[y] = *L.transversal[x] * g;
        L.orbit.push_back(y);
      }
    }
  }
}

std::pair<Permutation, std::size_t> StabilizerChain::sift(
    Permutation g, std::size_t from) const {
  for (std::size_t i = from; i < levels_.size(); ++i) {
    auto const& L = levels_[i];
    int x = g(L.base);
    if (!L.transversal[x]) {
      return {g, i};
    }
    g = g * L.transversal[x]->inverse();
  }
  return {g, levels_.size()};
}

StabilizerChain::StabilizerChain(std::vector<Permutation> const& gens,
                                 std::size_t degree)
    : degree_(degree) {
  auto add = [this](Permutation const& r, std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k <= hi; ++k) {
      if (k == levels_.size()) {
        int b = 0;
        while (r(b) == b) {
          ++b;
        }
        levels_.push_back({b, {}, {}, {}});
      }
      levels_[k].gens.push_back(r);
      rebuild(levels_[k]);
    }
  };
  for (auto const& g : gens) {
    if (g.degree() != degree) {
      throw std::invalid_argument("StabilizerChain: degree mismatch");
    }
    auto [r, j] = sift(g, 0);
    if (!r.is_identity()) {
      add(r, 0, j);
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = levels_.size(); i-- > 0 && !changed;) {
      Level const& L = levels_[i];
      for (std::size_t a = 0; !changed && a < L.orbit.size(); ++a) {
        int x = L.orbit[a];
        for (std::size_t s = 0; !changed && s < L.gens.size(); ++s) {
          Permutation const& g = L.gens[s];
          Permutation h = *L.transversal[x] * g * L.transversal[g(x)]->inverse();
          auto [r, j] = sift(h, i + 1);
          if (!r.is_identity()) {
            add(r, i + 1, j);
            changed = true;
          }
        }
      }
    }
  }
}

std::uint64_t StabilizerChain::order() const {
  std::uint64_t r = 1;
  for (auto const& L : levels_) {
    r *= L.orbit.size();
  }
  return r;
}

bool StabilizerChain::contains(Permutation const& p) const {
  return sift(p, 0).first.is_identity();
}

std::vector<int> StabilizerChain::base() const {
  std::vector<int> b;
  for (auto const& L : levels_) {
    b.push_back(L.base);
  }
  return b;
}

std::vector<Permutation> enumerate_group(std::vector<Permutation> const& gens,
                                         std::size_t degree,
                                         std::size_t limit) {
  std::vector<Permutation> out{Permutation(degree)};
  std::set<Permutation> seen{out.front()};
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (auto const& g : gens) {
      Permutation p = out[k] * g;
      if (seen.insert(p).second) {
        out.push_back(p);
        if (out.size() > limit) {
          throw std::length_error("enumerate_group: limit exceeded");
        }
      }
    }
  }
  return out;
}

}  // namespace sphmach
