// Permutations of {0..d-1} acting on the right, and small permutation
// groups (orbits, Schreier-Sims, closure).
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sphmach {

class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::size_t degree);
  // images[i] is the image of i. Throws unless a bijection.
  explicit Permutation(std::vector<int> images);
  // cycles use 1-based points
  static Permutation from_cycles(std::size_t degree,
                                 std::vector<std::vector<int>> const& cycles);

  std::size_t degree() const noexcept { return img_.size(); }
  int operator()(int i) const { return img_[static_cast<std::size_t>(i)]; }
  std::vector<int> const& images() const noexcept { return img_; }

  Permutation inverse() const;
  // a * b applies a first, then b
  friend Permutation operator*(Permutation const& a, Permutation const& b);
  Permutation pow(long k) const;

  bool is_identity() const noexcept;
  // all cycles including fixed points, each starting at its least point,
  // ordered by least point
  std::vector<std::vector<int>> cycles() const;
  std::uint64_t order() const;
  // 1-based disjoint cycle notation; identity prints as ""
  std::string to_string() const;

  std::strong_ordering operator<=>(Permutation const&) const = default;
  bool operator==(Permutation const&) const = default;

 private:
  std::vector<int> img_;
};

std::vector<std::vector<int>> orbits(std::vector<Permutation> const& gens,
                                     std::size_t degree);
bool is_transitive(std::vector<Permutation> const& gens, std::size_t degree);

// Deterministic Schreier-Sims; bases are chosen as least moved points.
class StabilizerChain {
 public:
  StabilizerChain(std::vector<Permutation> const& gens, std::size_t degree);

  std::uint64_t order() const;
  bool contains(Permutation const& p) const;
  std::vector<int> base() const;

 private:
  struct Level {
    int base;
    std::vector<Permutation> gens;
    std::vector<int> orbit;
    std::vector<std::optional<Permutation>> transversal;
  };
  void rebuild(Level& L) const;
  // residue and the level where sifting stopped
  std::pair<Permutation, std::size_t> sift(Permutation g,
                                           std::size_t from) const;

  std::size_t degree_;
  std::vector<Level> levels_;
};

// All group elements by closure, in BFS order from the identity.
std::vector<Permutation> enumerate_group(std::vector<Permutation> const& gens,
                                         std::size_t degree,
                                         std::size_t limit = 1000000);

}  // namespace sphmach
