// Freely reduced words over a finite alphabet of generators 1..n.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace sphmach {

// +i is generator i, -i its inverse (i >= 1).
using Letter = std::int32_t;

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);
  Word(std::initializer_list<Letter> letters);

  static Word generator(int i) { return Word({i}); }

  std::span<Letter const> letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const;
  Word pow(long k) const;
  // w^-1 * this * w
  Word conjugate_by(Word const& w) const;
  Word subword(std::size_t pos, std::size_t len) const;
  // largest |letter|, 0 for the identity
  int max_generator() const noexcept;
  long exponent_sum(int gen) const noexcept;

  Word& operator*=(Word const& other);
  friend Word operator*(Word lhs, Word const& rhs) {
    lhs *= rhs;
    return lhs;
  }

  // shortlex: shorter words first, then letters
  std::strong_ordering operator<=>(Word const& other) const;
  bool operator==(Word const& other) const = default;

 private:
  std::vector<Letter> letters_;
};

struct WordHash {
  std::size_t operator()(Word const& w) const noexcept;
};

// Replace generator i by images[i-1] and reduce.
Word substitute(Word const& w, std::span<Word const> images);

////////////////////////////////////////////////////////////////////////
// Free group helpers. Inputs are reduced words, no relations.
////////////////////////////////////////////////////////////////////////

// w = conjugator * core * conjugator^-1 with core cyclically reduced.
struct CyclicReduction {
  Word core;
  Word conjugator;
};
CyclicReduction cyclically_reduce(Word const& w);

// rotate letters left by k (k < size)
Word rotate(Word const& w, std::size_t k);

// Least cyclic rotation in shortlex order; w must be cyclically reduced.
Word least_rotation(Word const& w);

// Primitive r with w = r^k, k >= 1 maximal. Throws on the identity.
Word centralizer_root(Word const& w);

// Solutions of u^w = v form representative * <root>.
// whole_group is set when u = v = 1.
struct ConjugatorCoset {
  Word representative;
  Word root;
  bool whole_group = false;

  // representative * root^k
  Word element(long k) const { return representative * root.pow(k); }
};

std::optional<ConjugatorCoset> free_conjugator(Word const& u, Word const& v);

}  // namespace sphmach
