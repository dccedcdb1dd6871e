// Automorphisms of sphere groups, Dehn twists and outer equality.
#pragma once

#include <string>
#include <vector>

#include "sphmach/sphere_group.hpp"
#include "sphmach/word.hpp"

namespace sphmach {

// Images of g1..gn, stored in normal form.
class Automorphism {
 public:
  Automorphism() = default;
  // Throws std::invalid_argument when the images violate the relator.
  Automorphism(SphereGroup const& G, std::vector<Word> images);

  static Automorphism identity(SphereGroup const& G);
  // x -> x^w = w^-1 x w
  static Automorphism inner(SphereGroup const& G, Word const& w);
  // images already in normal form and known to satisfy the relator
  static Automorphism trusted(std::vector<Word> images) {
    Automorphism a;
    a.images_ = std::move(images);
    return a;
  }

  std::vector<Word> const& images() const noexcept { return images_; }
  int size() const noexcept { return static_cast<int>(images_.size()); }
  // image of an arbitrary word over g1..gn, in normal form
  Word apply(Word const& w) const { return substitute(w, images_); }

  bool operator==(Automorphism const& other) const = default;

 private:
  std::vector<Word> images_;
};

// f after g: x -> f(g(x))
Automorphism compose(Automorphism const& f, Automorphism const& g);

// Inverse via folding over the images. Throws std::domain_error when the
// images do not generate the group.
Automorphism inverse(Automorphism const& f, SphereGroup const& G);

// gk -> gk^(gi...gj) for i <= k <= j
Automorphism dehn_twist(int i, int j, SphereGroup const& G);

bool is_peripheral_preserving(Automorphism const& f, SphereGroup const& G);

bool outer_equal(Automorphism const& f, Automorphism const& g,
                 SphereGroup const& G);

// Canonical representative of the outer class of a peripheral-preserving
// automorphism: f(g1) = g1 exactly, then the power of g1 minimizing the
// image of g2. Equal keys iff outer_equal (for n >= 3).
std::vector<Word> outer_key(Automorphism const& f, SphereGroup const& G);

// Twists along the intervals gi..gj, 1 <= i < j <= n, skipping the inner
// (1,n). Names are "tau<i>_<j>".
struct NamedAutomorphism {
  std::string name;
  Automorphism map;
};
std::vector<NamedAutomorphism> standard_twists(SphereGroup const& G);

}  // namespace sphmach
