// Four-punctured spheres: a peripheral-preserving outer automorphism is
// determined by its action on the first homology of the torus that double
// covers the sphere, branched over the four punctures. The action lands in
// the level-2 congruence subgroup of PSL(2,Z), where words in a set of twist
// generators can be recovered by descent on the matrix entries.
#pragma once

#include <array>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sphmach/automorphism.hpp"

namespace sphmach {

using BigInt = boost::multiprecision::cpp_int;
// 2x2, row major; acts on row vectors
using Matrix2 = std::array<BigInt, 4>;

Matrix2 operator*(Matrix2 const& a, Matrix2 const& b);

class TorusCoverHomology {
 public:
  // Throws std::invalid_argument unless G has four generators.
  explicit TorusCoverHomology(SphereGroup const& G);

  // p(f_*(v)) = p(v) * matrix(f). Inner automorphisms give +-identity.
  Matrix2 matrix(Automorphism const& f) const;

  // Word over letters 1..gens.size() with
  // f = gens[w1] o gens[w2] o ... up to inner automorphisms, found by
  // greedy descent (with a short lookahead on plateaus) and then checked
  // with outer_equal. Absent on failure.
  std::optional<Word> express(Automorphism const& f,
                              std::vector<Automorphism> const& gens,
                              std::size_t max_steps = 400) const;

 private:
  static constexpr int kRank = 5;
  using Vec = std::array<BigInt, kRank>;
  Vec abelianize(Word const& w) const;
  std::array<BigInt, 2> project(Vec const& v) const;

  SphereGroup G_;
  std::array<Vec, kRank> Q_;     // columns 3, 4 give the torus coordinates
  std::array<Word, 2> lift_;     // words in the cover projecting to e1, e2
};

}  // namespace sphmach
