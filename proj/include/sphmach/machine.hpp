// Sphere machines: wreath recursions presenting left-free bisets.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sphmach/automorphism.hpp"
#include "sphmach/permutation.hpp"
#include "sphmach/sphere_group.hpp"

namespace sphmach {

// (entries, perm) in the wreath product; positions are 0-based.
struct WreathElement {
  std::vector<Word> entries;
  Permutation perm;

  static WreathElement identity(std::size_t degree);
  bool is_identity() const;
  bool operator==(WreathElement const&) const = default;
};

// a then b: (ab)[i] = a[i] * b[a.perm(i)]
WreathElement operator*(WreathElement const& a, WreathElement const& b);
WreathElement inverse(WreathElement const& a);

struct MachineRow {
  std::vector<Word> entries;
  Permutation perm;
  bool operator==(MachineRow const&) const = default;
};

class MalformedMachine : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SphereMachine {
 public:
  SphereMachine() = default;
  // One row per source generator; entries are reduced to normal form in
  // the target. Throws MalformedMachine on shape errors. The relator is
  // checked but not enforced; see relator_holds().
  SphereMachine(SphereGroup source, SphereGroup target,
                std::vector<MachineRow> rows);

  static SphereMachine identity(SphereGroup const& G);

  SphereGroup const& source() const noexcept { return source_; }
  SphereGroup const& target() const noexcept { return target_; }
  std::size_t degree() const noexcept { return degree_; }
  std::vector<MachineRow> const& rows() const noexcept { return rows_; }
  MachineRow const& row(int i) const { return rows_.at(i - 1); }
  std::vector<Permutation> permutations() const;

  bool relator_holds() const noexcept { return relator_ok_; }
  // throws MalformedMachine unless the relator maps to the identity
  void require_relator() const;

  WreathElement evaluate(Word const& w) const;

  bool operator==(SphereMachine const& other) const {
    return source_ == other.source_ && target_ == other.target_ &&
           rows_ == other.rows_;
  }

 private:
  SphereGroup source_;
  SphereGroup target_;
  std::size_t degree_ = 0;
  std::vector<MachineRow> rows_;
  std::vector<WreathElement> inverse_rows_;
  bool relator_ok_ = false;
};

struct Lift {
  std::size_t degree;
  ConjClass cls;  // in the target group; trivial allowed
  auto operator<=>(Lift const&) const = default;
};
using LiftMultiset = std::vector<Lift>;

// one lift per cycle of the permutation of g, cycles ordered by least point
LiftMultiset multiset_of_lifts(SphereMachine const& M, Word const& g);
LiftMultiset multiset_of_lifts(SphereMachine const& M, ConjClass const& c);
LiftMultiset sorted(LiftMultiset m);

struct ValidationReport {
  bool relator = false;
  bool transitive = false;       // SB1
  bool riemann_hurwitz = false;  // SB2
  bool peripheral_lifts = false; // SB3
  long deficit = 0;              // sum over cycles of (length - 1)
  long expected_deficit = 0;     // 2d - 2
  std::vector<std::string> problems;

  bool ok() const {
    return relator && transitive && riemann_hurwitz && peripheral_lifts;
  }
};
ValidationReport validate_sphere(SphereMachine const& M);
// throws MalformedMachine with the first problem unless valid
void require_sphere(SphereMachine const& M);

// For each target puncture j (1-based, index j-1): the source puncture it
// lies over and the local degree.
struct PortraitEntry {
  int source_puncture;
  std::size_t degree;
  bool operator==(PortraitEntry const&) const = default;
};
std::vector<PortraitEntry> portrait(SphereMachine const& M);

// M1: G -> K, M2: K -> H. Basis pair (x, y) has index x * d2 + y.
SphereMachine tensor(SphereMachine const& M1, SphereMachine const& M2);

struct BasisChange {
  std::vector<Word> conjugators;  // indexed by new positions
  Permutation relabel;            // old position -> new position

  static BasisChange identity(std::size_t degree);
};
// entry at new position r(s) is l[r(s)]^-1 * h_s * l[r(s.g)]
SphereMachine change_basis(SphereMachine const& M, BasisChange const& b);
SphereMachine relabel(SphereMachine const& M, Permutation const& r);

// rows become evaluate(M, phi(g_i))
SphereMachine pre_compose(SphereMachine const& M, Automorphism const& phi);
// psi applied to every entry
SphereMachine post_compose(SphereMachine const& M, Automorphism const& psi);

struct PeripheralDatum {
  int source_class;         // 1-based generator of the source
  std::vector<int> cycle;   // 1-based points
  std::size_t degree;
  Word representative;      // T_p * g_i^degree * T_p^-1, p = cycle front
};

struct SubgroupPresentation {
  int basepoint;                  // 1-based
  std::vector<Word> transversal;  // T_p with basepoint . T_p = p
  std::vector<Word> generators;   // Schreier generators, nontrivial
  std::vector<PeripheralDatum> peripheral;
};
SubgroupPresentation stabilizer_subgroup(SphereMachine const& M, int basepoint);

// Breadth-first words from a point along g1..g(n-1), deterministic.
std::vector<Word> schreier_transversal(SphereMachine const& M, int start);

// change of basis making the entries along the transversal from position 0
// trivial; returns the normalized machine and the basis change used
std::pair<SphereMachine, BasisChange> normalize(SphereMachine const& M);

}  // namespace sphmach
