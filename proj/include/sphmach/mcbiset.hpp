// Distillations, left orbits of mapping class bisets, twist rewriting,
// monodromy and quotients of the right action.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sphmach/machine.hpp"

namespace sphmach {

// Permutations up to simultaneous relabeling, with the conjugacy class of
// the entry product along each cycle. Stored in canonical form.
struct Distillation {
  std::size_t degree = 0;
  // images of the relabeled permutations, generator by generator
  std::vector<int> perm_code;
  // per generator, per cycle (ordered by least point)
  std::vector<std::vector<ConjClass>> labels;

  std::vector<Permutation> permutations() const;
  auto operator<=>(Distillation const&) const = default;
};

struct CanonicalForm {
  Distillation key;
  // every relabeling (old -> canonical position) reaching the key
  std::vector<Permutation> relabelings;
};

CanonicalForm canonical_form(SphereMachine const& M);
Distillation distill(SphereMachine const& M);

// change_basis(post_compose(M1, knitting), change) == M2
struct OrbitWitness {
  Automorphism knitting;
  BasisChange change;
};
std::optional<OrbitWitness> same_left_orbit(SphereMachine const& M1,
                                            SphereMachine const& M2);

struct Transition {
  int next = 0;
  std::optional<Automorphism> knitting;
  std::optional<Word> word;  // normal form in the acting group
  std::optional<BasisChange> change;
};

// Basis of left orbits and the table Psi_k . m = knitting . Psi_next.
// Generator g of the acting alphabet is letter g.
struct MappingClassBiset {
  SphereGroup acting;       // words of the acting group
  bool free_alphabet = false;
  std::vector<std::string> gen_names;
  std::vector<Automorphism> gen_maps;  // on the source group; may be empty
  std::optional<SphereMachine> base;
  std::vector<SphereMachine> basis;    // empty for recursions given directly
  std::vector<std::string> labels;
  std::vector<std::vector<Transition>> table;  // [gen-1][k]

  std::size_t size() const { return table.empty() ? labels.size() : table[0].size(); }
  std::size_t generator_count() const { return gen_names.size(); }
  bool has_words() const;
  std::optional<int> gen_index(std::string const& name) const;
  std::string format_word(Word const& w) const;
  // permutation of the basis under generator g
  Permutation action(int g) const;
};

// A group over the names with no relations (an extra unused generator is
// appended so that the sphere group normal form is the identity map).
SphereGroup free_alphabet_group(std::vector<std::string> const& names);

struct NamedMap {
  std::string name;
  Automorphism map;
};

struct McbOptions {
  std::size_t max_basis = 100000;
  // verify every table edge by machine equality
  bool verify = true;
};

// Throws std::runtime_error when an orbit cannot be reconstructed.
MappingClassBiset compute_mcbiset(SphereMachine const& M,
                                  std::vector<NamedMap> const& gens,
                                  McbOptions const& opt = {});

// The mapping class biset given directly as a recursion over the acting
// group: row g, entry k is the knitting word of (g, k).
MappingClassBiset mcbiset_from_recursion(SphereMachine const& R,
                                         std::vector<std::string> labels);

// Express the knitting automorphisms of the table as words over the gens.
// Four-punctured spheres go through the torus double cover first; anything
// left is searched among words up to max_length (outer equality). acting must be a
// sphere group on the generator names (or empty for the free alphabet).
// Returns the number of knittings left unexpressed.
std::size_t express_knittings(MappingClassBiset& mcb,
                              std::optional<SphereGroup> const& acting,
                              std::size_t max_length = 8);

struct RewriteResult {
  Word word;
  int next;
};
// Psi_k . m = m' . Psi_k'. Throws std::logic_error without knitting words.
RewriteResult rewrite(MappingClassBiset const& mcb, int k, Word const& m);
// the same with knitting automorphisms composed instead of words
std::pair<Automorphism, int> rewrite_automorphism(MappingClassBiset const& mcb,
                                                  int k, Word const& m);

struct State {
  Word word;
  int basis;
  auto operator<=>(State const&) const = default;
};
struct Terminal {
  std::vector<State> visited;
  std::vector<State> terminal;  // the empty-word state or the cycle
  bool converged = false;       // false when max_steps ran out
  std::size_t steps = 0;
  std::set<State> terminal_set() const {
    return {terminal.begin(), terminal.end()};
  }
};
Terminal conjugacy_iterate(MappingClassBiset const& mcb, State start,
                           std::size_t max_steps = 10000);

// multiset of lifts of a generator of the acting group over the table
LiftMultiset lift_multiset_in_mcbiset(MappingClassBiset const& mcb, int g);

struct PermGroupReport {
  std::vector<Permutation> generators;
  std::uint64_t order = 1;
  bool transitive = false;
};
PermGroupReport monodromy(SphereMachine const& M);

// A right action of named generators on {0..N-1}.
struct Action {
  std::vector<std::string> names;
  std::vector<Permutation> perms;
  std::size_t size() const { return perms.empty() ? 0 : perms[0].degree(); }
};

struct QuotientAction {
  std::vector<std::vector<int>> orbits;  // V-orbits, ordered by least point
  std::vector<int> orbit_of;             // point -> orbit index
  Action action;                         // on orbits
};
// V acts on the same set; throws std::invalid_argument unless the
// generators permute the V-orbits.
QuotientAction quotient_action(Action const& a,
                               std::vector<Permutation> const& V);

// Right regular action of gens on the group they generate, and the left
// multiplication action of a subgroup on the same set.
struct CosetSpace {
  std::vector<Permutation> elements;
  Action right;
};
CosetSpace regular_action(std::vector<std::string> const& names,
                          std::vector<Permutation> const& gens);
std::vector<Permutation> left_multiplication(CosetSpace const& space,
                                             std::vector<Permutation> const& V);

// Basis element k labeled by images(w) for any word w leading from the base
// to k, so that the right action of the table becomes right multiplication.
// Absent unless the labels agree along every edge and are distinct.
std::optional<CosetSpace> label_basis(MappingClassBiset const& mcb,
                                      std::vector<Permutation> const& images);

struct CorrespondenceInvariants {
  long points = 0;
  long punctures = 0;
  long euler_characteristic = 0;
  long genus = 0;
};
// Permutations whose product (left to right) is the identity, defining an
// N-sheeted cover of the sphere minus k points.
CorrespondenceInvariants correspondence_invariants(
    std::vector<Permutation> const& perms);

}  // namespace sphmach
