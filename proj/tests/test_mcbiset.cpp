#include <random>

#include "doctest.h"
#include "sphmach/mcb_json.hpp"
#include "sphmach/mcbiset.hpp"
#include "sphmach/parse.hpp"

using namespace sphmach;

namespace {

std::string fixture(std::string const& name) {
  return std::string(SPHMACH_FIXTURES) + "/" + name;
}

Automorphism random_twist_word(std::vector<NamedAutomorphism> const& twists,
                               SphereGroup const& G, std::mt19937& rng,
                               int length) {
  std::uniform_int_distribution<std::size_t> pick(0, twists.size() - 1);
  std::uniform_int_distribution<int> sgn(0, 1);
  Automorphism f = Automorphism::identity(G);
  for (int i = 0; i < length; ++i) {
    auto const& t = twists[pick(rng)].map;
    f = compose(f, sgn(rng) ? t : inverse(t, G));
  }
  return f;
}

BasisChange random_change(std::size_t d, int rank, std::mt19937& rng) {
  std::uniform_int_distribution<int> gen(1, rank);
  BasisChange b = BasisChange::identity(d);
  for (auto& w : b.conjugators) {
    std::vector<Letter> v;
    for (int i = 0; i < 3; ++i) {
      v.push_back(gen(rng) * (i % 2 ? -1 : 1));
    }
    w = Word(v);
  }
  std::vector<int> p(d);
  for (std::size_t i = 0; i < d; ++i) {
    p[i] = static_cast<int>(i);
  }
  std::shuffle(p.begin(), p.end(), rng);
  b.relabel = Permutation(p);
  return b;
}

}  // namespace

TEST_CASE("distillations ignore basis changes") {
  std::mt19937 rng(21);
  for (auto name : {"pilgrim.mach", "centralizer7.mach"}) {
    auto M = read_machine_file(fixture(name)).machine();
    auto key = distill(M);
    for (int trial = 0; trial < 20; ++trial) {
      auto N = change_basis(M, random_change(M.degree(), M.target().rank(), rng));
      CHECK(distill(N) == key);
    }
  }
}

TEST_CASE("distillations see right twists") {
  auto f = read_machine_file(fixture("pilgrim.mach"));
  auto M = f.machine();
  // u moves the base machine to another left orbit
  CHECK(distill(pre_compose(M, f.automorphism("u"))) != distill(M));
}

TEST_CASE("left orbit witnesses are verified") {
  std::mt19937 rng(4);
  auto M = read_machine_file(fixture("centralizer7.mach")).machine();
  auto twists = standard_twists(M.target());
  for (int trial = 0; trial < 10; ++trial) {
    auto m = random_twist_word(twists, M.target(), rng, 3);
    auto b = random_change(M.degree(), M.target().rank(), rng);
    auto N = change_basis(post_compose(M, m), b);
    auto w = same_left_orbit(M, N);
    REQUIRE(w);
    CHECK(change_basis(post_compose(M, w->knitting), w->change) == N);
    CHECK(outer_equal(w->knitting, m, M.target()));
  }
}

TEST_CASE("the z^5 biset has five left orbits") {
  auto M = read_machine_file(fixture("z5belyi.mach")).machine();
  std::vector<NamedMap> gens;
  for (auto const& t : standard_twists(M.source())) {
    gens.push_back({t.name, t.map});
  }
  auto mcb = compute_mcbiset(M, gens);
  CHECK(mcb.size() == 5u);
  // every table edge reproduces its target machine
  for (std::size_t g = 0; g < mcb.table.size(); ++g) {
    for (std::size_t k = 0; k < mcb.size(); ++k) {
      auto const& tr = mcb.table[g][k];
      REQUIRE(tr.knitting);
      REQUIRE(tr.change);
      auto twisted = pre_compose(mcb.basis[k], mcb.gen_maps[g]);
      CHECK(change_basis(post_compose(mcb.basis[tr.next], *tr.knitting),
                         *tr.change) == twisted);
    }
  }
}

TEST_CASE("rabbit recursion rewrites") {
  auto f = read_machine_file(fixture("rabbit.mach"));
  auto mcb = mcbiset_from_recursion(f.machine(), f.labels);
  SphereGroup const& A = mcb.acting;
  auto t = A.generator(2);
  auto u = A.generator(1);
  auto r = rewrite(mcb, 0, t.pow(2));
  CHECK(r.next == 0);
  CHECK(A.equal(r.word, u));
  r = rewrite(mcb, 0, u.pow(2));
  CHECK(r.next == 0);
  CHECK(A.equal(r.word, A.generator(3)));
}

TEST_CASE("rabbit iteration reaches the three classes") {
  auto f = read_machine_file(fixture("rabbit.mach"));
  auto mcb = mcbiset_from_recursion(f.machine(), f.labels);
  auto t = mcb.acting.generator(2);
  auto run = [&](long n) {
    return conjugacy_iterate(mcb, State{mcb.acting.normal_form(t.pow(n)), 0});
  };
  auto rabbit = run(0);
  REQUIRE(rabbit.converged);
  CHECK(rabbit.terminal == std::vector<State>{State{Word(), 0}});
  auto airplane = run(1);
  CHECK(airplane.terminal == std::vector<State>{State{Word(), 1}});
  auto corabbit = run(-1);
  CHECK(corabbit.converged);
  CHECK(corabbit.terminal.size() == 3u);
}

TEST_CASE("mapping class biset JSON round trip") {
  auto f = read_machine_file(fixture("z5belyi.mach"));
  auto M = f.machine();
  std::vector<NamedMap> gens;
  for (auto const& t : standard_twists(M.source())) {
    gens.push_back({t.name, t.map});
  }
  auto mcb = compute_mcbiset(M, gens);
  auto doc = mcb_to_json(mcb);
  auto back = mcb_from_json(doc);
  CHECK(back.size() == mcb.size());
  CHECK(back.gen_names == mcb.gen_names);
  CHECK(back.labels == mcb.labels);
  for (std::size_t g = 0; g < mcb.table.size(); ++g) {
    CHECK(back.action(static_cast<int>(g) + 1) ==
          mcb.action(static_cast<int>(g) + 1));
  }
  CHECK(mcb_to_json(back) == doc);
  auto bad = doc;
  bad["table"].erase(0);
  CHECK_THROWS_AS(mcb_from_json(bad), std::invalid_argument);
}

TEST_CASE("monodromy of the quadratic and Pilgrim machines") {
  auto z2 = monodromy(read_machine_file(fixture("z2.mach")).machine());
  CHECK(z2.order == 2u);
  CHECK(z2.transitive);
  auto p = monodromy(read_machine_file(fixture("pilgrim.mach")).machine());
  CHECK(p.order == 120u);
}

TEST_CASE("quotients of a regular action") {
  auto a = Permutation::from_cycles(3, {{1, 2, 3}});
  auto b = Permutation::from_cycles(3, {{1, 2}});
  auto space = regular_action({"a", "b"}, {a, b});
  CHECK(space.elements.size() == 6u);
  // left cosets of <b> in S3: three classes
  auto V = left_multiplication(space, {Permutation(3), b});
  auto q = quotient_action(space.right, V);
  CHECK(q.orbits.size() == 3u);
  CHECK(q.action.perms[0].order() == 3u);
}

TEST_CASE("Riemann-Hurwitz for correspondences") {
  // z^2: two branch points, a sphere
  auto t = Permutation::from_cycles(2, {{1, 2}});
  auto inv = correspondence_invariants({t, t});
  CHECK(inv.genus == 0);
  CHECK(inv.punctures == 2);
  // three transpositions would not multiply to 1; four give a torus
  auto tor = correspondence_invariants({t, t, t, t});
  CHECK(tor.genus == 1);
  CHECK(tor.euler_characteristic == -4);
  CHECK_THROWS(correspondence_invariants({t, t, t}));
}
