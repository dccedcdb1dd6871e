#include <filesystem>
#include <random>

#include "doctest.h"
#include "sphmach/folding.hpp"
#include "sphmach/parse.hpp"

using namespace sphmach;

namespace {

std::string fixture(std::string const& name) {
  return std::string(SPHMACH_FIXTURES) + "/" + name;
}

SphereMachine z2() {
  return parse_machine("generators: a, b\na=<,a>(1,2)\nb=<b,>(1,2)\n").machine();
}

std::size_t error_line(std::string const& text) {
  try {
    parse_machine(text);
  } catch (ParseError const& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("parsing the quadratic machine") {
  auto M = z2();
  CHECK(M.degree() == 2u);
  CHECK(M.relator_holds());
  CHECK(validate_sphere(M).ok());
  auto P = portrait(M);
  REQUIRE(P.size() == 2u);
  CHECK(P[0] == PortraitEntry{1, 2});
  CHECK(P[1] == PortraitEntry{2, 2});
}

TEST_CASE("parse errors carry positions") {
  CHECK(error_line("generators: a, b\na=<,a>(1,2)\nb=<b>(1,2)\n") == 3);
  CHECK(error_line("generators: a, b\na=<,a>(1,3)\nb=<b,>(1,2)\n") == 2);
  CHECK(error_line("generators: a, b\na=<,q>(1,2)\nb=<b,>(1,2)\n") == 2);
  CHECK(error_line("generators: a, b\na=<,a>(1,2)\n") > 0);
  CHECK(error_line("a=<,a>(1,2)\n") > 0);
  // the degree-6 row with five entries
  std::string text = "generators: a, b\ndegree: 6\na=<,,,,>\nb=<,,,,,>\n";
  CHECK(error_line(text) == 3);
}

TEST_CASE("every fixture survives print and reparse") {
  int seen = 0;
  for (auto const& entry : std::filesystem::directory_iterator(SPHMACH_FIXTURES)) {
    if (entry.path().extension() != ".mach") {
      continue;
    }
    ++seen;
    CAPTURE(entry.path().string());
    auto f = read_machine_file(entry.path().string());
    auto again = parse_machine(print_machine(f));
    CHECK(again == f);
    CHECK(parse_machine(print_machine(again)) == again);
    if (f.has_rows()) {
      CHECK(again.machine() == f.machine());
    }
  }
  CHECK(seen >= 5);
}

TEST_CASE("paper machines are sphere bisets") {
  for (auto name : {"pilgrim.mach", "centralizer7.mach", "z5belyi.mach"}) {
    CAPTURE(name);
    auto M = read_machine_file(fixture(name)).machine();
    auto r = validate_sphere(M);
    CHECK(r.ok());
    CHECK(r.deficit == r.expected_deficit);
  }
}

TEST_CASE("breaking a row breaks a biset condition") {
  auto f = read_machine_file(fixture("centralizer7.mach"));
  // x6 with a trivial permutation: the relator fails
  auto rows = f.machine().rows();
  rows[5].perm = Permutation(6);
  SphereMachine M(f.source, f.source, rows);
  CHECK_FALSE(validate_sphere(M).ok());
  // x3 with a nontrivial entry elsewhere: a lift stops being peripheral
  rows = f.machine().rows();
  rows[2].entries[0] = Word({3, 4});
  SphereMachine N(f.source, f.source, rows);
  auto r = validate_sphere(N);
  CHECK_FALSE(r.ok());
}

TEST_CASE("evaluation is a homomorphism into the wreath product") {
  auto M = read_machine_file(fixture("centralizer7.mach")).machine();
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> gen(1, 7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Letter> a, b;
    for (int i = 0; i < 5; ++i) {
      a.push_back(gen(rng) * (i % 2 ? 1 : -1));
      b.push_back(gen(rng));
    }
    auto ab = M.evaluate(Word(a) * Word(b));
    auto prod = M.evaluate(Word(a)) * M.evaluate(Word(b));
    CHECK(ab.perm == prod.perm);
    for (std::size_t i = 0; i < M.degree(); ++i) {
      CHECK(M.target().equal(ab.entries[i], prod.entries[i]));
    }
    auto inv = inverse(M.evaluate(Word(a)));
    CHECK((inv * M.evaluate(Word(a))).is_identity());
  }
  CHECK(M.evaluate(M.source().relator()).is_identity());
}

TEST_CASE("lift degrees add up to the degree") {
  auto M = read_machine_file(fixture("pilgrim.mach")).machine();
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> gen(1, 4);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Letter> a;
    for (int i = 0; i < 1 + trial % 6; ++i) {
      a.push_back(gen(rng));
    }
    std::size_t total = 0;
    for (auto const& l : multiset_of_lifts(M, Word(a))) {
      total += l.degree;
    }
    CHECK(total == M.degree());
  }
  // generators lift to peripheral or trivial classes
  for (int g = 1; g <= 4; ++g) {
    for (auto const& l : multiset_of_lifts(M, M.source().generator(g))) {
      bool ok = l.cls.trivial() || peripheral_index(M.target(), l.cls);
      CHECK(ok);
    }
  }
}

TEST_CASE("tensor products have a unit and associate") {
  auto M = read_machine_file(fixture("pilgrim.mach")).machine();
  auto I = SphereMachine::identity(M.source());
  CHECK(tensor(I, M) == M);
  CHECK(tensor(M, I) == M);
  auto Z = z2();
  auto ZZ = tensor(Z, Z);
  CHECK(ZZ.degree() == 4u);
  CHECK(tensor(ZZ, Z) == tensor(Z, ZZ));
  CHECK(validate_sphere(ZZ).ok());
}

TEST_CASE("basis changes compose and invert") {
  auto M = read_machine_file(fixture("centralizer7.mach")).machine();
  BasisChange b = BasisChange::identity(6);
  b.conjugators = {Word({1}), Word(), Word({3, 4}), Word({-2}), Word(), Word({7})};
  auto N = change_basis(M, b);
  BasisChange back = b;
  for (auto& w : back.conjugators) {
    w = w.inverse();
  }
  CHECK(change_basis(N, back) == M);
  auto r = Permutation::from_cycles(6, {{1, 4, 2}});
  CHECK(relabel(relabel(M, r), r.inverse()) == M);
  CHECK(validate_sphere(relabel(M, r)).ok());
}

TEST_CASE("normalization trivializes the tree entries") {
  auto M = read_machine_file(fixture("pilgrim.mach")).machine();
  auto [N, change] = normalize(M);
  CHECK(change_basis(M, change) == N);
  auto T = schreier_transversal(N, 0);
  for (std::size_t p = 0; p < T.size(); ++p) {
    // along a transversal word the accumulated entry at 0 is trivial
    CHECK(N.evaluate(T[p]).entries[0].empty());
  }
}

TEST_CASE("stabilizer subgroups have index equal to the degree") {
  for (auto name : {"pilgrim.mach", "centralizer7.mach", "z2.mach"}) {
    CAPTURE(name);
    auto M = read_machine_file(fixture(name)).machine();
    for (int base = 1; base <= static_cast<int>(M.degree()); ++base) {
      auto S = stabilizer_subgroup(M, base);
      CHECK(S.transversal.size() == M.degree());
      SubgroupGraph H(S.generators, M.source().rank());
      CHECK(H.index() == M.degree());
      for (auto const& g : S.generators) {
        CHECK(M.evaluate(g).perm(base - 1) == base - 1);
      }
    }
  }
}

TEST_CASE("twisting with automorphisms keeps the sphere conditions") {
  auto f = read_machine_file(fixture("centralizer7.mach"));
  auto M = f.machine();
  for (auto const& a : f.automorphisms) {
    auto phi = f.automorphism(a.name);
    CHECK(validate_sphere(pre_compose(M, phi)).ok());
    CHECK(validate_sphere(post_compose(M, phi)).ok());
  }
}
