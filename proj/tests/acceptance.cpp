// One PASS/FAIL line per acceptance criterion, with wall time and a short
// account of what was measured. Exit status is the number of failures.
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "sphmach/folding.hpp"
#include "sphmach/mcbiset.hpp"
#include "sphmach/multicurve.hpp"
#include "sphmach/parse.hpp"

using namespace sphmach;

namespace {

std::string fixture(std::string const& name) {
  return std::string(SPHMACH_FIXTURES) + "/" + name;
}

struct Check {
  bool ok = true;
  std::ostringstream note;
  void expect(bool cond, std::string const& what) {
    if (!cond) {
      ok = false;
      note << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int n, std::string const& title, double limit_s,
               std::function<void(Check&)> const& body) {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (std::exception const& e) {
    c.ok = false;
    c.note << " [exception: " << e.what() << "]";
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                 .count();
  if (s > limit_s) {
    c.note << " [slower than " << limit_s << " s]";
  }
  if (!c.ok) {
    ++failures;
  }
  std::cout << (c.ok ? "PASS" : "FAIL") << " " << n << " " << title << " ("
            << s << " s):" << c.note.str() << std::endl;
}

// names of the file's automorphisms, composed left to right as functions
Automorphism twist_word(MachineFile const& f, std::vector<std::string> const& w,
                        SphereGroup const& G) {
  Automorphism out = Automorphism::identity(G);
  for (auto const& s : w) {
    bool inv = s.front() == '-';
    auto phi = f.automorphism(inv ? s.substr(1) : s);
    out = compose(out, inv ? inverse(phi, G) : phi);
  }
  return out;
}

BasisChange random_change(std::size_t d, int rank, std::mt19937& rng) {
  std::uniform_int_distribution<int> gen(1, rank);
  std::uniform_int_distribution<int> len(0, 4);
  BasisChange b = BasisChange::identity(d);
  for (auto& w : b.conjugators) {
    std::vector<Letter> v;
    for (int i = len(rng); i > 0; --i) {
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

// base-4 digits, negative numbers ending in an infinite run of 3s
int rabbit_rule(long n) {
  long m = n;
  while (m != 0 && m != -1) {
    long digit = ((m % 4) + 4) % 4;
    if (digit == 1 || digit == 2) {
      return 2;  // airplane
    }
    m = (m - digit) / 4;
  }
  return n >= 0 ? 0 : 1;  // rabbit, corabbit
}

}  // namespace

int main() {
  criterion(1, "validation and single-row mutations", 1, [](Check& c) {
    int mutations = 0;
    int relator_only = 0;
    for (auto name : {"pilgrim.mach", "centralizer7.mach"}) {
      auto f = read_machine_file(fixture(name));
      auto M = f.machine();
      auto r = validate_sphere(M);
      c.expect(r.ok(), std::string(name) + " valid");
      auto const& G = M.source();
      auto const& H = M.target();
      for (std::size_t i = 0; i < M.rows().size(); ++i) {
        // trivial permutation in one row
        auto rows = M.rows();
        if (!rows[i].perm.is_identity()) {
          rows[i].perm = Permutation(M.degree());
          auto v = validate_sphere(SphereMachine(G, H, rows));
          ++mutations;
          if (v.riemann_hurwitz && v.peripheral_lifts) {
            ++relator_only;
          }
        }
        // one entry multiplied by a generator
        for (int g = 1; g <= H.size(); ++g) {
          rows = M.rows();
          rows[i].entries[0] = rows[i].entries[0] * H.generator(g);
          auto v = validate_sphere(SphereMachine(G, H, rows));
          ++mutations;
          if (v.riemann_hurwitz && v.peripheral_lifts) {
            ++relator_only;
          }
        }
      }
    }
    c.note << " both machines pass; " << mutations << " mutations, "
           << mutations - relator_only << " fail the degree or lift condition";
    c.expect(relator_only == 0, "every mutation fails a biset condition");
  });

  criterion(2, "Pilgrim monodromy", 1, [](Check& c) {
    auto r = monodromy(read_machine_file(fixture("pilgrim.mach")).machine());
    c.note << " order " << r.order << ", transitive " << r.transitive;
    c.expect(r.order == 120, "order 120");
    c.expect(r.transitive, "transitive");
  });

  // shared by criteria 3 to 5
  MappingClassBiset pilgrim;
  double pilgrim_time = 0;
  std::size_t unexpressed = 0;
  {
    auto t0 = std::chrono::steady_clock::now();
    auto f = read_machine_file(fixture("pilgrim.mach"));
    std::vector<NamedMap> gens;
    for (auto n : {"u", "t", "s"}) {
      gens.push_back({n, f.automorphism(n)});
    }
    try {
      pilgrim = compute_mcbiset(f.machine(), gens);
      unexpressed = express_knittings(pilgrim, SphereGroup({"u", "t", "s"}));
    } catch (std::exception const& e) {
      std::cerr << "mapping class biset failed: " << e.what() << "\n";
    }
    pilgrim_time = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  }

  criterion(3, "mapping class biset sizes", 60, [&](Check& c) {
    auto M = read_machine_file(fixture("z5belyi.mach")).machine();
    std::vector<NamedMap> gens;
    for (auto const& t : standard_twists(M.source())) {
      gens.push_back({t.name, t.map});
    }
    auto z5 = compute_mcbiset(M, gens);
    c.note << " Pilgrim " << pilgrim.size() << " in " << pilgrim_time
           << " s, z^5 " << z5.size();
    c.expect(pilgrim.size() == 120, "Pilgrim basis 120");
    c.expect(z5.size() == 5, "z^5 basis 5");
    c.expect(pilgrim_time < 60, "Pilgrim under 60 s");
  });

  criterion(4, "lift multisets in the Pilgrim biset", 60, [&](Check& c) {
    c.expect(unexpressed == 0, "all knittings expressed");
    SphereGroup const& A = pilgrim.acting;
    Word u = A.generator(1);
    Word t = A.generator(2);
    Word s = A.generator(3);
    auto cls = [&](Word const& w) { return ConjClass::of(A, w); };
    auto expect_multiset = [&](int g, std::vector<std::pair<int, Word>> want,
                               std::size_t degree) {
      std::map<ConjClass, int> got;
      bool degrees_ok = true;
      for (auto const& l : lift_multiset_in_mcbiset(pilgrim, g)) {
        ++got[l.cls];
        degrees_ok = degrees_ok && l.degree == degree;
      }
      std::map<ConjClass, int> expected;
      for (auto const& [k, w] : want) {
        expected[cls(w)] += k;
      }
      c.expect(got == expected, pilgrim.gen_names[g - 1] + " lift classes");
      c.expect(degrees_ok, pilgrim.gen_names[g - 1] + " lift degrees");
    };
    expect_multiset(1, {{16, s}, {16, t}, {16, u},
                        {4, s.pow(2)}, {4, t.pow(2)}, {4, u.pow(2)}}, 2);
    for (int g : {2, 3}) {
      expect_multiset(g, {{8, Word()}, {4, s.pow(5)}, {4, t.pow(5)},
                          {4, u.pow(5)}}, 6);
    }
    long weighted = 0;
    for (int g = 1; g <= 3; ++g) {
      for (auto const& l : lift_multiset_in_mcbiset(pilgrim, g)) {
        for (int k = 1; k <= 6; ++k) {
          if (l.cls == cls(s.pow(k))) {
            weighted += k;
          }
        }
      }
    }
    c.note << " weighted s-count " << weighted;
    c.expect(weighted == 64, "weighted s-count 64");
  });

  criterion(5, "Klein quotient of the Pilgrim biset", 5, [&](Check& c) {
    if (!pilgrim.base) {
      c.expect(false, "biset computed");
      return;
    }
    auto const& S = pilgrim.base->source();
    auto P = pilgrim.base->permutations();
    // u, t, s label by the permutations of c, b, a
    std::vector<Permutation> images;
    for (auto n : {"c", "b", "a"}) {
      images.push_back(P[*S.index_of(n) - 1]);
    }
    auto space = label_basis(pilgrim, images);
    c.expect(space.has_value(), "basis labeled by S5");
    if (!space) {
      return;
    }
    auto V = enumerate_group({Permutation::from_cycles(5, {{1, 2}, {3, 4}}),
                              Permutation::from_cycles(5, {{1, 3}, {2, 4}})},
                             5);
    c.expect(V.size() == 4, "V has four elements");
    auto q = quotient_action(space->right, left_multiplication(*space, V));
    auto shape = [](Permutation const& p) {
      std::map<std::size_t, int> m;
      for (auto const& cyc : p.cycles()) {
        ++m[cyc.size()];
      }
      std::size_t fixed = p.degree();
      for (auto [len, k] : m) {
        fixed -= len * k;
      }
      if (fixed) {
        m[1] += static_cast<int>(fixed);
      }
      return m;
    };
    auto const& perms = q.action.perms;
    c.expect(q.orbits.size() == 30, "degree 30");
    c.expect(shape(perms[2]) == std::map<std::size_t, int>{{6, 5}}, "s shape");
    c.expect(shape(perms[1]) == std::map<std::size_t, int>{{6, 5}}, "t shape");
    c.expect(shape(perms[0]) == std::map<std::size_t, int>{{1, 6}, {2, 12}},
             "u shape");
    auto inv = correspondence_invariants(perms);
    c.note << " degree " << q.orbits.size() << ", punctures " << inv.punctures
           << ", chi " << inv.euler_characteristic << ", genus " << inv.genus;
    c.expect(inv.punctures == 28, "28 punctures");
    c.expect(inv.euler_characteristic == -30, "chi -30");
    c.expect(inv.genus == 2, "genus 2");
  });

  criterion(6, "twisted rabbit for n in [-30, 30]", 1, [](Check& c) {
    auto f = read_machine_file(fixture("rabbit.mach"));
    auto mcb = mcbiset_from_recursion(f.machine(), f.labels);
    Word t = mcb.acting.generator(2);
    auto run = [&](long n) {
      auto T = conjugacy_iterate(mcb, State{mcb.acting.normal_form(t.pow(n)), 0});
      return std::pair{T.converged, T.terminal_set()};
    };
    // rabbit is the base point; the paper's base cases give the others
    std::vector<std::set<State>> classes{run(0).second, run(-1).second,
                                         run(1).second};
    c.expect(classes[0] == std::set<State>{State{Word(), 0}}, "rabbit fixed");
    c.expect(classes[2] == std::set<State>{State{Word(), 1}},
             "t f_R is the airplane basis element");
    int agree = 0;
    for (long n = -30; n <= 30; ++n) {
      auto [conv, term] = run(n);
      if (conv && term == classes[rabbit_rule(n)]) {
        ++agree;
      } else {
        c.expect(false, "n = " + std::to_string(n));
      }
    }
    c.note << " " << agree << "/61 agree with the base-4 rule";
  });

  criterion(7, "centralizer identities", 5, [](Check& c) {
    auto f = read_machine_file(fixture("centralizer7.mach"));
    auto M = f.machine();
    SphereGroup const& G = M.source();
    auto rebased = [&](std::vector<std::string> const& right,
                       std::vector<std::string> const& left,
                       std::string const& tuple) {
      // left . B . right, rebased, is B itself
      auto twisted = post_compose(pre_compose(M, twist_word(f, right, G)),
                                  twist_word(f, left, G));
      BasisChange b = BasisChange::identity(M.degree());
      b.conjugators = parse_word_list(tuple, G, f.defines);
      return change_basis(twisted, b) == M;
    };
    auto commutes = [&](std::string const& name) {
      auto phi = f.automorphism(name);
      auto w = same_left_orbit(post_compose(M, phi), pre_compose(M, phi));
      return w && outer_equal(w->knitting, Automorphism::identity(G), G);
    };
    c.expect(rebased({"sigma"}, {"-sigma"}, "1,1,1,1,1,1"), "sigma B = B sigma");
    c.expect(rebased({"tau"}, {"-tau", "-tau", "-tau", "-sigma", "-sigma"},
                     "t^3*s^2, t^3*s, t^3*s, t^2, t^2, 1"),
             "B tau after rebasing");
    c.expect(rebased({"beta"}, {"-beta"}, "1,1,1,1,1,1"), "B beta");
    c.expect(rebased({"alpha"}, {"-sigma", "-sigma", "-alpha"},
                     "s^2, s^2, 1, 1, 1, 1"),
             "B alpha after rebasing");
    // control: without the rebasing the tau identity does not hold
    c.expect(!rebased({"tau"}, {"-tau", "-tau", "-tau", "-sigma", "-sigma"},
                      "1,1,1,1,1,1"),
             "rebasing is needed");
    bool s = commutes("sigma");
    bool b = commutes("beta");
    bool a = commutes("alpha");
    c.note << " sigma " << (s ? "commutes" : "does not commute") << ", beta "
           << (b ? "commutes" : "does not commute") << ", alpha "
           << (a ? "commutes" : "does not commute");
    c.expect(s && b && !a, "membership");
  });

  criterion(8, "Thurston matrix, obstruction and twist solver", 1, [](Check& c) {
    auto f = read_machine_file(fixture("centralizer7.mach"));
    auto C = make_multicurve(f.source, f.curves, {"s", "t"});
    auto T = thurston_matrix(f.machine(), C, C);
    c.expect(T == RationalMatrix::from_rows({{1, 2}, {0, 3}}), "T");
    auto ob = is_obstructed(T);
    c.note << " T = " << format_matrix(T) << ", obstructed " << ob.obstructed
           << ", spectral radius in [" << ob.perron_low << ", "
           << ob.perron_high << "]";
    c.expect(ob.obstructed, "obstructed");
    c.expect(ob.perron_low <= 3 && 3 <= ob.perron_high, "lambda 3");
    TwistFixedPointProblem p{T, {parse_affine("2*a"), parse_affine("2*b")},
                             {"s", "t"}};
    auto sol = solve_twist_fixed_point(p);
    c.expect(sol.consistent, "consistent");
    // a = b, v_t = -b, v_s free
    bool constraint = sol.constraints.size() == 1 &&
                      sol.constraints[0].constant == 0 &&
                      sol.constraints[0].coeffs.size() == 2 &&
                      sol.constraints[0].coeffs.at("a") ==
                          -sol.constraints[0].coeffs.at("b");
    c.expect(constraint, "single constraint a = b");
    c.expect(!sol.v[0].has_value(), "v_s free");
    bool vt = sol.v[1] && sol.v[1]->constant == 0 &&
              sol.v[1]->coeffs.size() == 1 && sol.v[1]->coeffs.count("b") &&
              sol.v[1]->coeffs.at("b") == -1;
    c.expect(vt, "v_t = -b");
    c.expect(sol.free_rank == 1, "free rank 1");
    if (!sol.constraints.empty()) {
      c.note << ", constraint " << sol.constraints[0].str() << " = 0";
    }
    if (sol.v[1]) {
      c.note << ", v_t = " << sol.v[1]->str();
    }
  });

  criterion(9, "property suite", 60, [](Check& c) {
    std::mt19937 rng(2024);
    // distillations see only left orbits
    int distill_ok = 0;
    for (auto name : {"pilgrim.mach", "centralizer7.mach"}) {
      auto M = read_machine_file(fixture(name)).machine();
      auto twists = standard_twists(M.target());
      auto key = distill(M);
      std::uniform_int_distribution<std::size_t> pick(0, twists.size() - 1);
      std::uniform_int_distribution<int> coin(0, 1);
      for (int trial = 0; trial < 100; ++trial) {
        Automorphism m = Automorphism::identity(M.target());
        for (int k = 0; k < 4; ++k) {
          auto const& tw = twists[pick(rng)].map;
          m = compose(m, coin(rng) ? tw : inverse(tw, M.target()));
        }
        auto N = change_basis(post_compose(M, m),
                              random_change(M.degree(), M.target().rank(), rng));
        distill_ok += distill(N) == key;
      }
    }
    c.expect(distill_ok == 200, "distillation invariance");
    // lift multisets ignore the basis
    int lifts_ok = 0;
    auto P = read_machine_file(fixture("pilgrim.mach")).machine();
    std::uniform_int_distribution<int> gen(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<Letter> v;
      for (int i = 0; i < 1 + trial % 5; ++i) {
        v.push_back(gen(rng) * (i % 3 ? 1 : -1));
      }
      auto N = change_basis(P, random_change(P.degree(), P.target().rank(), rng));
      lifts_ok += sorted(multiset_of_lifts(N, Word(v))) ==
                  sorted(multiset_of_lifts(P, Word(v)));
    }
    c.expect(lifts_ok == 100, "lift multiset invariance");
    // tensor products
    auto Z = parse_machine("generators: a, b\na=<,a>(1,2)\nb=<b,>(1,2)\n").machine();
    auto I = SphereMachine::identity(P.source());
    c.expect(tensor(I, P) == P && tensor(P, I) == P, "tensor unit");
    c.expect(tensor(tensor(Z, Z), Z) == tensor(Z, tensor(Z, Z)),
             "tensor associativity");
    // stabilizers
    int stab = 0;
    int stab_ok = 0;
    for (auto name : {"pilgrim.mach", "centralizer7.mach", "z2.mach",
                      "z5belyi.mach", "rabbit.mach"}) {
      auto M = read_machine_file(fixture(name)).machine();
      for (int base = 1; base <= static_cast<int>(M.degree()); ++base) {
        auto S = stabilizer_subgroup(M, base);
        SubgroupGraph H(S.generators, M.source().rank());
        ++stab;
        stab_ok += H.index() == M.degree();
      }
    }
    c.expect(stab == stab_ok, "stabilizer index");
    // splitting the centralizer fixture
    auto f = read_machine_file(fixture("centralizer7.mach"));
    auto C = make_multicurve(f.source, f.curves, {"s", "t"});
    auto split = mc_to_gog(C);
    bool tree_ok = split.tree && split.tree->check(C).empty() &&
                   split.tree->vertices.size() == 3;
    c.expect(tree_ok, "mc_to_gog reassembly");
    c.note << " distillation " << distill_ok << "/200, lifts " << lifts_ok
           << "/100, stabilizers " << stab_ok << "/" << stab << ", tree "
           << (tree_ok ? "ok" : "bad");
  });

  std::cout << failures << " failing criteria" << std::endl;
  return failures;
}
