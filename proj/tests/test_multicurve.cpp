#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "sphmach/multicurve.hpp"
#include "sphmach/parse.hpp"

using namespace sphmach;

namespace {

std::string fixture(std::string const& name) {
  return std::string(SPHMACH_FIXTURES) + "/" + name;
}

Multicurve curves(SphereGroup const& G, std::string const& text) {
  return make_multicurve(G, parse_word_list(text, G));
}

SphereGroup punctures(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) {
    names.push_back("g" + std::to_string(i));
  }
  return SphereGroup(names);
}

}  // namespace

TEST_CASE("multicurves reject degenerate curves") {
  auto G = punctures(4);
  CHECK_THROWS_AS(curves(G, "g1*g2*g2^-1*g1^-1"), std::invalid_argument);
  CHECK_THROWS_AS(curves(G, "g2^g1"), std::invalid_argument);
  CHECK_THROWS_AS(curves(G, "g1*g2,g2^-1*g1^-1"), std::invalid_argument);
  CHECK_THROWS_AS(curves(G, "g4^-1"), std::invalid_argument);
  auto C = curves(G, "g1*g2");
  CHECK(C.find(parse_word("g3*g4", G)));  // the same curve seen from outside
  CHECK(C.find(parse_word("(g1*g2)^g3", G)) == 0);
}

TEST_CASE("Thurston matrix of the centralizer example") {
  auto f = read_machine_file(fixture("centralizer7.mach"));
  auto M = f.machine();
  auto C = make_multicurve(M.source(), f.curves, {"s", "t"});
  auto T = thurston_matrix(M, C, C);
  CHECK(T == RationalMatrix::from_rows({{1, 2}, {0, 3}}));
  // every lift is accounted for and the degrees add up to the degree
  auto tags = classify_lifts(M, C, C);
  for (auto const& col : tags) {
    std::size_t total = 0;
    for (auto const& t : col) {
      total += t.degree;
    }
    CHECK(total == M.degree());
  }
}

TEST_CASE("characteristic polynomial against explicit formulas") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> e(-4, 4);
  for (int trial = 0; trial < 50; ++trial) {
    int a = e(rng), b = e(rng), c = e(rng), d = e(rng);
    auto p = characteristic_polynomial(RationalMatrix::from_rows({{a, b}, {c, d}}));
    REQUIRE(p.size() == 3u);
    CHECK(p[2] == 1);
    CHECK(p[1] == -(a + d));
    CHECK(p[0] == a * d - b * c);
  }
  // 3x3: det(xI - A) at x = 0 is -det A
  auto A = RationalMatrix::from_rows({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
  auto p = characteristic_polynomial(A);
  CHECK(p[3] == 1);
  CHECK(p[2] == -9);
  CHECK(p[0] == -18);
}

TEST_CASE("obstruction agrees with exact 2x2 eigenvalues") {
  // oracle: the largest eigenvalue of a nonnegative 2x2 integer matrix is
  // (tr + sqrt(disc)) / 2; it is >= 1 iff sqrt(disc) >= 2 - tr, decided
  // in integers
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      for (int c = 0; c <= 3; ++c) {
        for (int d = 0; d <= 3; ++d) {
          long tr = a + d;
          long disc = (a - d) * (a - d) + 4L * b * c;
          bool expect = 2 - tr <= 0 || disc >= (2 - tr) * (2 - tr);
          auto T = RationalMatrix::from_rows({{a, b}, {c, d}});
          auto r = is_obstructed(T);
          CAPTURE(format_matrix(T));
          CHECK(r.obstructed == expect);
          double lambda = (tr + std::sqrt(static_cast<double>(disc))) / 2;
          CHECK(r.perron_low <= lambda + 1e-9);
          CHECK(r.perron_high >= lambda - 1e-9);
        }
      }
    }
  }
  CHECK(is_obstructed(RationalMatrix::from_rows({{1, 2}, {0, 3}})).obstructed);
  CHECK_FALSE(is_obstructed(RationalMatrix::from_rows({{0}})).obstructed);
  CHECK_FALSE(is_obstructed(RationalMatrix::from_rows({{Rational(1, 2)}})).obstructed);
  CHECK(is_obstructed(RationalMatrix::from_rows({{Rational(1, 2), Rational(1, 2)},
                                                {Rational(1, 2), Rational(1, 2)}}))
            .obstructed);
  CHECK_THROWS(is_obstructed(RationalMatrix::from_rows({{-1}})));
}

TEST_CASE("affine expressions") {
  auto a = parse_affine("2a - 3/2*b + 1");
  CHECK(a.coeffs.at("a") == 2);
  CHECK(a.coeffs.at("b") == Rational(-3, 2));
  CHECK(a.constant == 1);
  CHECK(parse_affine(a.str()).str() == a.str());
  CHECK(parse_affine("-x").coeffs.at("x") == -1);
  CHECK(parse_affine("a - a").str() == "0");
  CHECK_THROWS(parse_affine("2 3"));
  CHECK_THROWS(parse_affine(""));
}

TEST_CASE("twist fixed points of the centralizer example") {
  TwistFixedPointProblem p{RationalMatrix::from_rows({{1, 2}, {0, 3}}),
                           {parse_affine("2a"), parse_affine("2b")},
                           {"s", "t"}};
  auto s = solve_twist_fixed_point(p);
  CHECK(s.consistent);
  REQUIRE(s.constraints.size() == 1u);
  CHECK(s.constraints[0].str() == "a - b");
  CHECK_FALSE(s.v[0]);
  REQUIRE(s.v[1]);
  CHECK(s.v[1]->str() == "-b");
  CHECK(s.free_rank == 1u);
}

TEST_CASE("twist fixed points: trivial cases") {
  auto zero = solve_twist_fixed_point(
      {RationalMatrix(1, 1), {parse_affine("0")}, {"c"}});
  CHECK(zero.constraints.empty());
  REQUIRE(zero.v[0]);
  CHECK(zero.v[0]->str() == "0");
  CHECK(zero.free_rank == 0u);
  // v = c + 2v
  auto inv = solve_twist_fixed_point(
      {RationalMatrix::from_rows({{2}}), {parse_affine("c")}, {"x"}});
  CHECK(inv.constraints.empty());
  CHECK(inv.v[0]->str() == "-c");
  CHECK(inv.free_rank == 0u);
  // v = 1 + v has no solution
  auto bad = solve_twist_fixed_point(
      {RationalMatrix::from_rows({{1}}), {parse_affine("1")}, {"x"}});
  CHECK_FALSE(bad.consistent);
}

TEST_CASE("twist fixed points satisfy the equation") {
  // substitute numeric values for the unknowns and the free coordinates
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> e(0, 2);
  std::uniform_int_distribution<int> val(-5, 5);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + trial % 3;
    RationalMatrix T(n, n);
    for (auto& x : T.data) {
      x = e(rng);
    }
    TwistFixedPointProblem p{T, {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      Affine a;
      a.coeffs["p" + std::to_string(i)] = val(rng);
      a.constant = val(rng);
      p.theta.push_back(a);
      p.curve_names.push_back("c" + std::to_string(i));
    }
    auto s = solve_twist_fixed_point(p);
    if (!s.consistent) {
      continue;
    }
    std::map<std::string, Rational> env;
    for (std::size_t i = 0; i < n; ++i) {
      env["v_c" + std::to_string(i)] = val(rng);
    }
    // choose parameters satisfying the constraints: they are solved in
    // reduced form, so pick the non-leading ones and solve for the rest
    for (std::size_t i = 0; i < n; ++i) {
      env["p" + std::to_string(i)] = val(rng);
    }
    bool constrained = !s.constraints.empty();
    if (constrained) {
      // set every constraint's leading unknown to satisfy it
      for (auto it = s.constraints.rbegin(); it != s.constraints.rend(); ++it) {
        auto lead = it->coeffs.begin();
        Rational rest = it->constant;
        for (auto const& [name, c] : it->coeffs) {
          if (name != lead->first) {
            rest += c * env[name];
          }
        }
        env[lead->first] = -rest / lead->second;
      }
    }
    auto eval = [&](Affine const& a) {
      Rational r = a.constant;
      for (auto const& [name, c] : a.coeffs) {
        r += c * env.at(name);
      }
      return r;
    };
    for (auto const& c : s.constraints) {
      REQUIRE(eval(c) == 0);
    }
    std::vector<Rational> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = s.v[i] ? eval(*s.v[i]) : env["v_c" + std::to_string(i)];
    }
    for (std::size_t i = 0; i < n; ++i) {
      Rational rhs = eval(p.theta[i]);
      for (std::size_t j = 0; j < n; ++j) {
        rhs += T(i, j) * v[j];
      }
      CHECK(v[i] == rhs);
    }
  }
}

TEST_CASE("twists along the centralizer curves lift by the matrix") {
  auto f = read_machine_file(fixture("centralizer7.mach"));
  auto M = f.machine();
  auto C = make_multicurve(M.source(), f.curves, {"s", "t"});
  auto T = thurston_matrix(M, C, C);
  std::vector<NamedMap> gens;
  for (std::size_t c = 0; c < C.size(); ++c) {
    auto tw = interval_twist(M.source(), C.reps[c]);
    REQUIRE(tw);
    gens.push_back({C.names[c], *tw});
  }
  auto mcb = compute_mcbiset(M, gens);
  CHECK(twist_lift_check(mcb, T).ok);
  // a wrong matrix is caught
  auto wrong = RationalMatrix::from_rows({{1, 1}, {0, 3}});
  auto rep = twist_lift_check(mcb, wrong);
  CHECK_FALSE(rep.ok);
  CHECK(rep.problems.size() == 1u);
  // so is a tampered table
  auto bad = mcb;
  bad.table[1][0].knitting = gens[0].map;
  CHECK_FALSE(twist_lift_check(bad, T).ok);
}

TEST_CASE("interval twists") {
  auto G = punctures(5);
  auto tw = interval_twist(G, parse_word("g2*g3*g4", G));
  REQUIRE(tw);
  CHECK(*tw == dehn_twist(2, 4, G));
  CHECK_FALSE(interval_twist(G, parse_word("g1*g3", G)));
}

TEST_CASE("splitting a four-punctured sphere") {
  auto G = punctures(4);
  auto C = curves(G, "g1*g2");
  auto r = mc_to_gog(C);
  REQUIRE(r.tree);
  CHECK(r.tree->check(C).empty());
  REQUIRE(r.tree->vertices.size() == 2u);
  auto const& V0 = r.tree->vertices[0].boundary;
  auto const& V1 = r.tree->vertices[1].boundary;
  CHECK(V0.size() == 3u);
  CHECK(V1.size() == 3u);
  CHECK(V0[0].index == 1);
  CHECK(V0[1].index == 2);
  CHECK(V1[1].index == 3);
  CHECK(V1[2].index == 4);
}

TEST_CASE("γ1γ3 also splits, with a conjugated puncture") {
  auto G = punctures(4);
  auto C = curves(G, "g1*g3");
  auto r = mc_to_gog(C);
  REQUIRE(r.tree);
  CHECK(r.tree->check(C).empty());
}

TEST_CASE("splitting failures are classified") {
  auto G = punctures(4);
  auto r = mc_to_gog(curves(G, "g1*g2,g2*g3"));
  CHECK_FALSE(r.tree);
  CHECK(r.failure == "not-disjoint");
  r = mc_to_gog(curves(G, "g1^2*g2"));
  CHECK(r.failure == "abelianization-inconsistent");
  r = mc_to_gog(curves(G, "g1*g2*g1^-1*g2^-1*g1*g2"));
  CHECK(r.failure == "bound-exhausted");
}

TEST_CASE("bound-exhausted agrees with brute force") {
  // independent oracle: search g1^a * g2^b * g3^c * g4^d = 1, in either
  // order on each side, with |a|+|b|+|c|+|d| <= 4 and the first half
  // conjugate to the curve or its inverse
  auto G = punctures(4);
  Word x = parse_word("g1*g2*g1^-1*g2^-1*g1*g2", G);
  auto target = ConjClass::of(G, x, true);
  std::vector<std::vector<Word>> by_len(5);
  by_len[0].push_back(Word());
  for (std::size_t l = 1; l <= 4; ++l) {
    for (auto const& w : by_len[l - 1]) {
      for (Letter a : {1, -1, 2, -2, 3, -3}) {
        if (!w.empty() && w.back() == -a) {
          continue;
        }
        by_len[l].push_back(w * Word({a}));
      }
    }
  }
  auto half = [&](int i, int j, Word const& u, Word const& v) {
    return G.generator(i).conjugate_by(u) * G.generator(j).conjugate_by(v);
  };
  int realized = 0;
  int first_half_only = 0;
  for (std::size_t lu = 0; lu <= 4; ++lu) {
    for (auto const& u : by_len[lu]) {
      for (auto [i, j] : {std::pair{1, 2}, std::pair{2, 1}}) {
        Word g = G.normal_form(half(i, j, Word(), u));
        if (ConjClass::of(G, g, true) != target) {
          continue;
        }
        ++first_half_only;
        for (std::size_t lv = 0; lu + lv <= 4; ++lv) {
          for (std::size_t lw = 0; lu + lv + lw <= 4; ++lw) {
            for (auto const& v : by_len[lv]) {
              for (auto const& w : by_len[lw]) {
                for (auto [k, l] : {std::pair{3, 4}, std::pair{4, 3}}) {
                  if (G.normal_form(g * half(k, l, v, w)).empty()) {
                    ++realized;
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  // the first half alone is reachable; a matching complement is not
  CHECK(first_half_only > 0);
  CHECK(realized == 0);
  auto r = mc_to_gog(make_multicurve(G, {x}, {"c"}), 4);
  CHECK(r.failure == "bound-exhausted");
}

TEST_CASE("splitting the centralizer example gives three spheres") {
  auto f = read_machine_file(fixture("centralizer7.mach"));
  auto C = make_multicurve(f.source, f.curves, {"s", "t"});
  auto r = mc_to_gog(C);
  REQUIRE(r.tree);
  auto const& T = *r.tree;
  CHECK(T.check(C).empty());
  REQUIRE(T.vertices.size() == 3u);
  auto punct = [&](int v) {
    std::set<int> s;
    for (auto const& b : T.vertices[v].boundary) {
      if (b.kind == Boundary::puncture) {
        s.insert(b.index);
      }
    }
    return s;
  };
  CHECK(punct(0) == std::set<int>{3, 4});
  CHECK(punct(1) == std::set<int>{2, 5});
  CHECK(punct(2) == std::set<int>{1, 6, 7});
  auto doc = tree_json(T);
  CHECK(doc["sphere_vertices"].size() == 3u);
  CHECK(tree_dot(T).find("graph tree") == 0);
}

TEST_CASE("promotion of the identity") {
  auto f = read_machine_file(fixture("centralizer7.mach"));
  auto C = make_multicurve(f.source, f.curves);
  auto T = *mc_to_gog(C).tree;
  ClassBijection h{{1, 2, 3, 4, 5, 6, 7}, {0, 1}};
  auto p = promote_bijection(T, T, h);
  REQUIRE(p.ok);
  for (std::size_t v = 0; v < T.vertices.size(); ++v) {
    CHECK(p.vertices[v].target == static_cast<int>(v));
    for (std::size_t i = 0; i < T.vertices[v].boundary.size(); ++i) {
      CHECK(T.group.equal(p.vertices[v].images[i],
                          T.vertices[v].boundary[i].word));
    }
  }
}

TEST_CASE("promotion fails on mismatched trees") {
  auto G = punctures(6);
  auto one = *mc_to_gog(curves(G, "g1*g2")).tree;
  auto two = *mc_to_gog(curves(G, "g1*g2,g4*g5")).tree;
  auto p = promote_bijection(one, two, {{1, 2, 3, 4, 5, 6}, {0}});
  CHECK_FALSE(p.ok);
  CHECK(p.failed_step == 1);
  // same shape, but h sends a puncture to the wrong side
  auto other = *mc_to_gog(curves(G, "g1*g3")).tree;
  auto q = promote_bijection(one, other, {{1, 2, 3, 4, 5, 6}, {0}});
  CHECK_FALSE(q.ok);
  CHECK(q.failed_step == 2);
}

TEST_CASE("promotion between relabeled trees") {
  // the rotation g_i -> g_{i+1} carries {g1g2, g4g5} to {g2g3, g5g6}
  auto G = punctures(6);
  auto C1 = curves(G, "g1*g2,g4*g5");
  auto C2 = curves(G, "g5*g6,g2*g3");
  auto T1 = *mc_to_gog(C1).tree;
  auto T2 = *mc_to_gog(C2).tree;
  ClassBijection h{{2, 3, 4, 5, 6, 1}, {1, 0}};
  auto p = promote_bijection(T1, T2, h);
  REQUIRE(p.ok);
  // each boundary image lies in the class h prescribes
  for (std::size_t v = 0; v < T1.vertices.size(); ++v) {
    auto const& B = T1.vertices[v].boundary;
    Word prod;
    for (std::size_t i = 0; i < B.size(); ++i) {
      auto const& img = p.vertices[v].images[i];
      prod *= img;
      if (B[i].kind == Boundary::puncture) {
        CHECK(is_conjugate(img, G.generator(h.puncture[B[i].index - 1]), G));
      }
    }
    CHECK(G.normal_form(prod).empty());
  }
  // swapping the curve images is inconsistent with the punctures
  auto bad = promote_bijection(T1, T2, {{2, 3, 4, 5, 6, 1}, {0, 1}});
  CHECK_FALSE(bad.ok);
}
