// Multicurves, Thurston matrices, the annular obstruction test, the twist
// fixed-point solver, splitting along a multicurve into a tree of sphere
// groups, and promotion of bijections between such trees.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "sphmach/mcbiset.hpp"

namespace sphmach {

using Rational = boost::multiprecision::cpp_rational;

std::string to_string(Rational const& r);

// Curves are conjugacy classes up to inversion; reps keeps the words given.
struct Multicurve {
  SphereGroup group;
  std::vector<Word> reps;
  std::vector<ConjClass> classes;  // sign-insensitive
  std::vector<std::string> names;

  std::size_t size() const { return reps.size(); }
  // index of the curve with this class (up to inversion)
  std::optional<int> find(Word const& w) const;
};

// Throws std::invalid_argument for trivial, peripheral or repeated curves.
Multicurve make_multicurve(SphereGroup const& G, std::vector<Word> const& reps,
                           std::vector<std::string> names = {});

enum class LiftKind { curve, peripheral, trivial, other };

struct LiftTag {
  std::size_t degree = 1;
  ConjClass cls;           // signed class in the lifted group
  LiftKind kind = LiftKind::other;
  int index = -1;          // curve index, or 1-based puncture
  int sign = 1;            // orientation relative to the matched curve
};

// Curves of C live in the group the rows are indexed by, their lifts and
// the curves of D in the group of the entries.
std::vector<std::vector<LiftTag>> classify_lifts(SphereMachine const& M,
                                                 Multicurve const& C,
                                                 Multicurve const& D);

struct RationalMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;  // row major

  RationalMatrix() = default;
  RationalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(std::vector<std::vector<Rational>> const& r);

  Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Rational const& operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
  bool operator==(RationalMatrix const&) const = default;
};
RationalMatrix operator*(RationalMatrix const& a, RationalMatrix const& b);
RationalMatrix operator-(RationalMatrix const& a, RationalMatrix const& b);
std::string format_matrix(RationalMatrix const& m);
nlohmann::json matrix_json(RationalMatrix const& m);

// entry (delta, gamma) sums 1/degree over lifts of gamma isotopic to delta
RationalMatrix thurston_matrix(SphereMachine const& M, Multicurve const& C,
                               Multicurve const& D);

// coefficients c0..cn of det(xI - A), lowest degree first
std::vector<Rational> characteristic_polynomial(RationalMatrix const& A);

struct ObstructionReport {
  bool obstructed = false;           // spectral radius >= 1
  std::vector<Rational> charpoly;
  // bracket around the largest real eigenvalue (for display only)
  double perron_low = 0;
  double perron_high = 0;
};
// Exact: Sturm counts on the square-free part of the characteristic
// polynomial. The matrix must be square with nonnegative entries.
ObstructionReport is_obstructed(RationalMatrix const& T);

// Dehn twist about a curve given by a word whose normal form is that of an
// interval gi*...*gj (positive orientation), if it is one.
std::optional<Automorphism> interval_twist(SphereGroup const& G,
                                           Word const& curve);

// prod_j twists[j]^exponents[j] (the twists commute for disjoint curves)
Automorphism multitwist(std::vector<Automorphism> const& twists,
                        std::vector<long> const& exponents,
                        SphereGroup const& G);

struct TwistLiftReport {
  bool ok = true;
  std::vector<std::string> problems;
};
// mcb.gen_maps are the twists about the curves of T (same order); checks
// that the base machine times twist e is T(e) times the base machine.
TwistLiftReport twist_lift_check(MappingClassBiset const& mcb,
                                 RationalMatrix const& T);

// sum coeffs[name] * name + constant
struct Affine {
  std::map<std::string, Rational> coeffs;
  Rational constant = 0;
  std::string str() const;
};
Affine parse_affine(std::string const& text);

struct TwistFixedPointProblem {
  RationalMatrix T;               // square, indexed by curves
  std::vector<Affine> theta;      // one per curve
  std::vector<std::string> curve_names;
};

struct TwistSolution {
  bool consistent = true;
  // linear conditions on the unknowns of theta, each "expr = 0"
  std::vector<Affine> constraints;
  // per curve: v expressed through free coordinates and unknowns, or
  // absent when that coordinate is free
  std::vector<std::optional<Affine>> v;
  std::size_t free_rank = 0;
};
// Solves v = theta + T v, i.e. (I - T) v = theta, over the rationals.
TwistSolution solve_twist_fixed_point(TwistFixedPointProblem const& p);

// A boundary component of a sphere vertex: a puncture of the whole sphere
// or one side of a curve. word is an element of the ambient group.
struct Boundary {
  enum Kind { puncture, edge } kind = puncture;
  int index = 0;  // 1-based puncture, or 0-based curve
  int sign = 1;   // edge side: +1 carries the curve word, -1 its inverse
  Word word;
};

struct SphereVertex {
  std::vector<Boundary> boundary;  // product of the words is trivial
};

struct CurveEdge {
  Word generator;  // element of the ambient group conjugate to the curve
  int positive = -1;  // vertex holding the +1 side
  int negative = -1;
};

struct TreeOfGroups {
  SphereGroup group;
  std::vector<SphereVertex> vertices;
  std::vector<CurveEdge> edges;  // indexed like the multicurve

  // fundamental checks: boundary products trivial, each puncture once,
  // edges conjugate to the curves and the graph a tree
  std::vector<std::string> check(Multicurve const& C) const;
};

struct SplitResult {
  std::optional<TreeOfGroups> tree;
  // "abelianization-inconsistent", "bound-exhausted" or "not-disjoint"
  std::string failure;
  int failed_curve = -1;
};
// Bounded search: conjugators of total length <= bound.
SplitResult mc_to_gog(Multicurve const& C, std::size_t bound = 4);

nlohmann::json tree_json(TreeOfGroups const& T);
std::string tree_dot(TreeOfGroups const& T);

// Bijection of distinguished classes: punctures and curves.
struct ClassBijection {
  std::vector<int> puncture;  // 1-based: puncture i -> puncture[i-1]
  std::vector<int> curve;     // 0-based
};

struct VertexIsomorphism {
  int target = -1;
  // images of the boundary words, as elements of the target tree's group
  std::vector<Word> images;
};

struct Promotion {
  bool ok = false;
  int failed_step = 0;  // 1..6 when not ok
  std::string reason;
  std::vector<VertexIsomorphism> vertices;
  std::vector<Word> edge_conjugators;  // per curve, in the target group
};
Promotion promote_bijection(TreeOfGroups const& from, TreeOfGroups const& to,
                            ClassBijection const& h);

}  // namespace sphmach
